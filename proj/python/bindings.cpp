#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdlib>

#include "obstower/app.hpp"
#include "obstower/cohomology.hpp"
#include "obstower/lie.hpp"

namespace py = pybind11;
using namespace obstower;

namespace {

// Carries the CLI error object; the python side turns it into ObstowerError.
struct AppFailure : std::exception {
  std::string payload;
  explicit AppFailure(std::string p) : payload(std::move(p)) {}
  const char* what() const noexcept override { return payload.c_str(); }
};

std::string run_json(const std::string& command, const std::string& spec, const std::string& profile,
                     const py::dict& overrides, unsigned jobs) {
  app::Options opts;
  try {
    std::string name = profile;
    if (name.empty())
      if (const char* env = std::getenv(std::string(app::kProfileEnv).c_str())) name = env;
    opts.budgets = app::Budgets::profile(name);
    for (const auto& [k, v] : overrides) {
      const auto key = k.cast<std::string>();
      if (key == "max_group_order") opts.budgets.max_group_order = v.cast<std::size_t>();
      else if (key == "max_hom_search") opts.budgets.max_hom_search = v.cast<std::uint64_t>();
      else if (key == "max_degree") opts.budgets.max_degree = v.cast<std::size_t>();
      else if (key == "max_truncation") opts.budgets.max_truncation = v.cast<std::size_t>();
      else throw app::SpecError("unknown budget '" + key + "'");
    }
    opts.jobs = jobs == 0 ? 1 : jobs;
    app::json report;
    {
      py::gil_scoped_release unlocked;
      report = app::run(command, app::json::parse(spec), opts);
    }
    return report.dump();
  } catch (const py::error_already_set&) {
    throw;
  } catch (const std::exception& e) {
    throw AppFailure(app::classify(e).error.dump());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "obstower core";
  static py::exception<AppFailure> failure(m, "_AppFailure");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const AppFailure& e) {
      failure(e.payload.c_str());
    }
  });

  m.attr("version") = std::string(app::kToolVersion);
  m.def("run_json", &run_json, py::arg("command"), py::arg("spec"), py::arg("profile") = "",
        py::arg("overrides") = py::dict(), py::arg("jobs") = 1u);
  m.def("witt_rank", &lie::witt_rank, py::arg("d"), py::arg("n"));
  m.def("hall_basis", [](const std::vector<int>& weights, std::size_t n) {
    std::vector<std::string> out;
    for (const auto& e : lie::hall_basis(weights, n)) out.push_back(e.to_string());
    return out;
  }, py::arg("weights"), py::arg("n"));
  m.def("modular_h1", [](int mm) { return lie::modular_h1(mm).dims; }, py::arg("m"));
  m.def("ls_weights", [](int lambda, int m_max, std::size_t s) {
    const auto r = lie::ls_weight_report(lambda, m_max, s);
    return py::make_tuple(r.ls.dims, r.e1_diag_zero);
  }, py::arg("lambda_weight"), py::arg("m_max"), py::arg("s"));
  m.def("group_cohomology", [](const std::string& group, const std::vector<std::int64_t>& factors, std::size_t n) {
    try {
      return cohomology(GModule::trivial(catalog::by_name(group), factors), n).invariant_factors();
    } catch (const std::exception& e) {
      throw AppFailure(app::classify(e).error.dump());
    }
  }, py::arg("group"), py::arg("factors"), py::arg("n"), "Invariant factors of H^n(G, A), A with trivial action.");
}
