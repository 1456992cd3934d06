// Command-line front end: reads a problem spec, runs one command, writes the
// report. Exit codes: 0 ok, 1 selftest failure or internal error, 2 invalid
// input, 3 budget exhausted.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "obstower/app.hpp"

namespace {

using obstower::app::json;

struct Flags {
  std::string spec_path, out_path, format = "json", profile;
  unsigned jobs = 1;
  std::optional<std::size_t> max_order, max_degree, truncation;
  std::optional<std::uint64_t> hom_search;
  // lie shortcuts
  bool ls = false;
  int mmax = 10, lambda_weight = -1;
  std::size_t s = 1;
};

json read_spec(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw obstower::app::SpecError("cannot read spec file '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw obstower::app::SpecError(std::string("spec is not valid JSON: ") + e.what());
  }
}

void write_atomically(const std::string& path, const std::string& body) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << body;
    if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

int execute(const std::string& command, const Flags& f) {
  using namespace obstower::app;
  try {
    Options opts;
    std::string profile = f.profile;
    if (profile.empty())
      if (const char* env = std::getenv(std::string(kProfileEnv).c_str())) profile = env;
    opts.budgets = Budgets::profile(profile);
    if (f.max_order) opts.budgets.max_group_order = *f.max_order;
    if (f.hom_search) opts.budgets.max_hom_search = *f.hom_search;
    if (f.max_degree) opts.budgets.max_degree = *f.max_degree;
    if (f.truncation) opts.budgets.max_truncation = *f.truncation;
    opts.jobs = std::max(1u, f.jobs);

    json spec = json::object();
    if (!f.spec_path.empty()) {
      spec = read_spec(f.spec_path);
    } else if (command == "lie" && f.ls) {
      spec = {{"schema", kSpecSchema}, {"kind", "lie"}, {"ls", {{"lambda_weight", f.lambda_weight}, {"m_max", f.mmax}, {"s", f.s}}}};
    } else if (command != "selftest") {
      throw SpecError("--spec is required for '" + command + "'");
    }
    if (f.ls && !f.spec_path.empty()) throw SpecError("--ls and --spec are exclusive");

    const json report = run(command, spec, opts);
    const std::string body = report.dump(2) + "\n";
    if (!f.out_path.empty()) write_atomically(f.out_path, body);
    if (f.format == "text")
      std::cout << render_text(report);
    else if (f.out_path.empty())
      std::cout << body;
    if (command == "selftest" && !report["results"]["all_pass"].get<bool>()) return 1;
    return 0;
  } catch (const std::exception& e) {
    const auto failure = classify(e);
    std::cerr << failure.error.dump() << "\n";
    return failure.exit_code;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifting-obstruction towers, local-global systems, graded Lie counts and simplicial checks"};
  app.require_subcommand(1);
  Flags f;
  std::string chosen;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--spec", f.spec_path, "Problem spec (JSON file, '-' for stdin)");
    sub->add_option("--out", f.out_path, "Write the JSON report here");
    sub->add_option("--jobs", f.jobs, "Worker cap")->check(CLI::Range(1u, 256u));
    sub->add_option("--format", f.format, "Output on stdout")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--budget-profile", f.profile, "default | small | large (env OBSTOWER_BUDGET_PROFILE)");
    sub->add_option("--budget-max-order", f.max_order, "Largest group or module order (default 512)");
    sub->add_option("--budget-hom-search", f.hom_search, "Largest homomorphism search space (default 1e7)");
    sub->add_option("--budget-max-degree", f.max_degree, "Largest cohomological degree (default 3)");
    sub->add_option("--budget-truncation", f.truncation, "Largest simplicial truncation (default 6)");
    sub->callback([&chosen, sub] { chosen = sub->get_name(); });
    return sub;
  };
  common(app.add_subcommand("tower", "Lift a homomorphism through a lower-central-series tower"));
  common(app.add_subcommand("reciprocity", "Compact-support cohomology and reciprocity for a local-global system"));
  common(app.add_subcommand("cohomology", "Cohomology of a finite group with coefficients in a finite module"));
  auto* lie = common(app.add_subcommand("lie", "Free Lie algebra counts and modular weight tables"));
  lie->add_flag("--ls", f.ls, "Weight table of L_s without a spec");
  lie->add_option("--mmax", f.mmax, "Largest m for --ls")->check(CLI::Range(0, 200));
  lie->add_option("--s", f.s, "Bracket length for --ls")->check(CLI::Range(1, 64));
  lie->add_option("--lambda-weight", f.lambda_weight, "Weight of each Lambda factor for --ls");
  common(app.add_subcommand("simplicial-check", "Exact checks on truncated simplicial objects"));
  common(app.add_subcommand("selftest", "Built-in checks against known values"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return execute(chosen, f);
}
