#include "obstower/app.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <exception>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "obstower/arith.hpp"
#include "obstower/error.hpp"
#include "obstower/lie.hpp"
#include "obstower/samplers.hpp"
#include "obstower/simplicial.hpp"
#include "obstower/tower.hpp"

namespace obstower::app {

namespace {

using Clock = std::chrono::steady_clock;

// --- small json helpers --------------------------------------------------------

[[noreturn]] void bad(const std::string& where, const std::string& what) { throw SpecError(where + ": " + what); }

void check_keys(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) bad(where, "expected an object");
  for (const auto& [k, v] : j.items())
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) bad(where, "unknown key '" + k + "'");
}

std::int64_t int_of(const json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<std::int64_t>();
}

std::size_t uint_of(const json& j, const std::string& where) {
  const auto v = int_of(j, where);
  if (v < 0) bad(where, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

bool bool_of(const json& j, const std::string& where) {
  if (!j.is_boolean()) bad(where, "expected true or false");
  return j.get<bool>();
}

std::string string_of(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

const json& array_of(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array");
  return j;
}

std::vector<std::int64_t> ints_of(const json& j, const std::string& where) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < array_of(j, where).size(); ++i) out.push_back(int_of(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const std::string w = where + "." + key;
  if constexpr (std::is_same_v<T, bool>)
    return bool_of(j[key], w);
  else if constexpr (std::is_same_v<T, std::size_t>)
    return uint_of(j[key], w);
  else
    return static_cast<T>(int_of(j[key], w));
}

json pairs(const lie::GradedSpace& v) {
  json out = json::array();
  for (const auto& [w, d] : v.dims) out.push_back({w, d});
  return out;
}

json elems(const std::vector<Elem>& v) {
  json out = json::array();
  for (auto x : v) out.push_back(x);
  return out;
}

std::string hex(const unsigned char* p, unsigned n) {
  std::ostringstream os;
  for (unsigned i = 0; i < n; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(p[i]);
  return os.str();
}

// --- parallel map with deterministic error reporting ----------------------------

template <class F>
auto parallel_map(std::size_t n, unsigned jobs, F f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), n);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);  // lowest index wins
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// --- spec context -------------------------------------------------------------------

class Context {
 public:
  Context(const json& spec, const Options& opts) : spec_(spec), opts_(opts) {}

  const Budgets& budgets() const { return opts_.budgets; }
  unsigned jobs() const { return opts_.jobs; }
  SearchBudget search() const { return {budgets().max_hom_search}; }

  void order_budget(long double order, const std::string& where) const {
    if (order > static_cast<long double>(budgets().max_group_order))
      throw BudgetError(where + ": order exceeds the group-order budget (" + std::to_string(budgets().max_group_order) +
                        ")");
  }

  FiniteGroup group(const json& ref, const std::string& where) {
    if (ref.is_string()) {
      const auto name = ref.get<std::string>();
      if (spec_.contains("groups") && spec_["groups"].contains(name)) {
        if (auto it = named_.find(name); it != named_.end()) return it->second;
        if (!resolving_.insert(name).second) bad(where, "cyclic group reference '" + name + "'");
        auto g = group(spec_["groups"][name], "groups." + name).renamed(name);
        resolving_.erase(name);
        named_.emplace(name, g);
        return g;
      }
      if (auto n = predicted_order(name)) order_budget(*n, where);
      try {
        return catalog::by_name(name);
      } catch (const Error&) {
        bad(where, "unknown group '" + name + "'");
      }
    }
    check_keys(ref, where,
               {"cyclic", "dihedral", "symmetric", "alternating", "quaternion", "abelian", "table", "generators",
                "permutations", "degree", "semidirect", "name"});
    const std::string name = ref.contains("name") ? string_of(ref["name"], where + ".name") : std::string{};
    auto named = [&](FiniteGroup g) { return name.empty() ? g : g.renamed(name); };
    if (ref.contains("cyclic")) {
      const auto n = uint_of(ref["cyclic"], where + ".cyclic");
      if (n == 0) bad(where, "cyclic order must be positive");
      order_budget(n, where);
      return named(catalog::cyclic(n));
    }
    if (ref.contains("dihedral")) {
      const auto n = uint_of(ref["dihedral"], where + ".dihedral");
      if (n < 1) bad(where, "dihedral needs n >= 1");
      order_budget(2.0L * n, where);
      return named(catalog::dihedral(n));
    }
    if (ref.contains("symmetric") || ref.contains("alternating")) {
      const bool sym = ref.contains("symmetric");
      const auto n = uint_of(sym ? ref["symmetric"] : ref["alternating"], where);
      if (n < 1 || n > 5) bad(where, "symmetric and alternating groups need 1 <= n <= 5");
      long double f = 1;
      for (std::size_t i = 2; i <= n; ++i) f *= i;
      order_budget(sym ? f : std::max<long double>(1, f / 2), where);
      return named(sym ? catalog::symmetric(n) : catalog::alternating(n));
    }
    if (ref.contains("quaternion")) {
      if (uint_of(ref["quaternion"], where + ".quaternion") != 8) bad(where, "only the quaternion group of order 8");
      return named(catalog::quaternion8());
    }
    if (ref.contains("abelian")) {
      const auto f = ints_of(ref["abelian"], where + ".abelian");
      long double n = 1;
      for (auto x : f) {
        if (x < 1) bad(where, "abelian factors must be positive");
        n *= static_cast<long double>(x);
      }
      order_budget(n, where);
      return named(catalog::abelian(f));
    }
    if (ref.contains("table")) {
      const auto& t = array_of(ref["table"], where + ".table");
      order_budget(t.size(), where);
      std::vector<std::vector<Elem>> table;
      for (std::size_t i = 0; i < t.size(); ++i) {
        table.emplace_back();
        for (auto v : ints_of(t[i], where + ".table")) {
          if (v < 0 || static_cast<std::size_t>(v) >= t.size()) bad(where, "table entry out of range");
          table.back().push_back(static_cast<Elem>(v));
        }
      }
      std::vector<Elem> gens;
      if (ref.contains("generators"))
        for (auto v : ints_of(ref["generators"], where + ".generators")) {
          if (v < 0 || static_cast<std::size_t>(v) >= t.size()) bad(where, "generator out of range");
          gens.push_back(static_cast<Elem>(v));
        }
      else
        for (std::size_t i = 1; i < t.size(); ++i) gens.push_back(static_cast<Elem>(i));
      try {
        return FiniteGroup::from_table(table, gens, name);
      } catch (const Error& e) {
        bad(where, e.what());
      }
    }
    if (ref.contains("permutations")) {
      const auto degree = uint_of(ref.value("degree", json(0)), where + ".degree");
      if (degree == 0 || degree > 64) bad(where, "permutation degree must be in 1..64");
      std::vector<std::vector<std::uint32_t>> gens;
      for (const auto& p : array_of(ref["permutations"], where + ".permutations")) {
        std::vector<std::uint32_t> perm;
        for (auto v : ints_of(p, where + ".permutations")) {
          if (v < 0 || static_cast<std::size_t>(v) >= degree) bad(where, "permutation entry out of range");
          perm.push_back(static_cast<std::uint32_t>(v));
        }
        if (perm.size() != degree) bad(where, "permutation of the wrong length");
        auto sorted = perm;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < degree; ++i)
          if (sorted[i] != i) bad(where, "not a permutation");
        gens.push_back(std::move(perm));
      }
      // closure with a cap, before any table is built
      std::set<std::vector<std::uint32_t>> seen;
      std::vector<std::vector<std::uint32_t>> frontier;
      std::vector<std::uint32_t> id(degree);
      for (std::size_t i = 0; i < degree; ++i) id[i] = static_cast<std::uint32_t>(i);
      seen.insert(id);
      frontier.push_back(id);
      while (!frontier.empty()) {
        auto p = std::move(frontier.back());
        frontier.pop_back();
        for (const auto& g : gens) {
          std::vector<std::uint32_t> q(degree);
          for (std::size_t i = 0; i < degree; ++i) q[i] = g[p[i]];
          if (seen.insert(q).second) {
            order_budget(seen.size(), where);
            frontier.push_back(std::move(q));
          }
        }
      }
      return catalog::permutation_group(degree, gens, name);
    }
    if (ref.contains("semidirect")) {
      const GModule m = module(ref["semidirect"], where + ".semidirect", std::nullopt);
      order_budget(static_cast<long double>(m.order()) * m.group().size(), where);
      return named(semidirect_product(m).total);
    }
    bad(where, "no group constructor given");
  }

  Elem element(const FiniteGroup& g, const json& ref, const std::string& where) const {
    if (ref.is_number_integer()) {
      const auto v = int_of(ref, where);
      if (v < 0 || static_cast<std::size_t>(v) >= g.size()) bad(where, "element index out of range");
      return static_cast<Elem>(v);
    }
    if (ref.is_array()) {  // a word in the generators
      Elem x = g.identity();
      for (auto k : ints_of(ref, where)) {
        if (k < 0 || static_cast<std::size_t>(k) >= g.generators().size()) bad(where, "generator index out of range");
        x = g.mul(x, g.generators()[static_cast<std::size_t>(k)]);
      }
      return x;
    }
    bad(where, "expected an element index or a generator word");
  }

  std::vector<Elem> elements(const FiniteGroup& g, const json& ref, const std::string& where) const {
    std::vector<Elem> out;
    for (std::size_t i = 0; i < array_of(ref, where).size(); ++i)
      out.push_back(element(g, ref[i], where + "[" + std::to_string(i) + "]"));
    return out;
  }

  Subgroup subgroup(const FiniteGroup& g, const json& ref, const std::string& where) const {
    if (ref.is_string()) {
      const auto s = ref.get<std::string>();
      if (s == "whole") return whole_group(g);
      if (s == "trivial") return trivial_subgroup(g);
      if (s == "center") return center(g);
      if (s == "derived") return commutator_subgroup(g, whole_group(g), whole_group(g));
      bad(where, "unknown subgroup '" + s + "'");
    }
    return generated_subgroup(g, elements(g, ref, where));
  }

  GModule module(const json& ref, const std::string& where, const std::optional<FiniteGroup>& over) {
    check_keys(ref, where, {"group", "factors", "matrices"});
    FiniteGroup g;
    if (ref.contains("group")) {
      g = group(ref["group"], where + ".group");
      if (over && !g.same_as(*over)) bad(where, "module group differs from the ambient group");
    } else if (over) {
      g = *over;
    } else {
      bad(where, "module needs a group");
    }
    if (!ref.contains("factors")) bad(where, "module needs factors");
    const auto factors = ints_of(ref["factors"], where + ".factors");
    long double order = 1;
    for (auto f : factors) {
      if (f < 1) bad(where, "factors must be positive");
      order *= static_cast<long double>(f);
    }
    order_budget(order, where + " (module)");
    try {
      if (!ref.contains("matrices")) return GModule::trivial(g, factors);
      std::vector<std::vector<std::int64_t>> mats;
      for (const auto& m : array_of(ref["matrices"], where + ".matrices")) mats.push_back(ints_of(m, where + ".matrices"));
      return GModule::from_generators(g, factors, mats);
    } catch (const Error& e) {
      if (e.code() == Errc::InvalidInput) bad(where, e.what());
      throw;
    }
  }

  GroupHom hom(const FiniteGroup& src, const FiniteGroup& tgt, const json& ref, const std::string& where) const {
    if (ref.is_string()) {
      const auto s = ref.get<std::string>();
      if (s == "identity") {
        if (!src.same_as(tgt)) bad(where, "identity needs equal groups; use \"isomorphism\"");
        return GroupHom(src, tgt, GroupHom::identity(src).images());
      }
      if (s == "trivial") return GroupHom::trivial(src, tgt);
      if (s == "isomorphism") {
        auto iso = find_isomorphism(src, tgt, search());
        if (!iso) bad(where, "groups are not isomorphic");
        return *iso;
      }
      bad(where, "unknown homomorphism '" + s + "'");
    }
    if (ref.is_object()) {
      check_keys(ref, where, {"images"});
      return hom(src, tgt, ref["images"], where + ".images");
    }
    const auto images = elements(tgt, ref, where);
    if (images.size() != src.generators().size())
      bad(where, "expected " + std::to_string(src.generators().size()) + " generator images");
    auto h = GroupHom::try_from_generator_images(src, tgt, images);
    if (!h) bad(where, "generator images do not define a homomorphism");
    return *h;
  }

  std::size_t truncation(const json& spec, std::size_t fallback) const {
    const auto n = get_or<std::size_t>(spec, "truncation", fallback, "spec");
    if (n > budgets().max_truncation) throw BudgetError("spec.truncation exceeds the truncation budget");
    return n;
  }

  std::size_t degree(std::size_t n, const std::string& where) const {
    if (n > budgets().max_degree) throw BudgetError(where + ": degree exceeds the degree budget");
    return n;
  }

 private:
  static std::optional<long double> predicted_order(const std::string& raw) {
    std::string s;
    for (char c : raw)
      if (c != ' ' && c != '_') s += c;
    auto num = [](std::string_view t) -> std::optional<long double> {
      if (t.empty() || t.size() > 18) return t.empty() ? std::nullopt : std::optional<long double>(1e30L);
      std::uint64_t v = 0;
      auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || p != t.data() + t.size()) return std::nullopt;
      return static_cast<long double>(v);
    };
    if (s.empty()) return std::nullopt;
    if (s.find('x') != std::string::npos) {
      long double total = 1;
      std::stringstream ss(s);
      std::string part;
      while (std::getline(ss, part, 'x')) {
        if (part.size() < 2) return std::nullopt;
        auto n = num(std::string_view(part).substr(1));
        if (!n) return std::nullopt;
        total *= *n;
      }
      return total;
    }
    if (s[0] == 'C' || s[0] == 'Z') return num(std::string_view(s).substr(1));
    if (s[0] == 'D') {
      auto n = num(std::string_view(s).substr(1));
      return n ? std::optional<long double>(2 * *n) : std::nullopt;
    }
    return std::nullopt;
  }

  const json& spec_;
  Options opts_;
  std::map<std::string, FiniteGroup> named_;
  std::set<std::string> resolving_;
};

// --- shared encoders ------------------------------------------------------------------

json hom_json(const GroupHom& h) { return elems(h.generator_images()); }

json level_json(const LevelReport& l) {
  json j{{"level", l.level},
         {"h2_orders", l.h2_orders},
         {"obstruction", l.obstruction_coords},
         {"obstructed", l.obstructed},
         {"lift_classes", l.lift_class_count},
         {"h1_orders", l.h1_orders}};
  j["chosen_lift"] = l.chosen_lift ? hom_json(*l.chosen_lift) : json(nullptr);
  return j;
}

std::string state_name(E1Entry::State s) {
  switch (s) {
    case E1Entry::State::Computed: return "computed";
    case E1Entry::State::ForcedZero: return "zero";
    case E1Entry::State::Uncomputed: return "uncomputed";
  }
  return "?";
}

json sset_json(const simp::SimplicialSet& x) {
  json levels = json::array();
  for (std::size_t n = 0; n <= x.top(); ++n) {
    json l{{"size", x.sizes[n]}};
    l["faces"] = n == 0 ? json::array() : json(x.faces[n]);
    l["degeneracies"] = n < x.top() ? json(x.degeneracies[n]) : json::array();
    levels.push_back(std::move(l));
  }
  return json{{"levels", levels}};
}

Tower build_tower(Context& ctx, const json& t, const std::string& where) {
  const auto pi = ctx.group(t.at("pi"), where + ".pi");
  const auto n = t.contains("normal") ? ctx.subgroup(pi, t["normal"], where + ".normal") : whole_group(pi);
  const auto depth = get_or<std::size_t>(t, "depth", 2, where);
  if (depth < 1 || depth > 16) bad(where, "depth must be in 1..16");
  return tower_from_lcs(pi, n, depth);
}

GroupHom down_to_base(const Tower& t, GroupHom psi, std::size_t level) {
  for (std::size_t n = level; n >= 1; --n) psi = t.steps[n - 1].extension.projection.after(psi);
  return psi;
}

json tower_levels(const Tower& t) {
  json out = json::array();
  for (std::size_t n = 0; n <= t.steps.size(); ++n) {
    json l{{"level", n}, {"order", t.level(n).size()}};
    l["kernel_factors"] = n == 0 ? json::array() : json(t.steps[n - 1].extension.kernel.factors());
    out.push_back(std::move(l));
  }
  return out;
}

// --- commands -------------------------------------------------------------------------

json run_tower_cmd(Context& ctx, const json& spec) {
  check_keys(spec, "spec",
             {"schema", "kind", "groups", "pi", "normal", "depth", "source", "psi0", "start_level", "window",
              "full_tree", "width_cap"});
  for (const char* k : {"pi", "source", "psi0"})
    if (!spec.contains(k)) bad("spec", std::string("missing '") + k + "'");
  const Tower tower = build_tower(ctx, spec, "spec");
  const auto source = ctx.group(spec["source"], "spec.source");
  RunOptions opts;
  opts.start_level = get_or<std::size_t>(spec, "start_level", 0, "spec");
  if (opts.start_level > tower.steps.size()) bad("spec.start_level", "beyond the tower depth");
  opts.full_tree = get_or<bool>(spec, "full_tree", false, "spec");
  opts.width_cap = get_or<std::size_t>(spec, "width_cap", 64, "spec");
  const auto psi0 = ctx.hom(source, tower.level(opts.start_level), spec["psi0"], "spec.psi0");

  const auto rep = run_tower(psi0, tower, opts);
  json run{{"completed", rep.completed}, {"start", hom_json(rep.start)}};
  run["blocked_at"] = rep.blocked_at ? json(*rep.blocked_at) : json(nullptr);
  json levels = json::array();
  for (const auto& l : rep.levels) levels.push_back(level_json(l));
  run["levels"] = levels;
  if (opts.full_tree) {
    json tree = json::array();
    for (const auto& node : rep.tree)
      tree.push_back({{"level", node.level},
                      {"parent", node.parent},
                      {"images", elems(node.generator_images)},
                      {"children", node.children},
                      {"obstructed_below", node.obstructed_below}});
    run["tree"] = tree;
    run["tree_truncated"] = rep.tree_truncated;
  }

  json window = spec.value("window", json::object());
  check_keys(window, "spec.window", {"s_max", "t_max"});
  const auto s_max = get_or<std::size_t>(window, "s_max", tower.steps.size(), "spec.window");
  const auto t_max = get_or<std::size_t>(window, "t_max", tower.steps.size(), "spec.window");
  const auto page = e1_page(tower, down_to_base(tower, psi0, opts.start_level), s_max, t_max,
                            ctx.budgets().max_degree);
  json e1 = json::array();
  for (const auto& e : page.entries)
    e1.push_back({{"s", e.s},
                  {"t", e.t},
                  {"degree", e.degree},
                  {"state", state_name(e.state)},
                  {"orders", e.orders},
                  {"invariant_factors", e.invariant_factors}});
  return json{{"tower", tower_levels(tower)},
              {"run", run},
              {"e1", {{"s_max", s_max}, {"t_max", t_max}, {"entries", e1}}}};
}

json run_cohomology_cmd(Context& ctx, const json& spec) {
  check_keys(spec, "spec", {"schema", "kind", "groups", "module", "degrees", "representatives", "bar_check", "cocycles"});
  if (!spec.contains("module")) bad("spec", "missing 'module'");
  const auto m = ctx.module(spec["module"], "spec.module", std::nullopt);
  std::vector<std::size_t> degrees{0, 1, 2};
  if (spec.contains("degrees")) {
    degrees.clear();
    for (const auto& d : array_of(spec["degrees"], "spec.degrees")) degrees.push_back(uint_of(d, "spec.degrees"));
  }
  const bool reps = get_or<bool>(spec, "representatives", false, "spec");
  const bool bar = get_or<bool>(spec, "bar_check", false, "spec");
  const CohomologyOptions copts{ctx.budgets().max_degree};
  json groups = json::array();
  for (auto n : degrees) {
    ctx.degree(n, "spec.degrees");
    const auto h = cohomology(m, n, copts);
    json j{{"degree", n}, {"orders", h.orders()}, {"invariant_factors", h.invariant_factors()}, {"size", h.size()}};
    if (reps) {
      json r = json::array();
      for (std::size_t i = 0; i < h.ngens(); ++i) r.push_back(h.representative(i).values());
      j["representatives"] = r;
    }
    if (bar) {
      auto b = bar_cohomology_orders(m, n);
      std::sort(b.begin(), b.end());
      auto o = h.orders();
      std::sort(o.begin(), o.end());
      j["bar_orders"] = b;
      j["bar_agrees"] = b == o;
    }
    groups.push_back(std::move(j));
  }
  json classes = json::array();
  if (spec.contains("cocycles"))
    for (const auto& c : array_of(spec["cocycles"], "spec.cocycles")) {
      check_keys(c, "spec.cocycles[]", {"degree", "values"});
      const auto n = ctx.degree(uint_of(c.at("degree"), "spec.cocycles[].degree"), "spec.cocycles[]");
      Cochain f;
      try {
        f = Cochain::from_values(m, n, ints_of(c.at("values"), "spec.cocycles[].values"));
      } catch (const Error& e) {
        bad("spec.cocycles[]", e.what());
      }
      const auto cls = class_of(f);
      classes.push_back({{"degree", n}, {"coordinates", cls.coords}, {"is_zero", cls.is_zero()}});
    }
  return json{{"module", {{"group_order", m.group().size()}, {"factors", m.factors()}}},
              {"groups", groups},
              {"classes", classes}};
}

LocalGlobalSystem build_system(Context& ctx, const json& s, const std::string& where) {
  check_keys(s, where, {"global", "places"});
  LocalGlobalSystem sys;
  sys.global = ctx.group(s.at("global"), where + ".global");
  const auto& places = array_of(s.at("places"), where + ".places");
  if (places.empty()) bad(where, "needs at least one place");
  for (std::size_t i = 0; i < places.size(); ++i) {
    const auto& p = places[i];
    const std::string w = where + ".places[" + std::to_string(i) + "]";
    check_keys(p, w, {"label", "group", "decomposition", "inertia"});
    Place pl;
    pl.label = p.contains("label") ? string_of(p["label"], w + ".label") : "v" + std::to_string(i + 1);
    const auto gv = ctx.group(p.at("group"), w + ".group");
    pl.decomposition = ctx.hom(gv, sys.global, p.at("decomposition"), w + ".decomposition");
    pl.inertia = p.contains("inertia") ? ctx.subgroup(gv, p["inertia"], w + ".inertia") : trivial_subgroup(gv);
    sys.places.push_back(std::move(pl));
  }
  try {
    sys.validate();
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidInput) bad(where, e.what());
    throw;
  }
  return sys;
}

json run_reciprocity_cmd(Context& ctx, const json& spec) {
  check_keys(spec, "spec",
             {"schema", "kind", "groups", "system", "module", "ramified", "les_up_to", "local_classes", "tower"});
  const auto sys = build_system(ctx, spec.at("system"), "spec.system");
  const auto m = spec.contains("module") ? ctx.module(spec["module"], "spec.module", sys.global)
                                         : GModule::trivial(sys.global, {2});
  std::vector<std::string> ramified;
  if (!spec.contains("ramified") || spec["ramified"] == "auto") {
    ramified = ramified_places(sys, m);
  } else {
    for (const auto& r : array_of(spec["ramified"], "spec.ramified")) ramified.push_back(string_of(r, "spec.ramified"));
  }
  const auto up_to = ctx.degree(get_or<std::size_t>(spec, "les_up_to", std::min<std::size_t>(3, ctx.budgets().max_degree), "spec"),
                                "spec.les_up_to");
  const CompactSupport cs(sys, m, ramified, up_to);
  json places = json::array();
  for (const auto& lm : cs.places())
    places.push_back({{"label", lm.label}, {"unramified", lm.unramified}, {"group_order", lm.group.size()}});
  json hc = json::array();
  for (std::size_t n = 0; n <= up_to + 1; ++n)
    hc.push_back({{"degree", n}, {"orders", cs.orders(n)}, {"invariant_factors", invariant_factors(cs.orders(n))}});
  const auto les = cs.les(up_to);
  json nodes = json::array(), spots = json::array();
  for (const auto& nd : les.nodes) nodes.push_back({{"name", nd.name}, {"orders", nd.orders}});
  for (const auto& sp : les.spots)
    spots.push_back({{"name", sp.name},
                     {"exact", sp.exact},
                     {"image_order", sp.image_order},
                     {"kernel_order", sp.kernel_order}});

  json recs = json::array();
  if (spec.contains("local_classes"))
    for (const auto& alpha : array_of(spec["local_classes"], "spec.local_classes")) {
      std::vector<std::vector<std::int64_t>> coords;
      for (const auto& c : array_of(alpha, "spec.local_classes[]")) coords.push_back(ints_of(c, "spec.local_classes[][]"));
      if (coords.size() != sys.places.size()) bad("spec.local_classes[]", "one coordinate vector per place");
      const auto r = reciprocity_obstruction(sys, m, coords, ramified);
      recs.push_back({{"local_classes", coords}, {"hc2_orders", r.hc2_orders}, {"coords", r.coords}, {"is_zero", r.is_zero}});
    }

  json out{{"ramified", ramified},
           {"places", places},
           {"compact_support", hc},
           {"les", {{"exact", les.exact}, {"nodes", nodes}, {"spots", spots}}},
           {"reciprocity", recs}};

  if (spec.contains("tower")) {
    const auto& t = spec["tower"];
    check_keys(t, "spec.tower", {"pi", "normal", "depth", "psi0", "local_lifts"});
    const Tower tower = build_tower(ctx, t, "spec.tower");
    const auto psi0 = ctx.hom(sys.global, tower.base, t.at("psi0"), "spec.tower.psi0");
    std::vector<std::vector<GroupHom>> lifts;
    const auto& ll = array_of(t.at("local_lifts"), "spec.tower.local_lifts");
    if (ll.size() > tower.steps.size()) bad("spec.tower.local_lifts", "more levels than the tower");
    for (std::size_t n = 0; n < ll.size(); ++n) {
      const auto& per = array_of(ll[n], "spec.tower.local_lifts[]");
      if (per.size() != sys.places.size()) bad("spec.tower.local_lifts[]", "one lift per place");
      lifts.emplace_back();
      for (std::size_t v = 0; v < per.size(); ++v)
        lifts.back().push_back(ctx.hom(sys.places[v].decomposition.source(), tower.level(n + 1), per[v],
                                       "spec.tower.local_lifts[" + std::to_string(n) + "][" + std::to_string(v) + "]"));
    }
    const auto rep = reciprocity_tower(sys, tower, psi0, lifts);
    json levels = json::array();
    for (const auto& l : rep.levels) {
      json j{{"level", l.level},
             {"global_obstruction", l.global_obstruction},
             {"global_obstructed", l.global_obstructed},
             {"hc2_orders", l.hc2_orders},
             {"difference", l.difference},
             {"difference_zero", l.difference_zero},
             {"continuation_found", l.continuation_found}};
      j["chosen_global"] = l.chosen_global ? hom_json(*l.chosen_global) : json(nullptr);
      levels.push_back(std::move(j));
    }
    json tr{{"tower", tower_levels(tower)}, {"levels", levels}, {"completed", rep.completed}};
    tr["stopped_at"] = rep.stopped_at ? json(*rep.stopped_at) : json(nullptr);
    out["tower"] = tr;
  }
  return out;
}

json ls_json(const json& ls, const std::string& where) {
  check_keys(ls, where, {"lambda_weight", "m_max", "s"});
  const int lw = get_or<int>(ls, "lambda_weight", -1, where);
  const int m_max = get_or<int>(ls, "m_max", 10, where);
  const auto s = get_or<std::size_t>(ls, "s", 1, where);
  if (m_max < 0 || m_max > 200) bad(where, "m_max must be in 0..200");
  if (s < 1 || s > 64) bad(where, "s must be in 1..64");
  const auto r = lie::ls_weight_report(lw, m_max, s);
  return json{{"lambda_weight", lw},  {"m_max", m_max},           {"s", s},
              {"generators", pairs(r.generators)}, {"weights", pairs(r.ls)}, {"e1_diag_zero", r.e1_diag_zero}};
}

json run_lie_cmd(Context&, const json& spec) {
  check_keys(spec, "spec", {"schema", "kind", "ls", "ls_scan", "witt", "hall", "colie", "modular_h1"});
  json out = json::object();
  if (spec.contains("ls")) {
    if (spec["ls"].is_array()) {
      json all = json::array();
      for (const auto& l : spec["ls"]) all.push_back(ls_json(l, "spec.ls[]"));
      out["ls"] = all;
    } else {
      out["ls"] = json::array({ls_json(spec["ls"], "spec.ls")});
    }
  }
  if (spec.contains("ls_scan")) {
    const auto& sc = spec["ls_scan"];
    check_keys(sc, "spec.ls_scan", {"lambda_weight", "m_max", "s_max"});
    const int lw = get_or<int>(sc, "lambda_weight", -1, "spec.ls_scan");
    const int m_max = get_or<int>(sc, "m_max", 20, "spec.ls_scan");
    const auto s_max = get_or<std::size_t>(sc, "s_max", 5, "spec.ls_scan");
    if (m_max < 0 || m_max > 200 || s_max < 1 || s_max > 64) bad("spec.ls_scan", "range out of bounds");
    json rows = json::array();
    bool all = true;
    for (int m = 0; m <= m_max; ++m)
      for (std::size_t s = 1; s <= s_max; ++s) {
        const bool f = lie::ls_weight_report(lw, m, s).e1_diag_zero;
        all = all && f;
        rows.push_back({m, s, f});
      }
    out["ls_scan"] = {{"lambda_weight", lw}, {"m_max", m_max}, {"s_max", s_max}, {"flags", rows}, {"all_true", all}};
  }
  if (spec.contains("witt")) {
    json rows = json::array();
    for (const auto& w : array_of(spec["witt"], "spec.witt")) {
      check_keys(w, "spec.witt[]", {"d", "n", "hall"});
      const auto d = uint_of(w.at("d"), "spec.witt[].d");
      const auto n = uint_of(w.at("n"), "spec.witt[].n");
      if (n < 1) bad("spec.witt[]", "n must be >= 1");
      json row{{"d", d}, {"n", n}, {"rank", lie::witt_rank(static_cast<std::int64_t>(d), n)}};
      if (get_or<bool>(w, "hall", false, "spec.witt[]")) {
        if (d > 6 || n > 10) bad("spec.witt[]", "hall count limited to d <= 6, n <= 10");
        row["hall_count"] = lie::hall_basis(std::vector<int>(d, 1), n).size();
      }
      rows.push_back(std::move(row));
    }
    out["witt"] = rows;
  }
  if (spec.contains("hall")) {
    const auto& h = spec["hall"];
    check_keys(h, "spec.hall", {"weights", "n"});
    std::vector<int> weights;
    for (auto w : ints_of(h.at("weights"), "spec.hall.weights")) weights.push_back(static_cast<int>(w));
    const auto n = uint_of(h.at("n"), "spec.hall.n");
    if (n < 1 || weights.size() > 6 || n > 10) bad("spec.hall", "needs 1 <= n <= 10 and at most 6 generators");
    json basis = json::array();
    for (const auto& e : lie::hall_basis(weights, n)) basis.push_back({{"bracket", e.to_string()}, {"weight", e.weight}});
    out["hall"] = {{"n", n}, {"basis", basis}};
  }
  if (spec.contains("colie")) {
    const auto& c = spec["colie"];
    check_keys(c, "spec.colie", {"space", "s"});
    lie::GradedSpace v;
    for (const auto& p : array_of(c.at("space"), "spec.colie.space")) {
      const auto wd = ints_of(p, "spec.colie.space[]");
      if (wd.size() != 2 || wd[1] < 0) bad("spec.colie.space[]", "expected [weight, dimension]");
      v.add(static_cast<int>(wd[0]), wd[1]);
    }
    const auto s = uint_of(c.at("s"), "spec.colie.s");
    if (s < 1 || s > 64) bad("spec.colie.s", "must be in 1..64");
    out["colie"] = {{"s", s}, {"weights", pairs(lie::colie_weights(v, s))}};
  }
  if (spec.contains("modular_h1")) {
    json rows = json::array();
    for (auto m : ints_of(spec["modular_h1"], "spec.modular_h1")) {
      if (m < 0 || m > 10000) bad("spec.modular_h1", "m must be in 0..10000");
      const auto h = lie::modular_h1(static_cast<int>(m));
      json labels = json::array();
      for (const auto& [w, l] : h.labels) labels.push_back({w, l});
      rows.push_back({{"m", m}, {"weights", pairs(h)}, {"labels", labels}});
    }
    out["modular_h1"] = rows;
  }
  if (out.empty()) bad("spec", "nothing to compute (ls, ls_scan, witt, hall, colie, modular_h1)");
  return out;
}

simp::FiniteChainComplex chain_complex(const json& c, const std::string& where) {
  check_keys(c, where, {"groups", "boundary"});
  simp::FiniteChainComplex out;
  for (const auto& g : array_of(c.at("groups"), where + ".groups")) out.groups.push_back(ints_of(g, where + ".groups[]"));
  if (out.groups.empty()) bad(where, "needs at least C_0");
  out.boundary.assign(out.groups.size(), {});
  if (c.contains("boundary")) {
    const auto& b = array_of(c["boundary"], where + ".boundary");
    if (b.size() != out.groups.size()) bad(where, "boundary needs one entry per degree (index 0 empty)");
    for (std::size_t k = 0; k < b.size(); ++k) out.boundary[k] = ints_of(b[k], where + ".boundary[]");
  }
  for (std::size_t k = 1; k < out.groups.size(); ++k)
    if (out.boundary[k].empty() && !out.groups[k].empty() && !out.groups[k - 1].empty())
      out.boundary[k].assign(out.groups[k].size() * out.groups[k - 1].size(), 0);
  return out;
}

simp::SimplicialSet ordered(const json& k, std::size_t top, const std::string& where) {
  check_keys(k, where, {"vertices", "facets"});
  const auto v = uint_of(k.at("vertices"), where + ".vertices");
  if (v < 1 || v > 16) bad(where, "vertices must be in 1..16");
  std::vector<std::vector<std::uint32_t>> facets;
  for (const auto& f : array_of(k.at("facets"), where + ".facets")) {
    facets.emplace_back();
    for (auto x : ints_of(f, where + ".facets[]")) {
      if (x < 0 || static_cast<std::size_t>(x) >= v) bad(where, "facet vertex out of range");
      facets.back().push_back(static_cast<std::uint32_t>(x));
    }
  }
  return simp::ordered_complex(v, facets, top);
}

simp::SimplicialSet raw_sset(const json& s, const std::string& where) {
  check_keys(s, where, {"levels"});
  simp::SimplicialSet x;
  const auto& levels = array_of(s.at("levels"), where + ".levels");
  if (levels.empty()) bad(where, "needs level 0");
  for (std::size_t n = 0; n < levels.size(); ++n) {
    const auto& l = levels[n];
    const std::string w = where + ".levels[" + std::to_string(n) + "]";
    check_keys(l, w, {"size", "faces", "degeneracies"});
    x.sizes.push_back(uint_of(l.at("size"), w + ".size"));
    if (x.sizes.back() > (1u << 20)) throw BudgetError(w + ": level too large");
  }
  auto maps = [&](const json& arr, std::size_t count, std::size_t from, std::size_t to, const std::string& w) {
    std::vector<simp::Map> out;
    if (array_of(arr, w).size() != count) bad(w, "expected " + std::to_string(count) + " maps");
    for (const auto& m : arr) {
      simp::Map f;
      for (auto v : ints_of(m, w)) {
        if (v < 0 || static_cast<std::size_t>(v) >= to) bad(w, "map value out of range");
        f.push_back(static_cast<std::uint32_t>(v));
      }
      if (f.size() != from) bad(w, "map of the wrong length");
      out.push_back(std::move(f));
    }
    return out;
  };
  const std::size_t top = x.sizes.size() - 1;
  x.faces.assign(top + 1, {});
  x.degeneracies.assign(top + 1, {});
  for (std::size_t n = 0; n <= top; ++n) {
    const std::string w = where + ".levels[" + std::to_string(n) + "]";
    if (n >= 1) x.faces[n] = maps(levels[n].value("faces", json::array()), n + 1, x.sizes[n], x.sizes[n - 1], w + ".faces");
    if (n < top)
      x.degeneracies[n] =
          maps(levels[n].value("degeneracies", json::array()), n + 1, x.sizes[n], x.sizes[n + 1], w + ".degeneracies");
  }
  const auto v = x.identity_violations(1);
  if (!v.empty()) bad(where, "simplicial identity fails: " + v.front());
  return x;
}

simp::BisimplicialSet bisimplicial(Context& ctx, const json& b, std::size_t n, const std::string& where) {
  check_keys(b, where, {"nerve", "external_product", "decalage", "product"});
  if (b.size() != 1) bad(where, "exactly one constructor");
  if (b.contains("nerve")) {
    const auto g = ctx.group(b["nerve"], where + ".nerve");
    return simp::nerve(simp::SimplicialGroup::constant(g, n), false);
  }
  if (b.contains("external_product")) {
    const auto& kl = array_of(b["external_product"], where + ".external_product");
    if (kl.size() != 2) bad(where, "external_product takes two complexes");
    return simp::external_product(ordered(kl[0], n, where + ".external_product[0]"),
                                  ordered(kl[1], n, where + ".external_product[1]"));
  }
  if (b.contains("decalage")) return simp::decalage(ordered(b["decalage"], 2 * n + 1, where + ".decalage"), n);
  const auto& xy = array_of(b["product"], where + ".product");
  if (xy.size() != 2) bad(where, "product takes two bisimplicial sets");
  return simp::product(bisimplicial(ctx, xy[0], n, where + ".product[0]"), bisimplicial(ctx, xy[1], n, where + ".product[1]"));
}

json fibration_json(const simp::FibrationReport& r) {
  return json{{"top", r.top},
              {"y_sizes", r.y_sizes},
              {"wbar_g_sizes", r.wbar_g_sizes},
              {"wbar_h_sizes", r.wbar_h_sizes},
              {"target_sizes", r.target_sizes},
              {"pullback_sizes", r.pullback_sizes},
              {"maps_simplicial", r.maps_simplicial},
              {"pullback_identity", r.pullback_identity},
              {"pi0_bijection", r.pi0_bijection},
              {"pi1_bijection", r.pi1_bijection},
              {"pi1_order", r.pi1_order},
              {"w_homology_equivalence", r.w_homology_equivalence},
              {"failures", r.failures},
              {"pass", r.failures.empty()}};
}

json dold_kan_json(const simp::FiniteChainComplex& c, std::size_t top, bool emit) {
  const auto a = simp::dold_kan(c, top);
  const auto pa = simp::moore_homotopy(a);
  const auto pw = simp::moore_homotopy(simp::wbar_group(a));
  bool shift = pw.empty() || pw[0].empty();
  for (std::size_t i = 1; i < pw.size(); ++i) shift = shift && i - 1 < pa.size() && pw[i] == pa[i - 1];
  json j{{"complex", {{"groups", c.groups}, {"boundary", c.boundary}}},
         {"level_sizes", a.underlying().sizes},
         {"pi", pa},
         {"pi_wbar", pw},
         {"shift_holds", shift}};
  if (emit) j["simplicial_set"] = sset_json(a.underlying());
  return j;
}

json diag_json(const simp::BisimplicialSet& x) {
  const auto r = simp::diag_vs_codiag(x);
  return json{{"cells", x.sizes.back().back()},
              {"diag_homology", r.diag_homology},
              {"codiag_homology", r.codiag_homology},
              {"equal", r.equal},
              {"natural_map_simplicial", r.natural_map_simplicial},
              {"natural_map_equivalence", r.natural_map_equivalence},
              {"pass", r.equal && r.natural_map_simplicial && r.natural_map_equivalence}};
}

json summary(const json& items) {
  std::size_t pass = 0;
  for (const auto& i : items) pass += i.at("pass").get<bool>() ? 1 : 0;
  return json{{"count", items.size()}, {"passed", pass}, {"all_pass", pass == items.size()}};
}

json run_simplicial_cmd(Context& ctx, const json& spec, json& timing) {
  check_keys(spec, "spec",
             {"schema", "kind", "groups", "truncation", "fibrations", "fibration_corpus", "dold_kan",
              "dold_kan_random", "diag", "diag_random", "homology", "emit"});
  const auto n = ctx.truncation(spec, 3);
  const bool emit = get_or<bool>(spec, "emit", false, "spec");
  json out = json::object();
  auto timed = [&](const char* name, auto fn) {
    const auto t0 = Clock::now();
    out[name] = fn();
    timing["sections"][name] = std::chrono::duration<double>(Clock::now() - t0).count();
  };

  std::vector<simp::SimplicialExtension> exts;
  std::vector<json> labels;
  if (spec.contains("fibrations"))
    for (std::size_t i = 0; i < array_of(spec["fibrations"], "spec.fibrations").size(); ++i) {
      const auto& f = spec["fibrations"][i];
      const std::string w = "spec.fibrations[" + std::to_string(i) + "]";
      check_keys(f, w, {"group", "kernel", "times"});
      const auto g = ctx.group(f.at("group"), w + ".group");
      const auto k = ctx.subgroup(g, f.at("kernel"), w + ".kernel");
      if (!is_normal(k)) bad(w, "kernel is not normal");
      auto e = simp::constant_extension(quotient(g, k).projection, n);
      if (f.contains("times")) e = simp::extension_times(e, simp::dold_kan(chain_complex(f["times"], w + ".times"), n));
      exts.push_back(std::move(e));
      labels.push_back({{"group_order", g.size()}, {"kernel_order", k.size()}, {"times", f.contains("times")}});
    }
  if (spec.contains("fibration_corpus")) {
    const auto& c = spec["fibration_corpus"];
    check_keys(c, "spec.fibration_corpus", {"max_order"});
    const auto max_order = get_or<std::size_t>(c, "max_order", 8, "spec.fibration_corpus");
    if (max_order > 8) throw BudgetError("spec.fibration_corpus.max_order: corpus covers orders <= 8");
    for (auto& e : sample::constant_extension_corpus(max_order, n)) {
      labels.push_back({{"group_order", e.total.levels[0].size()},
                        {"kernel_order", e.total.levels[0].size() / e.base.levels[0].size()},
                        {"times", false}});
      exts.push_back(std::move(e));
    }
  }
  if (!exts.empty())
    timed("fibrations", [&] {
      auto rows = parallel_map(exts.size(), ctx.jobs(), [&](std::size_t i) {
        json j = fibration_json(simp::fibration_data(exts[i]));
        j["extension"] = labels[i];
        return j;
      });
      json items(rows);
      return json{{"items", items}, {"summary", summary(items)}};
    });

  std::vector<simp::FiniteChainComplex> complexes;
  if (spec.contains("dold_kan"))
    for (std::size_t i = 0; i < array_of(spec["dold_kan"], "spec.dold_kan").size(); ++i)
      complexes.push_back(chain_complex(spec["dold_kan"][i], "spec.dold_kan[" + std::to_string(i) + "]"));
  if (spec.contains("dold_kan_random")) {
    const auto& r = spec["dold_kan_random"];
    check_keys(r, "spec.dold_kan_random", {"count", "seed"});
    std::mt19937_64 rng(get_or<std::size_t>(r, "seed", 1, "spec.dold_kan_random"));
    const auto count = get_or<std::size_t>(r, "count", 50, "spec.dold_kan_random");
    if (count > 10000) throw BudgetError("spec.dold_kan_random.count exceeds 10000");
    if (n > 3) throw BudgetError("random Dold-Kan inputs are sized for truncation <= 3");
    for (std::size_t i = 0; i < count; ++i) complexes.push_back(sample::random_chain_complex(rng));
  }
  if (!complexes.empty())
    timed("dold_kan", [&] {
      auto rows = parallel_map(complexes.size(), ctx.jobs(), [&](std::size_t i) {
        json j = dold_kan_json(complexes[i], n, emit);
        j["pass"] = j["shift_holds"];
        return j;
      });
      json items(rows);
      return json{{"items", items}, {"summary", summary(items)}};
    });

  std::vector<simp::BisimplicialSet> bis;
  if (spec.contains("diag"))
    for (std::size_t i = 0; i < array_of(spec["diag"], "spec.diag").size(); ++i)
      bis.push_back(bisimplicial(ctx, spec["diag"][i], n, "spec.diag[" + std::to_string(i) + "]"));
  if (spec.contains("diag_random")) {
    const auto& r = spec["diag_random"];
    check_keys(r, "spec.diag_random", {"count", "seed"});
    std::mt19937_64 rng(get_or<std::size_t>(r, "seed", 1, "spec.diag_random"));
    const auto count = get_or<std::size_t>(r, "count", 50, "spec.diag_random");
    if (count > 10000) throw BudgetError("spec.diag_random.count exceeds 10000");
    for (std::size_t i = 0; i < count; ++i) bis.push_back(sample::random_bisimplicial(rng));
  }
  if (!bis.empty())
    timed("diag", [&] {
      auto rows = parallel_map(bis.size(), ctx.jobs(), [&](std::size_t i) { return diag_json(bis[i]); });
      json items(rows);
      return json{{"items", items}, {"summary", summary(items)}};
    });

  if (spec.contains("homology"))
    timed("homology", [&] {
      json items = json::array();
      for (std::size_t i = 0; i < array_of(spec["homology"], "spec.homology").size(); ++i) {
        const auto& h = spec["homology"][i];
        const std::string w = "spec.homology[" + std::to_string(i) + "]";
        simp::SimplicialSet x;
        if (h.contains("ordered_complex")) {
          check_keys(h, w, {"ordered_complex", "top"});
          x = ordered(h["ordered_complex"], get_or<std::size_t>(h, "top", n, w), w + ".ordered_complex");
        } else {
          x = raw_sset(h, w);
        }
        json j{{"sizes", x.sizes}, {"homology", simp::integral_homology(x)}};
        if (emit) j["simplicial_set"] = sset_json(x);
        items.push_back(std::move(j));
      }
      return json{{"items", items}};
    });
  if (out.empty()) bad("spec", "nothing to check");
  return out;
}

// --- selftest ---------------------------------------------------------------------------

json builtin(const std::string& kind, json body) {
  body["schema"] = kSpecSchema;
  body["kind"] = kind;
  return body;
}

json run_selftest(const Options& opts) {
  struct Check {
    std::string name, command;
    json spec;
    std::function<bool(const json&)> ok;
  };
  const std::vector<Check> checks = {
      {"q8 tower blocked at level 2", "tower",
       builtin("tower", {{"pi", "Q8"}, {"normal", "whole"}, {"depth", 2}, {"source", "V4"}, {"psi0", "isomorphism"},
                         {"start_level", 1}}),
       [](const json& r) {
         const auto& lv = r["run"]["levels"];
         return r["run"]["blocked_at"] == 2 && lv.size() == 2 && lv[1]["obstructed"] == true;
       }},
      {"q8 tower lifts from Z/4", "tower",
       builtin("tower", {{"pi", "Q8"}, {"depth", 2}, {"source", "C4"}, {"psi0", json::array({1})}, {"start_level", 1}}),
       [](const json& r) { return r["run"]["completed"] == true; }},
      {"H2(V4, Z/2) has order 8", "cohomology",
       builtin("cohomology", {{"module", {{"group", "V4"}, {"factors", {2}}}}, {"degrees", {2}}}),
       [](const json& r) { return r["groups"][0]["size"] == 8; }},
      {"two-place diagonal H2_c and reciprocity", "reciprocity",
       builtin("reciprocity",
               {{"system",
                 {{"global", "C2"},
                  {"places", {{{"label", "v1"}, {"group", "C2"}, {"decomposition", "identity"}},
                              {{"label", "v2"}, {"group", "C2"}, {"decomposition", "identity"}}}}}},
                {"module", {{"factors", {2}}}},
                {"les_up_to", 3},
                {"local_classes", json::array({json::array({json::array({1}), json::array({0})})})}}),
       [](const json& r) {
         return r["compact_support"][2]["orders"] == json::array({2}) && r["les"]["exact"] == true &&
                r["reciprocity"][0]["is_zero"] == false;
       }},
      {"ls weights m_max 10, s 1", "lie", builtin("lie", {{"ls", {{"m_max", 10}, {"s", 1}}}}),
       [](const json& r) {
         return r["ls"][0]["weights"] == json::parse("[[1,22],[4,3],[6,5],[8,7],[10,9],[12,11]]") &&
                r["ls"][0]["e1_diag_zero"] == true;
       }},
      {"witt ranks", "lie",
       builtin("lie", {{"witt", {{{"d", 2}, {"n", 5}, {"hall", true}}, {{"d", 2}, {"n", 6}}, {{"d", 3}, {"n", 2}}}}}),
       [](const json& r) {
         const auto& w = r["witt"];
         return w[0]["rank"] == 6 && w[0]["hall_count"] == 6 && w[1]["rank"] == 9 && w[2]["rank"] == 3;
       }},
      {"simplicial checks", "simplicial-check",
       builtin("simplicial-check", {{"truncation", 3},
                                    {"fibrations", {{{"group", "C4"}, {"kernel", json::array({2})}}}},
                                    {"dold_kan", {{{"groups", {json::array(), {2}}}}}},
                                    {"diag", {{{"nerve", "C2"}}}}}),
       [](const json& r) {
         return r["fibrations"]["summary"]["all_pass"] == true && r["dold_kan"]["summary"]["all_pass"] == true &&
                r["diag"]["summary"]["all_pass"] == true;
       }},
  };
  json rows = json::array();
  bool all = true;
  for (const auto& c : checks) {
    bool pass = false;
    std::string note;
    try {
      pass = c.ok(run(c.command, c.spec, opts)["results"]);
    } catch (const std::exception& e) {
      note = e.what();
    }
    all = all && pass;
    json row{{"name", c.name}, {"pass", pass}};
    if (!note.empty()) row["error"] = note;
    rows.push_back(std::move(row));
  }
  return json{{"checks", rows}, {"all_pass", all}};
}

// --- text rendering -----------------------------------------------------------------------

class Table {
 public:
  explicit Table(std::vector<std::string> head) : rows_{std::move(head)} {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  std::string str() const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_)
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (width.size() <= i) width.push_back(0);
        width[i] = std::max(width[i], r[i].size());
      }
    std::ostringstream os;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      for (std::size_t i = 0; i < rows_[k].size(); ++i) {
        if (i + 1 == rows_[k].size()) {
          os << rows_[k][i];
          break;
        }
        os << std::left << std::setw(static_cast<int>(width[i])) << rows_[k][i] << "  ";
      }
      os << "\n";
      if (k == 0) {
        std::size_t total = 0;
        for (auto w : width) total += w + 2;
        os << std::string(total > 2 ? total - 2 : total, '-') << "\n";
      }
    }
    return os.str();
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string compact(const json& j) { return j.is_null() ? "-" : j.dump(); }

std::string yes(const json& j) { return j.get<bool>() ? "yes" : "no"; }

void render_items(std::ostringstream& os, const json& r, const char* key, const std::vector<std::string>& cols) {
  if (!r.contains(key)) return;
  os << key << " (" << r[key]["summary"]["passed"].get<std::size_t>() << "/" << r[key]["summary"]["count"].get<std::size_t>()
     << " pass)\n";
  std::vector<std::string> head{"#"};
  head.insert(head.end(), cols.begin(), cols.end());
  Table t(head);
  std::size_t i = 0;
  for (const auto& item : r[key]["items"]) {
    std::vector<std::string> row{std::to_string(i++)};
    for (const auto& c : cols) row.push_back(item.at(c).is_boolean() ? yes(item[c]) : compact(item[c]));
    t.add(row);
  }
  os << t.str() << "\n";
}

}  // namespace

// --- public ---------------------------------------------------------------------------------

Budgets Budgets::profile(std::string_view name) {
  Budgets b;
  if (name.empty() || name == "default") return b;
  if (name == "small") return Budgets{64, 100'000, 2, 3};
  if (name == "large") return Budgets{1024, 1'000'000'000, 4, 6};
  throw SpecError("unknown budget profile '" + std::string(name) + "'");
}

json Budgets::to_json() const {
  return json{{"max_group_order", max_group_order},
              {"max_hom_search", max_hom_search},
              {"max_degree", max_degree},
              {"max_truncation", max_truncation}};
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  return hex(md, len);
}

json without_timing(json report) {
  report.erase("timing");
  return report;
}

json run(const std::string& command, const json& spec, const Options& opts) {
  const auto t0 = Clock::now();
  static const std::set<std::string> commands = {"tower", "reciprocity", "cohomology", "lie", "simplicial-check",
                                                 "selftest"};
  if (!commands.count(command)) throw SpecError("unknown command '" + command + "'");
  if (!spec.is_object()) throw SpecError("spec: expected a JSON object");
  if (spec.contains("schema") && spec["schema"] != kSpecSchema)
    throw SpecError("spec.schema: expected \"" + std::string(kSpecSchema) + "\"");
  if (spec.contains("kind") && spec["kind"] != command)
    throw SpecError("spec.kind: does not match the command '" + command + "'");
  if (spec.contains("groups") && !spec["groups"].is_object()) throw SpecError("spec.groups: expected an object");

  Context ctx(spec, opts);
  json timing{{"sections", json::object()}};
  json results;
  try {
    if (command == "tower")
      results = run_tower_cmd(ctx, spec);
    else if (command == "cohomology")
      results = run_cohomology_cmd(ctx, spec);
    else if (command == "reciprocity")
      results = run_reciprocity_cmd(ctx, spec);
    else if (command == "lie")
      results = run_lie_cmd(ctx, spec);
    else if (command == "simplicial-check")
      results = run_simplicial_cmd(ctx, spec, timing);
    else {
      check_keys(spec, "spec", {"schema", "kind"});
      results = run_selftest(opts);
    }
  } catch (const json::exception& e) {
    throw SpecError(std::string("spec: ") + e.what());
  }

  json input{{"spec", spec}};
  input["sha256"] = sha256_hex(json{{"command", command}, {"spec", spec}}.dump());
  json report{{"schema", kReportSchema},
              {"tool", {{"name", "obstower"}, {"version", kToolVersion}}},
              {"command", command},
              {"input", input},
              {"budgets", opts.budgets.to_json()},
              {"results", results}};
  report["report_sha256"] = sha256_hex(report.dump());
  timing["wall_seconds"] = std::chrono::duration<double>(Clock::now() - t0).count();
  report["timing"] = timing;
  return report;
}

Failure classify(const std::exception& e) {
  Failure f;
  std::string code = "Internal";
  if (dynamic_cast<const SpecError*>(&e) || dynamic_cast<const json::exception*>(&e)) {
    f.exit_code = 2;
    code = "InvalidSpec";
  } else if (dynamic_cast<const BudgetError*>(&e)) {
    f.exit_code = 3;
    code = "BudgetExceeded";
  } else if (const auto* err = dynamic_cast<const Error*>(&e)) {
    code = std::string(errc_name(err->code()));
    f.exit_code = (err->code() == Errc::SearchBudgetExceeded || err->code() == Errc::DegreeTooLarge) ? 3 : 2;
  } else if (dynamic_cast<const std::overflow_error*>(&e)) {
    f.exit_code = 3;
    code = "Overflow";
  } else if (dynamic_cast<const std::invalid_argument*>(&e)) {
    f.exit_code = 2;
    code = "InvalidArgument";
  }
  f.error = json{{"error", {{"code", code}, {"exit_code", f.exit_code}, {"message", e.what()}}}};
  return f;
}

std::string render_text(const json& report) {
  std::ostringstream os;
  const auto& r = report.at("results");
  const std::string cmd = report.at("command");
  os << "obstower " << report["tool"]["version"].get<std::string>() << "  " << cmd << "  input "
     << report["input"]["sha256"].get<std::string>().substr(0, 16) << "\n\n";
  if (cmd == "tower") {
    Table lv({"level", "order", "kernel"});
    for (const auto& l : r["tower"]) lv.add({std::to_string(l["level"].get<int>()), compact(l["order"]), compact(l["kernel_factors"])});
    os << "tower\n" << lv.str() << "\n";
    Table t({"level", "H2 orders", "obstruction", "obstructed", "lift classes", "H1 orders"});
    for (const auto& l : r["run"]["levels"])
      t.add({compact(l["level"]), compact(l["h2_orders"]), compact(l["obstruction"]), yes(l["obstructed"]),
             compact(l["lift_classes"]), compact(l["h1_orders"])});
    os << "lifting run (completed: " << yes(r["run"]["completed"]) << ", blocked at: " << compact(r["run"]["blocked_at"])
       << ")\n"
       << t.str() << "\n";
    Table e({"s", "t", "degree", "state", "invariant factors"});
    for (const auto& x : r["e1"]["entries"])
      e.add({compact(x["s"]), compact(x["t"]), compact(x["degree"]), x["state"].get<std::string>(), compact(x["invariant_factors"])});
    os << "E1 page\n" << e.str();
  } else if (cmd == "cohomology") {
    Table t({"degree", "invariant factors", "order"});
    for (const auto& g : r["groups"]) t.add({compact(g["degree"]), compact(g["invariant_factors"]), compact(g["size"])});
    os << t.str();
  } else if (cmd == "reciprocity") {
    Table t({"degree", "H_c invariant factors"});
    for (const auto& h : r["compact_support"]) t.add({compact(h["degree"]), compact(h["invariant_factors"])});
    os << "ramified: " << compact(r["ramified"]) << "\n" << t.str() << "\n";
    Table s({"spot", "exact", "image", "kernel"});
    for (const auto& x : r["les"]["spots"])
      s.add({x["name"].get<std::string>(), yes(x["exact"]), compact(x["image_order"]), compact(x["kernel_order"])});
    os << "long exact sequence (exact: " << yes(r["les"]["exact"]) << ")\n" << s.str();
    if (!r["reciprocity"].empty()) {
      Table c({"local classes", "H2_c coords", "zero"});
      for (const auto& x : r["reciprocity"]) c.add({compact(x["local_classes"]), compact(x["coords"]), yes(x["is_zero"])});
      os << "\nreciprocity\n" << c.str();
    }
  } else if (cmd == "lie") {
    if (r.contains("ls"))
      for (const auto& l : r["ls"]) {
        Table t({"weight", "dim"});
        for (const auto& p : l["weights"]) t.add({compact(p[0]), compact(p[1])});
        os << "L_s weights (lambda weight " << l["lambda_weight"].get<int>() << ", m_max " << l["m_max"].get<int>()
           << ", s " << l["s"].get<int>() << ", e1_diag_zero " << (l["e1_diag_zero"].get<bool>() ? "true" : "false")
           << ")\n"
           << t.str() << "\n";
      }
    if (r.contains("ls_scan"))
      os << "ls scan up to m_max " << r["ls_scan"]["m_max"].get<int>() << ", s_max " << r["ls_scan"]["s_max"].get<int>()
         << ": all flags " << (r["ls_scan"]["all_true"].get<bool>() ? "true" : "false") << "\n\n";
    if (r.contains("witt")) {
      Table t({"d", "n", "rank", "hall"});
      for (const auto& w : r["witt"]) t.add({compact(w["d"]), compact(w["n"]), compact(w["rank"]), w.contains("hall_count") ? compact(w["hall_count"]) : "-"});
      os << t.str() << "\n";
    }
    if (r.contains("colie")) {
      Table t({"weight", "dim"});
      for (const auto& p : r["colie"]["weights"]) t.add({compact(p[0]), compact(p[1])});
      os << "colie s=" << r["colie"]["s"].get<int>() << "\n" << t.str() << "\n";
    }
    if (r.contains("hall")) {
      Table t({"bracket", "weight"});
      for (const auto& b : r["hall"]["basis"]) t.add({b["bracket"].get<std::string>(), compact(b["weight"])});
      os << t.str() << "\n";
    }
    if (r.contains("modular_h1")) {
      Table t({"m", "weights"});
      for (const auto& m : r["modular_h1"]) t.add({compact(m["m"]), compact(m["weights"])});
      os << t.str();
    }
  } else if (cmd == "simplicial-check") {
    render_items(os, r, "fibrations", {"extension", "pullback_sizes", "pullback_identity", "pi1_order", "pass"});
    render_items(os, r, "dold_kan", {"pi", "pi_wbar", "pass"});
    render_items(os, r, "diag", {"cells", "diag_homology", "pass"});
    if (r.contains("homology")) {
      Table t({"#", "sizes", "homology"});
      std::size_t i = 0;
      for (const auto& h : r["homology"]["items"]) t.add({std::to_string(i++), compact(h["sizes"]), compact(h["homology"])});
      os << "homology\n" << t.str();
    }
  } else {
    Table t({"check", "pass"});
    for (const auto& c : r["checks"]) t.add({c["name"].get<std::string>(), yes(c["pass"])});
    os << t.str() << "all pass: " << (r["all_pass"].get<bool>() ? "yes" : "no") << "\n";
  }
  return os.str();
}

}  // namespace obstower::app
