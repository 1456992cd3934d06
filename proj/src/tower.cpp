#include "obstower/tower.hpp"

#include <algorithm>
#include <stdexcept>

#include "obstower/error.hpp"

namespace obstower {

GModule TowerStep::descended_module() const {
  const GModule& a = extension.kernel;
  const FiniteGroup& act = action_quotient.target();
  require(action_quotient.source().same_as(a.group()), Errc::InvalidInput, "action quotient has the wrong source");
  require(action_quotient.is_surjective(), Errc::InvalidInput, "action quotient is not surjective");
  std::vector<Elem> pre(act.size(), static_cast<Elem>(a.group().size()));
  for (Elem x = 0; x < a.group().size(); ++x)
    if (pre[action_quotient(x)] == a.group().size()) pre[action_quotient(x)] = x;
  std::vector<std::vector<std::int64_t>> mats(act.size());
  for (Elem q = 0; q < act.size(); ++q) mats[q] = a.matrix(pre[q]);
  for (Elem x = 0; x < a.group().size(); ++x)
    require(a.matrix(x) == mats[action_quotient(x)], Errc::InvalidInput,
            "conjugation action does not factor through the action quotient");
  return GModule::from_element_matrices(act, a.factors(), std::move(mats));
}

void TowerStep::validate() const {
  extension.validate();
  (void)descended_module();
}

void Tower::validate() const {
  for (std::size_t n = 1; n <= steps.size(); ++n) {
    steps[n - 1].validate();
    require(steps[n - 1].extension.base.same_as(level(n - 1)), Errc::InvalidInput, "tower steps do not compose");
  }
}

Tower tower_from_lcs(const FiniteGroup& pi, const Subgroup& n, std::size_t depth) {
  require(n.parent().same_as(pi), Errc::InvalidInput, "subgroup of another group");
  const auto series = lower_central_series(pi, n, depth + 1);
  std::vector<QuotientGroup> q;
  for (std::size_t k = 1; k <= depth + 1; ++k) {
    q.push_back(quotient(pi, series[k - 1]));
    q.back().group = q.back().group.renamed(pi.name() + "/[N]_" + std::to_string(k));
  }
  Tower t;
  t.base = q[0].group;
  for (std::size_t lvl = 1; lvl <= depth; ++lvl) {
    const auto& upper = q[lvl];
    const auto& lower = q[lvl - 1];
    std::vector<Elem> img(upper.group.size());
    for (Elem i = 0; i < img.size(); ++i) img[i] = lower.projection(upper.coset_representative[i]);
    TowerStep step;
    step.extension = ExtensionDatum::from_surjection(GroupHom(upper.group, lower.group, std::move(img)));
    std::vector<Elem> aq(lower.group.size());
    for (Elem i = 0; i < aq.size(); ++i) aq[i] = q[0].projection(lower.coset_representative[i]);
    step.action_quotient = GroupHom(lower.group, q[0].group, std::move(aq));
    if (series[lvl - 1] == series[lvl])
      t.warnings.push_back("SeriesStabilized: [N]_" + std::to_string(lvl) + " = [N]_" + std::to_string(lvl + 1) +
                           ", step " + std::to_string(lvl) + " has trivial kernel");
    t.steps.push_back(std::move(step));
  }
  return t;
}

Obstruction obstruction(const GroupHom& psi, const TowerStep& step, const std::optional<std::vector<Elem>>& section) {
  const ExtensionDatum& e = step.extension;
  require(psi.target().same_as(e.base), Errc::TargetMismatch, "homomorphism does not target the base of the step");
  const Cochain c = section ? e.with_section(*section).factor_set() : e.factor_set();
  Obstruction out;
  out.cocycle = c.pullback(psi);
  out.cls = class_of(out.cocycle);
  return out;
}

namespace {

GroupHom lift_from_obstruction(const GroupHom& psi, const ExtensionDatum& e, const Cochain& c) {
  const auto w = solve_coboundary(c);
  if (!w) throw std::logic_error("obstruction class vanishes but no trivialization was found");
  const GModule& a = c.module();
  std::vector<Elem> img(psi.source().size());
  for (Elem g = 0; g < img.size(); ++g) img[g] = e.total.mul(e.section[psi(g)], e.iota(a.neg(w->at({g}))));
  GroupHom lift(psi.source(), e.total, std::move(img));
  if (!lift.is_homomorphism()) throw std::logic_error("trivialized section is not a homomorphism");
  return lift;
}

}  // namespace

std::optional<GroupHom> some_lift(const GroupHom& psi, const TowerStep& step) {
  const auto ob = obstruction(psi, step);
  if (!ob.cls.is_zero()) return std::nullopt;
  return lift_from_obstruction(psi, step.extension, ob.cocycle);
}

GroupHom canonical_lift(const GroupHom& lift, const TowerStep& step) {
  const ExtensionDatum& e = step.extension;
  GroupHom best = lift;
  for (Elem x : e.embedding) {
    GroupHom c = lift.conjugated(x);
    if (c < best) best = std::move(c);
  }
  return best;
}

std::vector<GroupHom> lift_classes(const GroupHom& psi, const TowerStep& step) {
  const auto ob = obstruction(psi, step);
  if (!ob.cls.is_zero()) return {};
  const ExtensionDatum& e = step.extension;
  const GroupHom base_lift = lift_from_obstruction(psi, e, ob.cocycle);
  const auto h1 = cohomology(ob.cocycle.module(), 1);
  std::vector<GroupHom> out;
  for (const auto& coords : h1.all_coordinates())
    out.push_back(canonical_lift(torsor_action(e, base_lift, h1.combination(coords)), step));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.size() != h1.size()) throw std::logic_error("H^1 does not act freely on lift classes");
  return out;
}

std::vector<GroupHom> brute_force_lifts(const GroupHom& psi, const TowerStep& step, SearchBudget budget) {
  const ExtensionDatum& e = step.extension;
  require(psi.target().same_as(e.base), Errc::TargetMismatch, "homomorphism does not target the base of the step");
  const FiniteGroup& g = psi.source();
  std::vector<std::vector<Elem>> cand(g.generators().size());
  for (std::size_t i = 0; i < cand.size(); ++i)
    for (Elem x = 0; x < e.total.size(); ++x)
      if (e.projection(x) == psi(g.generators()[i])) cand[i].push_back(x);
  return enumerate_homs_restricted(g, e.total, cand, budget);
}

const E1Entry* E1Page::find(std::size_t s, std::size_t t) const {
  for (const auto& e : entries)
    if (e.s == s && e.t == t) return &e;
  return nullptr;
}

GModule e1_module(const Tower& tower, std::size_t s, const GroupHom& psi0) {
  require(s >= 1 && s <= tower.steps.size(), Errc::InvalidInput, "no such tower step");
  require(psi0.target().same_as(tower.base), Errc::TargetMismatch, "psi0 does not target the tower base");
  const TowerStep& step = tower.steps[s - 1];
  require(step.action_quotient.target().same_as(tower.base), Errc::InvalidInput,
          "step action does not factor through the tower base");
  return step.descended_module().rebased(tower.base).pullback(psi0);
}

E1Page e1_page(const Tower& tower, const GroupHom& psi0, std::size_t s_max, std::size_t t_max,
               std::size_t max_degree) {
  E1Page page;
  page.s_max = s_max;
  page.t_max = t_max;
  for (std::size_t s = 1; s <= std::min(s_max, tower.steps.size()); ++s) {
    const GModule a = e1_module(tower, s, psi0);
    for (std::size_t t = s == 1 ? 0 : s - 1; t <= t_max; ++t) {
      E1Entry entry;
      entry.s = s;
      entry.t = t;
      entry.degree = 1 + static_cast<int>(s) - static_cast<int>(t);
      if (entry.degree < 0 || a.order() == 1) {
        entry.state = E1Entry::State::ForcedZero;
      } else if (static_cast<std::size_t>(entry.degree) > max_degree) {
        entry.state = E1Entry::State::Uncomputed;
      } else {
        try {
          const auto h = cohomology(a, static_cast<std::size_t>(entry.degree), {max_degree});
          entry.orders = h.orders();
          entry.invariant_factors = h.invariant_factors();
        } catch (const Error& err) {
          if (err.code() != Errc::DegreeTooLarge) throw;
          entry.state = E1Entry::State::Uncomputed;
        }
      }
      page.entries.push_back(std::move(entry));
    }
  }
  return page;
}

LiftReport run_tower(const GroupHom& psi0, const Tower& tower, RunOptions opts) {
  LiftReport rep;
  rep.start = psi0;
  const std::size_t start = opts.start_level;
  require(start <= tower.steps.size(), Errc::InvalidInput, "start level beyond the tower");
  require(psi0.target().same_as(tower.level(start)), Errc::TargetMismatch, "psi0 does not target the start level");
  LevelReport root;
  root.level = start;
  root.lift_class_count = 1;
  root.chosen_lift = psi0;
  rep.levels.push_back(root);
  GroupHom psi = psi0;
  for (std::size_t n = start + 1; n <= tower.steps.size(); ++n) {
    const TowerStep& step = tower.steps[n - 1];
    const auto ob = obstruction(psi, step);
    LevelReport lr;
    lr.level = n;
    lr.h2_orders = ob.cls.group.orders();
    lr.obstruction_coords = ob.cls.coords;
    lr.obstructed = !ob.cls.is_zero();
    lr.h1_orders = cohomology(ob.cocycle.module(), 1).orders();
    const auto classes = lift_classes(psi, step);
    lr.lift_class_count = classes.size();
    if (!classes.empty()) lr.chosen_lift = classes.front();
    rep.levels.push_back(lr);
    if (classes.empty()) {
      rep.blocked_at = n;
      break;
    }
    psi = classes.front();
  }
  rep.completed = !rep.blocked_at.has_value();

  if (opts.full_tree) {
    std::vector<GroupHom> homs{psi0};
    rep.tree.push_back({start, -1, psi0.generator_images(), false, 0});
    std::vector<std::size_t> frontier{0};
    for (std::size_t n = start + 1; n <= tower.steps.size() && !frontier.empty(); ++n) {
      std::vector<std::size_t> next;
      for (std::size_t node : frontier) {
        const auto classes = lift_classes(homs[node], tower.steps[n - 1]);
        if (classes.empty()) rep.tree[node].obstructed_below = true;
        for (const auto& c : classes) {
          if (next.size() >= opts.width_cap) {
            rep.tree_truncated = true;
            break;
          }
          rep.tree[node].children++;
          rep.tree.push_back({n, static_cast<std::ptrdiff_t>(node), c.generator_images(), false, 0});
          homs.push_back(c);
          next.push_back(rep.tree.size() - 1);
        }
      }
      frontier = std::move(next);
    }
  }
  return rep;
}

}  // namespace obstower
