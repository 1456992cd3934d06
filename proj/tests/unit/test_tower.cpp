#include <doctest.h>

#include <random>
#include <set>

#include "obstower/error.hpp"
#include "obstower/tower.hpp"

using namespace obstower;

namespace {

Tower q8_tower() {
  const auto q8 = catalog::quaternion8();
  return tower_from_lcs(q8, whole_group(q8), 2);
}

// Lifts grouped by conjugation with the kernel, brute force.
std::size_t brute_class_count(const std::vector<GroupHom>& lifts, const TowerStep& step) {
  std::set<std::vector<Elem>> seen;
  for (const auto& l : lifts) {
    std::vector<Elem> best = l.generator_images();
    for (Elem x : step.extension.embedding) best = std::min(best, l.conjugated(x).generator_images());
    seen.insert(best);
  }
  return seen.size();
}

void check_instance(const GroupHom& psi, const TowerStep& step) {
  const auto brute = brute_force_lifts(psi, step);
  const auto ob = obstruction(psi, step);
  CHECK(is_cocycle(ob.cocycle));
  CHECK(ob.cls.is_zero() == !brute.empty());
  const auto classes = lift_classes(psi, step);
  CHECK(classes.empty() == brute.empty());
  if (brute.empty()) return;
  const auto z1 = enumerate_one_cocycles(ob.cocycle.module());
  CHECK(brute.size() == z1.size());
  CHECK(classes.size() == brute_class_count(brute, step));
  CHECK(classes.size() == cohomology(ob.cocycle.module(), 1).size());
  for (const auto& c : classes) {
    CHECK(c.is_homomorphism());
    CHECK(step.extension.projection.after(c) == psi);
    CHECK(canonical_lift(c, step) == c);
  }
}

}  // namespace

TEST_CASE("lcs towers") {
  const auto t = q8_tower();
  t.validate();
  CHECK(t.base.size() == 1);
  REQUIRE(t.steps.size() == 2);
  CHECK(t.steps[0].extension.kernel.factors() == std::vector<std::int64_t>{2, 2});
  CHECK(t.steps[1].extension.kernel.factors() == std::vector<std::int64_t>{2});
  CHECK(are_isomorphic(t.level(1), catalog::klein4()));
  CHECK(t.warnings.empty());

  // C2 acting by -1 on Z/9, N = Z/9
  const auto c2 = catalog::cyclic(2);
  const auto sd = semidirect_product(GModule::from_generators(c2, {9}, {{8}}));
  const auto t2 = tower_from_lcs(sd.total, sd.projection.kernel(), 2);
  t2.validate();
  CHECK(t2.base.size() == 2);
  CHECK(t2.steps[0].extension.kernel.factors() == std::vector<std::int64_t>{9});
  CHECK_FALSE(t2.steps[0].descended_module().is_trivial_action());
  CHECK(t2.steps[1].extension.kernel.order() == 1);
  CHECK(t2.warnings.size() == 1);

  const auto s3 = catalog::symmetric(3);
  CHECK_THROWS_AS(tower_from_lcs(s3, generated_subgroup(s3, {1}), 1), Error);
}

TEST_CASE("obstruction examples on the Q8 tower") {
  const auto t = q8_tower();
  const TowerStep& step = t.steps[1];
  const FiniteGroup& v4 = step.extension.base;
  const auto ob = obstruction(GroupHom::identity(v4), step);
  CHECK_FALSE(ob.cls.is_zero());
  CHECK(brute_force_lifts(GroupHom::identity(v4), step).empty());
  CHECK(lift_classes(GroupHom::identity(v4), step).empty());

  // Z/4 onto one Z/2 factor
  const auto c4 = catalog::cyclic(4);
  const auto psi = GroupHom::from_generator_images(c4, v4, {v4.generators()[0]});
  CHECK(obstruction(psi, step).cls.is_zero());
  CHECK_FALSE(brute_force_lifts(psi, step).empty());
  const auto lift = some_lift(psi, step);
  REQUIRE(lift.has_value());
  CHECK(lift->is_injective());

  CHECK_THROWS_AS(obstruction(GroupHom::identity(c4), step), Error);
}

TEST_CASE("lift classes and brute force agree") {
  const auto c2 = catalog::cyclic(2);
  // split step, trivial psi, Z/2 trivial module
  const auto split = semidirect_product(GModule::trivial(c2, {2}));
  TowerStep s0{split, GroupHom::identity(c2)};
  const auto triv = GroupHom::trivial(c2, c2);
  CHECK(brute_force_lifts(triv, s0).size() == 2);
  CHECK(lift_classes(triv, s0).size() == 2);

  // central A with H^1 = 0: G = C3, A = Z/2
  const auto c3 = catalog::cyclic(3);
  CHECK(lift_classes(GroupHom::trivial(c3, c2), s0).size() == 1);

  // identity step
  const auto id_step = ExtensionDatum::from_surjection(GroupHom::identity(c3));
  TowerStep s1{id_step, GroupHom::identity(c3)};
  CHECK(brute_force_lifts(GroupHom::identity(c3), s1).size() == 1);

  const std::vector<FiniteGroup> sources = {c2, c3, catalog::cyclic(4), catalog::klein4(), catalog::symmetric(3),
                                            catalog::quaternion8(), catalog::dihedral(4)};
  std::vector<TowerStep> steps;
  for (const auto& big : {catalog::quaternion8(), catalog::dihedral(4), catalog::abelian({2, 4}),
                          catalog::dihedral(6)}) {
    auto t = tower_from_lcs(big, whole_group(big), 2);
    for (auto& s : t.steps) steps.push_back(s);
  }
  steps.push_back(s0);
  steps.push_back(TowerStep{ExtensionDatum::from_surjection(quotient(catalog::symmetric(3),
                                                                     commutator_subgroup(catalog::symmetric(3),
                                                                                         whole_group(catalog::symmetric(3)),
                                                                                         whole_group(catalog::symmetric(3))))
                                                                .projection),
                            GroupHom::identity(c2)});
  std::size_t instances = 0;
  for (const auto& step : steps) {
    if (step.extension.kernel.order() == 1) continue;
    for (const auto& g : sources)
      for (const auto& psi : enumerate_homs(g, step.extension.base)) {
        check_instance(psi, step);
        ++instances;
      }
  }
  CHECK(instances > 100);
}

TEST_CASE("obstruction is independent of the section") {
  std::mt19937 rng(9);
  const auto t = q8_tower();
  const TowerStep& step = t.steps[1];
  const auto& e = step.extension;
  for (const auto& psi : enumerate_homs(catalog::cyclic(4), e.base)) {
    const auto base = obstruction(psi, step).cls.coords;
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Elem> s = e.section;
      for (Elem g = 1; g < s.size(); ++g) s[g] = e.total.mul(s[g], e.embedding[rng() % e.embedding.size()]);
      CHECK(obstruction(psi, step, s).cls.coords == base);
    }
  }
}

TEST_CASE("e1 page") {
  const auto t = q8_tower();
  const auto c2 = catalog::cyclic(2);
  const auto psi0 = GroupHom::trivial(c2, t.base);
  const auto page = e1_page(t, psi0, 2, 3);
  for (const auto& e : page.entries) {
    CHECK(e.t + 1 >= e.s);
    if (e.state != E1Entry::State::Computed) continue;
    const auto h = cohomology(e1_module(t, e.s, psi0), static_cast<std::size_t>(e.degree));
    CHECK(e.orders == h.orders());
  }
  const auto* e11 = page.find(1, 1);
  REQUIRE(e11);
  CHECK(e11->degree == 1);
  CHECK(e11->orders == std::vector<std::int64_t>{2, 2});
  const auto* e24 = page.find(2, 3);
  REQUIRE(e24);
  CHECK(e24->state == E1Entry::State::Computed);
  CHECK(e24->degree == 0);
  const auto* neg = page.find(1, 3);
  REQUIRE(neg);
  CHECK(neg->state == E1Entry::State::ForcedZero);

  // trivial kernels give zero entries everywhere
  const auto c3 = catalog::cyclic(3);
  const auto flat = tower_from_lcs(c3, trivial_subgroup(c3), 2);
  for (const auto& e : e1_page(flat, GroupHom::identity(flat.base), 2, 2).entries) CHECK(e.orders.empty());
}

TEST_CASE("run tower") {
  const auto t = q8_tower();
  const FiniteGroup& v4 = t.steps[1].extension.base;
  const FiniteGroup& pi0 = t.base;
  const auto r1 = run_tower(GroupHom::identity(v4), t, {false, 64, 1});
  CHECK_FALSE(r1.completed);
  REQUIRE(r1.blocked_at.has_value());
  CHECK(*r1.blocked_at == 2);
  CHECK(r1.levels.back().obstructed);
  CHECK(r1.levels.back().level == 2);

  const auto c4 = catalog::cyclic(4);
  const auto r2 = run_tower(GroupHom::from_generator_images(c4, v4, {v4.generators()[0]}), t, {true, 64, 1});
  CHECK(r2.completed);
  CHECK(r2.levels.back().chosen_lift->is_injective());
  CHECK(r2.tree.size() > 1);

  // from Pi_0 = 1 the canonical branch lifts the trivial map all the way
  const auto r3 = run_tower(GroupHom::trivial(v4, pi0), t, {true, 64, 0});
  CHECK(r3.completed);
  CHECK(r3.levels.size() == 3);
  bool some_blocked = false;
  for (const auto& node : r3.tree) some_blocked = some_blocked || node.obstructed_below;
  CHECK(some_blocked);

  Tower empty;
  empty.base = v4;
  const auto r0 = run_tower(GroupHom::identity(v4), empty);
  CHECK(r0.completed);
  CHECK(r0.levels.size() == 1);
}
