#include <doctest.h>

#include <random>
#include <set>

#include "obstower/arith.hpp"
#include "obstower/error.hpp"
#include "support/samplers.hpp"

using namespace obstower;

namespace {

using Orders = std::vector<std::int64_t>;

Place place(const std::string& label, const GroupHom& dec, const Subgroup& inertia) {
  return Place{label, dec, inertia};
}

LocalGlobalSystem diagonal_system() {
  const auto c2 = catalog::cyclic(2);
  LocalGlobalSystem sys;
  sys.global = c2;
  sys.places.push_back(place("v1", GroupHom::identity(c2), trivial_subgroup(c2)));
  sys.places.push_back(place("v2", GroupHom::identity(c2), trivial_subgroup(c2)));
  return sys;
}

void check_representatives(const CompactSupport& cs, std::size_t n) {
  const auto orders = cs.orders(n);
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const auto [x, y] = cs.representative(n, i);
    REQUIRE(cs.is_cone_cocycle(x, y));
    if (n == 0) continue;
    std::vector<std::int64_t> e(orders.size(), 0);
    e[i] = 1;
    CHECK(cs.coordinates(n, x, y) == e);
  }
}

}  // namespace

TEST_CASE("two-place diagonal system") {
  const auto sys = diagonal_system();
  const auto m = GModule::trivial(sys.global, {2});
  const auto h1 = adelic_cohomology(sys, m, 1, {});
  CHECK(h1.orders == Orders{2, 2});
  CHECK(h1.places[0].unramified);
  REQUIRE(h1.localization.size() == 1);
  CHECK(h1.localization[0] == Orders{1, 1});

  const CompactSupport cs(sys, m, {});
  CHECK(cs.orders(0).empty());
  CHECK(cs.orders(1) == Orders{2});  // coker of the diagonal on H^0
  CHECK(cs.orders(2) == Orders{2});
  for (std::size_t n = 1; n <= 4; ++n) check_representatives(cs, n);

  const auto les = cs.les(3);
  CHECK(les.exact);
  CHECK(les.nodes.size() == 13);

  CHECK_FALSE(reciprocity_obstruction(sys, m, {{1}, {0}}, {}).is_zero);
  CHECK(reciprocity_obstruction(sys, m, {{1}, {0}}, {}).coords == Orders{1});
  CHECK(reciprocity_obstruction(sys, m, {{0}, {1}}, {}).coords == Orders{1});
  CHECK(reciprocity_obstruction(sys, m, {{1}, {1}}, {}).is_zero);
  CHECK(reciprocity_obstruction(sys, m, {{0}, {0}}, {}).is_zero);
}

TEST_CASE("compact support examples") {
  const auto c2 = catalog::cyclic(2);
  const auto m = GModule::trivial(c2, {2});

  SUBCASE("one place equal to the global group") {
    LocalGlobalSystem sys{c2, {place("v", GroupHom::identity(c2), trivial_subgroup(c2))}};
    const CompactSupport cs(sys, m, {"v"});
    for (std::size_t n = 0; n <= 4; ++n) CHECK(cs.orders(n).empty());
    const auto a = adelic_cohomology(sys, m, 2, {});
    CHECK(a.localization == std::vector<Orders>{{1}});
    CHECK(cs.les(3).exact);
  }
  SUBCASE("one trivial place") {
    const auto one = catalog::trivial();
    LocalGlobalSystem sys{c2, {place("v", GroupHom::trivial(one, c2), trivial_subgroup(one))}};
    const CompactSupport cs(sys, m, {});
    CHECK(cs.orders(0).empty());
    for (std::size_t n = 1; n <= 3; ++n) CHECK(cs.orders(n) == Orders{2});
    for (std::size_t n = 0; n <= 4; ++n) check_representatives(cs, n);
    CHECK(cs.les(3).exact);
  }
  SUBCASE("no places") {
    const auto c4 = catalog::cyclic(4);
    const auto m4 = GModule::from_generators(c4, {4}, {{3}});
    LocalGlobalSystem sys{c4, {}};
    const CompactSupport cs(sys, m4, {});
    for (std::size_t n = 0; n <= 3; ++n) CHECK(cs.orders(n) == cohomology(m4, n).orders());
  }
  SUBCASE("adding a trivial place changes nothing above degree 1") {
    const auto s3 = catalog::symmetric(3);
    const auto m3 = GModule::from_generators(s3, {3}, {{2}, {1}});
    const auto c2s = generated_subgroup(s3, {s3.generators()[0]});
    LocalGlobalSystem sys{s3, {place("v", subgroup_as_group(c2s).inclusion, trivial_subgroup(subgroup_as_group(c2s).group))}};
    const CompactSupport base(sys, m3, {"v"});
    auto more = sys;
    const auto one = catalog::trivial();
    more.places.push_back(place("w", GroupHom::trivial(one, s3), trivial_subgroup(one)));
    const CompactSupport cs(more, m3, {"v"});
    for (std::size_t n = 2; n <= 3; ++n) CHECK(cs.orders(n) == base.orders(n));
    CHECK(cs.size(1) == base.size(1) * 3);
    CHECK(cs.les(3).exact);
  }
}

TEST_CASE("unramified convention and ramification checks") {
  const auto c4 = catalog::cyclic(4), c2 = catalog::cyclic(2);
  const auto mod2 = GroupHom::from_generator_images(c4, c2, {c2.generators()[0]});
  const auto i2 = generated_subgroup(c4, {c4.pow(c4.generators()[0], 2)});
  LocalGlobalSystem sys{c2, {place("v", mod2, i2)}};
  const auto m = GModule::trivial(c2, {2});
  const auto a = adelic_cohomology(sys, m, 1, {});
  CHECK(a.places[0].unramified);
  CHECK(a.places[0].group.size() == 2);
  CHECK(a.orders == Orders{2});
  CHECK(adelic_cohomology(sys, m, 1, {"v"}).orders == cohomology(GModule::trivial(c4, {2}), 1).orders());

  // inertia acting through -1 on Z/3
  const auto sign = GModule::from_generators(c2, {3}, {{2}});
  LocalGlobalSystem sys2{c2, {place("v", GroupHom::identity(c2), whole_group(c2))}};
  CHECK(ramified_places(sys2, sign) == std::vector<std::string>{"v"});
  try {
    (void)adelic_cohomology(sys2, sign, 1, {});
    FAIL("expected RamificationMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::RamificationMismatch);
  }
  CHECK_NOTHROW((void)adelic_cohomology(sys2, sign, 1, {"v"}));
  CHECK_THROWS_AS((void)local_models(sys2, sign, {"nowhere"}), Error);

  LocalGlobalSystem dup{c2, {place("v", GroupHom::identity(c2), trivial_subgroup(c2)),
                             place("v", GroupHom::identity(c2), trivial_subgroup(c2))}};
  CHECK_THROWS_AS(dup.validate(), Error);
  const auto s3 = catalog::symmetric(3);
  LocalGlobalSystem bad{s3, {place("v", GroupHom::identity(s3), generated_subgroup(s3, {s3.generators()[0]}))}};
  bool normal = is_normal(bad.places[0].inertia);
  if (!normal) CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("sampled systems: exactness, representatives, reciprocity image") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const auto s = testing::random_system(rng);
    CAPTURE(trial);
    CAPTURE(s.sys.global.name());
    const CompactSupport cs(s.sys, s.module, s.ramified);
    const auto rep = cs.les(3);
    CHECK(rep.exact);
    for (std::size_t n = 0; n <= 2; ++n) check_representatives(cs, n);

    // reciprocity vanishes exactly on the image of localization
    const auto a = adelic_cohomology(s.sys, s.module, 1, s.ramified);
    if (a.size() > 256) continue;
    std::set<Orders> image;
    for (const auto& c : a.global.all_coordinates()) image.insert(a.localize(c));
    std::vector<Orders> all{{}};
    for (auto o : a.orders) {
      std::vector<Orders> next;
      for (const auto& p : all)
        for (std::int64_t x = 0; x < o; ++x) {
          auto q = p;
          q.push_back(x);
          next.push_back(q);
        }
      all = std::move(next);
    }
    for (const auto& alpha : all) {
      std::vector<Orders> per_place;
      std::size_t off = 0;
      for (const auto& h : a.local) {
        per_place.emplace_back(alpha.begin() + static_cast<std::ptrdiff_t>(off),
                               alpha.begin() + static_cast<std::ptrdiff_t>(off + h.ngens()));
        off += h.ngens();
      }
      const bool zero = reciprocity_obstruction(s.sys, s.module, per_place, s.ramified).is_zero;
      CHECK(zero == (image.count(alpha) > 0));
    }
  }
}

TEST_CASE("reciprocity tower") {
  const auto sys = diagonal_system();
  const auto c2 = catalog::cyclic(2);
  const auto m = GModule::trivial(c2, {2});
  Tower t;
  t.base = c2;
  t.steps.push_back(TowerStep{semidirect_product(m), GroupHom::identity(c2)});
  const auto& e = t.steps[0].extension;
  const auto psi0 = GroupHom::identity(c2);
  const auto derivation_lift = [&](bool twisted) {
    std::vector<Elem> img(2);
    for (Elem g = 0; g < 2; ++g) img[g] = e.total.mul(e.section[g], e.iota({twisted ? static_cast<std::int64_t>(g) : 0}));
    return GroupHom(c2, e.total, img);
  };
  const auto labels = sys.labels();
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2) {
      const auto rep = reciprocity_tower(sys, t, psi0, {{derivation_lift(a1), derivation_lift(a2)}});
      REQUIRE(rep.levels.size() == 1);
      const auto expect = reciprocity_obstruction(sys, m, {{a1}, {a2}}, labels);
      CHECK(rep.levels[0].difference == expect.coords);
      CHECK(rep.levels[0].difference_zero == (a1 == a2));
      CHECK(rep.completed == (a1 == a2));
      CHECK_FALSE(rep.levels[0].global_obstructed);
    }

  CHECK_THROWS_AS(reciprocity_tower(sys, t, psi0, {{derivation_lift(false), GroupHom::trivial(c2, e.total)}}), Error);
  try {
    (void)reciprocity_tower(sys, t, psi0, {{derivation_lift(false), GroupHom::trivial(c2, e.total)}});
  } catch (const Error& err) {
    CHECK(err.code() == Errc::IncompatibleLocalData);
  }

  // one place equal to the global group: same answers as run_tower
  const auto q8 = catalog::quaternion8();
  const auto tq = tower_from_lcs(q8, whole_group(q8), 2);
  const auto c4 = catalog::cyclic(4);
  LocalGlobalSystem one{c4, {place("v", GroupHom::identity(c4), trivial_subgroup(c4))}};
  const auto run = run_tower(GroupHom::trivial(c4, tq.base), tq);
  REQUIRE(run.completed);
  std::vector<std::vector<GroupHom>> lifts;
  for (std::size_t n = 1; n < run.levels.size(); ++n) lifts.push_back({*run.levels[n].chosen_lift});
  const auto rt = reciprocity_tower(one, tq, GroupHom::trivial(c4, tq.base), lifts);
  CHECK(rt.completed);
  for (const auto& l : rt.levels) CHECK(l.hc2_orders.empty());

  // a local obstruction makes the input inadmissible
  Tower tv;
  tv.base = tq.steps[1].extension.base;
  tv.steps.push_back(tq.steps[1]);
  const auto& v4 = tv.base;
  LocalGlobalSystem sv{v4, {place("v", GroupHom::identity(v4), trivial_subgroup(v4))}};
  try {
    (void)reciprocity_tower(sv, tv, GroupHom::identity(v4), {{GroupHom::trivial(v4, tv.steps[0].extension.total)}});
    FAIL("expected Inadmissible");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::Inadmissible);
  }
}
