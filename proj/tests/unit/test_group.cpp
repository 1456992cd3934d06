#include <doctest.h>

#include "obstower/error.hpp"
#include "obstower/group.hpp"

using namespace obstower;

namespace {

// Independent oracle: closure of all commutators by repeated products.
std::vector<Elem> brute_commutators(const FiniteGroup& g) {
  std::vector<bool> in(g.size(), false);
  in[0] = true;
  for (Elem a = 0; a < g.size(); ++a)
    for (Elem b = 0; b < g.size(); ++b) in[g.commutator(a, b)] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (Elem a = 0; a < g.size(); ++a)
      for (Elem b = 0; b < g.size(); ++b)
        if (in[a] && in[b] && !in[g.mul(a, b)]) in[g.mul(a, b)] = changed = true;
  }
  std::vector<Elem> out;
  for (Elem a = 0; a < g.size(); ++a)
    if (in[a]) out.push_back(a);
  return out;
}

std::size_t brute_hom_count(const FiniteGroup& g, const FiniteGroup& h) {
  // All maps on generators, extended along words, checked on every product.
  const std::size_t k = g.generators().size();
  std::size_t total = 1, count = 0;
  for (std::size_t i = 0; i < k; ++i) total *= h.size();
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<Elem> img(k);
    std::size_t c = code;
    for (std::size_t i = 0; i < k; ++i) {
      img[i] = static_cast<Elem>(c % h.size());
      c /= h.size();
    }
    std::vector<Elem> f(g.size());
    for (Elem e = 0; e < g.size(); ++e) {
      Elem v = 0;
      for (auto s : canonical_word(g, e)) v = h.mul(v, img[s]);
      f[e] = v;
    }
    bool ok = true;
    for (Elem a = 0; a < g.size() && ok; ++a)
      for (Elem b = 0; b < g.size() && ok; ++b) ok = f[g.mul(a, b)] == h.mul(f[a], f[b]);
    count += ok;
  }
  return count;
}

}  // namespace

TEST_CASE("catalog orders") {
  CHECK(catalog::cyclic(6).size() == 6);
  CHECK(catalog::dihedral(4).size() == 8);
  CHECK(catalog::symmetric(4).size() == 24);
  CHECK(catalog::alternating(4).size() == 12);
  CHECK(catalog::alternating(5).size() == 60);
  CHECK(catalog::quaternion8().size() == 8);
  CHECK(catalog::abelian({2, 3, 4}).size() == 24);
  CHECK(catalog::by_name("Z2xZ2").size() == 4);
  CHECK(!catalog::quaternion8().is_abelian());
  CHECK_THROWS_AS(catalog::by_name("foo"), Error);
}

TEST_CASE("canonical order is identity then BFS") {
  auto g = catalog::symmetric(3);
  CHECK(g.identity() == 0);
  for (Elem e = 1; e < g.size(); ++e) {
    CHECK(g.tree_parent(e) < e);
    CHECK(g.mul(g.tree_parent(e), g.generators()[g.tree_generator(e)]) == e);
  }
  for (Elem a = 0; a < g.size(); ++a) CHECK(g.mul(a, g.inv(a)) == 0);
}

TEST_CASE("from_table rejects bad tables") {
  std::vector<std::vector<Elem>> bad{{0, 1}, {1, 1}};
  CHECK_THROWS_AS(FiniteGroup::from_table(bad, {1}), Error);
  std::vector<std::vector<Elem>> z2{{0, 1}, {1, 0}};
  CHECK_THROWS_AS(FiniteGroup::from_table(z2, {}), Error);
  CHECK(FiniteGroup::from_table(z2, {1}).size() == 2);
}

TEST_CASE("commutator subgroups") {
  auto s3 = catalog::symmetric(3);
  auto c = commutator_subgroup(s3, whole_group(s3), whole_group(s3));
  CHECK(c.size() == 3);
  CHECK(c.elements() == brute_commutators(s3));
  auto q8 = catalog::quaternion8();
  auto cq = commutator_subgroup(q8, whole_group(q8), whole_group(q8));
  CHECK(cq.size() == 2);
  CHECK(cq.elements() == brute_commutators(q8));
  auto ab = catalog::abelian({2, 4});
  CHECK(commutator_subgroup(ab, whole_group(ab), whole_group(ab)).size() == 1);
}

TEST_CASE("lower central series") {
  auto q8 = catalog::quaternion8();
  auto lcs = lower_central_series(q8, whole_group(q8), 3);
  REQUIRE(lcs.size() == 3);
  CHECK(lcs[0].size() == 8);
  CHECK(lcs[1].size() == 2);
  CHECK(lcs[2].size() == 1);
  auto s3 = catalog::symmetric(3);
  auto s = lower_central_series(s3, whole_group(s3), 3);
  CHECK(s[0].size() == 6);
  CHECK(s[1].size() == 3);
  CHECK(s[2].size() == 3);
  auto a3 = commutator_subgroup(s3, whole_group(s3), whole_group(s3));
  auto t = lower_central_series(s3, a3, 2);
  CHECK(t[1].size() == 1);
  for (const auto& term : s) CHECK(is_normal(term));
  auto notnormal = generated_subgroup(s3, {s3.generators()[0]});
  CHECK_THROWS_AS(lower_central_series(s3, notnormal, 2), Error);
}

TEST_CASE("enumerate_homs") {
  auto z2 = catalog::cyclic(2), z3 = catalog::cyclic(3), s3 = catalog::symmetric(3);
  CHECK(enumerate_homs(z2, z3).size() == 1);
  CHECK(enumerate_homs(z2, z2).size() == 2);
  auto homs = enumerate_homs(s3, s3);
  CHECK(homs.size() == 10);
  for (std::size_t i = 1; i < homs.size(); ++i) CHECK(homs[i - 1].generator_images() < homs[i].generator_images());
  for (const auto& f : homs) CHECK(f.is_homomorphism());
  const std::vector<FiniteGroup> small{catalog::cyclic(4), catalog::klein4(), catalog::symmetric(3),
                                       catalog::quaternion8(), catalog::dihedral(4), catalog::cyclic(6)};
  for (const auto& g : small)
    for (const auto& h : small) CHECK(enumerate_homs(g, h).size() == brute_hom_count(g, h));
  CHECK_THROWS_AS(enumerate_homs(s3, s3, SearchBudget{5}), Error);
}

TEST_CASE("homs mod conjugacy") {
  auto z2 = catalog::cyclic(2), z3 = catalog::cyclic(3), s3 = catalog::symmetric(3);
  CHECK(homs_mod_conjugacy(enumerate_homs(z2, z2), whole_group(z2)).size() == 2);
  CHECK(homs_mod_conjugacy(enumerate_homs(z3, s3), whole_group(s3)).size() == 2);
  auto cls = homs_mod_conjugacy(enumerate_homs(s3, s3), whole_group(s3));
  CHECK(cls.size() == 3);
  std::size_t total = 0;
  for (const auto& c : cls) total += c.members.size();
  CHECK(total == 10);
  std::vector<GroupHom> mixed{GroupHom::trivial(z2, z2), GroupHom::trivial(z2, z3)};
  CHECK_THROWS_AS(homs_mod_conjugacy(mixed, whole_group(z2)), Error);
}

TEST_CASE("quotients and products") {
  auto q8 = catalog::quaternion8();
  auto q = quotient(q8, center(q8));
  CHECK(are_isomorphic(q.group, catalog::klein4()));
  CHECK(q.projection.is_surjective());
  CHECK(q.projection.kernel() == center(q8));
  auto s3 = catalog::symmetric(3);
  auto a3 = commutator_subgroup(s3, whole_group(s3), whole_group(s3));
  CHECK(are_isomorphic(quotient(s3, a3).group, catalog::cyclic(2)));
  CHECK(are_isomorphic(quotient(s3, trivial_subgroup(s3)).group, s3));
  auto p = direct_product(catalog::cyclic(2), catalog::cyclic(3));
  CHECK(are_isomorphic(p.group, catalog::cyclic(6)));
  CHECK(p.first_projection.is_homomorphism());
  CHECK(p.second_inclusion.is_homomorphism());
  CHECK(!are_isomorphic(catalog::quaternion8(), catalog::dihedral(4)));
  auto sub = subgroup_as_group(a3);
  CHECK(are_isomorphic(sub.group, catalog::cyclic(3)));
  CHECK(sub.inclusion.is_homomorphism());
}
