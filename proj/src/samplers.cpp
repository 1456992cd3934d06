#include "obstower/samplers.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace obstower::sample {

std::size_t product_order(const std::vector<std::int64_t>& f) {
  std::size_t n = 1;
  for (auto x : f) n *= static_cast<std::size_t>(x);
  return n;
}

simp::FiniteChainComplex random_chain_complex(std::mt19937_64& rng) {
  const std::vector<std::vector<std::int64_t>> choices = {{}, {2}, {3}, {4}, {2, 2}, {6}};
  auto pick = [&](std::size_t bound) {
    for (;;) {
      const auto& c = choices[rng() % choices.size()];
      if (product_order(c) <= bound) return c;
    }
  };
  for (;;) {
    simp::FiniteChainComplex c;
    const std::size_t top = rng() % 3;
    c.groups.push_back(pick(6));
    if (top >= 1) c.groups.push_back(pick(4));
    if (top >= 2) c.groups.push_back(pick(2));
    const std::size_t c0 = product_order(c.groups[0]), c1 = top >= 1 ? product_order(c.groups[1]) : 1,
                      c2 = top >= 2 ? product_order(c.groups[2]) : 1;
    if (c0 * c0 * c0 * c1 * c1 * c1 * c2 > 1024 || c0 * c1 * c1 * c1 * c2 * c2 * c2 > 1024) continue;
    c.boundary.assign(c.groups.size(), {});
    for (std::size_t k = 1; k < c.groups.size(); ++k) {
      const auto& src = c.groups[k];
      const auto& dst = c.groups[k - 1];
      for (std::size_t r = 0; r < dst.size(); ++r)
        for (std::size_t q = 0; q < src.size(); ++q) {
          const std::int64_t step = dst[r] / std::gcd(dst[r], src[q]);
          c.boundary[k].push_back(step * static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(dst[r])) % dst[r]);
        }
    }
    // d1 d2 = 0 or retry
    bool ok = true;
    if (c.groups.size() == 3) {
      const auto &g0 = c.groups[0], &g1 = c.groups[1], &g2 = c.groups[2];
      for (std::size_t r = 0; r < g0.size(); ++r)
        for (std::size_t q = 0; q < g2.size(); ++q) {
          std::int64_t s = 0;
          for (std::size_t m = 0; m < g1.size(); ++m) s += c.boundary[1][r * g1.size() + m] * c.boundary[2][m * g2.size() + q];
          ok = ok && s % g0[r] == 0;
        }
    }
    if (ok) return c;
  }
}

simp::SimplicialSet random_ordered_complex(std::mt19937_64& rng, std::size_t max_vertices, std::size_t top) {
  const std::size_t v = 2 + rng() % (max_vertices - 1);
  std::vector<std::vector<std::uint32_t>> facets;
  const std::size_t count = 1 + rng() % 4;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<std::uint32_t> all(v);
    std::iota(all.begin(), all.end(), 0u);
    std::shuffle(all.begin(), all.end(), rng);
    const std::size_t size = 1 + rng() % std::min<std::size_t>(3, v);
    facets.emplace_back(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(size));
  }
  return simp::ordered_complex(v, facets, top);
}

simp::BisimplicialSet random_bisimplicial(std::mt19937_64& rng) {
  switch (rng() % 4) {
    case 0:
      return simp::external_product(random_ordered_complex(rng, 4, 3), random_ordered_complex(rng, 4, 3));
    case 1:
      return simp::decalage(random_ordered_complex(rng, 4, 7), 3);
    case 2: {
      const std::vector<FiniteGroup> gs = {catalog::trivial(), catalog::cyclic(2), catalog::cyclic(3), catalog::symmetric(3)};
      return simp::nerve(simp::SimplicialGroup::constant(gs[rng() % gs.size()], 3), false);
    }
    default:
      return simp::product(simp::decalage(random_ordered_complex(rng, 3, 7), 3),
                           simp::external_product(random_ordered_complex(rng, 3, 3), random_ordered_complex(rng, 3, 3)));
  }
}

std::vector<simp::SimplicialExtension> constant_extension_corpus(std::size_t max_order, std::size_t top) {
  const std::vector<FiniteGroup> groups = {
      catalog::trivial(),   catalog::cyclic(2),          catalog::cyclic(3),  catalog::cyclic(4),
      catalog::klein4(),    catalog::cyclic(5),          catalog::cyclic(6),  catalog::symmetric(3),
      catalog::cyclic(7),   catalog::cyclic(8),          catalog::abelian({2, 4}), catalog::abelian({2, 2, 2}),
      catalog::dihedral(4), catalog::quaternion8()};
  std::vector<simp::SimplicialExtension> out;
  for (const auto& g : groups) {
    if (g.size() > max_order) continue;
    std::set<std::vector<Elem>> seen;
    std::vector<Subgroup> normals{whole_group(g)};
    for (Elem a = 0; a < g.size(); ++a)
      for (Elem b = a; b < g.size(); ++b) normals.push_back(normal_closure(g, {a, b}));
    for (const auto& n : normals) {
      if (!seen.insert(n.elements()).second) continue;
      bool abelian = true;
      for (Elem a : n.elements())
        for (Elem b : n.elements()) abelian = abelian && g.mul(a, b) == g.mul(b, a);
      if (!abelian) continue;
      out.push_back(simp::constant_extension(quotient(g, n).projection, top));
    }
  }
  return out;
}

}  // namespace obstower::sample
