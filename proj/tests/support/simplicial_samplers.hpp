#pragma once

// Enumeration oracles for simplicial checks, shared by unit and acceptance
// tests.

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "obstower/samplers.hpp"

namespace obstower::testing {

inline std::size_t group_order(const std::vector<std::int64_t>& f) {
  std::size_t n = 1;
  for (auto x : f) n *= static_cast<std::size_t>(x);
  return n;
}

/// Invariant factors of H_k(C) by enumeration: the quotient Z/B is pinned
/// down by the counts #{z : m z in B} for all m.
struct BruteHomology {
  std::size_t order = 1;
  std::vector<std::size_t> killed;  // killed[m] = #{z in Z/B : m z = 0}, m = 1..order
};

inline BruteHomology brute_homology(const simp::FiniteChainComplex& c, std::size_t k) {
  BruteHomology h;
  h.killed = {0, 1};
  if (k >= c.groups.size()) return h;
  auto elements = [](const std::vector<std::int64_t>& g) {
    std::vector<std::vector<std::int64_t>> out{{}};
    for (auto o : g) {
      std::vector<std::vector<std::int64_t>> next;
      for (const auto& v : out)
        for (std::int64_t x = 0; x < o; ++x) {
          next.push_back(v);
          next.back().push_back(x);
        }
      out = std::move(next);
    }
    return out;
  };
  auto apply = [&](std::size_t deg, const std::vector<std::int64_t>& v) {
    const auto& dst = c.groups[deg - 1];
    std::vector<std::int64_t> out(dst.size(), 0);
    for (std::size_t r = 0; r < dst.size(); ++r) {
      for (std::size_t q = 0; q < v.size(); ++q) out[r] += c.boundary[deg][r * v.size() + q] * v[q];
      out[r] %= dst[r];
    }
    return out;
  };
  const auto& g = c.groups[k];
  std::vector<std::vector<std::int64_t>> z;
  for (const auto& v : elements(g)) {
    bool cycle = true;
    if (k > 0)
      for (auto x : apply(k, v)) cycle = cycle && x == 0;
    if (cycle) z.push_back(v);
  }
  std::set<std::vector<std::int64_t>> b;
  if (k + 1 < c.groups.size())
    for (const auto& v : elements(c.groups[k + 1])) b.insert(apply(k + 1, v));
  else
    b.insert(std::vector<std::int64_t>(g.size(), 0));
  h.order = z.size() / b.size();
  h.killed.assign(h.order + 1, 0);
  for (std::size_t m = 1; m <= h.order; ++m) {
    std::size_t count = 0;
    for (const auto& v : z) {
      auto w = v;
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = (w[i] * static_cast<std::int64_t>(m)) % g[i];
      count += b.count(w);
    }
    h.killed[m] = count / b.size();
  }
  return h;
}

inline bool matches(const BruteHomology& h, const std::vector<std::int64_t>& factors) {
  if (group_order(factors) != h.order) return false;
  for (std::size_t m = 1; m <= h.order; ++m) {
    std::size_t count = 1;
    for (auto d : factors) count *= static_cast<std::size_t>(std::gcd(static_cast<std::int64_t>(m), d));
    if (count != h.killed[m]) return false;
  }
  return true;
}

using sample::constant_extension_corpus;
using sample::random_bisimplicial;
using sample::random_chain_complex;
using sample::random_ordered_complex;

}  // namespace obstower::testing
