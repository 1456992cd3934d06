#include <doctest.h>

#include <map>

#include "obstower/lie.hpp"

using namespace obstower::lie;

namespace {

using Big = __int128;
// Series in t (degree <= order) with Laurent-polynomial coefficients in q.
using Series = std::vector<std::map<int, Big>>;

Series mul(const Series& a, const Series& b, std::size_t order) {
  Series out(order + 1);
  for (std::size_t i = 0; i <= order; ++i)
    for (std::size_t j = 0; i + j <= order; ++j)
      for (const auto& [wa, ca] : a[i])
        for (const auto& [wb, cb] : b[j]) out[i + j][wa + wb] += ca * cb;
  return out;
}

bool same(const Series& a, const Series& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::map<int, Big> d = a[i];
    for (const auto& [w, c] : b[i]) d[w] -= c;
    for (const auto& [w, c] : d)
      if (c != 0) return false;
  }
  return true;
}

// prod_{n,w} (1 - t^n q^w)^{-r(n,w)} against 1 / (1 - t P(q)), to t^order.
bool generating_function_identity(const GradedSpace& v, std::size_t order) {
  Series lhs(order + 1);
  lhs[0][0] = 1;
  for (std::size_t n = 1; n <= order; ++n)
    for (const auto& [w, r] : colie_weights(v, n).dims) {
      // (1 - x)^{-r} = sum_k C(r+k-1, k) x^k with x = t^n q^w
      Series f(order + 1);
      Big binom = 1;
      for (std::size_t k = 0; k * n <= order; ++k) {
        f[k * n][static_cast<int>(k) * w] = binom;
        binom = binom * (r + static_cast<Big>(k)) / static_cast<Big>(k + 1);
      }
      lhs = mul(lhs, f, order);
    }
  Series tp(order + 1);
  for (const auto& [w, d] : v.dims) tp[1][w] = d;
  Series rhs(order + 1), term(order + 1);
  rhs[0][0] = 1;
  term[0][0] = 1;
  for (std::size_t m = 1; m <= order; ++m) {
    term = mul(term, tp, order);
    for (std::size_t i = 0; i <= order; ++i)
      for (const auto& [w, c] : term[i]) rhs[i][w] += c;
  }
  return same(lhs, rhs);
}

std::int64_t witt_by_definition(std::int64_t d, std::size_t n) {
  // count primitive necklaces: n * r = sum over e | n of mu(e) d^{n/e}, checked by brute force on words
  std::int64_t words = 1;
  for (std::size_t i = 0; i < n; ++i) words *= d;
  std::int64_t aperiodic = 0;
  for (std::int64_t w = 0; w < words; ++w) {
    std::vector<std::int64_t> letters;
    std::int64_t x = w;
    for (std::size_t i = 0; i < n; ++i) {
      letters.push_back(x % d);
      x /= d;
    }
    bool primitive = true;
    for (std::size_t sh = 1; sh < n && primitive; ++sh) {
      if (n % sh) continue;
      bool periodic = true;
      for (std::size_t i = 0; i < n && periodic; ++i) periodic = letters[i] == letters[(i + sh) % n];
      primitive = !periodic;
    }
    if (primitive) ++aperiodic;
  }
  return aperiodic / static_cast<std::int64_t>(n);
}

}  // namespace

TEST_CASE("hall basis and witt ranks") {
  CHECK(hall_basis({0, 0}, 1).size() == 2);
  const auto b2 = hall_basis({0, 0}, 2);
  REQUIRE(b2.size() == 1);
  CHECK(b2[0].leaves().size() == 2);
  CHECK(hall_basis({0, 0}, 5).size() == 6);
  CHECK(witt_rank(1, 2) == 0);
  CHECK(witt_rank(2, 3) == 2);
  CHECK(witt_rank(2, 6) == 9);
  CHECK(witt_rank(3, 2) == 3);
  for (std::int64_t d = 1; d <= 4; ++d)
    for (std::size_t n = 1; n <= 8; ++n) {
      const std::vector<int> w(static_cast<std::size_t>(d), 0);
      CHECK(static_cast<std::int64_t>(hall_basis(w, n).size()) == witt_rank(d, n));
      if (d <= 3 && n <= 7) CHECK(witt_rank(d, n) == witt_by_definition(d, n));
    }
}

TEST_CASE("weighted free lie algebras") {
  GradedSpace v;
  v.add(1, 2);
  CHECK(colie_weights(v, 2).dims == std::map<int, std::int64_t>{{2, 1}});

  GradedSpace u;
  u.add(1, 1);
  u.add(3, 1);
  CHECK(colie_weights(u, 2).dims == std::map<int, std::int64_t>{{4, 1}});

  // per-weight counts agree with the weights of Hall basis elements
  const std::vector<std::vector<int>> gens = {{1, 1, 3}, {2, 5}, {1, 2, 2, -1}, {0, 1}};
  for (const auto& g : gens) {
    GradedSpace s;
    for (int w : g) s.add(w, 1);
    for (std::size_t n = 1; n <= 6; ++n) {
      std::map<int, std::int64_t> counted;
      for (const auto& h : hall_basis(g, n)) {
        int sum = 0;
        for (int leaf : h.leaves()) sum += g[static_cast<std::size_t>(leaf)];
        CHECK(h.weight == sum);
        CHECK(h.leaves().size() == n);
        counted[h.weight]++;
      }
      CHECK(colie_weights(s, n).dims == counted);
      if (s.min_weight() >= 1) CHECK(colie_weights(s, n).min_weight() >= static_cast<int>(n) * s.min_weight());
    }
  }

  // generating-function identity to t^8
  std::vector<GradedSpace> spaces(4);
  spaces[0].add(0, 2);
  spaces[1].add(1, 2);
  spaces[1].add(2, 1);
  spaces[2].add(-1, 1);
  spaces[2].add(3, 2);
  spaces[3].add(1, 22);
  spaces[3].add(4, 3);
  for (const auto& s : spaces) CHECK(generating_function_identity(s, 8));
}

TEST_CASE("magnus graded pieces") {
  GradedSpace f2, f1, f3;
  f2.add(0, 2);
  f1.add(0, 1);
  f3.add(0, 3);
  CHECK(magnus_graded(f2, 2).total() == 1);
  CHECK(magnus_graded(f2, 3).total() == 2);
  for (std::size_t s = 2; s <= 6; ++s) CHECK(magnus_graded(f1, s).total() == 0);
  CHECK(magnus_graded(f3, 2).total() == 3);
}

TEST_CASE("modular weight calculus") {
  // (a, b) monomial counts
  const std::map<int, std::int64_t> table = {{0, 1}, {2, 0}, {4, 1}, {6, 1}, {8, 1}, {10, 1}, {12, 2}, {14, 1}, {24, 3}};
  for (const auto& [k, d] : table) CHECK(dim_modular(k) == d);
  CHECK(dim_cusp(12) == 1);
  CHECK(dim_eisenstein(12) == 1);
  CHECK(dim_cusp(4) == 0);

  const auto h10 = modular_h1(10);
  CHECK(h10.dims == std::map<int, std::int64_t>{{11, 2}, {22, 1}});
  CHECK(h10.total() == 3);
  CHECK(modular_h1(2).dims == std::map<int, std::int64_t>{{6, 1}});
  CHECK(modular_h1(1).empty());
  CHECK(modular_h1(0).empty());
  for (int m = 0; m <= 40; m += 2) CHECK(modular_h1(m).total() == (m ? dim_eisenstein(m + 2) + 2 * dim_cusp(m + 2) : 0));

  const auto rep = ls_weight_report(-1, 10, 1);
  CHECK(rep.ls.dims == std::map<int, std::int64_t>{{1, 22}, {4, 3}, {6, 5}, {8, 7}, {10, 9}, {12, 11}});
  CHECK(rep.e1_diag_zero);

  CHECK(ls_weight_report(-1, 2, 2).ls.dims == std::map<int, std::int64_t>{{8, 3}});
  CHECK(ls_weight_report(0, 2, 2).ls.dims == std::map<int, std::int64_t>{{12, 3}});

  for (int m_max = 0; m_max <= 20; ++m_max)
    for (std::size_t s = 1; s <= 5; ++s) CHECK(ls_weight_report(-1, m_max, s).e1_diag_zero);
}
