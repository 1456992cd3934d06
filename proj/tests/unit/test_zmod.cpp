#include <doctest.h>

#include <random>

#include "obstower/zmod.hpp"

using namespace obstower::zmod;

namespace {

Matrix random_matrix(std::mt19937& rng, const Ring& r, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  std::uniform_int_distribution<std::int64_t> d(0, r.q - 1);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = d(rng) * (d(rng) % 3 == 0 ? r.p : 1) % r.q;
  return m;
}

}  // namespace

TEST_CASE("ring basics") {
  Ring r(3, 2);
  CHECK(r.q == 9);
  CHECK(r.valuation(0) == 2);
  CHECK(r.valuation(3) == 1);
  CHECK(r.valuation(4) == 0);
  CHECK(r.mul(r.unit_inverse(4), 4) == 1);
}

TEST_CASE("smith form: U M V = D and kernel") {
  std::mt19937 rng(7);
  for (auto [p, k] : {std::pair{2, 1}, {2, 3}, {3, 2}, {5, 1}}) {
    Ring r(p, k);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
      Matrix m = random_matrix(rng, r, rows, cols);
      auto s = SmithForm::compute(r, m, {true, true});
      Matrix d = s.row_transform().multiply(r, m).multiply(r, s.col_transform());
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
          const std::int64_t want = (i == j && i < s.rank()) ? r.power(s.valuations()[i]) : 0;
          CHECK(d(i, j) == want);
        }
      Matrix uu = s.row_transform().multiply(r, s.row_transform_inverse());
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < rows; ++j) CHECK(uu(i, j) == (i == j ? 1 : 0));
      // Kernel generators are killed; kernel size times image size is q^cols.
      int klog = 0;
      for (const auto& v : s.kernel()) CHECK(m.multiply(r, v) == Vector(rows, 0));
      for (int v : s.valuations()) klog += v;
      klog += static_cast<int>(cols - s.rank()) * k;
      CHECK(klog + s.image_log_size() == static_cast<int>(cols) * k);
      // Solving hits every image vector.
      Vector x(cols);
      for (auto& e : x) e = static_cast<std::int64_t>(rng() % r.q);
      auto b = m.multiply(r, x);
      auto sol = s.solve(b);
      REQUIRE(sol.has_value());
      CHECK(m.multiply(r, *sol) == b);
    }
  }
}

TEST_CASE("subquotient coordinates") {
  Ring r(2, 2);
  // Z = R^2, B = <(2,0)> : quotient Z/2 x Z/4.
  Subquotient sq(r, 2, {{1, 0}, {0, 1}}, {{2, 0}});
  REQUIRE(sq.ngens() == 2);
  CHECK(sq.log_order() == 3);
  for (std::size_t i = 0; i < sq.ngens(); ++i) {
    auto c = sq.coordinates(sq.representative(i));
    for (std::size_t j = 0; j < c.size(); ++j) CHECK(c[j] == (i == j ? 1 : 0));
  }
  CHECK(sq.coordinates({2, 0}) == Vector{0, 0});
  CHECK(sq.contains({3, 1}));
}

TEST_CASE("integer smith") {
  obstower::zint::IntMatrix m(2, 2);
  m.at(0, 0) = 2;
  m.at(0, 1) = 4;
  m.at(1, 0) = 6;
  m.at(1, 1) = 8;
  auto s = obstower::zint::int_smith(m, true);
  REQUIRE(s.diagonal.size() == 2);
  CHECK(s.diagonal[0] == 2);
  CHECK(s.diagonal[1] == 4);
}
