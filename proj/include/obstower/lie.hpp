#pragma once

// Graded free Lie algebra combinatorics and the weight bookkeeping for
// modular-form coefficient spaces.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace obstower::lie {

/// Finite-dimensional space graded by integer weight.
struct GradedSpace {
  std::map<int, std::int64_t> dims;  // zero entries are dropped
  std::map<int, std::string> labels;

  std::int64_t total() const;
  bool empty() const { return dims.empty(); }
  /// Smallest weight with nonzero dimension; requires !empty().
  int min_weight() const;
  void add(int weight, std::int64_t dim);
  bool operator==(const GradedSpace& o) const { return dims == o.dims; }
};

/// Hall basis element: a generator (leaf) or a bracket of two earlier elements.
struct HallElement {
  int generator = -1;  // leaf index, -1 for brackets
  std::shared_ptr<const HallElement> left, right;
  std::size_t degree = 1;
  int weight = 0;

  bool is_leaf() const noexcept { return generator >= 0; }
  std::vector<int> leaves() const;
  std::string to_string() const;  // x1, [x1,x2], ...
};

/// Basic commutators of degree n on generators with the given weights
/// (generator order = input order).
std::vector<HallElement> hall_basis(const std::vector<int>& generator_weights, std::size_t n);

/// (1/n) sum_{e | n} mu(e) d^{n/e}. Throws std::overflow_error past int64.
std::int64_t witt_rank(std::int64_t d, std::size_t n);
std::int64_t moebius(std::int64_t n);

/// Weights of the bracket-length-s part of the free Lie algebra on V.
GradedSpace colie_weights(const GradedSpace& v, std::size_t s);
/// Same count for the graded pieces of the lower central series of a free
/// group with the given abelianization.
GradedSpace magnus_graded(const GradedSpace& ab, std::size_t s);

// Level one modular forms.
std::int64_t dim_modular(int k);
std::int64_t dim_cusp(int k);
std::int64_t dim_eisenstein(int k);

/// H^1(SL_2(Z), V_m)(-m): weight m+1 (cusp part, twice dim S_{m+2}) and
/// weight 2m+2 (Eisenstein part, dim E_{m+2}).
GradedSpace modular_h1(int m);

struct LsReport {
  int lambda_weight = -1;
  int m_max = 0;
  std::size_t s = 1;
  GradedSpace generators;  // sum over m <= m_max of modular_h1(m) (x) S^m(Lambda)
  GradedSpace ls;
  bool e1_diag_zero = false;  // every weight of L_s is > 0
};

LsReport ls_weight_report(int lambda_weight, int m_max, std::size_t s);

}  // namespace obstower::lie
