#pragma once

// Linear algebra over the local rings Z/p^k and over Z.
//
// Every finite abelian group handled by the library is split into primary
// components, so Smith reduction only ever runs over Z/p^k, where each
// nonzero entry is a unit times a power of p and pivoting never needs gcds.

#include <cstdint>
#include <optional>
#include <vector>

namespace obstower::zmod {

using Vector = std::vector<std::int64_t>;

/// The ring Z/p^k with p prime, p^k < 2^31.
struct Ring {
  std::int64_t p = 2;
  int k = 1;
  std::int64_t q = 2;

  Ring() = default;
  Ring(std::int64_t prime, int exponent);

  std::int64_t reduce(std::int64_t x) const noexcept {
    x %= q;
    return x < 0 ? x + q : x;
  }
  std::int64_t add(std::int64_t a, std::int64_t b) const noexcept {
    std::int64_t s = a + b;
    return s >= q ? s - q : s;
  }
  std::int64_t sub(std::int64_t a, std::int64_t b) const noexcept {
    std::int64_t s = a - b;
    return s < 0 ? s + q : s;
  }
  std::int64_t mul(std::int64_t a, std::int64_t b) const noexcept { return (a * b) % q; }
  std::int64_t neg(std::int64_t a) const noexcept { return a == 0 ? 0 : q - a; }

  /// p-adic valuation of a reduced element; k for zero.
  int valuation(std::int64_t x) const noexcept;
  std::int64_t power(int e) const noexcept;  // p^e
  std::int64_t unit_inverse(std::int64_t u) const;

  bool operator==(const Ring& o) const noexcept { return p == o.p && k == o.k; }
};

/// Dense row-major matrix with entries reduced into [0, q).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static Matrix identity(std::size_t n);
  static Matrix from_columns(std::size_t rows, const std::vector<Vector>& cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::int64_t& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::int64_t* row(std::size_t r) noexcept { return data_.data() + r * cols_; }
  const std::int64_t* row(std::size_t r) const noexcept { return data_.data() + r * cols_; }

  Vector column(std::size_t c) const;
  Vector multiply(const Ring& ring, const Vector& x) const;
  Matrix multiply(const Ring& ring, const Matrix& other) const;
  /// Horizontal concatenation [this | other].
  Matrix hconcat(const Matrix& other) const;
  Matrix transposed() const;
  bool is_zero() const noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

/// U * M * V = D with D diagonal, D_ii = p^{v_i} for i < rank, zero after.
/// Row operations are logged instead of materialising U, since M may have
/// far more rows than columns (coboundary matrices of the bar complex).
class SmithForm {
 public:
  struct Options {
    bool keep_col_transform = true;
    bool keep_row_transform = false;  // explicit U and U^{-1}
  };

  static SmithForm compute(const Ring& ring, Matrix m);
  static SmithForm compute(const Ring& ring, Matrix m, Options opts);

  const Ring& ring() const noexcept { return ring_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t rank() const noexcept { return vals_.size(); }
  /// Valuations of the nonzero diagonal entries, in pivot order.
  const std::vector<int>& valuations() const noexcept { return vals_; }
  const Matrix& col_transform() const noexcept { return v_; }
  const Matrix& row_transform() const noexcept { return u_; }
  const Matrix& row_transform_inverse() const noexcept { return u_inv_; }

  /// U * b.
  Vector apply_rows(Vector b) const;
  /// Some x with M x = b, if one exists.
  std::optional<Vector> solve(const Vector& b) const;
  /// Generators (as columns) of { x : M x = 0 }.
  std::vector<Vector> kernel() const;
  /// Number of elements of the image, as a power of p.
  int image_log_size() const noexcept;

 private:
  struct RowOp {
    enum Kind : std::uint8_t { Swap, Scale, AddMultiple } kind;
    std::uint32_t target;
    std::uint32_t source;
    std::int64_t factor;
  };

  Ring ring_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<int> vals_;
  Matrix v_;
  Matrix u_;
  Matrix u_inv_;
  std::vector<RowOp> log_;
};

/// Z / B for submodules B <= Z <= R^a given by generator columns.
///
/// Factors are cyclic Z/p^{e_i} with e_i >= 1; `representative(i)` lies in Z
/// and `coordinates(x)` inverts the presentation for any x in Z.
class Subquotient {
 public:
  Subquotient() = default;
  Subquotient(const Ring& ring, std::size_t ambient, const std::vector<Vector>& z_gens,
              const std::vector<Vector>& b_gens);

  const Ring& ring() const noexcept { return ring_; }
  const std::vector<int>& exponents() const noexcept { return exps_; }
  std::size_t ngens() const noexcept { return exps_.size(); }
  const Vector& representative(std::size_t i) const { return reps_.at(i); }
  /// Throws std::invalid_argument if x is not in Z.
  Vector coordinates(const Vector& x) const;
  bool contains(const Vector& x) const;
  /// log_p of the order.
  int log_order() const noexcept;

 private:
  Ring ring_;
  std::size_t ambient_ = 0;
  std::vector<int> exps_;
  std::vector<Vector> reps_;
  std::vector<std::size_t> factor_index_;  // position in the P-transformed coordinates
  Matrix z_;
  std::optional<SmithForm> z_smith_;
  Matrix p_;  // row transform of the relation Smith form
};

/// Generators of { x in R^a : M x in N } where N <= R^b is given by generators.
std::vector<Vector> preimage(const Ring& ring, const Matrix& m, const std::vector<Vector>& n_gens);

/// Incremental row echelon form over F_p; used for span tests.
class EchelonModP {
 public:
  explicit EchelonModP(std::int64_t p, std::size_t width) : p_(p), width_(width) {}
  /// Inserts v (entries taken mod p); returns true if it enlarged the span.
  bool insert(Vector v);
  bool contains(Vector v) const;
  std::size_t dimension() const noexcept { return rows_.size(); }

 private:
  void reduce(Vector& v) const;
  std::int64_t p_;
  std::size_t width_;
  std::vector<Vector> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace obstower::zmod

namespace obstower::zint {

/// Integer matrix with Smith normal form helpers (small matrices only;
/// throws std::overflow_error if entries leave the int64 range).
struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> a;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
  std::int64_t& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  std::int64_t at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

struct IntSmith {
  std::vector<std::int64_t> diagonal;  // nonzero elementary divisors, d_1 | d_2 | ...
  IntMatrix u;                          // U M V = D
  IntMatrix u_inv;
  IntMatrix v;
};

IntSmith int_smith(IntMatrix m, bool want_transforms);

}  // namespace obstower::zint
