#include "obstower/zmod.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <utility>

namespace obstower::zmod {

Ring::Ring(std::int64_t prime, int exponent) : p(prime), k(exponent), q(1) {
  if (prime < 2 || exponent < 1) throw std::invalid_argument("Ring: need prime >= 2, exponent >= 1");
  for (int i = 0; i < exponent; ++i) {
    q *= prime;
    if (q >= (std::int64_t{1} << 31)) throw std::invalid_argument("Ring: modulus too large");
  }
}

int Ring::valuation(std::int64_t x) const noexcept {
  if (x == 0) return k;
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

std::int64_t Ring::power(int e) const noexcept {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

std::int64_t Ring::unit_inverse(std::int64_t u) const {
  // extended Euclid on (u, q)
  std::int64_t a = reduce(u), b = q, x0 = 1, x1 = 0;
  while (b != 0) {
    std::int64_t t = a / b;
    std::swap(a, b);
    b -= t * a;
    std::swap(x0, x1);
    x1 -= t * x0;
  }
  if (a != 1) throw std::invalid_argument("Ring::unit_inverse: not a unit");
  return reduce(x0);
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_columns(std::size_t rows, const std::vector<Vector>& cols) {
  Matrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) throw std::invalid_argument("Matrix::from_columns: length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

Vector Matrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Vector Matrix::multiply(const Ring& ring, const Vector& x) const {
  if (x.size() != cols_) throw std::invalid_argument("Matrix::multiply: length mismatch");
  Vector y(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const std::int64_t* rw = row(r);
    std::int64_t acc = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (rw[c] != 0 && x[c] != 0) acc = (acc + rw[c] * ring.reduce(x[c])) % ring.q;
    }
    y[r] = acc;
  }
  return y;
}

Matrix Matrix::multiply(const Ring& ring, const Matrix& o) const {
  if (o.rows_ != cols_) throw std::invalid_argument("Matrix::multiply: shape mismatch");
  Matrix out(rows_, o.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    const std::int64_t* a = row(r);
    std::int64_t* dst = out.row(r);
    for (std::size_t k = 0; k < cols_; ++k) {
      if (a[k] == 0) continue;
      const std::int64_t* b = o.row(k);
      for (std::size_t c = 0; c < o.cols_; ++c) dst[c] = (dst[c] + a[k] * b[c]) % ring.q;
    }
  }
  return out;
}

Matrix Matrix::hconcat(const Matrix& o) const {
  if (o.rows_ != rows_) throw std::invalid_argument("Matrix::hconcat: row mismatch");
  Matrix out(rows_, cols_ + o.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::copy(row(r), row(r) + cols_, out.row(r));
    std::copy(o.row(r), o.row(r) + o.cols_, out.row(r) + cols_);
  }
  return out;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool Matrix::is_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](std::int64_t x) { return x == 0; });
}

// ---------------------------------------------------------------------------

SmithForm SmithForm::compute(const Ring& ring, Matrix m) { return compute(ring, std::move(m), Options{}); }

SmithForm SmithForm::compute(const Ring& ring, Matrix m, Options opts) {
  SmithForm s;
  s.ring_ = ring;
  s.rows_ = m.rows();
  s.cols_ = m.cols();
  const std::size_t rows = m.rows(), cols = m.cols();
  const std::int64_t q = ring.q;
  if (opts.keep_col_transform) s.v_ = Matrix::identity(cols);
  if (opts.keep_row_transform) {
    s.u_ = Matrix::identity(rows);
    s.u_inv_ = Matrix::identity(rows);
  }

  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = ring.reduce(m(r, c));

  // Valuation of each entry is cheap to recompute, but scanning the whole
  // trailing block per pivot dominates; stop at the first unit.
  const std::size_t steps = std::min(rows, cols);
  for (std::size_t t = 0; t < steps; ++t) {
    std::size_t pi = rows, pj = cols;
    int best = ring.k;
    for (std::size_t i = t; i < rows && best > 0; ++i) {
      const std::int64_t* rw = m.row(i);
      for (std::size_t j = t; j < cols; ++j) {
        if (rw[j] == 0) continue;
        int v = ring.valuation(rw[j]);
        if (v < best) {
          best = v;
          pi = i;
          pj = j;
          if (v == 0) break;
        }
      }
    }
    if (pi == rows) break;

    if (pi != t) {
      for (std::size_t c = 0; c < cols; ++c) std::swap(m(t, c), m(pi, c));
      s.log_.push_back({RowOp::Swap, static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(pi), 0});
      if (opts.keep_row_transform) {
        for (std::size_t c = 0; c < rows; ++c) std::swap(s.u_(t, c), s.u_(pi, c));
        for (std::size_t r = 0; r < rows; ++r) std::swap(s.u_inv_(r, t), s.u_inv_(r, pi));
      }
    }
    if (pj != t) {
      for (std::size_t r = 0; r < rows; ++r) std::swap(m(r, t), m(r, pj));
      if (opts.keep_col_transform)
        for (std::size_t r = 0; r < cols; ++r) std::swap(s.v_(r, t), s.v_(r, pj));
    }

    const std::int64_t pv = ring.power(best);
    const std::int64_t unit = m(t, t) / pv;
    if (unit != 1) {
      const std::int64_t inv = ring.unit_inverse(unit);
      std::int64_t* rw = m.row(t);
      for (std::size_t c = t; c < cols; ++c) rw[c] = (rw[c] * inv) % q;
      s.log_.push_back({RowOp::Scale, static_cast<std::uint32_t>(t), 0, inv});
      if (opts.keep_row_transform) {
        for (std::size_t c = 0; c < rows; ++c) s.u_(t, c) = (s.u_(t, c) * inv) % q;
        const std::int64_t back = ring.reduce(unit);
        for (std::size_t r = 0; r < rows; ++r) s.u_inv_(r, t) = (s.u_inv_(r, t) * back) % q;
      }
    }

    const std::int64_t* prow = m.row(t);
    for (std::size_t i = t + 1; i < rows; ++i) {
      std::int64_t x = m(i, t);
      if (x == 0) continue;
      const std::int64_t f = x / pv;
      const std::int64_t nf = ring.neg(f % q);
      std::int64_t* rw = m.row(i);
      for (std::size_t c = t; c < cols; ++c)
        if (prow[c] != 0) rw[c] = (rw[c] + nf * prow[c]) % q;
      s.log_.push_back({RowOp::AddMultiple, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(t), nf});
      if (opts.keep_row_transform) {
        for (std::size_t c = 0; c < rows; ++c) s.u_(i, c) = (s.u_(i, c) + nf * s.u_(t, c)) % q;
        // U <- E U  =>  U^{-1} <- U^{-1} E^{-1}; E^{-1} adds f * row t to row i.
        const std::int64_t pf = f % q;
        for (std::size_t r = 0; r < rows; ++r) s.u_inv_(r, t) = (s.u_inv_(r, t) + pf * s.u_inv_(r, i)) % q;
      }
    }
    for (std::size_t j = t + 1; j < cols; ++j) {
      std::int64_t x = m(t, j);
      if (x == 0) continue;
      const std::int64_t nf = ring.neg((x / pv) % q);
      m(t, j) = 0;
      if (opts.keep_col_transform)
        for (std::size_t r = 0; r < cols; ++r) s.v_(r, j) = (s.v_(r, j) + nf * s.v_(r, t)) % q;
    }
    s.vals_.push_back(best);
  }
  return s;
}

Vector SmithForm::apply_rows(Vector b) const {
  if (b.size() != rows_) throw std::invalid_argument("SmithForm::apply_rows: length mismatch");
  for (auto& x : b) x = ring_.reduce(x);
  for (const RowOp& op : log_) {
    switch (op.kind) {
      case RowOp::Swap: std::swap(b[op.target], b[op.source]); break;
      case RowOp::Scale: b[op.target] = ring_.mul(b[op.target], op.factor); break;
      case RowOp::AddMultiple: b[op.target] = (b[op.target] + op.factor * b[op.source]) % ring_.q; break;
    }
  }
  return b;
}

std::optional<Vector> SmithForm::solve(const Vector& b) const {
  if (v_.rows() != cols_) throw std::logic_error("SmithForm::solve needs the column transform");
  Vector y = apply_rows(b);
  Vector z(cols_, 0);
  for (std::size_t i = 0; i < vals_.size(); ++i) {
    const std::int64_t pv = ring_.power(vals_[i]);
    if (y[i] % pv != 0) return std::nullopt;
    z[i] = y[i] / pv;
  }
  for (std::size_t i = vals_.size(); i < rows_; ++i)
    if (y[i] != 0) return std::nullopt;
  return v_.multiply(ring_, z);
}

std::vector<Vector> SmithForm::kernel() const {
  if (v_.rows() != cols_) throw std::logic_error("SmithForm::kernel needs the column transform");
  std::vector<Vector> gens;
  for (std::size_t i = 0; i < cols_; ++i) {
    std::int64_t scale = 1;
    if (i < vals_.size()) {
      if (vals_[i] == 0) continue;
      scale = ring_.power(ring_.k - vals_[i]);
    }
    Vector g = v_.column(i);
    if (scale != 1)
      for (auto& x : g) x = ring_.mul(x, scale);
    gens.push_back(std::move(g));
  }
  return gens;
}

int SmithForm::image_log_size() const noexcept {
  int total = 0;
  for (int v : vals_) total += ring_.k - v;
  return total;
}

// ---------------------------------------------------------------------------

std::vector<Vector> preimage(const Ring& ring, const Matrix& m, const std::vector<Vector>& n_gens) {
  Matrix n = Matrix::from_columns(m.rows(), n_gens);
  Matrix joint = m.hconcat(n);
  SmithForm s = SmithForm::compute(ring, std::move(joint));
  std::vector<Vector> out;
  for (Vector& g : s.kernel()) {
    g.resize(m.cols());
    if (std::any_of(g.begin(), g.end(), [](std::int64_t x) { return x != 0; })) out.push_back(std::move(g));
  }
  return out;
}

Subquotient::Subquotient(const Ring& ring, std::size_t ambient, const std::vector<Vector>& z_gens,
                         const std::vector<Vector>& b_gens)
    : ring_(ring), ambient_(ambient) {
  z_ = Matrix::from_columns(ambient, z_gens);
  const std::size_t nz = z_gens.size();
  if (nz == 0) return;
  z_smith_ = SmithForm::compute(ring, z_);

  // Relations among the Z generators: c with Z c in B.
  std::vector<Vector> rel = preimage(ring, z_, b_gens);
  Matrix relm = Matrix::from_columns(nz, rel);
  SmithForm rs = SmithForm::compute(ring, relm, SmithForm::Options{false, true});
  p_ = rs.row_transform();
  const Matrix& pinv = rs.row_transform_inverse();
  for (std::size_t i = 0; i < nz; ++i) {
    int e = i < rs.rank() ? rs.valuations()[i] : ring.k;
    if (e == 0) continue;
    exps_.push_back(e);
    factor_index_.push_back(i);
    reps_.push_back(z_.multiply(ring, pinv.column(i)));
  }
}

Vector Subquotient::coordinates(const Vector& x) const {
  if (exps_.empty()) {
    if (!contains(x)) throw std::invalid_argument("Subquotient::coordinates: vector not in Z");
    return {};
  }
  auto c = z_smith_->solve(x);
  if (!c) throw std::invalid_argument("Subquotient::coordinates: vector not in Z");
  Vector y = p_.multiply(ring_, *c);
  Vector out(exps_.size());
  for (std::size_t i = 0; i < exps_.size(); ++i) out[i] = y[factor_index_[i]] % ring_.power(exps_[i]);
  return out;
}

bool Subquotient::contains(const Vector& x) const {
  if (!z_smith_) return std::all_of(x.begin(), x.end(), [&](std::int64_t v) { return ring_.reduce(v) == 0; });
  return z_smith_->solve(x).has_value();
}

int Subquotient::log_order() const noexcept {
  int s = 0;
  for (int e : exps_) s += e;
  return s;
}

// ---------------------------------------------------------------------------

void EchelonModP::reduce(Vector& v) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const std::size_t piv = pivots_[i];
    const std::int64_t f = v[piv];
    if (f == 0) continue;
    const Vector& r = rows_[i];
    for (std::size_t c = piv; c < width_; ++c)
      if (r[c] != 0) v[c] = ((v[c] - f * r[c]) % p_ + p_) % p_;
  }
}

bool EchelonModP::insert(Vector v) {
  for (auto& x : v) x = ((x % p_) + p_) % p_;
  reduce(v);
  std::size_t piv = 0;
  while (piv < width_ && v[piv] == 0) ++piv;
  if (piv == width_) return false;
  // normalise pivot to 1
  std::int64_t inv = 1;
  for (std::int64_t t = 1; t < p_; ++t)
    if ((v[piv] * t) % p_ == 1) {
      inv = t;
      break;
    }
  for (auto& x : v) x = (x * inv) % p_;
  rows_.push_back(std::move(v));
  pivots_.push_back(piv);
  return true;
}

bool EchelonModP::contains(Vector v) const {
  for (auto& x : v) x = ((x % p_) + p_) % p_;
  reduce(v);
  return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

}  // namespace obstower::zmod

namespace obstower::zint {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int_smith: overflow");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("int_smith: overflow");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int_smith: overflow");
  return r;
}

IntMatrix identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

}  // namespace

IntSmith int_smith(IntMatrix m, bool want) {
  IntSmith out;
  const std::size_t rows = m.rows, cols = m.cols;
  if (want) {
    out.u = identity(rows);
    out.u_inv = identity(rows);
    out.v = identity(cols);
  }
  auto row_add = [&](std::size_t dst, std::size_t src, std::int64_t f) {  // row dst += f row src
    if (f == 0) return;
    for (std::size_t c = 0; c < cols; ++c) m.at(dst, c) = checked_add(m.at(dst, c), checked_mul(f, m.at(src, c)));
    if (want) {
      for (std::size_t c = 0; c < rows; ++c)
        out.u.at(dst, c) = checked_add(out.u.at(dst, c), checked_mul(f, out.u.at(src, c)));
      for (std::size_t r = 0; r < rows; ++r)
        out.u_inv.at(r, src) = checked_sub(out.u_inv.at(r, src), checked_mul(f, out.u_inv.at(r, dst)));
    }
  };
  auto col_add = [&](std::size_t dst, std::size_t src, std::int64_t f) {  // col dst += f col src
    if (f == 0) return;
    for (std::size_t r = 0; r < rows; ++r) m.at(r, dst) = checked_add(m.at(r, dst), checked_mul(f, m.at(r, src)));
    if (want)
      for (std::size_t r = 0; r < cols; ++r) out.v.at(r, dst) = checked_add(out.v.at(r, dst), checked_mul(f, out.v.at(r, src)));
  };
  auto row_swap = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols; ++c) std::swap(m.at(a, c), m.at(b, c));
    if (want) {
      for (std::size_t c = 0; c < rows; ++c) std::swap(out.u.at(a, c), out.u.at(b, c));
      for (std::size_t r = 0; r < rows; ++r) std::swap(out.u_inv.at(r, a), out.u_inv.at(r, b));
    }
  };
  auto col_swap = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t r = 0; r < rows; ++r) std::swap(m.at(r, a), m.at(r, b));
    if (want)
      for (std::size_t r = 0; r < cols; ++r) std::swap(out.v.at(r, a), out.v.at(r, b));
  };
  auto row_negate = [&](std::size_t r0) {
    for (std::size_t c = 0; c < cols; ++c) m.at(r0, c) = -m.at(r0, c);
    if (want) {
      for (std::size_t c = 0; c < rows; ++c) out.u.at(r0, c) = -out.u.at(r0, c);
      for (std::size_t r = 0; r < rows; ++r) out.u_inv.at(r, r0) = -out.u_inv.at(r, r0);
    }
  };

  const std::size_t steps = std::min(rows, cols);
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      // pivot: smallest nonzero absolute value, row-major ties
      std::size_t pi = rows, pj = cols;
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j) {
          std::int64_t a = std::llabs(m.at(i, j));
          if (a != 0 && a < best) {
            best = a;
            pi = i;
            pj = j;
          }
        }
      if (pi == rows) goto done;
      row_swap(t, pi);
      col_swap(t, pj);
      bool clean = true;
      const std::int64_t piv = m.at(t, t);
      for (std::size_t i = t + 1; i < rows; ++i) {
        std::int64_t x = m.at(i, t);
        if (x == 0) continue;
        row_add(i, t, -(x / piv));
        if (m.at(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        std::int64_t x = m.at(t, j);
        if (x == 0) continue;
        col_add(j, t, -(x / piv));
        if (m.at(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility of the trailing block
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (m.at(i, j) % piv != 0) {
            row_add(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (m.at(t, t) < 0) row_negate(t);
    out.diagonal.push_back(m.at(t, t));
  }
done:
  return out;
}

}  // namespace obstower::zint
