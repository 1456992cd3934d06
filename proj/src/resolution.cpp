#include "obstower/resolution.hpp"

#include <stdexcept>

#include "obstower/error.hpp"

namespace obstower::res {

// --- bar chains -------------------------------------------------------------

void BarChain::add(const std::vector<Elem>& cell, Elem g, std::int64_t coef, const zmod::Ring& ring) {
  coef = ring.reduce(coef);
  if (coef == 0) return;
  auto [it, inserted] = terms_.emplace(Key{cell, g}, coef);
  if (!inserted) {
    it->second = ring.add(it->second, coef);
    if (it->second == 0) terms_.erase(it);
  }
}

void BarChain::add(const BarChain& other, std::int64_t coef, const zmod::Ring& ring) {
  for (const auto& [k, c] : other.terms_) add(k.first, k.second, ring.mul(c, ring.reduce(coef)), ring);
}

BarChain bar_boundary(const FiniteGroup& g, const zmod::Ring& ring, const BarChain& x) {
  BarChain out;
  for (const auto& [key, c] : x.terms()) {
    const auto& [cell, h] = key;
    const std::size_t n = cell.size();
    if (n == 0) continue;
    out.add(std::vector<Elem>(cell.begin() + 1, cell.end()), h, c, ring);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const Elem prod = g.mul(cell[i], cell[i + 1]);
      if (prod == g.identity()) continue;
      std::vector<Elem> face;
      face.reserve(n - 1);
      for (std::size_t t = 0; t < n; ++t) {
        if (t == i) {
          face.push_back(prod);
          ++t;
        } else {
          face.push_back(cell[t]);
        }
      }
      out.add(face, h, (i % 2 == 0) ? ring.neg(c) : c, ring);
    }
    out.add(std::vector<Elem>(cell.begin(), cell.end() - 1), g.mul(cell[n - 1], h), (n % 2 == 0) ? c : ring.neg(c),
            ring);
  }
  return out;
}

BarChain bar_homotopy(const FiniteGroup& g, const zmod::Ring& ring, const BarChain& x) {
  BarChain out;
  for (const auto& [key, c] : x.terms()) {
    const auto& [cell, h] = key;
    if (h == g.identity()) continue;
    std::vector<Elem> longer = cell;
    longer.push_back(h);
    out.add(longer, g.identity(), (cell.size() % 2 == 1) ? c : ring.neg(c), ring);
  }
  return out;
}

BarChain bar_right_mul(const FiniteGroup& g, const zmod::Ring& ring, const BarChain& x, Elem h) {
  BarChain out;
  for (const auto& [key, c] : x.terms()) out.add(key.first, g.mul(key.second, h), c, ring);
  return out;
}

BarChain bar_map(const GroupHom& phi, const zmod::Ring& ring, const BarChain& x) {
  BarChain out;
  const FiniteGroup& t = phi.target();
  for (const auto& [key, c] : x.terms()) {
    std::vector<Elem> cell;
    bool degenerate = false;
    for (Elem e : key.first) {
      const Elem y = phi(e);
      if (y == t.identity()) {
        degenerate = true;
        break;
      }
      cell.push_back(y);
    }
    if (!degenerate) out.add(cell, phi(key.second), c, ring);
  }
  return out;
}

Vector right_mul(const FiniteGroup& g, const Vector& x, Elem h) {
  const std::size_t n = g.size();
  Vector out(x.size(), 0);
  for (std::size_t idx = 0; idx < x.size(); ++idx) {
    if (x[idx] == 0) continue;
    const std::size_t j = idx / n;
    const Elem e = static_cast<Elem>(idx % n);
    out[j * n + g.mul(e, h)] = x[idx];
  }
  return out;
}

// --- Resolution -------------------------------------------------------------

namespace {

zmod::Matrix columns_by_translation(const FiniteGroup& g, std::size_t rows, const std::vector<Vector>& gens) {
  const std::size_t n = g.size();
  zmod::Matrix m(rows, gens.size() * n);
  for (std::size_t j = 0; j < gens.size(); ++j)
    for (Elem h = 0; h < n; ++h) {
      const Vector col = right_mul(g, gens[j], h);
      for (std::size_t r = 0; r < rows; ++r) m(r, j * n + h) = col[r];
    }
  return m;
}

// R[G]-generators of the kernel of a boundary with split Smith form.
std::vector<Vector> kernel_module_generators(const FiniteGroup& g, const zmod::Ring& ring, const zmod::SmithForm& s) {
  for (int v : s.valuations())
    if (v != 0) throw std::logic_error("resolution boundary is not split over the coefficient ring");
  const std::size_t width = s.cols();
  const std::size_t kdim = width - s.rank();
  std::vector<Vector> gens;
  zmod::EchelonModP ech(ring.p, width);
  for (std::size_t c = s.rank(); c < width && ech.dimension() < kdim; ++c) {
    Vector b = s.col_transform().column(c);
    if (ech.contains(b)) continue;
    for (Elem h = 0; h < g.size(); ++h) ech.insert(right_mul(g, b, h));
    gens.push_back(std::move(b));
  }
  if (ech.dimension() != kdim) throw std::logic_error("failed to generate resolution kernel");
  return gens;
}

struct CacheEntry {
  FiniteGroup group;
  zmod::Ring ring;
  std::shared_ptr<const Resolution> res;
};

}  // namespace

Resolution::Resolution(const FiniteGroup& g, const zmod::Ring& ring, int top) : group_(g), ring_(ring), top_(top) {
  require(top >= 1, Errc::InvalidInput, "resolution needs top degree >= 1");
  const std::size_t n = g.size();
  rank_.push_back(1);
  gen_boundary_.resize(top + 1);
  boundary_.resize(top + 1);
  smith_.resize(top + 1);
  alpha_.resize(top + 1);
  beta_.resize(top + 1);
  t_.resize(top + 1);

  zmod::Matrix eps(1, n);
  for (std::size_t i = 0; i < n; ++i) eps(0, i) = 1;
  auto s0 = zmod::SmithForm::compute(ring_, eps);
  gen_boundary_[1] = kernel_module_generators(g, ring_, s0);
  rank_.push_back(gen_boundary_[1].size());
  for (int d = 1; d <= top; ++d) {
    boundary_[d] = columns_by_translation(g, dim(d - 1), gen_boundary_[d]);
    smith_[d] = std::make_unique<zmod::SmithForm>(zmod::SmithForm::compute(ring_, boundary_[d]));
    if (d < top) {
      gen_boundary_[d + 1] = kernel_module_generators(g, ring_, *smith_[d]);
      rank_.push_back(gen_boundary_[d + 1].size());
    }
  }
}

std::shared_ptr<const Resolution> Resolution::get(const FiniteGroup& g, const zmod::Ring& ring, int top) {
  static std::mutex mutex;
  static std::multimap<std::uint64_t, CacheEntry> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto range = cache.equal_range(g.fingerprint());
    for (auto it = range.first; it != range.second; ++it)
      if (it->second.ring == ring && it->second.res->top() >= top && it->second.group.same_as(g)) return it->second.res;
  }
  auto res = std::make_shared<const Resolution>(g, ring, top);
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(g.fingerprint(), CacheEntry{g, ring, res});
  return res;
}

Vector Resolution::boundary(int n, const Vector& x) const {
  if (n == 0) {
    std::int64_t s = 0;
    for (auto c : x) s = ring_.add(s, c);
    return Vector{s};
  }
  return boundary_.at(n).multiply(ring_, x);
}

Vector Resolution::homotopy(int n, const Vector& x) const {
  require(n >= 0 && n < top_, Errc::DegreeTooLarge, "contracting homotopy beyond the resolution");
  Vector y = x;
  if (n == 0) {
    y[0] = ring_.sub(y[0], boundary(0, x)[0]);
  } else {
    const Vector back = homotopy(n - 1, boundary(n, x));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = ring_.sub(y[i], back[i]);
  }
  auto sol = smith_.at(n + 1)->solve(y);
  if (!sol) throw std::logic_error("resolution is not exact");
  return *sol;
}

const BarChain& Resolution::to_bar(int n, std::size_t j) const {
  require(n >= 0 && n <= top_, Errc::DegreeTooLarge, "comparison map beyond the resolution");
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    if (n == 0 && alpha_[0].empty()) {
      BarChain base;
      base.add({}, group_.identity(), 1, ring_);
      alpha_[0].push_back(std::move(base));
    }
    if (alpha_[n].size() == rank(n)) return alpha_[n][j];
  }
  // Build degree n from degree n-1; the lower degree is complete on return.
  for (std::size_t i = 0; i < rank(n - 1); ++i) to_bar(n - 1, i);
  std::vector<BarChain> level;
  for (std::size_t jj = 0; jj < rank(n); ++jj) {
    const Vector& db = gen_boundary_[n][jj];
    BarChain acc;
    const std::size_t gs = group_.size();
    for (std::size_t idx = 0; idx < db.size(); ++idx) {
      if (db[idx] == 0) continue;
      const BarChain& lower = alpha_[n - 1][idx / gs];
      for (const auto& [key, c] : lower.terms())
        acc.add(key.first, group_.mul(key.second, static_cast<Elem>(idx % gs)), ring_.mul(c, db[idx]), ring_);
    }
    level.push_back(bar_homotopy(group_, ring_, acc));
  }
  std::lock_guard<std::mutex> lock(memo_mutex_);
  if (alpha_[n].size() != rank(n)) alpha_[n] = std::move(level);
  return alpha_[n][j];
}

Vector Resolution::from_bar_cell(int n, const std::vector<Elem>& cell) const {
  require(n >= 0 && n <= top_, Errc::DegreeTooLarge, "comparison map beyond the resolution");
  if (n == 0) {
    Vector e(dim(0), 0);
    e[0] = 1;
    return e;
  }
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = beta_[n].find(cell);
    if (it != beta_[n].end()) return it->second;
  }
  BarChain single;
  single.add(cell, group_.identity(), 1, ring_);
  const Vector v = homotopy(n - 1, from_bar(n - 1, bar_boundary(group_, ring_, single)));
  std::lock_guard<std::mutex> lock(memo_mutex_);
  beta_[n].emplace(cell, v);
  return v;
}

Vector Resolution::from_bar(int n, const BarChain& x) const {
  Vector out(dim(n), 0);
  for (const auto& [key, c] : x.terms()) {
    const Vector v = right_mul(group_, from_bar_cell(n, key.first), key.second);
    for (std::size_t i = 0; i < out.size(); ++i)
      if (v[i]) out[i] = ring_.add(out[i], ring_.mul(c, v[i]));
  }
  return out;
}

BarChain Resolution::to_bar(int n, const Vector& x) const {
  const std::size_t gs = group_.size();
  BarChain out;
  for (std::size_t idx = 0; idx < x.size(); ++idx) {
    if (x[idx] == 0) continue;
    out.add(bar_right_mul(group_, ring_, to_bar(n, idx / gs), static_cast<Elem>(idx % gs)), x[idx], ring_);
  }
  return out;
}

BarChain Resolution::bar_comparison_homotopy(int n, const std::vector<Elem>& cell) const {
  require(n >= 0 && n < top_, Errc::DegreeTooLarge, "comparison homotopy beyond the resolution");
  if (n == 0) return {};
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = t_[n].find(cell);
    if (it != t_[n].end()) return it->second;
  }
  BarChain single;
  single.add(cell, group_.identity(), 1, ring_);
  BarChain z = to_bar(n, from_bar_cell(n, cell));
  z.add(single, ring_.neg(1), ring_);
  z.add(bar_comparison_homotopy(n - 1, bar_boundary(group_, ring_, single)), ring_.neg(1), ring_);
  BarChain t = bar_homotopy(group_, ring_, z);
  std::lock_guard<std::mutex> lock(memo_mutex_);
  return t_[n].emplace(cell, std::move(t)).first->second;
}

BarChain Resolution::bar_comparison_homotopy(int n, const BarChain& x) const {
  BarChain out;
  for (const auto& [key, c] : x.terms())
    out.add(bar_right_mul(group_, ring_, bar_comparison_homotopy(n, key.first), key.second), c, ring_);
  return out;
}

// --- ComparisonMap ----------------------------------------------------------

ComparisonMap::ComparisonMap(std::shared_ptr<const Resolution> src, std::shared_ptr<const Resolution> tgt,
                             GroupHom phi, int top)
    : src_(std::move(src)), tgt_(std::move(tgt)), phi_(std::move(phi)) {
  require(phi_.source().same_as(src_->group()) && phi_.target().same_as(tgt_->group()), Errc::TargetMismatch,
          "comparison map between mismatched groups");
  require(top <= src_->top() && top <= tgt_->top(), Errc::DegreeTooLarge, "comparison map beyond the resolution");
  images_.resize(top + 1);
  Vector e0(tgt_->dim(0), 0);
  e0[0] = 1;
  images_[0].push_back(e0);
  for (int n = 1; n <= top; ++n)
    for (std::size_t j = 0; j < src_->rank(n); ++j)
      images_[n].push_back(tgt_->homotopy(n - 1, apply(n - 1, src_->boundary_of_generator(n, j))));
}

Vector ComparisonMap::apply(int n, const Vector& x) const {
  const zmod::Ring& ring = tgt_->ring();
  const std::size_t hs = src_->group().size();
  Vector out(tgt_->dim(n), 0);
  for (std::size_t idx = 0; idx < x.size(); ++idx) {
    if (x[idx] == 0) continue;
    const Vector v = right_mul(tgt_->group(), images_.at(n).at(idx / hs), phi_(static_cast<Elem>(idx % hs)));
    for (std::size_t i = 0; i < out.size(); ++i)
      if (v[i]) out[i] = ring.add(out[i], ring.mul(x[idx], v[i]));
  }
  return out;
}

BarChain ComparisonMap::homotopy_to_bar(int n, const Vector& x) const {
  const zmod::Ring& ring = tgt_->ring();
  const std::size_t hs = src_->group().size();
  BarChain out;
  for (std::size_t idx = 0; idx < x.size(); ++idx) {
    if (x[idx] == 0) continue;
    const BarChain& p = homotopy_to_bar(n, idx / hs);
    out.add(bar_right_mul(tgt_->group(), ring, p, phi_(static_cast<Elem>(idx % hs))), x[idx], ring);
  }
  return out;
}

const BarChain& ComparisonMap::homotopy_to_bar(int n, std::size_t j) const {
  require(n >= 0 && n < static_cast<int>(images_.size()), Errc::DegreeTooLarge, "homotopy beyond the comparison map");
  ensure_homotopy(n);
  std::lock_guard<std::mutex> lock(memo_mutex_);
  return p_[n][j];
}

void ComparisonMap::ensure_homotopy(int n) const {
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    if (p_top_ >= n) return;
  }
  if (n > 0) ensure_homotopy(n - 1);
  const zmod::Ring& ring = tgt_->ring();
  const FiniteGroup& g = tgt_->group();
  const std::size_t gs = g.size();
  std::vector<BarChain> level;
  for (std::size_t jj = 0; jj < src_->rank(n); ++jj) {
    BarChain z;
    const Vector& img = images_[n][jj];
    for (std::size_t idx = 0; idx < img.size(); ++idx) {
      if (img[idx] == 0) continue;
      z.add(bar_right_mul(g, ring, tgt_->to_bar(n, idx / gs), static_cast<Elem>(idx % gs)), img[idx], ring);
    }
    z.add(bar_map(phi_, ring, src_->to_bar(n, jj)), ring.neg(1), ring);
    if (n > 0) z.add(homotopy_to_bar(n - 1, src_->boundary_of_generator(n, jj)), ring.neg(1), ring);
    level.push_back(bar_homotopy(g, ring, z));
  }
  std::lock_guard<std::mutex> lock(memo_mutex_);
  if (p_top_ < n) {
    p_.push_back(std::move(level));
    p_top_ = n;
  }
}

Vector ComparisonMap::homotopy_from_bar(int n, const std::vector<Elem>& cell) const {
  require(n >= 0 && n < tgt_->top() && n < static_cast<int>(images_.size()), Errc::DegreeTooLarge,
          "homotopy beyond the comparison map");
  if (n == 0) return Vector(tgt_->dim(1), 0);
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    if (q_.size() <= static_cast<std::size_t>(n)) q_.resize(n + 1);
    auto it = q_[n].find(cell);
    if (it != q_[n].end()) return it->second;
  }
  const zmod::Ring& ring = tgt_->ring();
  BarChain single;
  single.add(cell, src_->group().identity(), 1, ring);
  Vector z = apply(n, src_->from_bar_cell(n, cell));
  const Vector down = tgt_->from_bar(n, bar_map(phi_, ring, single));
  const Vector back = homotopy_from_bar(n - 1, bar_boundary(src_->group(), ring, single));
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = ring.sub(ring.sub(z[i], down[i]), back[i]);
  Vector q = tgt_->homotopy(n, z);
  std::lock_guard<std::mutex> lock(memo_mutex_);
  return q_[n].emplace(cell, std::move(q)).first->second;
}

Vector ComparisonMap::homotopy_from_bar(int n, const BarChain& x) const {
  const zmod::Ring& ring = tgt_->ring();
  Vector out(tgt_->dim(n + 1), 0);
  for (const auto& [key, c] : x.terms()) {
    const Vector v = right_mul(tgt_->group(), homotopy_from_bar(n, key.first), phi_(key.second));
    for (std::size_t i = 0; i < out.size(); ++i)
      if (v[i]) out[i] = ring.add(out[i], ring.mul(c, v[i]));
  }
  return out;
}

// --- CochainComplex ---------------------------------------------------------

CochainComplex::CochainComplex(std::shared_ptr<const Resolution> res, PrimaryComponent comp)
    : res_(std::move(res)), comp_(std::move(comp)) {
  require(comp_.ring == res_->ring(), Errc::InvalidInput, "coefficient ring mismatch");
}

const zmod::Matrix& CochainComplex::differential(int n) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = diff_.find(n);
  if (it != diff_.end()) return it->second;
  require(n >= 0 && n < res_->top(), Errc::DegreeTooLarge, "cochain differential beyond the resolution");
  const std::size_t m = comp_.rank(), gs = res_->group().size();
  const zmod::Ring& ring = comp_.ring;
  zmod::Matrix d(dim(n + 1), dim(n));
  for (std::size_t jp = 0; jp < res_->rank(n + 1); ++jp) {
    const Vector& db = res_->boundary_of_generator(n + 1, jp);
    for (std::size_t idx = 0; idx < db.size(); ++idx) {
      if (db[idx] == 0) continue;
      const std::size_t i = idx / gs;
      const zmod::Matrix& mg = comp_.action[idx % gs];
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) {
          auto& slot = d(jp * m + r, i * m + c);
          slot = ring.add(slot, ring.mul(db[idx], mg(r, c)));
        }
    }
  }
  return diff_.emplace(n, std::move(d)).first->second;
}

std::vector<Vector> CochainComplex::relations(int n) const {
  std::vector<Vector> out;
  const std::size_t m = comp_.rank();
  for (std::size_t j = 0; j < res_->rank(n); ++j)
    for (const auto& r : comp_.relations()) {
      Vector v(dim(n), 0);
      for (std::size_t t = 0; t < m; ++t) v[j * m + t] = r[t];
      out.push_back(std::move(v));
    }
  return out;
}

Vector CochainComplex::reduce(int n, Vector u) const {
  const std::size_t m = comp_.rank();
  for (std::size_t j = 0; j < res_->rank(n); ++j)
    for (std::size_t t = 0; t < m; ++t) {
      const std::int64_t q = comp_.ring.power(comp_.exps[t]);
      u[j * m + t] = ((u[j * m + t] % q) + q) % q;
    }
  return u;
}

bool CochainComplex::is_zero(int n, const Vector& u) const {
  for (auto x : reduce(n, u))
    if (x) return false;
  return true;
}

Vector CochainComplex::evaluate(int n, const Vector& u, const Vector& x) const {
  const std::size_t m = comp_.rank(), gs = res_->group().size();
  const zmod::Ring& ring = comp_.ring;
  Vector out(m, 0);
  (void)n;
  for (std::size_t idx = 0; idx < x.size(); ++idx) {
    if (x[idx] == 0) continue;
    const std::size_t i = idx / gs;
    const zmod::Matrix& mg = comp_.action[idx % gs];
    for (std::size_t r = 0; r < m; ++r) {
      std::int64_t s = 0;
      for (std::size_t c = 0; c < m; ++c) s = ring.add(s, ring.mul(mg(r, c), u[i * m + c]));
      out[r] = ring.add(out[r], ring.mul(x[idx], s));
    }
  }
  return comp_.reduce(out);
}

bool CochainComplex::is_cocycle(int n, const Vector& u) const {
  return is_zero(n + 1, differential(n).multiply(comp_.ring, u));
}

const zmod::Subquotient& CochainComplex::cohomology(int n) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = coh_.find(n);
    if (it != coh_.end()) return it->second;
  }
  const zmod::Ring& ring = comp_.ring;
  auto z = zmod::preimage(ring, differential(n), relations(n + 1));
  auto b = relations(n);
  if (n > 0) {
    const zmod::Matrix& prev = differential(n - 1);
    for (std::size_t c = 0; c < prev.cols(); ++c) b.push_back(prev.column(c));
  }
  zmod::Subquotient sq(ring, dim(n), z, b);
  std::lock_guard<std::mutex> lock(mutex_);
  return coh_.emplace(n, std::move(sq)).first->second;
}

}  // namespace obstower::res
