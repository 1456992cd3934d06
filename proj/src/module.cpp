#include "obstower/module.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "obstower/error.hpp"

namespace obstower {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t m) {
  a %= m;
  return a < 0 ? a + m : a;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, r = mod(a, m);
  while (r != 0) {
    const std::int64_t t = g / r;
    std::tie(g, r) = std::make_pair(r, g - t * r);
    std::tie(x, x1) = std::make_pair(x1, x - t * x1);
  }
  return mod(x, m);
}

}  // namespace

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<std::int64_t> invariant_factors(const std::vector<std::int64_t>& cyclic_orders) {
  std::map<std::int64_t, std::vector<int>> by_prime;
  for (auto d : cyclic_orders) {
    require(d >= 1, Errc::InvalidInput, "cyclic order must be positive");
    for (auto [p, e] : factorize(d)) by_prime[p].push_back(e);
  }
  std::size_t len = 0;
  for (auto& [p, es] : by_prime) {
    std::sort(es.begin(), es.end(), std::greater<>());
    len = std::max(len, es.size());
  }
  // Largest factor collects the largest power of every prime.
  std::vector<std::int64_t> out(len, 1);
  for (const auto& [p, es] : by_prime)
    for (std::size_t i = 0; i < es.size(); ++i)
      for (int j = 0; j < es[i]; ++j) out[len - 1 - i] *= p;
  return out;
}

// --- PrimaryComponent -------------------------------------------------------

std::vector<zmod::Vector> PrimaryComponent::relations() const {
  std::vector<zmod::Vector> out;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] >= ring.k) continue;
    zmod::Vector v(exps.size(), 0);
    v[i] = ring.power(exps[i]);
    out.push_back(std::move(v));
  }
  return out;
}

zmod::Vector PrimaryComponent::reduce(zmod::Vector v) const {
  for (std::size_t i = 0; i < exps.size(); ++i) v[i] = mod(v[i], ring.power(exps[i]));
  return v;
}

// --- GModule ----------------------------------------------------------------

namespace {

void check_factors(const std::vector<std::int64_t>& f) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    require(f[i] > 1, Errc::InvalidInput, "invariant factors must exceed 1");
    if (i > 0) require(f[i] % f[i - 1] == 0, Errc::InvalidInput, "invariant factors must divide each other");
  }
}

void check_well_defined(const std::vector<std::int64_t>& f, const std::vector<std::int64_t>& m) {
  const std::size_t r = f.size();
  require(m.size() == r * r, Errc::InvalidInput, "action matrix has wrong size");
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      require(mod(f[j] * mod(m[i * r + j], f[i]), f[i]) == 0, Errc::InvalidInput,
              "action matrix is not well defined on the carrier");
}

std::vector<std::int64_t> reduce_rows(const std::vector<std::int64_t>& f, std::vector<std::int64_t> m) {
  const std::size_t r = f.size();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) m[i * r + j] = mod(m[i * r + j], f[i]);
  return m;
}

// a * b with rows reduced mod the factors.
std::vector<std::int64_t> mat_mul(const std::vector<std::int64_t>& f, const std::vector<std::int64_t>& a,
                                  const std::vector<std::int64_t>& b) {
  const std::size_t r = f.size();
  std::vector<std::int64_t> c(r * r, 0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < r; ++k) {
      const std::int64_t x = a[i * r + k];
      if (x == 0) continue;
      for (std::size_t j = 0; j < r; ++j) c[i * r + j] = (c[i * r + j] + x * b[k * r + j]) % f[i];
    }
  return c;
}

std::vector<std::int64_t> identity_matrix(std::size_t r) {
  std::vector<std::int64_t> m(r * r, 0);
  for (std::size_t i = 0; i < r; ++i) m[i * r + i] = 1;
  return m;
}

}  // namespace

GModule GModule::from_generators(const FiniteGroup& g, const std::vector<std::int64_t>& factors,
                                 const std::vector<std::vector<std::int64_t>>& generator_matrices) {
  check_factors(factors);
  require(generator_matrices.size() == g.generators().size(), Errc::InvalidInput,
          "one action matrix per generator expected");
  std::vector<std::vector<std::int64_t>> gen;
  for (const auto& m : generator_matrices) {
    check_well_defined(factors, m);
    gen.push_back(reduce_rows(factors, m));
  }
  std::vector<std::vector<std::int64_t>> all(g.size());
  all[0] = identity_matrix(factors.size());
  for (Elem e = 1; e < g.size(); ++e) all[e] = mat_mul(factors, gen[g.tree_generator(e)], all[g.tree_parent(e)]);
  for (Elem x = 0; x < g.size(); ++x)
    for (std::size_t s = 0; s < gen.size(); ++s)
      require(all[g.mul(x, g.generators()[s])] == mat_mul(factors, gen[s], all[x]), Errc::InvalidInput,
              "action matrices do not satisfy the group relations");
  GModule out;
  out.group_ = g;
  out.factors_ = factors;
  out.matrices_ = std::move(all);
  return out;
}

GModule GModule::trivial(const FiniteGroup& g, const std::vector<std::int64_t>& orders) {
  GModule out;
  out.group_ = g;
  out.factors_ = invariant_factors(orders);
  out.matrices_.assign(g.size(), identity_matrix(out.factors_.size()));
  return out;
}

GModule GModule::from_element_matrices(const FiniteGroup& g, const std::vector<std::int64_t>& factors,
                                       std::vector<std::vector<std::int64_t>> matrices) {
  check_factors(factors);
  require(matrices.size() == g.size(), Errc::InvalidInput, "one action matrix per element expected");
  for (auto& m : matrices) {
    check_well_defined(factors, m);
    m = reduce_rows(factors, std::move(m));
  }
  GModule out;
  out.group_ = g;
  out.factors_ = factors;
  out.matrices_ = std::move(matrices);
  return out;
}

std::size_t GModule::order() const noexcept {
  std::size_t n = 1;
  for (auto d : factors_) n *= static_cast<std::size_t>(d);
  return n;
}

ModVec GModule::act(const ModVec& a, Elem g) const {
  const std::size_t r = rank();
  const auto& m = matrices_[g];
  ModVec out(r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < r; ++j) s = (s + m[i * r + j] * a[j]) % factors_[i];
    out[i] = mod(s, factors_[i]);
  }
  return out;
}

ModVec GModule::add(const ModVec& a, const ModVec& b) const {
  ModVec out(rank());
  for (std::size_t i = 0; i < rank(); ++i) out[i] = mod(a[i] + b[i], factors_[i]);
  return out;
}

ModVec GModule::sub(const ModVec& a, const ModVec& b) const {
  ModVec out(rank());
  for (std::size_t i = 0; i < rank(); ++i) out[i] = mod(a[i] - b[i], factors_[i]);
  return out;
}

ModVec GModule::neg(const ModVec& a) const { return sub(zero(), a); }

ModVec GModule::scale(const ModVec& a, std::int64_t c) const {
  ModVec out(rank());
  for (std::size_t i = 0; i < rank(); ++i) out[i] = mod(mod(a[i], factors_[i]) * mod(c, factors_[i]), factors_[i]);
  return out;
}

ModVec GModule::reduce(ModVec a) const {
  require(a.size() == rank(), Errc::InvalidInput, "module element has wrong length");
  for (std::size_t i = 0; i < rank(); ++i) a[i] = mod(a[i], factors_[i]);
  return a;
}

bool GModule::is_zero(const ModVec& a) const {
  for (std::size_t i = 0; i < rank(); ++i)
    if (mod(a[i], factors_[i]) != 0) return false;
  return true;
}

std::size_t GModule::index_of(const ModVec& a) const {
  std::size_t x = 0;
  for (std::size_t i = 0; i < rank(); ++i)
    x = x * static_cast<std::size_t>(factors_[i]) + static_cast<std::size_t>(mod(a[i], factors_[i]));
  return x;
}

ModVec GModule::element(std::size_t index) const {
  ModVec out(rank());
  for (std::size_t i = rank(); i-- > 0;) {
    out[i] = static_cast<std::int64_t>(index % static_cast<std::size_t>(factors_[i]));
    index /= static_cast<std::size_t>(factors_[i]);
  }
  return out;
}

bool GModule::is_trivial_action() const {
  const auto id = identity_matrix(rank());
  for (const auto& m : matrices_)
    if (m != reduce_rows(factors_, id)) return false;
  return true;
}

GModule GModule::pullback(const GroupHom& psi) const {
  require(psi.target().same_as(group_), Errc::TargetMismatch, "pullback along a map into another group");
  GModule out;
  out.group_ = psi.source();
  out.factors_ = factors_;
  out.matrices_.resize(psi.source().size());
  for (Elem h = 0; h < psi.source().size(); ++h) out.matrices_[h] = matrices_[psi(h)];
  return out;
}

GModule GModule::rebased(const FiniteGroup& g) const {
  require(g.same_as(group_), Errc::TargetMismatch, "rebasing onto a different group");
  GModule out = *this;
  out.group_ = g;
  return out;
}

std::vector<PrimaryComponent> GModule::primary_components() const {
  std::vector<PrimaryComponent> out;
  if (factors_.empty()) return out;
  for (auto [p, top] : factorize(factors_.back())) {
    PrimaryComponent c;
    c.p = p;
    c.ring = zmod::Ring(p, top);
    for (std::size_t i = 0; i < rank(); ++i) {
      std::int64_t d = factors_[i];
      int a = 0;
      std::int64_t pa = 1;
      while (d % p == 0) {
        d /= p;
        pa *= p;
        ++a;
      }
      if (a == 0) continue;
      c.exps.push_back(a);
      c.source.push_back(i);
      c.idempotent.push_back(d == 1 ? 1 : mod(d * inverse_mod(d, pa), factors_[i]));
    }
    const std::size_t m = c.rank();
    c.action.reserve(group_.size());
    for (Elem g = 0; g < group_.size(); ++g) {
      zmod::Matrix mat(m, m);
      for (std::size_t j = 0; j < m; ++j) {
        zmod::Vector e(m, 0);
        e[j] = 1;
        const auto col = project(c, act(include(c, e), g));
        for (std::size_t i = 0; i < m; ++i) mat(i, j) = col[i];
      }
      c.action.push_back(std::move(mat));
    }
    out.push_back(std::move(c));
  }
  return out;
}

zmod::Vector GModule::project(const PrimaryComponent& c, const ModVec& a) const {
  zmod::Vector y(c.rank());
  for (std::size_t i = 0; i < c.rank(); ++i) y[i] = mod(a[c.source[i]], c.ring.power(c.exps[i]));
  return y;
}

ModVec GModule::include(const PrimaryComponent& c, const zmod::Vector& y) const {
  ModVec a = zero();
  for (std::size_t i = 0; i < c.rank(); ++i) {
    const std::size_t s = c.source[i];
    a[s] = mod(a[s] + mod(y[i], factors_[s]) * c.idempotent[i], factors_[s]);
  }
  return a;
}

// --- abelian structure ------------------------------------------------------

std::size_t AbelianStructure::order() const {
  std::size_t n = 1;
  for (auto d : factors) n *= static_cast<std::size_t>(d);
  return n;
}

namespace {

// Row lattice in echelon form, entries past the pivot kept mod `bound`.
class LatticeEchelon {
 public:
  LatticeEchelon(std::size_t width, std::int64_t bound) : width_(width), bound_(bound), rows_(width) {}

  void insert(std::vector<std::int64_t> r) {
    for (std::size_t c = 0; c < width_; ++c) {
      if (r[c] == 0) continue;
      auto& h = rows_[c];
      if (h.empty()) {
        normalize(r, c);
        h = std::move(r);
        return;
      }
      std::int64_t a = h[c], b = r[c];
      // extended gcd
      std::int64_t g0 = a, g1 = b, x0 = 1, x1 = 0, y0 = 0, y1 = 1;
      while (g1 != 0) {
        const std::int64_t t = g0 / g1;
        std::tie(g0, g1) = std::make_pair(g1, g0 - t * g1);
        std::tie(x0, x1) = std::make_pair(x1, x0 - t * x1);
        std::tie(y0, y1) = std::make_pair(y1, y0 - t * y1);
      }
      std::vector<std::int64_t> nh(width_), nr(width_);
      for (std::size_t j = 0; j < width_; ++j) {
        nh[j] = x0 * h[j] + y0 * r[j];
        nr[j] = (a / g0) * r[j] - (b / g0) * h[j];
      }
      normalize(nh, c);
      h = std::move(nh);
      r = std::move(nr);
      for (std::size_t j = c + 1; j < width_; ++j) r[j] = mod(r[j], bound_);
      r[c] = 0;
    }
  }

  zint::IntMatrix transposed() const {
    zint::IntMatrix m(width_, width_);
    for (std::size_t i = 0; i < width_; ++i)
      if (!rows_[i].empty())
        for (std::size_t j = 0; j < width_; ++j) m.at(j, i) = rows_[i][j];
    return m;
  }

 private:
  void normalize(std::vector<std::int64_t>& r, std::size_t c) const {
    if (r[c] < 0)
      for (auto& x : r) x = -x;
    for (std::size_t j = c + 1; j < width_; ++j) r[j] = mod(r[j], bound_);
  }

  std::size_t width_;
  std::int64_t bound_;
  std::vector<std::vector<std::int64_t>> rows_;
};

}  // namespace

AbelianStructure abelian_structure(const Subgroup& a) {
  const FiniteGroup& g = a.parent();
  const auto& el = a.elements();
  for (Elem x : el)
    for (Elem y : el) require(g.mul(x, y) == g.mul(y, x), Errc::NotAbelian, "subgroup is not abelian");

  // Greedy generators.
  std::vector<Elem> gens;
  std::size_t spanned = 1;
  for (Elem x : el) {
    if (spanned == el.size()) break;
    if (generated_subgroup(g, gens).contains(x)) continue;
    gens.push_back(x);
    spanned = generated_subgroup(g, gens).size();
  }
  const std::size_t t = gens.size();
  AbelianStructure out;
  out.coords.assign(g.size(), {});
  if (t == 0) {
    out.coords[g.identity()] = {};
    out.element_of = {g.identity()};
    return out;
  }

  std::int64_t exponent = 1;
  for (Elem x : gens) exponent = std::lcm(exponent, static_cast<std::int64_t>(g.order_of(x)));

  // Spanning-tree coordinates and the relations they induce.
  std::vector<std::vector<std::int64_t>> c(g.size());
  std::vector<Elem> queue{g.identity()};
  c[g.identity()] = std::vector<std::int64_t>(t, 0);
  LatticeEchelon lat(t, exponent);
  for (std::size_t i = 0; i < t; ++i) {
    std::vector<std::int64_t> r(t, 0);
    r[i] = exponent;
    lat.insert(r);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Elem x = queue[head];
    for (std::size_t i = 0; i < t; ++i) {
      const Elem y = g.mul(x, gens[i]);
      auto step = c[x];
      step[i] += 1;
      if (c[y].empty()) {
        c[y] = step;
        queue.push_back(y);
      } else {
        for (std::size_t j = 0; j < t; ++j) step[j] -= c[y][j];
        lat.insert(step);
      }
    }
  }

  auto s = zint::int_smith(lat.transposed(), true);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < s.diagonal.size(); ++i)
    if (s.diagonal[i] > 1) {
      keep.push_back(i);
      out.factors.push_back(s.diagonal[i]);
    }
  for (std::size_t i : keep) {
    Elem b = g.identity();
    for (std::size_t j = 0; j < t; ++j) b = g.mul(b, g.pow(gens[j], s.u_inv.at(j, i)));
    out.basis.push_back(b);
  }
  std::size_t total = 1;
  for (auto d : out.factors) total *= static_cast<std::size_t>(d);
  require(total == el.size(), Errc::InvalidInput, "abelian structure computation failed");
  out.element_of.assign(total, g.identity());
  for (Elem x : el) {
    ModVec y(keep.size(), 0);
    for (std::size_t k = 0; k < keep.size(); ++k) {
      std::int64_t acc = 0;
      for (std::size_t j = 0; j < t; ++j) acc = mod(acc + mod(s.u.at(keep[k], j), out.factors[k]) * c[x][j], out.factors[k]);
      y[k] = acc;
    }
    std::size_t idx = 0;
    for (std::size_t k = 0; k < y.size(); ++k) idx = idx * static_cast<std::size_t>(out.factors[k]) + static_cast<std::size_t>(y[k]);
    out.element_of[idx] = x;
    out.coords[x] = std::move(y);
  }
  return out;
}

}  // namespace obstower
