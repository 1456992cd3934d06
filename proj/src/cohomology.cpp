#include "obstower/cohomology.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "obstower/error.hpp"

namespace obstower {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t m) {
  a %= m;
  return a < 0 ? a + m : a;
}

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= b;
  return r;
}

int complex_top(std::size_t n) { return std::max<int>(3, static_cast<int>(n) + 1); }

}  // namespace

// --- Cochain ----------------------------------------------------------------

Cochain::Cochain(GModule module, std::size_t degree) : module_(std::move(module)), degree_(degree) {
  require(degree <= 6, Errc::DegreeTooLarge, "cochain degree too large");
  tuples_ = ipow(module_.group().size(), degree);
  require(tuples_ * std::max<std::size_t>(module_.rank(), 1) <= (std::size_t{1} << 26), Errc::DegreeTooLarge,
          "cochain too large to store densely");
  values_.assign(tuples_ * module_.rank(), 0);
}

Cochain Cochain::from_values(GModule module, std::size_t degree, std::vector<std::int64_t> values) {
  Cochain c(std::move(module), degree);
  require(values.size() == c.values_.size(), Errc::InvalidInput, "cochain value array has wrong length");
  const std::size_t r = c.module_.rank();
  for (std::size_t t = 0; t < c.tuples_; ++t)
    for (std::size_t i = 0; i < r; ++i) c.values_[t * r + i] = mod(values[t * r + i], c.module_.factors()[i]);
  require(c.is_normalized(), Errc::InvalidInput, "cochain is not normalized");
  return c;
}

std::size_t Cochain::flat_index(const std::vector<Elem>& args) const {
  require(args.size() == degree_, Errc::InvalidInput, "wrong number of cochain arguments");
  std::size_t x = 0;
  for (Elem a : args) {
    require(a < group().size(), Errc::InvalidInput, "cochain argument out of range");
    x = x * group().size() + a;
  }
  return x;
}

std::vector<Elem> Cochain::args_of(std::size_t flat) const {
  std::vector<Elem> args(degree_);
  for (std::size_t i = degree_; i-- > 0;) {
    args[i] = static_cast<Elem>(flat % group().size());
    flat /= group().size();
  }
  return args;
}

ModVec Cochain::at_flat(std::size_t flat) const {
  const std::size_t r = module_.rank();
  return ModVec(values_.begin() + static_cast<std::ptrdiff_t>(flat * r),
                values_.begin() + static_cast<std::ptrdiff_t>((flat + 1) * r));
}

ModVec Cochain::at(const std::vector<Elem>& args) const { return at_flat(flat_index(args)); }

void Cochain::set_flat(std::size_t flat, const ModVec& v) {
  const ModVec w = module_.reduce(v);
  std::copy(w.begin(), w.end(), values_.begin() + static_cast<std::ptrdiff_t>(flat * module_.rank()));
}

void Cochain::set(const std::vector<Elem>& args, const ModVec& v) { set_flat(flat_index(args), v); }

bool Cochain::is_normalized() const {
  for (std::size_t t = 0; t < tuples_; ++t) {
    const auto args = args_of(t);
    if (std::find(args.begin(), args.end(), group().identity()) == args.end()) continue;
    if (!module_.is_zero(at_flat(t))) return false;
  }
  return true;
}

bool Cochain::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](std::int64_t x) { return x == 0; });
}

Cochain Cochain::operator+(const Cochain& o) const {
  require(o.degree_ == degree_ && o.module_ == module_, Errc::InvalidInput, "adding incompatible cochains");
  Cochain out = *this;
  const std::size_t r = module_.rank();
  for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = mod(values_[i] + o.values_[i], module_.factors()[i % r]);
  return out;
}

Cochain Cochain::operator-(const Cochain& o) const { return *this + o.scaled(-1); }

Cochain Cochain::scaled(std::int64_t c) const {
  Cochain out = *this;
  const std::size_t r = module_.rank();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const std::int64_t d = module_.factors()[i % r];
    out.values_[i] = mod(mod(values_[i], d) * mod(c, d), d);
  }
  return out;
}

Cochain Cochain::pullback(const GroupHom& psi) const {
  require(psi.target().same_as(group()), Errc::TargetMismatch, "pullback along a map into another group");
  Cochain out(module_.pullback(psi), degree_);
  for (std::size_t t = 0; t < out.tuples_; ++t) {
    auto args = out.args_of(t);
    for (auto& a : args) a = psi(a);
    out.set_flat(t, at(args));
  }
  return out;
}

Cochain Cochain::with_module(const GModule& m) const {
  require(m.group().same_as(group()) && m.factors() == module_.factors(), Errc::TargetMismatch,
          "module does not match the cochain carrier");
  Cochain out = *this;
  out.module_ = m;
  return out;
}

Cochain coboundary(const Cochain& f) {
  const GModule& a = f.module();
  const FiniteGroup& g = f.group();
  const std::size_t n = f.degree();
  Cochain out(a, n + 1);
  std::vector<Elem> face(n);
  for (std::size_t t = 0; t < out.tuple_count(); ++t) {
    const auto args = out.args_of(t);
    if (std::find(args.begin(), args.end(), g.identity()) != args.end()) continue;
    std::copy(args.begin() + 1, args.end(), face.begin());
    ModVec v = f.at(face);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0, src = 0; k < n; ++k, ++src) {
        if (k == i) {
          face[k] = g.mul(args[src], args[src + 1]);
          ++src;
        } else {
          face[k] = args[src];
        }
      }
      const ModVec term = f.at(face);
      v = (i % 2 == 0) ? a.sub(v, term) : a.add(v, term);
    }
    std::copy(args.begin(), args.end() - 1, face.begin());
    const ModVec last = a.act(f.at(face), args[n]);
    v = (n % 2 == 0) ? a.sub(v, last) : a.add(v, last);
    out.set_flat(t, v);
  }
  return out;
}

bool is_cocycle(const Cochain& f) { return coboundary(f).is_zero(); }

// --- cochain complexes ------------------------------------------------------

std::vector<std::shared_ptr<const res::CochainComplex>> cochain_complexes(const GModule& a, int top) {
  struct Entry {
    GModule module;
    int top;
    std::vector<std::shared_ptr<const res::CochainComplex>> complexes;
  };
  static std::mutex mutex;
  static std::multimap<std::uint64_t, Entry> cache;
  std::uint64_t key = a.group().fingerprint();
  for (auto d : a.factors()) key = key * 1000003ULL + static_cast<std::uint64_t>(d);
  for (Elem g = 0; g < a.group().size(); ++g)
    for (auto x : a.matrix(g)) key = key * 31ULL + static_cast<std::uint64_t>(x);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto range = cache.equal_range(key);
    for (auto it = range.first; it != range.second; ++it)
      if (it->second.top >= top && it->second.module == a) return it->second.complexes;
  }
  std::vector<std::shared_ptr<const res::CochainComplex>> out;
  for (auto& comp : a.primary_components()) {
    auto r = res::Resolution::get(a.group(), comp.ring, top);
    out.push_back(std::make_shared<const res::CochainComplex>(r, std::move(comp)));
  }
  std::lock_guard<std::mutex> lock(mutex);
  if (cache.size() > 2048) cache.clear();
  cache.emplace(key, Entry{a, top, out});
  return out;
}

zmod::Vector evaluate_on_bar(const Cochain& f, const PrimaryComponent& comp, const res::BarChain& x) {
  const GModule& a = f.module();
  const zmod::Ring& ring = comp.ring;
  const std::size_t m = comp.rank();
  zmod::Vector out(m, 0);
  for (const auto& [key, coef] : x.terms()) {
    const zmod::Vector v = a.project(comp, f.at(key.first));
    const zmod::Matrix& mg = comp.action[key.second];
    for (std::size_t r = 0; r < m; ++r) {
      std::int64_t s = 0;
      for (std::size_t c = 0; c < m; ++c) s = ring.add(s, ring.mul(mg(r, c), v[c]));
      out[r] = ring.add(out[r], ring.mul(coef, s));
    }
  }
  return comp.reduce(out);
}

// --- CohomologyGroup --------------------------------------------------------

CohomologyGroup::CohomologyGroup(GModule module, std::size_t degree, std::vector<Part> parts)
    : module_(std::move(module)), degree_(degree), parts_(std::move(parts)) {
  for (const auto& part : parts_) {
    const auto& sq = part.complex->cohomology(static_cast<int>(degree_));
    for (int e : sq.exponents()) orders_.push_back(part.complex->ring().power(e));
  }
}

std::vector<std::int64_t> CohomologyGroup::invariant_factors() const { return obstower::invariant_factors(orders_); }

std::uint64_t CohomologyGroup::size() const {
  std::uint64_t s = 1;
  for (auto o : orders_) {
    if (s > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(o)) return std::uint64_t{1} << 63;
    s *= static_cast<std::uint64_t>(o);
  }
  return s;
}

std::vector<zmod::Vector> CohomologyGroup::parts_of(const Cochain& f) const {
  const int n = static_cast<int>(degree_);
  std::vector<zmod::Vector> out;
  for (const auto& part : parts_) {
    const auto& cx = *part.complex;
    const std::size_t m = cx.component().rank();
    zmod::Vector u(cx.dim(n), 0);
    for (std::size_t j = 0; j < cx.resolution().rank(n); ++j) {
      const auto v = evaluate_on_bar(f, cx.component(), cx.resolution().to_bar(n, j));
      std::copy(v.begin(), v.end(), u.begin() + static_cast<std::ptrdiff_t>(j * m));
    }
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<std::int64_t> CohomologyGroup::coordinates_of_parts(const std::vector<zmod::Vector>& cocycles) const {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const auto& cx = *parts_[i].complex;
    require(cx.is_cocycle(static_cast<int>(degree_), cocycles[i]), Errc::NotACocycle, "cochain is not a cocycle");
    for (auto c : cx.cohomology(static_cast<int>(degree_)).coordinates(cocycles[i])) out.push_back(c);
  }
  return out;
}

std::vector<std::int64_t> CohomologyGroup::coordinates(const Cochain& f) const {
  require(f.degree() == degree_, Errc::InvalidInput, "cocycle degree does not match");
  require(f.module() == module_, Errc::TargetMismatch, "cocycle has a different coefficient module");
  require(is_cocycle(f), Errc::NotACocycle, "cochain is not a cocycle");
  return coordinates_of_parts(parts_of(f));
}

bool CohomologyGroup::is_coboundary(const Cochain& f) const {
  for (auto c : coordinates(f))
    if (c != 0) return false;
  return true;
}

std::vector<std::int64_t> CohomologyGroup::reduce_coordinates(std::vector<std::int64_t> coords) const {
  require(coords.size() == orders_.size(), Errc::InvalidInput, "coordinate vector has wrong length");
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = mod(coords[i], orders_[i]);
  return coords;
}

Cochain CohomologyGroup::from_parts(const std::vector<zmod::Vector>& us) const {
  const int n = static_cast<int>(degree_);
  Cochain f(module_, degree_);
  const FiniteGroup& g = group();
  for (std::size_t t = 0; t < f.tuple_count(); ++t) {
    const auto args = f.args_of(t);
    if (std::find(args.begin(), args.end(), g.identity()) != args.end()) continue;
    ModVec v = module_.zero();
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      const auto& cx = *parts_[i].complex;
      const auto x = cx.resolution().from_bar_cell(n, args);
      v = module_.add(v, module_.include(cx.component(), cx.evaluate(n, us[i], x)));
    }
    f.set_flat(t, v);
  }
  return f;
}

Cochain CohomologyGroup::combination(const std::vector<std::int64_t>& coords_in) const {
  const auto coords = reduce_coordinates(coords_in);
  std::vector<zmod::Vector> us;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const auto& cx = *parts_[i].complex;
    const auto& sq = cx.cohomology(static_cast<int>(degree_));
    zmod::Vector u(cx.dim(static_cast<int>(degree_)), 0);
    for (std::size_t k = 0; k < sq.ngens(); ++k) {
      const std::int64_t c = coords[parts_[i].offset + k];
      if (c == 0) continue;
      const auto& rep = sq.representative(k);
      for (std::size_t t = 0; t < u.size(); ++t) u[t] = cx.ring().add(u[t], cx.ring().mul(cx.ring().reduce(c), rep[t]));
    }
    us.push_back(std::move(u));
  }
  return from_parts(us);
}

Cochain CohomologyGroup::representative(std::size_t i) const {
  std::vector<std::int64_t> coords(orders_.size(), 0);
  coords.at(i) = 1;
  return combination(coords);
}

std::vector<std::vector<std::int64_t>> CohomologyGroup::all_coordinates() const {
  require(size() <= 1'000'000, Errc::SearchBudgetExceeded, "cohomology group too large to enumerate");
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> c(orders_.size(), 0);
  for (;;) {
    out.push_back(c);
    std::size_t i = c.size();
    while (i > 0) {
      --i;
      if (++c[i] < orders_[i]) break;
      c[i] = 0;
      if (i == 0) return out;
    }
    if (c.empty()) return out;
  }
}

CohomologyGroup cohomology(const GModule& a, std::size_t n, CohomologyOptions opts) {
  require(n <= opts.max_degree, Errc::DegreeTooLarge, "cohomological degree exceeds the configured budget");
  std::vector<CohomologyGroup::Part> parts;
  std::size_t offset = 0;
  for (auto& cx : cochain_complexes(a, complex_top(n))) {
    parts.push_back({cx, offset});
    offset += cx->cohomology(static_cast<int>(n)).ngens();
  }
  return CohomologyGroup(a, n, std::move(parts));
}

std::optional<Cochain> solve_coboundary(const Cochain& c) {
  const std::size_t n = c.degree();
  require(n >= 1, Errc::InvalidInput, "no coboundaries in degree 0");
  require(is_cocycle(c), Errc::NotACocycle, "cochain is not a cocycle");
  const GModule& a = c.module();
  const int ni = static_cast<int>(n);
  auto complexes = cochain_complexes(a, complex_top(n));
  std::vector<zmod::Vector> vs;
  for (const auto& cxp : complexes) {
    const auto& cx = *cxp;
    const std::size_t m = cx.component().rank();
    zmod::Vector u(cx.dim(ni), 0);
    for (std::size_t j = 0; j < cx.resolution().rank(ni); ++j) {
      const auto v = evaluate_on_bar(c, cx.component(), cx.resolution().to_bar(ni, j));
      std::copy(v.begin(), v.end(), u.begin() + static_cast<std::ptrdiff_t>(j * m));
    }
    const zmod::Matrix& d = cx.differential(ni - 1);
    const auto rel = cx.relations(ni);
    zmod::Matrix sys = d.hconcat(zmod::Matrix::from_columns(d.rows(), rel));
    auto sol = zmod::SmithForm::compute(cx.ring(), sys).solve(u);
    if (!sol) return std::nullopt;
    sol->resize(d.cols());
    vs.push_back(std::move(*sol));
  }
  Cochain w(a, n - 1);
  const FiniteGroup& g = a.group();
  for (std::size_t t = 0; t < w.tuple_count(); ++t) {
    const auto args = w.args_of(t);
    if (std::find(args.begin(), args.end(), g.identity()) != args.end()) continue;
    ModVec v = a.zero();
    for (std::size_t i = 0; i < complexes.size(); ++i) {
      const auto& cx = *complexes[i];
      const auto& r = cx.resolution();
      v = a.add(v, a.include(cx.component(), cx.evaluate(ni - 1, vs[i], r.from_bar_cell(ni - 1, args))));
      const auto corr = evaluate_on_bar(c, cx.component(), r.bar_comparison_homotopy(ni - 1, args));
      v = a.sub(v, a.include(cx.component(), corr));
    }
    w.set_flat(t, v);
  }
  return w;
}

// --- bar complex ------------------------------------------------------------

namespace {

// Non-identity tuples of length n, as element vectors, in lexicographic order.
std::vector<std::vector<Elem>> normalized_cells(const FiniteGroup& g, std::size_t n) {
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> cur(n, 1);
  if (g.size() == 1) return n == 0 ? std::vector<std::vector<Elem>>{{}} : out;
  for (;;) {
    out.push_back(cur);
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++cur[i] < g.size()) break;
      cur[i] = 1;
      if (i == 0) return out;
    }
    if (n == 0) return out;
  }
}

std::size_t cell_index(const std::vector<Elem>& cell, std::size_t base) {
  std::size_t x = 0;
  for (Elem e : cell) x = x * base + (e - 1);
  return x;
}

// Terms of the coboundary at a cell of degree n+1: (face cell, sign, acting element or identity).
struct Term {
  std::vector<Elem> face;
  int sign;
  Elem act;
};

std::vector<Term> coboundary_terms(const FiniteGroup& g, const std::vector<Elem>& cell) {
  const std::size_t n1 = cell.size();
  std::vector<Term> out;
  out.push_back({std::vector<Elem>(cell.begin() + 1, cell.end()), 1, g.identity()});
  for (std::size_t i = 0; i + 1 < n1; ++i) {
    const Elem prod = g.mul(cell[i], cell[i + 1]);
    if (prod == g.identity()) continue;
    std::vector<Elem> face;
    for (std::size_t t = 0; t < n1; ++t) {
      if (t == i) {
        face.push_back(prod);
        ++t;
      } else {
        face.push_back(cell[t]);
      }
    }
    out.push_back({face, (i % 2 == 0) ? -1 : 1, g.identity()});
  }
  out.push_back({std::vector<Elem>(cell.begin(), cell.end() - 1), (n1 % 2 == 0) ? 1 : -1, cell.back()});
  return out;
}

}  // namespace

BarComplex bar_complex(const GModule& a, std::size_t max_degree, std::size_t degree_budget) {
  require(max_degree <= degree_budget, Errc::DegreeTooLarge, "bar complex degree exceeds the budget");
  const FiniteGroup& g = a.group();
  const std::size_t base = g.size() - 1, r = a.rank();
  BarComplex out;
  for (std::size_t n = 0; n <= max_degree + 1; ++n) out.cochain_ranks.push_back(ipow(base, n));
  for (std::size_t n = 0; n <= max_degree; ++n) {
    const std::size_t rows = out.cochain_ranks[n + 1] * r, cols = out.cochain_ranks[n] * r;
    require(rows * cols <= 50'000'000, Errc::DegreeTooLarge, "bar complex matrix too large");
    zint::IntMatrix d(rows, cols);
    for (const auto& cell : normalized_cells(g, n + 1)) {
      const std::size_t row0 = cell_index(cell, base) * r;
      for (const auto& term : coboundary_terms(g, cell)) {
        const std::size_t col0 = cell_index(term.face, base) * r;
        const auto& m = a.matrix(term.act);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j) {
            auto& slot = d.at(row0 + i, col0 + j);
            slot = mod(slot + term.sign * m[i * r + j], a.factors()[i]);
          }
      }
    }
    out.differentials.push_back(std::move(d));
  }
  return out;
}

std::vector<std::int64_t> bar_cohomology_orders(const GModule& a, std::size_t n) {
  const FiniteGroup& g = a.group();
  const std::size_t base = g.size() - 1;
  std::vector<std::int64_t> out;
  for (const auto& comp : a.primary_components()) {
    const std::size_t m = comp.rank();
    const zmod::Ring& ring = comp.ring;
    auto build = [&](std::size_t deg) {  // d^deg over R
      zmod::Matrix d(ipow(base, deg + 1) * m, ipow(base, deg) * m);
      for (const auto& cell : normalized_cells(g, deg + 1)) {
        const std::size_t row0 = cell_index(cell, base) * m;
        for (const auto& term : coboundary_terms(g, cell)) {
          const std::size_t col0 = cell_index(term.face, base) * m;
          const auto& mg = comp.action[term.act];
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
              auto& slot = d(row0 + i, col0 + j);
              slot = ring.reduce(slot + term.sign * mg(i, j));
            }
        }
      }
      return d;
    };
    auto rels = [&](std::size_t deg) {
      std::vector<zmod::Vector> out_rel;
      const std::size_t cells = ipow(base, deg);
      for (std::size_t c = 0; c < cells; ++c)
        for (const auto& r : comp.relations()) {
          zmod::Vector v(cells * m, 0);
          for (std::size_t t = 0; t < m; ++t) v[c * m + t] = r[t];
          out_rel.push_back(std::move(v));
        }
      return out_rel;
    };
    auto z = zmod::preimage(ring, build(n), rels(n + 1));
    auto b = rels(n);
    if (n > 0) {
      const auto prev = build(n - 1);
      for (std::size_t c = 0; c < prev.cols(); ++c) b.push_back(prev.column(c));
    }
    zmod::Subquotient sq(ring, ipow(base, n) * m, z, b);
    for (int e : sq.exponents()) out.push_back(ring.power(e));
  }
  return out;
}

// --- extensions -------------------------------------------------------------

ModVec ExtensionDatum::kernel_coords(Elem x) const {
  const std::int64_t idx = kernel_of.at(x);
  require(idx >= 0, Errc::InvalidInput, "element is not in the kernel");
  return kernel.element(static_cast<std::size_t>(idx));
}

ExtensionDatum ExtensionDatum::from_surjection(const GroupHom& p) {
  require(p.is_surjective(), Errc::InvalidInput, "extension projection is not surjective");
  const FiniteGroup& total = p.source();
  const FiniteGroup& base = p.target();
  const Subgroup k = p.kernel();
  AbelianStructure st;
  try {
    st = abelian_structure(k);
  } catch (const Error& e) {
    if (e.code() == Errc::NotAbelian) fail(Errc::NotAbelianKernel, "extension kernel is not abelian");
    throw;
  }
  ExtensionDatum e;
  e.base = base;
  e.total = total;
  e.projection = p;
  e.section.assign(base.size(), static_cast<Elem>(total.size()));
  for (Elem x = 0; x < total.size(); ++x)
    if (e.section[p(x)] == total.size()) e.section[p(x)] = x;
  const std::size_t r = st.factors.size();
  std::vector<std::vector<std::int64_t>> mats(base.size(), std::vector<std::int64_t>(r * r, 0));
  for (Elem g = 0; g < base.size(); ++g)
    for (std::size_t j = 0; j < r; ++j) {
      const ModVec& col = st.coordinates(total.conj(st.basis[j], e.section[g]));
      for (std::size_t i = 0; i < r; ++i) mats[g][i * r + j] = col[i];
    }
  e.kernel = GModule::from_element_matrices(base, st.factors, std::move(mats));
  e.embedding = st.element_of;
  e.kernel_of.assign(total.size(), -1);
  for (Elem x : k.elements()) e.kernel_of[x] = static_cast<std::int64_t>(e.kernel.index_of(st.coordinates(x)));
  return e;
}

ExtensionDatum ExtensionDatum::with_section(std::vector<Elem> s) const {
  ExtensionDatum e = *this;
  require(s.size() == base.size(), Errc::InvalidInput, "section has wrong length");
  require(s[base.identity()] == total.identity(), Errc::InvalidInput, "section must fix the identity");
  for (Elem g = 0; g < base.size(); ++g)
    require(s[g] < total.size() && projection(s[g]) == g, Errc::InvalidInput, "section does not split the projection");
  e.section = std::move(s);
  return e;
}

void ExtensionDatum::validate() const {
  require(projection.source().same_as(total) && projection.target().same_as(base), Errc::InvalidInput,
          "projection has wrong source or target");
  require(projection.is_homomorphism() && projection.is_surjective(), Errc::InvalidInput,
          "projection is not a surjective homomorphism");
  require(section.size() == base.size() && section[0] == total.identity(), Errc::InvalidInput, "bad section");
  for (Elem g = 0; g < base.size(); ++g) require(projection(section[g]) == g, Errc::InvalidInput, "bad section");
  require(embedding.size() == kernel.order(), Errc::InvalidInput, "embedding has wrong size");
  std::size_t kernel_size = 0;
  for (Elem x = 0; x < total.size(); ++x) kernel_size += projection(x) == base.identity();
  require(kernel_size == kernel.order(), Errc::InvalidInput, "kernel size does not match the module");
  for (std::size_t i = 0; i < kernel.order(); ++i) {
    const ModVec a = kernel.element(i);
    require(projection(embedding[i]) == base.identity() && kernel_of[embedding[i]] == static_cast<std::int64_t>(i),
            Errc::InvalidInput, "embedding does not land in the kernel");
    for (std::size_t j = 0; j < kernel.order(); ++j)
      require(total.mul(embedding[i], embedding[j]) == iota(kernel.add(a, kernel.element(j))), Errc::InvalidInput,
              "embedding is not a homomorphism");
    for (Elem g = 0; g < base.size(); ++g)
      require(total.conj(embedding[i], section[g]) == iota(kernel.act(a, g)), Errc::InvalidInput,
              "conjugation does not induce the stored action");
  }
}

Cochain ExtensionDatum::factor_set() const {
  Cochain c(kernel, 2);
  for (Elem g = 0; g < base.size(); ++g)
    for (Elem h = 0; h < base.size(); ++h) {
      const Elem x = total.mul(total.inv(section[base.mul(g, h)]), total.mul(section[g], section[h]));
      c.set({g, h}, kernel_coords(x));
    }
  return c;
}

bool CohomologyClass::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](std::int64_t x) { return x == 0; });
}

CohomologyClass class_of(const Cochain& cocycle) {
  CohomologyClass out;
  out.group = cohomology(cocycle.module(), cocycle.degree());
  out.coords = out.group.coordinates(cocycle);
  out.cocycle = cocycle;
  return out;
}

CohomologyClass extension_class(const ExtensionDatum& e) { return class_of(e.factor_set()); }

ExtensionDatum extension_from_cocycle(const Cochain& c) {
  require(c.degree() == 2, Errc::InvalidInput, "factor set must have degree 2");
  require(c.is_normalized(), Errc::NotACocycle, "factor set is not normalized");
  require(is_cocycle(c), Errc::NotACocycle, "factor set is not a cocycle");
  const GModule& a = c.module();
  const FiniteGroup& g = a.group();
  const std::size_t na = a.order(), ng = g.size(), n = na * ng;
  require(n <= 4096, Errc::InvalidInput, "extension too large");
  std::vector<std::vector<std::size_t>> act(na, std::vector<std::size_t>(ng));
  std::vector<ModVec> el(na);
  for (std::size_t i = 0; i < na; ++i) el[i] = a.element(i);
  for (std::size_t i = 0; i < na; ++i)
    for (Elem h = 0; h < ng; ++h) act[i][h] = a.index_of(a.act(el[i], h));
  std::vector<std::vector<std::size_t>> add(na, std::vector<std::size_t>(na));
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) add[i][j] = a.index_of(a.add(el[i], el[j]));
  std::vector<std::size_t> cidx(ng * ng);
  for (Elem x = 0; x < ng; ++x)
    for (Elem y = 0; y < ng; ++y) cidx[x * ng + y] = a.index_of(c.at({x, y}));
  std::vector<std::vector<Elem>> table(n, std::vector<Elem>(n));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      const Elem x = static_cast<Elem>(u / na), y = static_cast<Elem>(v / na);
      const std::size_t ai = u % na, bi = v % na;
      const std::size_t s = add[add[act[ai][y]][bi]][cidx[x * ng + y]];
      table[u][v] = static_cast<Elem>(g.mul(x, y) * na + s);
    }
  std::vector<Elem> gens;
  for (Elem s : g.generators()) gens.push_back(static_cast<Elem>(s * na));
  for (std::size_t i = 0; i < a.rank(); ++i) {
    ModVec e = a.zero();
    e[i] = 1;
    gens.push_back(static_cast<Elem>(a.index_of(e)));
  }
  std::vector<Elem> old;
  FiniteGroup total = FiniteGroup::from_trusted_table(table, gens, g.name() + "~A", &old);
  std::vector<Elem> new_of(n);
  for (std::size_t i = 0; i < n; ++i) new_of[old[i]] = static_cast<Elem>(i);
  ExtensionDatum e;
  e.base = g;
  e.kernel = a;
  e.total = total;
  std::vector<Elem> proj(n);
  e.kernel_of.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    proj[i] = static_cast<Elem>(old[i] / na);
    if (old[i] / na == 0) e.kernel_of[i] = static_cast<std::int64_t>(old[i] % na);
  }
  e.projection = GroupHom(total, g, std::move(proj));
  e.embedding.resize(na);
  for (std::size_t i = 0; i < na; ++i) e.embedding[i] = new_of[i];
  e.section.resize(ng);
  for (Elem x = 0; x < ng; ++x) e.section[x] = new_of[x * na];
  return e;
}

ExtensionDatum semidirect_product(const GModule& a) { return extension_from_cocycle(Cochain(a, 2)); }

CohomologyClass pullback_class(const GroupHom& psi, const CohomologyClass& cls) {
  return class_of(cls.cocycle.pullback(psi));
}

GroupHom torsor_action(const ExtensionDatum& e, const GroupHom& lift, const Cochain& z) {
  require(lift.target().same_as(e.total), Errc::TargetMismatch, "lift does not land in the extension");
  require(z.degree() == 1 && z.group().same_as(lift.source()), Errc::InvalidInput, "z must be a 1-cochain on the source");
  const GModule expected = e.kernel.pullback(e.projection.after(lift));
  require(z.module() == expected, Errc::TargetMismatch, "z has the wrong coefficient module");
  require(is_cocycle(z), Errc::NotACocycle, "z is not a cocycle");
  std::vector<Elem> img(lift.source().size());
  for (Elem g = 0; g < img.size(); ++g) img[g] = e.total.mul(lift(g), e.iota(z.at({g})));
  return GroupHom(lift.source(), e.total, std::move(img));
}

std::vector<Cochain> enumerate_one_cocycles(const GModule& a, std::uint64_t budget) {
  const FiniteGroup& g = a.group();
  const auto& gens = g.generators();
  long double total = 1;
  for (std::size_t i = 0; i < gens.size(); ++i) total *= static_cast<long double>(a.order());
  require(total <= static_cast<long double>(budget), Errc::SearchBudgetExceeded, "too many cocycle candidates");
  std::vector<Cochain> out;
  std::vector<std::size_t> idx(gens.size(), 0);
  for (;;) {
    std::vector<ModVec> z(g.size());
    z[0] = a.zero();
    for (Elem x = 1; x < g.size(); ++x) {
      const Elem par = g.tree_parent(x);
      const std::size_t s = g.tree_generator(x);
      z[x] = a.add(a.act(z[par], gens[s]), a.element(idx[s]));
    }
    bool ok = true;
    for (Elem x = 0; x < g.size() && ok; ++x)
      for (std::size_t s = 0; s < gens.size() && ok; ++s)
        ok = z[g.mul(x, gens[s])] == a.add(a.act(z[x], gens[s]), a.element(idx[s]));
    if (ok) {
      Cochain c(a, 1);
      for (Elem x = 0; x < g.size(); ++x) c.set({x}, z[x]);
      out.push_back(std::move(c));
    }
    std::size_t pos = gens.size();
    while (pos > 0) {
      --pos;
      if (++idx[pos] < a.order()) break;
      idx[pos] = 0;
      if (pos == 0) return out;
    }
    if (gens.empty()) return out;
  }
}

}  // namespace obstower
