#include "obstower/arith.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>

#include "obstower/error.hpp"

namespace obstower {

using zmod::Matrix;
using zmod::Vector;

// --- systems ----------------------------------------------------------------

void LocalGlobalSystem::validate() const {
  std::set<std::string> seen;
  for (const auto& v : places) {
    require(!v.label.empty(), Errc::InvalidInput, "place without a label");
    require(seen.insert(v.label).second, Errc::InvalidInput, "duplicate place label " + v.label);
    require(v.decomposition.target().same_as(global), Errc::InvalidInput,
            "decomposition map of " + v.label + " does not target the global group");
    require(v.decomposition.is_homomorphism(), Errc::InvalidInput,
            "decomposition map of " + v.label + " is not a homomorphism");
    require(v.inertia.parent().same_as(v.decomposition.source()), Errc::InvalidInput,
            "inertia of " + v.label + " is not a subgroup of the decomposition group");
    require(is_normal(v.inertia), Errc::InvalidInput, "inertia of " + v.label + " is not normal");
  }
}

std::vector<std::string> LocalGlobalSystem::labels() const {
  std::vector<std::string> out;
  for (const auto& v : places) out.push_back(v.label);
  return out;
}

namespace {

bool inertia_acts_trivially(const Place& v, const GModule& m) {
  const auto& id = m.matrix(m.group().identity());
  for (Elem x : v.inertia.elements())
    if (m.matrix(v.decomposition(x)) != id) return false;
  return true;
}

}  // namespace

std::vector<std::string> ramified_places(const LocalGlobalSystem& sys, const GModule& m) {
  require(m.group().same_as(sys.global), Errc::TargetMismatch, "module is not over the global group");
  std::vector<std::string> out;
  for (const auto& v : sys.places)
    if (!inertia_acts_trivially(v, m)) out.push_back(v.label);
  return out;
}

std::vector<LocalModel> local_models(const LocalGlobalSystem& sys, const GModule& m,
                                     const std::vector<std::string>& ramified) {
  sys.validate();
  require(m.group().same_as(sys.global), Errc::TargetMismatch, "module is not over the global group");
  const auto labels = sys.labels();
  for (const auto& r : ramified)
    require(std::find(labels.begin(), labels.end(), r) != labels.end(), Errc::InvalidInput,
            "unknown place " + r + " in the ramified set");
  std::vector<LocalModel> out;
  for (const auto& v : sys.places) {
    LocalModel lm;
    lm.label = v.label;
    const bool ram = std::find(ramified.begin(), ramified.end(), v.label) != ramified.end();
    if (!ram) {
      require(inertia_acts_trivially(v, m), Errc::RamificationMismatch,
              "inertia acts nontrivially at unramified place " + v.label);
      bool killed = true;
      for (Elem x : v.inertia.elements()) killed = killed && v.decomposition(x) == sys.global.identity();
      if (killed) {
        auto q = quotient(v.decomposition.source(), v.inertia);
        std::vector<Elem> img(q.group.size());
        for (Elem c = 0; c < img.size(); ++c) img[c] = v.decomposition(q.coset_representative[c]);
        lm.unramified = true;
        lm.group = q.group;
        lm.to_global = GroupHom(q.group, sys.global, std::move(img));
        lm.from_decomposition = q.projection;
      }
    }
    if (!lm.unramified) {
      lm.group = v.decomposition.source();
      lm.to_global = v.decomposition;
      lm.from_decomposition = GroupHom::identity(lm.group);
    }
    lm.module = m.pullback(lm.to_global);
    out.push_back(std::move(lm));
  }
  return out;
}

// --- adelic cohomology ------------------------------------------------------

std::uint64_t AdelicCohomology::size() const {
  std::uint64_t s = 1;
  for (const auto& h : local) {
    const std::uint64_t t = h.size();
    if (t != 0 && s > (std::uint64_t{1} << 62) / t) return std::uint64_t{1} << 63;
    s *= t;
  }
  return s;
}

std::vector<std::int64_t> AdelicCohomology::localize(const std::vector<std::int64_t>& coords) const {
  require(coords.size() == global.ngens(), Errc::InvalidInput, "coordinate vector has wrong length");
  std::vector<std::int64_t> out(orders.size(), 0);
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += coords[i] * localization[i][k];
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = ((out[k] % orders[k]) + orders[k]) % orders[k];
  return out;
}

AdelicCohomology adelic_cohomology(const LocalGlobalSystem& sys, const GModule& m, std::size_t n,
                                   const std::vector<std::string>& ramified) {
  AdelicCohomology out;
  out.degree = n;
  out.places = local_models(sys, m, ramified);
  out.global = cohomology(m, n);
  for (const auto& lm : out.places) {
    out.local.push_back(cohomology(lm.module, n));
    for (auto o : out.local.back().orders()) out.orders.push_back(o);
  }
  for (std::size_t i = 0; i < out.global.ngens(); ++i) {
    const Cochain rep = out.global.representative(i);
    std::vector<std::int64_t> row;
    for (std::size_t v = 0; v < out.places.size(); ++v)
      for (auto c : out.local[v].coordinates(rep.pullback(out.places[v].to_global))) row.push_back(c);
    out.localization.push_back(std::move(row));
  }
  return out;
}

// --- compact support --------------------------------------------------------

namespace {

void place_block(Matrix& dst, std::size_t r0, std::size_t c0, const Matrix& src, const zmod::Ring& ring,
                 bool negate) {
  for (std::size_t r = 0; r < src.rows(); ++r)
    for (std::size_t c = 0; c < src.cols(); ++c) dst(r0 + r, c0 + c) = negate ? ring.neg(src(r, c)) : src(r, c);
}

// log_p of the subgroup of sum Z/p^{e_i} generated by the rows.
int log_subgroup(const zmod::Ring& ring, const std::vector<int>& exps, const std::vector<Vector>& rows) {
  const std::size_t r = exps.size();
  if (r == 0) return 0;
  std::vector<Vector> cols = rows;
  int rel = 0;
  for (std::size_t i = 0; i < r; ++i) {
    Vector e(r, 0);
    e[i] = ring.power(exps[i]);
    cols.push_back(std::move(e));
    rel += ring.k - exps[i];
  }
  return zmod::SmithForm::compute(ring, Matrix::from_columns(r, cols)).image_log_size() - rel;
}

int sum_of(const std::vector<int>& v) {
  int s = 0;
  for (int x : v) s += x;
  return s;
}

}  // namespace

struct CompactSupport::Part {
  zmod::Ring ring;
  std::shared_ptr<const res::CochainComplex> global;
  std::vector<std::shared_ptr<const res::CochainComplex>> local;
  std::vector<std::shared_ptr<const res::ComparisonMap>> gamma;

  std::mutex mutex;
  std::map<int, Matrix> loc;  // key n * places + v
  std::map<int, Matrix> diff;
  std::map<int, zmod::Subquotient> coh;

  std::size_t dim(int n) const {
    if (n < 0) return 0;
    std::size_t d = global->dim(n);
    if (n >= 1)
      for (const auto& l : local) d += l->dim(n - 1);
    return d;
  }

  // x -> (x o gamma_v) : C^n(global) -> C^n(L_v)
  Matrix localization(int n, std::size_t v) {
    const int key = n * static_cast<int>(local.size()) + static_cast<int>(v);
    {
      std::lock_guard<std::mutex> lock(mutex);
      auto it = loc.find(key);
      if (it != loc.end()) return it->second;
    }
    const auto& comp = global->component();
    const std::size_t m = comp.rank(), gs = global->resolution().group().size();
    Matrix out(local[v]->dim(n), global->dim(n));
    for (std::size_t j = 0; j < local[v]->resolution().rank(n); ++j) {
      const Vector& img = gamma[v]->on_generator(n, j);
      for (std::size_t idx = 0; idx < img.size(); ++idx) {
        if (img[idx] == 0) continue;
        const std::size_t i = idx / gs;
        const Matrix& mg = comp.action[idx % gs];
        for (std::size_t r = 0; r < m; ++r)
          for (std::size_t c = 0; c < m; ++c) {
            auto& slot = out(j * m + r, i * m + c);
            slot = ring.add(slot, ring.mul(img[idx], mg(r, c)));
          }
      }
    }
    std::lock_guard<std::mutex> lock(mutex);
    return loc.emplace(key, std::move(out)).first->second;
  }

  Matrix differential(int n) {
    {
      std::lock_guard<std::mutex> lock(mutex);
      auto it = diff.find(n);
      if (it != diff.end()) return it->second;
    }
    Matrix d(dim(n + 1), dim(n));
    place_block(d, 0, 0, global->differential(n), ring, false);
    std::size_t row = global->dim(n + 1), col = global->dim(n);
    for (std::size_t v = 0; v < local.size(); ++v) {
      place_block(d, row, 0, localization(n, v), ring, false);
      if (n >= 1) {
        place_block(d, row, col, local[v]->differential(n - 1), ring, true);
        col += local[v]->dim(n - 1);
      }
      row += local[v]->dim(n);
    }
    std::lock_guard<std::mutex> lock(mutex);
    return diff.emplace(n, std::move(d)).first->second;
  }

  std::vector<Vector> relations(int n) const {
    std::vector<Vector> out;
    const std::size_t total = dim(n);
    auto pad = [&](const std::vector<Vector>& rels, std::size_t off) {
      for (const auto& r : rels) {
        Vector v(total, 0);
        std::copy(r.begin(), r.end(), v.begin() + static_cast<std::ptrdiff_t>(off));
        out.push_back(std::move(v));
      }
    };
    pad(global->relations(n), 0);
    if (n >= 1) {
      std::size_t off = global->dim(n);
      for (const auto& l : local) {
        pad(l->relations(n - 1), off);
        off += l->dim(n - 1);
      }
    }
    return out;
  }

  const zmod::Subquotient& cohomology(int n) {
    {
      std::lock_guard<std::mutex> lock(mutex);
      auto it = coh.find(n);
      if (it != coh.end()) return it->second;
    }
    auto z = zmod::preimage(ring, differential(n), relations(n + 1));
    auto b = relations(n);
    if (n > 0) {
      const Matrix prev = differential(n - 1);
      for (std::size_t c = 0; c < prev.cols(); ++c) b.push_back(prev.column(c));
    }
    zmod::Subquotient sq(ring, dim(n), z, b);
    std::lock_guard<std::mutex> lock(mutex);
    return coh.emplace(n, std::move(sq)).first->second;
  }

  // offset of the block of place v inside C^n_c
  std::size_t local_offset(int n, std::size_t v) const {
    std::size_t off = global->dim(n);
    for (std::size_t w = 0; w < v; ++w) off += local[w]->dim(n - 1);
    return off;
  }
};

CompactSupport::CompactSupport(const LocalGlobalSystem& sys, const GModule& m,
                               const std::vector<std::string>& ramified, std::size_t max_degree)
    : module_(m), places_(local_models(sys, m, ramified)), max_degree_(max_degree) {
  const int gtop = static_cast<int>(max_degree) + 2;
  const int ltop = static_cast<int>(max_degree) + 1;
  const auto gcx = cochain_complexes(m, gtop);
  std::vector<std::vector<std::shared_ptr<const res::CochainComplex>>> lcx;
  for (const auto& lm : places_) lcx.push_back(cochain_complexes(lm.module, ltop));
  for (std::size_t c = 0; c < gcx.size(); ++c) {
    auto part = std::make_shared<Part>();
    part->ring = gcx[c]->ring();
    part->global = gcx[c];
    for (std::size_t v = 0; v < places_.size(); ++v) {
      const auto& l = lcx[v].at(c);
      require(l->ring() == part->ring && l->component().exps == gcx[c]->component().exps, Errc::InvalidInput,
              "local and global primary components differ");
      part->local.push_back(l);
      part->gamma.push_back(std::make_shared<const res::ComparisonMap>(
          l->resolution_ptr(), gcx[c]->resolution_ptr(), places_[v].to_global, ltop));
    }
    parts_.push_back(std::move(part));
  }
}

std::vector<std::int64_t> CompactSupport::orders(std::size_t n) const {
  require(n <= max_degree_ + 1, Errc::DegreeTooLarge, "compact-support degree beyond the computed range");
  std::vector<std::int64_t> out;
  for (const auto& p : parts_)
    for (int e : p->cohomology(static_cast<int>(n)).exponents()) out.push_back(p->ring.power(e));
  return out;
}

std::uint64_t CompactSupport::size(std::size_t n) const {
  std::uint64_t s = 1;
  for (auto o : orders(n)) s *= static_cast<std::uint64_t>(o);
  return s;
}

bool CompactSupport::is_cone_cocycle(const Cochain& x, const std::vector<Cochain>& y) const {
  require(y.size() == places_.size(), Errc::InvalidInput, "one local cochain per place is required");
  require(x.module() == module_, Errc::TargetMismatch, "global cochain has a different module");
  if (!is_cocycle(x)) return false;
  for (std::size_t v = 0; v < places_.size(); ++v) {
    require(y[v].module() == places_[v].module, Errc::TargetMismatch, "local cochain has a different module");
    require(y[v].degree() + 1 == x.degree(), Errc::InvalidInput, "local cochain has the wrong degree");
    if (!(x.pullback(places_[v].to_global) == coboundary(y[v]))) return false;
  }
  return true;
}

std::vector<std::int64_t> CompactSupport::coordinates(std::size_t n, const Cochain& x,
                                                      const std::vector<Cochain>& y) const {
  require(n >= 1 && n <= max_degree_ + 1, Errc::DegreeTooLarge, "compact-support degree out of range");
  require(x.degree() == n, Errc::InvalidInput, "global cochain has the wrong degree");
  require(is_cone_cocycle(x, y), Errc::NotACocycle, "pair is not a cone cocycle");
  const int d = static_cast<int>(n);
  std::vector<std::int64_t> out;
  for (const auto& p : parts_) {
    const zmod::Ring& ring = p->ring;
    Vector u(p->dim(d), 0);
    const auto& gc = *p->global;
    const std::size_t gm = gc.component().rank();
    for (std::size_t j = 0; j < gc.resolution().rank(d); ++j) {
      const auto val = evaluate_on_bar(x, gc.component(), gc.resolution().to_bar(d, j));
      std::copy(val.begin(), val.end(), u.begin() + static_cast<std::ptrdiff_t>(j * gm));
    }
    for (std::size_t v = 0; v < places_.size(); ++v) {
      const auto& lc = *p->local[v];
      const std::size_t off = p->local_offset(d, v);
      for (std::size_t j = 0; j < lc.resolution().rank(d - 1); ++j) {
        auto val = evaluate_on_bar(y[v], lc.component(), lc.resolution().to_bar(d - 1, j));
        const auto corr = evaluate_on_bar(x, gc.component(), p->gamma[v]->homotopy_to_bar(d - 1, j));
        for (std::size_t t = 0; t < gm; ++t) u[off + j * gm + t] = ring.add(val[t], corr[t]);
      }
    }
    for (auto c : p->cohomology(d).coordinates(u)) out.push_back(c);
  }
  return out;
}

std::pair<Cochain, std::vector<Cochain>> CompactSupport::representative(std::size_t n, std::size_t i) const {
  require(n <= max_degree_ + 1, Errc::DegreeTooLarge, "compact-support degree out of range");
  const int d = static_cast<int>(n);
  Cochain x(module_, n);
  std::vector<Cochain> y;
  for (const auto& lm : places_) y.emplace_back(lm.module, n == 0 ? 0 : n - 1);
  std::size_t base = 0;
  for (const auto& p : parts_) {
    const auto& sq = p->cohomology(d);
    if (i >= base + sq.ngens()) {
      base += sq.ngens();
      continue;
    }
    const Vector& u = sq.representative(i - base);
    const auto& gc = *p->global;
    const zmod::Ring& ring = p->ring;
    const Vector ux(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(gc.dim(d)));
    const FiniteGroup& g = module_.group();
    for (std::size_t t = 0; t < x.tuple_count(); ++t) {
      const auto args = x.args_of(t);
      if (std::find(args.begin(), args.end(), g.identity()) != args.end()) continue;
      x.set_flat(t, module_.include(gc.component(), gc.evaluate(d, ux, gc.resolution().from_bar_cell(d, args))));
    }
    if (n == 0) return {x, y};
    for (std::size_t v = 0; v < places_.size(); ++v) {
      const auto& lc = *p->local[v];
      const std::size_t off = p->local_offset(d, v);
      const Vector uy(u.begin() + static_cast<std::ptrdiff_t>(off),
                      u.begin() + static_cast<std::ptrdiff_t>(off + lc.dim(d - 1)));
      const GModule& mv = places_[v].module;
      const FiniteGroup& h = mv.group();
      for (std::size_t t = 0; t < y[v].tuple_count(); ++t) {
        const auto args = y[v].args_of(t);
        if (std::find(args.begin(), args.end(), h.identity()) != args.end()) continue;
        auto a = lc.evaluate(d - 1, uy, lc.resolution().from_bar_cell(d - 1, args));
        const auto b = gc.evaluate(d, ux, p->gamma[v]->homotopy_from_bar(d - 1, args));
        for (std::size_t k = 0; k < a.size(); ++k) a[k] = ring.sub(a[k], b[k]);
        y[v].set_flat(t, mv.include(lc.component(), lc.component().reduce(a)));
      }
    }
    return {x, y};
  }
  throw Error(Errc::InvalidInput, "no such compact-support generator");
}

std::vector<std::int64_t> CompactSupport::global_orders(std::size_t n) const {
  std::vector<std::int64_t> out;
  for (const auto& p : parts_)
    for (int e : p->global->cohomology(static_cast<int>(n)).exponents()) out.push_back(p->ring.power(e));
  return out;
}

std::vector<std::int64_t> CompactSupport::adelic_orders(std::size_t n) const {
  std::vector<std::int64_t> out;
  for (const auto& p : parts_)
    for (const auto& l : p->local)
      for (int e : l->cohomology(static_cast<int>(n)).exponents()) out.push_back(p->ring.power(e));
  return out;
}

namespace {

// Images of the generators of one prime part, in that part's coordinates.
using Rows = std::vector<Vector>;

std::vector<std::vector<std::int64_t>> block_diagonal(const std::vector<Rows>& per_part,
                                                      const std::vector<std::size_t>& target_sizes) {
  std::size_t width = 0;
  for (auto s : target_sizes) width += s;
  std::vector<std::vector<std::int64_t>> out;
  std::size_t off = 0;
  for (std::size_t c = 0; c < per_part.size(); ++c) {
    for (const auto& r : per_part[c]) {
      std::vector<std::int64_t> row(width, 0);
      std::copy(r.begin(), r.end(), row.begin() + static_cast<std::ptrdiff_t>(off));
      out.push_back(std::move(row));
    }
    off += target_sizes[c];
  }
  return out;
}

}  // namespace

// Per-part maps of the long exact sequence.
namespace arith_detail {

using Part = CompactSupport::Part;

Rows to_global(Part& p, int n) {
  Rows out;
  const auto& sq = p.cohomology(n);
  const auto& gsq = p.global->cohomology(n);
  for (std::size_t k = 0; k < sq.ngens(); ++k) {
    const Vector& u = sq.representative(k);
    out.push_back(gsq.coordinates(Vector(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(p.global->dim(n)))));
  }
  return out;
}

Rows localize(Part& p, int n) {
  Rows out;
  const auto& gsq = p.global->cohomology(n);
  for (std::size_t k = 0; k < gsq.ngens(); ++k) {
    Vector row;
    for (std::size_t v = 0; v < p.local.size(); ++v) {
      const Vector y = p.localization(n, v).multiply(p.ring, gsq.representative(k));
      for (auto c : p.local[v]->cohomology(n).coordinates(y)) row.push_back(c);
    }
    out.push_back(std::move(row));
  }
  return out;
}

Rows connecting(Part& p, int n) {
  Rows out;
  const auto& sq = p.cohomology(n + 1);
  for (std::size_t v = 0; v < p.local.size(); ++v) {
    const auto& lsq = p.local[v]->cohomology(n);
    const std::size_t off = p.local_offset(n + 1, v);
    for (std::size_t k = 0; k < lsq.ngens(); ++k) {
      Vector u(p.dim(n + 1), 0);
      const Vector& y = lsq.representative(k);
      for (std::size_t t = 0; t < y.size(); ++t) u[off + t] = p.ring.neg(y[t]);
      out.push_back(sq.coordinates(u));
    }
  }
  return out;
}

std::vector<int> global_exps(Part& p, int n) { return p.global->cohomology(n).exponents(); }
std::vector<int> cone_exps(Part& p, int n) { return p.cohomology(n).exponents(); }
std::vector<int> adelic_exps(Part& p, int n) {
  std::vector<int> out;
  for (const auto& l : p.local)
    for (int e : l->cohomology(n).exponents()) out.push_back(e);
  return out;
}

}  // namespace arith_detail

std::vector<std::vector<std::int64_t>> CompactSupport::map_to_global(std::size_t n) const {
  std::vector<Rows> rows;
  std::vector<std::size_t> sizes;
  for (const auto& p : parts_) {
    rows.push_back(arith_detail::to_global(*p, static_cast<int>(n)));
    sizes.push_back(arith_detail::global_exps(*p, static_cast<int>(n)).size());
  }
  return block_diagonal(rows, sizes);
}

std::vector<std::vector<std::int64_t>> CompactSupport::map_localize(std::size_t n) const {
  require(n <= max_degree_, Errc::DegreeTooLarge, "adelic degree beyond the computed range");
  std::vector<Rows> rows;
  std::vector<std::size_t> sizes;
  for (const auto& p : parts_) {
    rows.push_back(arith_detail::localize(*p, static_cast<int>(n)));
    sizes.push_back(arith_detail::adelic_exps(*p, static_cast<int>(n)).size());
  }
  return block_diagonal(rows, sizes);
}

std::vector<std::vector<std::int64_t>> CompactSupport::map_connecting(std::size_t n) const {
  require(n <= max_degree_, Errc::DegreeTooLarge, "adelic degree beyond the computed range");
  std::vector<Rows> rows;
  std::vector<std::size_t> sizes;
  for (const auto& p : parts_) {
    rows.push_back(arith_detail::connecting(*p, static_cast<int>(n)));
    sizes.push_back(arith_detail::cone_exps(*p, static_cast<int>(n) + 1).size());
  }
  return block_diagonal(rows, sizes);
}

LesReport CompactSupport::les(std::size_t up_to) const {
  require(up_to <= max_degree_, Errc::DegreeTooLarge, "sequence beyond the computed range");
  using namespace arith_detail;
  LesReport rep;
  const int top = static_cast<int>(up_to);
  for (int n = 0; n <= top + 1; ++n) {
    const std::string s = std::to_string(n);
    rep.nodes.push_back({"H^" + s + "_c", orders(n)});
    if (n <= top) {
      rep.nodes.push_back({"H^" + s + "(G)", global_orders(n)});
      rep.nodes.push_back({"H^" + s + "(A)", adelic_orders(n)});
    }
  }
  // node i -> node i+1; map index i for i = 0 .. nodes-2
  auto map_rows = [&](Part& p, std::size_t i) -> Rows {
    const int n = static_cast<int>(i / 3);
    switch (i % 3) {
      case 0: return to_global(p, n);
      case 1: return localize(p, n);
      default: return connecting(p, n);
    }
  };
  auto node_exps = [&](Part& p, std::size_t i) -> std::vector<int> {
    const int n = static_cast<int>(i / 3);
    switch (i % 3) {
      case 0: return cone_exps(p, n);
      case 1: return global_exps(p, n);
      default: return adelic_exps(p, n);
    }
  };
  auto image_log = [&](Part& p, std::size_t map) { return log_subgroup(p.ring, node_exps(p, map + 1), map_rows(p, map)); };

  for (std::size_t mid = 0; mid + 1 < rep.nodes.size(); ++mid) {
    LesSpot spot;
    spot.name = rep.nodes[mid].name;
    spot.exact = true;
    std::uint64_t img = 1, ker = 1;
    for (const auto& pp : parts_) {
      Part& p = *pp;
      const auto out_rows = map_rows(p, mid);
      const auto out_exps = node_exps(p, mid + 1);
      const int log_out = log_subgroup(p.ring, out_exps, out_rows);
      const int log_mid = sum_of(node_exps(p, mid));
      const int log_in = mid == 0 ? 0 : image_log(p, mid - 1);
      if (mid > 0) {
        // composite must vanish
        for (const auto& r : map_rows(p, mid - 1)) {
          Vector comp(out_exps.size(), 0);
          for (std::size_t i = 0; i < r.size(); ++i)
            for (std::size_t t = 0; t < comp.size(); ++t) comp[t] = p.ring.add(comp[t], p.ring.mul(r[i], out_rows[i][t]));
          for (std::size_t t = 0; t < comp.size(); ++t)
            if (comp[t] % p.ring.power(out_exps[t]) != 0) spot.exact = false;
        }
      }
      if (log_in + log_out != log_mid) spot.exact = false;
      for (int e = 0; e < log_in; ++e) img *= static_cast<std::uint64_t>(p.ring.p);
      for (int e = 0; e < log_mid - log_out; ++e) ker *= static_cast<std::uint64_t>(p.ring.p);
    }
    spot.image_order = img;
    spot.kernel_order = ker;
    rep.exact = rep.exact && spot.exact;
    rep.spots.push_back(spot);
  }
  return rep;
}

LesReport les_check(const LocalGlobalSystem& sys, const GModule& m, const std::vector<std::string>& ramified,
                    std::size_t up_to) {
  return CompactSupport(sys, m, ramified, up_to).les(up_to);
}

ReciprocityResult reciprocity_obstruction(const LocalGlobalSystem& sys, const GModule& a,
                                          const std::vector<std::vector<std::int64_t>>& local_classes,
                                          const std::vector<std::string>& ramified) {
  const CompactSupport cs(sys, a, ramified, 1);
  require(local_classes.size() == cs.places().size(), Errc::InvalidInput, "one local class per place is required");
  std::vector<Cochain> y;
  for (std::size_t v = 0; v < local_classes.size(); ++v)
    y.push_back(cohomology(cs.places()[v].module, 1).combination(local_classes[v]).scaled(-1));
  ReciprocityResult out;
  out.hc2_orders = cs.orders(2);
  out.coords = cs.coordinates(2, Cochain(a, 2), y);
  out.is_zero = std::all_of(out.coords.begin(), out.coords.end(), [](std::int64_t c) { return c == 0; });
  return out;
}

// --- reciprocity along a tower ------------------------------------------------

namespace {

std::optional<Elem> conjugator(const GroupHom& from, const GroupHom& to, const std::vector<Elem>& by) {
  for (Elem x : by)
    if (from.conjugated(x) == to) return x;
  return std::nullopt;
}

}  // namespace

ReciprocityReport reciprocity_tower(const LocalGlobalSystem& sys, const Tower& tower, const GroupHom& psi_global0,
                                    const std::vector<std::vector<GroupHom>>& local_lifts) {
  sys.validate();
  require(psi_global0.source().same_as(sys.global) && psi_global0.target().same_as(tower.base), Errc::TargetMismatch,
          "psi must map the global group to the tower base");
  require(local_lifts.size() <= tower.steps.size(), Errc::InvalidInput, "more local levels than tower steps");
  const auto all = sys.labels();
  ReciprocityReport rep;
  GroupHom psi = psi_global0;
  std::vector<std::vector<GroupHom>> lifts = local_lifts;
  for (std::size_t n = 1; n <= lifts.size(); ++n) {
    const TowerStep& step = tower.steps[n - 1];
    const ExtensionDatum& e = step.extension;
    require(lifts[n - 1].size() == sys.places.size(), Errc::InvalidInput,
            "level " + std::to_string(n) + " needs one local lift per place");
    ReciprocityLevel lvl;
    lvl.level = n;
    const auto gob = obstruction(psi, step);
    lvl.global_obstruction = gob.cls.coords;
    lvl.global_obstructed = !gob.cls.is_zero();

    std::vector<Cochain> y;
    for (std::size_t v = 0; v < sys.places.size(); ++v) {
      const Place& pl = sys.places[v];
      const GroupHom psi_v = psi.after(pl.decomposition);
      const GroupHom& l = lifts[n - 1][v];
      const auto lob = obstruction(psi_v, step);
      require(lob.cls.is_zero(), Errc::Inadmissible,
              "local obstruction at " + pl.label + " is nonzero at level " + std::to_string(n));
      require(l.source().same_as(pl.decomposition.source()) && l.target().same_as(e.total) && l.is_homomorphism(),
              Errc::IncompatibleLocalData, "local lift at " + pl.label + " is not a homomorphism into level " +
                                               std::to_string(n));
      require(e.projection.after(l) == psi_v, Errc::IncompatibleLocalData,
              "local lift at " + pl.label + " does not cover the global map at level " + std::to_string(n));
      const GModule mv = e.kernel.pullback(psi_v);
      Cochain x(mv, 1);
      const FiniteGroup& gv = pl.decomposition.source();
      for (Elem g = 0; g < gv.size(); ++g)
        x.set({g}, e.kernel_coords(e.total.mul(e.total.inv(e.section[psi_v(g)]), l(g))));
      y.push_back(x.scaled(-1));
    }
    const CompactSupport cs(sys, gob.cocycle.module(), all, 1);
    lvl.hc2_orders = cs.orders(2);
    lvl.difference = cs.coordinates(2, gob.cocycle, y);
    lvl.difference_zero = std::all_of(lvl.difference.begin(), lvl.difference.end(), [](auto c) { return c == 0; });

    std::vector<Elem> kernel_elems = e.embedding;
    for (const auto& cand : lift_classes(psi, step)) {
      bool ok = true;
      for (std::size_t v = 0; v < sys.places.size() && ok; ++v)
        ok = conjugator(lifts[n - 1][v], cand.after(sys.places[v].decomposition), kernel_elems).has_value();
      if (ok) {
        lvl.continuation_found = true;
        lvl.chosen_global = cand;
        break;
      }
    }
    if (lvl.continuation_found != lvl.difference_zero)
      throw std::logic_error("difference class disagrees with the search for a matching global lift");
    rep.levels.push_back(lvl);
    if (!lvl.difference_zero) {
      rep.stopped_at = n;
      break;
    }
    psi = *lvl.chosen_global;
    if (n < lifts.size()) {
      const ExtensionDatum& up = tower.steps[n].extension;
      for (std::size_t v = 0; v < sys.places.size(); ++v) {
        const GroupHom target = psi.after(sys.places[v].decomposition);
        const Elem a = *conjugator(lifts[n - 1][v], target, kernel_elems);
        Elem pre = 0;
        while (up.projection(pre) != a) ++pre;
        lifts[n][v] = lifts[n][v].conjugated(pre);
      }
    }
  }
  rep.completed = !rep.stopped_at.has_value();
  return rep;
}

}  // namespace obstower
