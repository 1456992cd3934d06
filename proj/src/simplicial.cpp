#include "obstower/simplicial.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "obstower/error.hpp"
#include "obstower/module.hpp"
#include "obstower/zmod.hpp"

namespace obstower::simp {

namespace {

constexpr std::size_t kMaxCells = std::size_t{1} << 21;
constexpr std::size_t kMaxGroup = 1024;

Map compose(const Map& second, const Map& first) {
  Map out(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) out[i] = second[first[i]];
  return out;
}

Map identity_map(std::size_t n) {
  Map m(n);
  std::iota(m.begin(), m.end(), 0u);
  return m;
}

std::size_t cell_count(std::size_t base, std::size_t len) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < len; ++i) {
    if (base != 0 && out > kMaxCells / base) fail(Errc::SearchBudgetExceeded, "simplicial level too large");
    out *= base;
  }
  return out;
}

// mixed radix, first digit most significant
std::vector<Elem> decode(std::size_t x, std::size_t base, std::size_t len) {
  std::vector<Elem> out(len);
  for (std::size_t i = len; i-- > 0;) {
    out[i] = static_cast<Elem>(x % base);
    x /= base;
  }
  return out;
}

std::size_t encode(const std::vector<Elem>& digits, std::size_t base) {
  std::size_t x = 0;
  for (Elem d : digits) x = x * base + d;
  return x;
}

std::string at(const char* what, std::size_t n, std::size_t i = 0, std::size_t j = 0) {
  return std::string(what) + " (level " + std::to_string(n) + ", " + std::to_string(i) + ", " + std::to_string(j) + ")";
}

/// Group on 0..n-1 from a law; to_canonical[x] is the canonical element of x.
FiniteGroup group_from_law(std::size_t n, const std::function<std::uint32_t(std::uint32_t, std::uint32_t)>& law,
                           const std::string& name, std::vector<Elem>& to_canonical) {
  if (n > kMaxGroup) fail(Errc::SearchBudgetExceeded, "group level too large for a multiplication table");
  std::vector<std::vector<Elem>> table(n, std::vector<Elem>(n));
  for (std::uint32_t x = 0; x < n; ++x)
    for (std::uint32_t y = 0; y < n; ++y) table[x][y] = law(x, y);
  Elem id = 0;
  for (Elem x = 0; x < n; ++x)
    if (table[x][x] == x) id = x;
  // greedy generating set
  std::vector<Elem> gens;
  std::vector<bool> in(n, false);
  in[id] = true;
  std::vector<Elem> members{id};
  for (Elem x = 0; x < n; ++x) {
    if (in[x]) continue;
    gens.push_back(x);
    for (std::size_t k = 0; k < members.size(); ++k)
      for (Elem g : gens) {
        const Elem y = table[members[k]][g];
        if (!in[y]) {
          in[y] = true;
          members.push_back(y);
        }
      }
  }
  std::vector<Elem> old;
  FiniteGroup grp = FiniteGroup::from_trusted_table(table, gens, name, &old);
  to_canonical.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) to_canonical[old[i]] = static_cast<Elem>(i);
  return grp;
}

// --- integral homology ----------------------------------------------------------

struct Triplet {
  std::uint32_t row, col;
  std::int64_t v;
};

struct Divisors {
  std::size_t rank = 0;
  std::vector<std::int64_t> torsion;
};

std::int64_t mul_sub(std::int64_t a, std::int64_t f, std::int64_t b) {
  std::int64_t p = 0, r = 0;
  if (__builtin_mul_overflow(f, b, &p) || __builtin_sub_overflow(a, p, &r))
    throw std::overflow_error("integer overflow in homology elimination");
  return r;
}

// Unit pivots are eliminated sparsely; the rest goes through a dense Smith form.
Divisors divisors(std::size_t rows, std::size_t cols, const std::vector<Triplet>& entries) {
  std::vector<std::map<std::uint32_t, std::int64_t>> row(rows);
  std::vector<std::set<std::uint32_t>> col_rows(cols);
  for (const auto& t : entries) row[t.row][t.col] += t.v;
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (auto it = row[r].begin(); it != row[r].end();) {
      if (it->second == 0) {
        it = row[r].erase(it);
      } else {
        col_rows[it->first].insert(r);
        ++it;
      }
    }
  }
  Divisors out;
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::uint32_t r = 0; r < rows; ++r) {
      if (row[r].empty()) continue;
      auto piv = std::find_if(row[r].begin(), row[r].end(), [](const auto& e) { return e.second == 1 || e.second == -1; });
      if (piv == row[r].end()) continue;
      const std::uint32_t c = piv->first;
      const std::int64_t u = piv->second;
      const std::vector<std::uint32_t> others(col_rows[c].begin(), col_rows[c].end());
      for (std::uint32_t r2 : others) {
        if (r2 == r) continue;
        const std::int64_t f = row[r2].at(c) * u;
        for (const auto& [cc, vv] : row[r]) {
          auto& slot = row[r2][cc];
          slot = mul_sub(slot, f, vv);
          if (slot == 0) {
            row[r2].erase(cc);
            col_rows[cc].erase(r2);
          } else {
            col_rows[cc].insert(r2);
          }
        }
      }
      for (const auto& [cc, vv] : row[r]) col_rows[cc].erase(r);
      row[r].clear();
      ++out.rank;
      progress = true;
    }
  }
  std::vector<std::uint32_t> live_rows, live_cols;
  std::map<std::uint32_t, std::size_t> col_pos;
  for (std::uint32_t r = 0; r < rows; ++r)
    if (!row[r].empty()) live_rows.push_back(r);
  for (std::uint32_t c = 0; c < cols; ++c)
    if (!col_rows[c].empty()) {
      col_pos[c] = live_cols.size();
      live_cols.push_back(c);
    }
  if (live_rows.empty()) return out;
  if (live_rows.size() * live_cols.size() > 4'000'000) fail(Errc::SearchBudgetExceeded, "homology computation too large");
  zint::IntMatrix m(live_rows.size(), live_cols.size());
  for (std::size_t i = 0; i < live_rows.size(); ++i)
    for (const auto& [c, v] : row[live_rows[i]]) m.at(i, col_pos.at(c)) = v;
  for (std::int64_t d : zint::int_smith(std::move(m), false).diagonal) {
    ++out.rank;
    if (d > 1) out.torsion.push_back(d);
  }
  return out;
}

struct ChainComplexZ {
  std::vector<std::size_t> dims;
  std::vector<std::vector<Triplet>> d;  // d[k] : C_k -> C_{k-1}
};

std::vector<std::vector<std::int64_t>> homology_upto(const ChainComplexZ& c, std::size_t k_max) {
  std::vector<Divisors> div(k_max + 2);
  for (std::size_t k = 1; k <= k_max + 1; ++k) div[k] = divisors(c.dims[k - 1], c.dims[k], c.d[k]);
  std::vector<std::vector<std::int64_t>> out;
  for (std::size_t k = 0; k <= k_max; ++k) {
    std::vector<std::int64_t> h = div[k + 1].torsion;
    std::sort(h.begin(), h.end());
    const std::size_t free = c.dims[k] - div[k].rank - div[k + 1].rank;
    h.insert(h.end(), free, 0);
    out.push_back(std::move(h));
  }
  return out;
}

struct Normalized {
  std::vector<std::vector<std::uint32_t>> basis;  // nondegenerate simplices
  std::vector<std::vector<std::int64_t>> index;   // simplex -> basis position or -1
};

Normalized normalize(const SimplicialSet& x, std::size_t top) {
  Normalized nz;
  for (std::size_t n = 0; n <= top; ++n) {
    const auto deg = x.degenerate(n);
    nz.index.emplace_back(x.sizes[n], -1);
    nz.basis.emplace_back();
    for (std::uint32_t s = 0; s < x.sizes[n]; ++s)
      if (!deg[s]) {
        nz.index[n][s] = static_cast<std::int64_t>(nz.basis[n].size());
        nz.basis[n].push_back(s);
      }
  }
  return nz;
}

// boundary columns of normalized chains, rows offset by row_off, negated if asked
void add_boundary(const SimplicialSet& x, const Normalized& nz, std::size_t n, std::uint32_t col_off,
                  std::uint32_t row_off, std::int64_t sign, std::vector<Triplet>& out) {
  for (std::size_t b = 0; b < nz.basis[n].size(); ++b)
    for (std::size_t i = 0; i <= n; ++i) {
      const std::int64_t y = nz.index[n - 1][x.faces[n][i][nz.basis[n][b]]];
      if (y < 0) continue;
      out.push_back({static_cast<std::uint32_t>(row_off + y), static_cast<std::uint32_t>(col_off + b),
                     sign * (i % 2 ? -1 : 1)});
    }
}

std::vector<std::size_t> components(const SimplicialSet& x, std::vector<std::size_t>& label) {
  std::vector<std::size_t> parent(x.sizes[0]);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  if (x.top() >= 1)
    for (std::size_t e = 0; e < x.sizes[1]; ++e) {
      const auto a = find(x.faces[1][0][e]), b = find(x.faces[1][1][e]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  label.assign(x.sizes[0], 0);
  std::vector<std::size_t> roots;
  for (std::size_t v = 0; v < x.sizes[0]; ++v) {
    label[v] = find(v);
    if (label[v] == v) roots.push_back(v);
  }
  return roots;
}

// --- W-bar bookkeeping -----------------------------------------------------------

/// Elements of W-bar G at level n as flat lists of group entries: block i
/// holds i entries of G_{n-i}.
struct WbarCoder {
  SimplicialGroup g;
  Codiagonal c;

  explicit WbarCoder(const SimplicialGroup& grp) : g(grp), c(codiagonal_tuples(nerve(grp, true), grp.top())) {}

  std::vector<Elem> entries(std::size_t n, std::uint32_t x) const {
    std::vector<Elem> out;
    const auto& t = c.tuples[n][x];
    for (std::size_t i = 0; i <= n; ++i) {
      const auto part = decode(t[i], g.levels[n - i].size(), i);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }

  std::uint32_t element(std::size_t n, const std::vector<Elem>& e) const {
    std::vector<std::uint32_t> t(n + 1);
    std::size_t pos = 0;
    for (std::size_t i = 0; i <= n; ++i) {
      std::vector<Elem> part(e.begin() + static_cast<std::ptrdiff_t>(pos), e.begin() + static_cast<std::ptrdiff_t>(pos + i));
      t[i] = static_cast<std::uint32_t>(encode(part, g.levels[n - i].size()));
      pos += i;
    }
    const auto it = c.index[n].find(t);
    if (it == c.index[n].end()) throw std::logic_error("entrywise image left W-bar");
    return it->second;
  }

  /// Entrywise application of per-level maps.
  template <class F>
  std::vector<Elem> apply(std::size_t n, const std::vector<Elem>& e, F&& f) const {
    std::vector<Elem> out(e.size());
    std::size_t pos = 0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t k = 0; k < i; ++k, ++pos) out[pos] = f(n - i, e[pos]);
    return out;
  }
};

/// W-bar of a levelwise homomorphism, into the coder `dst`.
SimplicialMap wbar_map(const WbarCoder& src, const WbarCoder& dst, const std::vector<GroupHom>& h) {
  SimplicialMap out;
  for (std::size_t n = 0; n <= src.c.set.top(); ++n) {
    Map m(src.c.set.sizes[n]);
    for (std::uint32_t x = 0; x < m.size(); ++x)
      m[x] = dst.element(n, src.apply(n, src.entries(n, x), [&](std::size_t l, Elem v) { return h[l](v); }));
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<std::string> check_shape(const SimplicialSet& s) {
  std::vector<std::string> out;
  const std::size_t top = s.top();
  if (s.faces.size() != top + 1 || s.degeneracies.size() != top + 1) {
    out.push_back("face or degeneracy arrays do not match the number of levels");
    return out;
  }
  for (std::size_t n = 0; n <= top; ++n) {
    if (s.faces[n].size() != (n ? n + 1 : 0)) out.push_back(at("wrong number of faces", n));
    if (s.degeneracies[n].size() != (n < top ? n + 1 : 0)) out.push_back(at("wrong number of degeneracies", n));
    if (!out.empty()) return out;
    for (std::size_t i = 0; i < s.faces[n].size(); ++i) {
      const auto& m = s.faces[n][i];
      if (m.size() != s.sizes[n] ||
          std::any_of(m.begin(), m.end(), [&](std::uint32_t v) { return v >= s.sizes[n - 1]; }))
        out.push_back(at("face map out of range", n, i));
    }
    for (std::size_t i = 0; i < s.degeneracies[n].size(); ++i) {
      const auto& m = s.degeneracies[n][i];
      if (m.size() != s.sizes[n] ||
          std::any_of(m.begin(), m.end(), [&](std::uint32_t v) { return v >= s.sizes[n + 1]; }))
        out.push_back(at("degeneracy map out of range", n, i));
    }
  }
  return out;
}

}  // namespace

// --- simplicial sets ---------------------------------------------------------------

std::vector<std::string> SimplicialSet::identity_violations(std::size_t limit) const {
  auto out = check_shape(*this);
  if (!out.empty()) return out;
  auto note = [&](std::string s) {
    if (out.size() < limit) out.push_back(std::move(s));
  };
  const std::size_t top_level = top();
  for (std::size_t n = 2; n <= top_level; ++n)
    for (std::size_t j = 1; j <= n; ++j)
      for (std::size_t i = 0; i < j; ++i)
        if (compose(faces[n - 1][i], faces[n][j]) != compose(faces[n - 1][j - 1], faces[n][i]))
          note(at("d_i d_j != d_{j-1} d_i", n, i, j));
  for (std::size_t n = 0; n < top_level; ++n)
    for (std::size_t j = 0; j <= n; ++j)
      for (std::size_t i = 0; i <= n + 1; ++i) {
        const Map lhs = compose(faces[n + 1][i], degeneracies[n][j]);
        if (i == j || i == j + 1) {
          if (lhs != identity_map(sizes[n])) note(at("d_i s_j != id", n, i, j));
        } else if (i < j) {
          if (lhs != compose(degeneracies[n - 1][j - 1], faces[n][i])) note(at("d_i s_j != s_{j-1} d_i", n, i, j));
        } else if (lhs != compose(degeneracies[n - 1][j], faces[n][i - 1])) {
          note(at("d_i s_j != s_j d_{i-1}", n, i, j));
        }
      }
  for (std::size_t n = 0; n + 2 <= top_level; ++n)
    for (std::size_t j = 0; j <= n; ++j)
      for (std::size_t i = 0; i <= j; ++i)
        if (compose(degeneracies[n + 1][i], degeneracies[n][j]) !=
            compose(degeneracies[n + 1][j + 1], degeneracies[n][i]))
          note(at("s_i s_j != s_{j+1} s_i", n, i, j));
  return out;
}

std::vector<bool> SimplicialSet::degenerate(std::size_t n) const {
  std::vector<bool> out(sizes.at(n), false);
  if (n == 0) return out;
  for (const auto& s : degeneracies[n - 1])
    for (std::uint32_t v : s) out[v] = true;
  return out;
}

SimplicialSet SimplicialSet::truncated(std::size_t n) const {
  require(n <= top(), Errc::TruncationInsufficient, "cannot truncate above the top level");
  SimplicialSet out;
  out.sizes.assign(sizes.begin(), sizes.begin() + static_cast<std::ptrdiff_t>(n + 1));
  out.faces.assign(faces.begin(), faces.begin() + static_cast<std::ptrdiff_t>(n + 1));
  out.degeneracies.assign(degeneracies.begin(), degeneracies.begin() + static_cast<std::ptrdiff_t>(n + 1));
  out.degeneracies[n].clear();
  return out;
}

bool is_simplicial_map(const SimplicialMap& f, const SimplicialSet& x, const SimplicialSet& y) {
  const std::size_t top = x.top();
  if (f.size() != top + 1 || y.top() < top) return false;
  for (std::size_t n = 0; n <= top; ++n) {
    if (f[n].size() != x.sizes[n]) return false;
    for (std::uint32_t v : f[n])
      if (v >= y.sizes[n]) return false;
  }
  for (std::size_t n = 1; n <= top; ++n)
    for (std::size_t i = 0; i <= n; ++i)
      if (compose(f[n - 1], x.faces[n][i]) != compose(y.faces[n][i], f[n])) return false;
  for (std::size_t n = 0; n < top; ++n)
    for (std::size_t i = 0; i <= n; ++i)
      if (compose(f[n + 1], x.degeneracies[n][i]) != compose(y.degeneracies[n][i], f[n])) return false;
  return true;
}

// --- simplicial groups ---------------------------------------------------------------

SimplicialSet SimplicialGroup::underlying() const {
  SimplicialSet s;
  for (const auto& g : levels) s.sizes.push_back(g.size());
  for (const auto& fs : faces) {
    s.faces.emplace_back();
    for (const auto& h : fs) s.faces.back().push_back(h.images());
  }
  for (const auto& ds : degeneracies) {
    s.degeneracies.emplace_back();
    for (const auto& h : ds) s.degeneracies.back().push_back(h.images());
  }
  return s;
}

void SimplicialGroup::validate() const {
  require(!levels.empty(), Errc::InvalidInput, "simplicial group has no levels");
  const std::size_t t = top();
  require(faces.size() == t + 1 && degeneracies.size() == t + 1, Errc::InvalidInput,
          "face or degeneracy arrays do not match the number of levels");
  for (std::size_t n = 0; n <= t; ++n) {
    require(faces[n].size() == (n ? n + 1 : 0) && degeneracies[n].size() == (n < t ? n + 1 : 0), Errc::InvalidInput,
            at("wrong number of structure maps", n));
    for (std::size_t i = 0; i < faces[n].size(); ++i) {
      const auto& h = faces[n][i];
      require(h.source().same_as(levels[n]) && h.target().same_as(levels[n - 1]) && h.is_homomorphism(),
              Errc::InvalidInput, at("face is not a homomorphism between adjacent levels", n, i));
    }
    for (std::size_t i = 0; i < degeneracies[n].size(); ++i) {
      const auto& h = degeneracies[n][i];
      require(h.source().same_as(levels[n]) && h.target().same_as(levels[n + 1]) && h.is_homomorphism(),
              Errc::InvalidInput, at("degeneracy is not a homomorphism between adjacent levels", n, i));
    }
  }
  const auto v = underlying().identity_violations(1);
  require(v.empty(), Errc::InvalidInput, v.empty() ? std::string() : v.front());
}

bool SimplicialGroup::levelwise_abelian() const {
  return std::all_of(levels.begin(), levels.end(), [](const FiniteGroup& g) { return g.is_abelian(); });
}

SimplicialGroup SimplicialGroup::constant(const FiniteGroup& g, std::size_t top) {
  SimplicialGroup s;
  s.levels.assign(top + 1, g);
  const GroupHom id = GroupHom::identity(g);
  for (std::size_t n = 0; n <= top; ++n) {
    s.faces.emplace_back(n ? n + 1 : 0, id);
    s.degeneracies.emplace_back(n < top ? n + 1 : 0, id);
  }
  return s;
}

// --- bisimplicial sets ---------------------------------------------------------------

namespace {

void allocate(BisimplicialSet& x, std::size_t n, bool triangular) {
  x.n = n;
  x.triangular = triangular;
  const auto grid = [&](auto& v) { v.assign(n + 1, std::vector<std::vector<Map>>(n + 1)); };
  x.sizes.assign(n + 1, std::vector<std::size_t>(n + 1, 0));
  grid(x.hfaces);
  grid(x.vfaces);
  grid(x.hdegeneracies);
  grid(x.vdegeneracies);
}

SimplicialSet row_of(const BisimplicialSet& x, std::size_t q) {
  SimplicialSet s;
  for (std::size_t p = 0; x.defined(p, q); ++p) {
    s.sizes.push_back(x.sizes[p][q]);
    s.faces.push_back(x.hfaces[p][q]);
    s.degeneracies.push_back(x.hdegeneracies[p][q]);
  }
  return s;
}

SimplicialSet column_of(const BisimplicialSet& x, std::size_t p) {
  SimplicialSet s;
  for (std::size_t q = 0; x.defined(p, q); ++q) {
    s.sizes.push_back(x.sizes[p][q]);
    s.faces.push_back(x.vfaces[p][q]);
    s.degeneracies.push_back(x.vdegeneracies[p][q]);
  }
  return s;
}

}  // namespace

std::vector<std::string> BisimplicialSet::identity_violations(std::size_t limit) const {
  std::vector<std::string> out;
  auto note = [&](std::string s) {
    if (out.size() < limit) out.push_back(std::move(s));
  };
  for (std::size_t q = 0; q <= n; ++q)
    for (auto& v : row_of(*this, q).identity_violations(limit)) note("row " + std::to_string(q) + ": " + v);
  for (std::size_t p = 0; p <= n; ++p)
    for (auto& v : column_of(*this, p).identity_violations(limit)) note("column " + std::to_string(p) + ": " + v);
  if (!out.empty()) return out;
  for (std::size_t p = 0; p <= n; ++p)
    for (std::size_t q = 0; q <= n; ++q) {
      if (!defined(p, q)) continue;
      // each pair (horizontal op, vertical op) must commute
      const bool up_h = defined(p + 1, q), up_v = defined(p, q + 1), up_both = defined(p + 1, q + 1);
      for (std::size_t i = 0; i <= p; ++i)
        for (std::size_t j = 0; j <= q; ++j) {
          if (p >= 1 && q >= 1 && compose(hfaces[p][q - 1][i], vfaces[p][q][j]) != compose(vfaces[p - 1][q][j], hfaces[p][q][i]))
            note(at("horizontal and vertical faces do not commute", p, q));
          if (p >= 1 && up_v && compose(hfaces[p][q + 1][i], vdegeneracies[p][q][j]) != compose(vdegeneracies[p - 1][q][j], hfaces[p][q][i]))
            note(at("horizontal face and vertical degeneracy do not commute", p, q));
          if (q >= 1 && up_h && compose(hdegeneracies[p][q - 1][i], vfaces[p][q][j]) != compose(vfaces[p + 1][q][j], hdegeneracies[p][q][i]))
            note(at("horizontal degeneracy and vertical face do not commute", p, q));
          if (up_both && compose(hdegeneracies[p][q + 1][i], vdegeneracies[p][q][j]) != compose(vdegeneracies[p + 1][q][j], hdegeneracies[p][q][i]))
            note(at("degeneracies do not commute", p, q));
        }
    }
  return out;
}

SimplicialSet BisimplicialSet::diagonal() const {
  require(!triangular, Errc::TruncationInsufficient, "the diagonal needs the full square of cells");
  SimplicialSet s;
  for (std::size_t k = 0; k <= n; ++k) {
    s.sizes.push_back(sizes[k][k]);
    s.faces.emplace_back();
    s.degeneracies.emplace_back();
    for (std::size_t i = 0; k >= 1 && i <= k; ++i) s.faces[k].push_back(compose(hfaces[k][k - 1][i], vfaces[k][k][i]));
    for (std::size_t i = 0; k < n && i <= k; ++i)
      s.degeneracies[k].push_back(compose(hdegeneracies[k][k + 1][i], vdegeneracies[k][k][i]));
  }
  return s;
}

BisimplicialSet nerve(const SimplicialGroup& g, bool triangular) {
  g.validate();
  BisimplicialSet x;
  const std::size_t top = g.top();
  allocate(x, top, triangular);
  for (std::size_t p = 0; p <= top; ++p)
    for (std::size_t q = 0; q <= top; ++q) {
      if (!x.defined(p, q)) continue;
      const FiniteGroup& gq = g.levels[q];
      const std::size_t base = gq.size();
      const std::size_t count = cell_count(base, p);
      x.sizes[p][q] = count;
      const bool up_h = x.defined(p + 1, q), up_v = x.defined(p, q + 1);
      x.hfaces[p][q].assign(p ? p + 1 : 0, Map(count));
      x.hdegeneracies[p][q].assign(up_h ? p + 1 : 0, Map(count));
      x.vfaces[p][q].assign(q ? q + 1 : 0, Map(count));
      x.vdegeneracies[p][q].assign(up_v ? q + 1 : 0, Map(count));
      for (std::size_t c = 0; c < count; ++c) {
        const auto e = decode(c, base, p);
        for (std::size_t i = 0; p >= 1 && i <= p; ++i) {
          std::vector<Elem> f;
          for (std::size_t k = 0; k < p; ++k) {
            if (i == 0 && k == 0) continue;
            if (i == p && k == p - 1) continue;
            if (i > 0 && i < p && k == i) continue;
            f.push_back(i > 0 && i < p && k == i - 1 ? gq.mul(e[k], e[k + 1]) : e[k]);
          }
          x.hfaces[p][q][i][c] = static_cast<std::uint32_t>(encode(f, base));
        }
        for (std::size_t i = 0; up_h && i <= p; ++i) {
          std::vector<Elem> f = e;
          f.insert(f.begin() + static_cast<std::ptrdiff_t>(i), gq.identity());
          x.hdegeneracies[p][q][i][c] = static_cast<std::uint32_t>(encode(f, base));
        }
        for (std::size_t j = 0; q >= 1 && j <= q; ++j) {
          std::vector<Elem> f(p);
          for (std::size_t k = 0; k < p; ++k) f[k] = g.faces[q][j](e[k]);
          x.vfaces[p][q][j][c] = static_cast<std::uint32_t>(encode(f, g.levels[q - 1].size()));
        }
        for (std::size_t j = 0; up_v && j <= q; ++j) {
          std::vector<Elem> f(p);
          for (std::size_t k = 0; k < p; ++k) f[k] = g.degeneracies[q][j](e[k]);
          x.vdegeneracies[p][q][j][c] = static_cast<std::uint32_t>(encode(f, g.levels[q + 1].size()));
        }
      }
    }
  return x;
}

Codiagonal codiagonal_tuples(const BisimplicialSet& x, std::size_t top) {
  require(top <= x.n, Errc::TruncationInsufficient,
          "codiagonal level " + std::to_string(top) + " needs cells up to total degree " + std::to_string(top));
  // pre[i][q][y] = cells of X_{i,q} with d^v_0 = y
  std::vector<std::vector<std::vector<std::vector<std::uint32_t>>>> pre(top + 1,
                                                                        std::vector<std::vector<std::vector<std::uint32_t>>>(top + 1));
  for (std::size_t i = 0; i <= top; ++i)
    for (std::size_t q = 1; i + q <= top; ++q) {
      pre[i][q].assign(x.sizes[i][q - 1], {});
      for (std::uint32_t c = 0; c < x.sizes[i][q]; ++c) pre[i][q][x.vfaces[i][q][0][c]].push_back(c);
    }
  Codiagonal out;
  out.tuples.resize(top + 1);
  out.index.resize(top + 1);
  for (std::size_t p = 0; p <= top; ++p) {
    auto& list = out.tuples[p];
    std::vector<std::uint32_t> cur(p + 1);
    std::function<void(std::size_t)> fill = [&](std::size_t i) {  // chooses x_{i-1}
      if (i == 0) {
        list.push_back(cur);
        if (list.size() > kMaxCells) fail(Errc::SearchBudgetExceeded, "codiagonal level too large");
        return;
      }
      const std::uint32_t target = x.hfaces[i][p - i][i][cur[i]];
      for (std::uint32_t c : pre[i - 1][p - i + 1][target]) {
        cur[i - 1] = c;
        fill(i - 1);
      }
    };
    for (std::uint32_t c = 0; c < x.sizes[p][0]; ++c) {
      cur[p] = c;
      fill(p);
    }
    std::sort(list.begin(), list.end());
    for (std::uint32_t k = 0; k < list.size(); ++k) out.index[p].emplace(list[k], k);
    out.set.sizes.push_back(list.size());
  }
  auto lookup = [&](std::size_t p, const std::vector<std::uint32_t>& t) {
    const auto it = out.index[p].find(t);
    if (it == out.index[p].end()) throw std::logic_error("codiagonal structure map left the codiagonal");
    return it->second;
  };
  for (std::size_t p = 0; p <= top; ++p) {
    out.set.faces.emplace_back(p ? p + 1 : 0, Map(out.set.sizes[p]));
    out.set.degeneracies.emplace_back(p < top ? p + 1 : 0, Map(out.set.sizes[p]));
    for (std::uint32_t k = 0; k < out.set.sizes[p]; ++k) {
      const auto& t = out.tuples[p][k];
      for (std::size_t i = 0; p >= 1 && i <= p; ++i) {
        std::vector<std::uint32_t> y(p);
        for (std::size_t j = 0; j < p; ++j)
          y[j] = j < i ? x.vfaces[j][p - j][i - j][t[j]] : x.hfaces[j + 1][p - j - 1][i][t[j + 1]];
        out.set.faces[p][i][k] = lookup(p - 1, y);
      }
      for (std::size_t i = 0; p < top && i <= p; ++i) {
        std::vector<std::uint32_t> y(p + 2);
        for (std::size_t j = 0; j <= p + 1; ++j)
          y[j] = j <= i ? x.vdegeneracies[j][p - j][i - j][t[j]] : x.hdegeneracies[j - 1][p - j + 1][i][t[j - 1]];
        out.set.degeneracies[p][i][k] = lookup(p + 1, y);
      }
    }
  }
  return out;
}

SimplicialSet codiagonal(const BisimplicialSet& x, std::size_t top) { return codiagonal_tuples(x, top).set; }

SimplicialSet wbar(const SimplicialGroup& g) { return codiagonal(nerve(g, true), g.top()); }

namespace {

GroupHom relabel(const FiniteGroup& src, const std::vector<Elem>& src_canon, const FiniteGroup& dst,
                 const std::vector<Elem>& dst_canon, const Map& m) {
  std::vector<Elem> img(src.size());
  for (std::size_t x = 0; x < m.size(); ++x) img[src_canon[x]] = dst_canon[m[x]];
  return GroupHom(src, dst, std::move(img));
}

/// Simplicial group on a simplicial set whose levels carry the given laws.
SimplicialGroup group_on(const SimplicialSet& s, const std::vector<std::function<std::uint32_t(std::uint32_t, std::uint32_t)>>& law,
                         const std::string& name, std::vector<std::vector<Elem>>* canon_out = nullptr) {
  SimplicialGroup out;
  std::vector<std::vector<Elem>> canon(s.top() + 1);
  for (std::size_t n = 0; n <= s.top(); ++n)
    out.levels.push_back(group_from_law(s.sizes[n], law[n], name + "_" + std::to_string(n), canon[n]));
  for (std::size_t n = 0; n <= s.top(); ++n) {
    out.faces.emplace_back();
    out.degeneracies.emplace_back();
    for (const auto& m : s.faces[n]) out.faces[n].push_back(relabel(out.levels[n], canon[n], out.levels[n - 1], canon[n - 1], m));
    for (const auto& m : s.degeneracies[n])
      out.degeneracies[n].push_back(relabel(out.levels[n], canon[n], out.levels[n + 1], canon[n + 1], m));
  }
  out.validate();
  if (canon_out) *canon_out = std::move(canon);
  return out;
}

}  // namespace

SimplicialGroup wbar_group(const SimplicialGroup& a) {
  require(a.levelwise_abelian(), Errc::NotAbelian, "W-bar is a simplicial group only for abelian levels");
  const WbarCoder w(a);
  std::vector<std::function<std::uint32_t(std::uint32_t, std::uint32_t)>> law;
  // group_on relabels, so the law works on codiagonal indices
  for (std::size_t n = 0; n <= a.top(); ++n)
    law.push_back([&w, &a, n](std::uint32_t x, std::uint32_t y) {
      const auto ex = w.entries(n, x), ey = w.entries(n, y);
      std::vector<Elem> ez(ex.size());
      std::size_t pos = 0;
      for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t k = 0; k < i; ++k, ++pos) ez[pos] = a.levels[n - i].mul(ex[pos], ey[pos]);
      return w.element(n, ez);
    });
  return group_on(w.c.set, law, "Wbar");
}

// --- further constructions ---------------------------------------------------------

SimplicialSet ordered_complex(std::size_t vertices, const std::vector<std::vector<std::uint32_t>>& facets,
                              std::size_t top) {
  require(vertices >= 1 && !facets.empty(), Errc::InvalidInput, "ordered complex needs vertices and facets");
  std::vector<std::set<std::uint32_t>> fs;
  for (const auto& f : facets) {
    for (std::uint32_t v : f) require(v < vertices, Errc::InvalidInput, "facet vertex out of range");
    fs.emplace_back(f.begin(), f.end());
  }
  auto inside = [&](const std::vector<std::uint32_t>& seq) {
    return std::any_of(fs.begin(), fs.end(), [&](const std::set<std::uint32_t>& f) {
      return std::all_of(seq.begin(), seq.end(), [&](std::uint32_t v) { return f.count(v) > 0; });
    });
  };
  std::vector<std::vector<std::vector<std::uint32_t>>> level(top + 1);
  std::vector<std::map<std::vector<std::uint32_t>, std::uint32_t>> index(top + 1);
  for (std::size_t n = 0; n <= top; ++n) {
    std::vector<std::uint32_t> cur;
    std::function<void(std::uint32_t)> rec = [&](std::uint32_t from) {
      if (cur.size() == n + 1) {
        if (inside(cur)) level[n].push_back(cur);
        if (level[n].size() > kMaxCells) fail(Errc::SearchBudgetExceeded, "ordered complex too large");
        return;
      }
      for (std::uint32_t v = from; v < vertices; ++v) {
        cur.push_back(v);
        rec(v);
        cur.pop_back();
      }
    };
    rec(0);
    for (std::uint32_t k = 0; k < level[n].size(); ++k) index[n].emplace(level[n][k], k);
  }
  SimplicialSet s;
  for (std::size_t n = 0; n <= top; ++n) {
    s.sizes.push_back(level[n].size());
    s.faces.emplace_back(n ? n + 1 : 0, Map(level[n].size()));
    s.degeneracies.emplace_back(n < top ? n + 1 : 0, Map(level[n].size()));
    for (std::uint32_t k = 0; k < level[n].size(); ++k) {
      for (std::size_t i = 0; n >= 1 && i <= n; ++i) {
        auto f = level[n][k];
        f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
        s.faces[n][i][k] = index[n - 1].at(f);
      }
      for (std::size_t i = 0; n < top && i <= n; ++i) {
        auto f = level[n][k];
        f.insert(f.begin() + static_cast<std::ptrdiff_t>(i), f[i]);
        s.degeneracies[n][i][k] = index[n + 1].at(f);
      }
    }
  }
  return s;
}

BisimplicialSet external_product(const SimplicialSet& k, const SimplicialSet& l) {
  const std::size_t n = std::min(k.top(), l.top());
  BisimplicialSet x;
  allocate(x, n, false);
  for (std::size_t p = 0; p <= n; ++p)
    for (std::size_t q = 0; q <= n; ++q) {
      const std::size_t a = k.sizes[p], b = l.sizes[q];
      if (a * b > kMaxCells) fail(Errc::SearchBudgetExceeded, "external product too large");
      x.sizes[p][q] = a * b;
      auto pair_map = [&](const Map* mk, const Map* ml, std::size_t b_out) {
        Map m(a * b);
        for (std::size_t u = 0; u < a; ++u)
          for (std::size_t v = 0; v < b; ++v)
            m[u * b + v] = static_cast<std::uint32_t>((mk ? (*mk)[u] : u) * b_out + (ml ? (*ml)[v] : v));
        return m;
      };
      for (std::size_t i = 0; p >= 1 && i <= p; ++i) x.hfaces[p][q].push_back(pair_map(&k.faces[p][i], nullptr, b));
      for (std::size_t i = 0; p < n && i <= p; ++i) x.hdegeneracies[p][q].push_back(pair_map(&k.degeneracies[p][i], nullptr, b));
      for (std::size_t j = 0; q >= 1 && j <= q; ++j) x.vfaces[p][q].push_back(pair_map(nullptr, &l.faces[q][j], l.sizes[q - 1]));
      for (std::size_t j = 0; q < n && j <= q; ++j)
        x.vdegeneracies[p][q].push_back(pair_map(nullptr, &l.degeneracies[q][j], l.sizes[q + 1]));
    }
  return x;
}

BisimplicialSet decalage(const SimplicialSet& k, std::size_t n) {
  require(k.top() >= 2 * n + 1, Errc::TruncationInsufficient, "decalage needs levels up to 2n+1");
  BisimplicialSet x;
  allocate(x, n, false);
  for (std::size_t p = 0; p <= n; ++p)
    for (std::size_t q = 0; q <= n; ++q) {
      const std::size_t lv = p + q + 1;
      x.sizes[p][q] = k.sizes[lv];
      for (std::size_t i = 0; p >= 1 && i <= p; ++i) x.hfaces[p][q].push_back(k.faces[lv][i]);
      for (std::size_t i = 0; p < n && i <= p; ++i) x.hdegeneracies[p][q].push_back(k.degeneracies[lv][i]);
      for (std::size_t j = 0; q >= 1 && j <= q; ++j) x.vfaces[p][q].push_back(k.faces[lv][p + 1 + j]);
      for (std::size_t j = 0; q < n && j <= q; ++j) x.vdegeneracies[p][q].push_back(k.degeneracies[lv][p + 1 + j]);
    }
  return x;
}

BisimplicialSet product(const BisimplicialSet& x, const BisimplicialSet& y) {
  require(x.n == y.n && x.triangular == y.triangular, Errc::InvalidInput, "product of differently truncated objects");
  BisimplicialSet z;
  allocate(z, x.n, x.triangular);
  auto pair_map = [](const Map& a, const Map& b, std::size_t b_out) {
    Map m(a.size() * b.size());
    for (std::size_t u = 0; u < a.size(); ++u)
      for (std::size_t v = 0; v < b.size(); ++v) m[u * b.size() + v] = static_cast<std::uint32_t>(a[u] * b_out + b[v]);
    return m;
  };
  for (std::size_t p = 0; p <= x.n; ++p)
    for (std::size_t q = 0; q <= x.n; ++q) {
      if (!x.defined(p, q)) continue;
      if (x.sizes[p][q] * y.sizes[p][q] > kMaxCells) fail(Errc::SearchBudgetExceeded, "product too large");
      z.sizes[p][q] = x.sizes[p][q] * y.sizes[p][q];
      for (std::size_t i = 0; i < x.hfaces[p][q].size(); ++i)
        z.hfaces[p][q].push_back(pair_map(x.hfaces[p][q][i], y.hfaces[p][q][i], y.sizes[p - 1][q]));
      for (std::size_t i = 0; i < x.hdegeneracies[p][q].size(); ++i)
        z.hdegeneracies[p][q].push_back(pair_map(x.hdegeneracies[p][q][i], y.hdegeneracies[p][q][i], y.sizes[p + 1][q]));
      for (std::size_t j = 0; j < x.vfaces[p][q].size(); ++j)
        z.vfaces[p][q].push_back(pair_map(x.vfaces[p][q][j], y.vfaces[p][q][j], y.sizes[p][q - 1]));
      for (std::size_t j = 0; j < x.vdegeneracies[p][q].size(); ++j)
        z.vdegeneracies[p][q].push_back(pair_map(x.vdegeneracies[p][q][j], y.vdegeneracies[p][q][j], y.sizes[p][q + 1]));
    }
  return z;
}

// --- Dold-Kan ------------------------------------------------------------------------

namespace {

struct DkLevel {
  std::vector<std::pair<std::size_t, std::vector<std::uint32_t>>> summands;  // (k, sigma : [n] ->> [k])
  std::map<std::vector<std::uint32_t>, std::size_t> find;
  std::vector<std::size_t> offset;
  std::vector<std::int64_t> radix;
};

DkLevel dk_level(const FiniteChainComplex& c, std::size_t n) {
  DkLevel lv;
  const std::size_t kmax = std::min(n, c.groups.size() - 1);
  for (std::size_t k = 0; k <= kmax; ++k) {
    // jumps at a k-subset of {1..n}
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    std::vector<std::vector<std::uint32_t>> sigmas;
    do {
      std::vector<std::uint32_t> s(n + 1, 0);
      for (std::size_t j = 1; j <= n; ++j) s[j] = s[j - 1] + (pick[j - 1] ? 1 : 0);
      sigmas.push_back(s);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    std::sort(sigmas.begin(), sigmas.end());
    for (auto& s : sigmas) {
      lv.find[s] = lv.summands.size();
      lv.offset.push_back(lv.radix.size());
      lv.radix.insert(lv.radix.end(), c.groups[k].begin(), c.groups[k].end());
      lv.summands.emplace_back(k, std::move(s));
    }
  }
  return lv;
}

std::vector<std::int64_t> dk_decode(std::size_t x, const std::vector<std::int64_t>& radix) {
  std::vector<std::int64_t> v(radix.size());
  for (std::size_t i = radix.size(); i-- > 0;) {
    v[i] = static_cast<std::int64_t>(x % static_cast<std::size_t>(radix[i]));
    x /= static_cast<std::size_t>(radix[i]);
  }
  return v;
}

std::size_t dk_encode(const std::vector<std::int64_t>& v, const std::vector<std::int64_t>& radix) {
  std::size_t x = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::int64_t r = radix[i];
    x = x * static_cast<std::size_t>(r) + static_cast<std::size_t>(((v[i] % r) + r) % r);
  }
  return x;
}

}  // namespace

SimplicialGroup dold_kan(const FiniteChainComplex& c, std::size_t top) {
  require(!c.groups.empty(), Errc::InvalidInput, "chain complex has no groups");
  const std::size_t deg = c.groups.size() - 1;
  require(c.boundary.size() == deg + 1, Errc::InvalidInput, "one boundary matrix per positive degree expected");
  for (const auto& g : c.groups)
    for (std::int64_t o : g) require(o >= 1, Errc::InvalidInput, "cyclic orders must be positive");
  for (std::size_t k = 1; k <= deg; ++k) {
    const auto& m = c.boundary[k];
    const std::size_t rows = c.groups[k - 1].size(), cols = c.groups[k].size();
    require(m.size() == rows * cols, Errc::InvalidInput, "boundary matrix has the wrong shape");
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t q = 0; q < cols; ++q)
        require((c.groups[k][q] * m[r * cols + q]) % c.groups[k - 1][r] == 0, Errc::InvalidInput,
                "boundary is not well defined on cyclic factors");
    if (k >= 2) {
      const auto& m2 = c.boundary[k - 1];
      const std::size_t rows2 = c.groups[k - 2].size();
      for (std::size_t r = 0; r < rows2; ++r)
        for (std::size_t q = 0; q < cols; ++q) {
          std::int64_t s = 0;
          for (std::size_t mid = 0; mid < rows; ++mid) s += m2[r * rows + mid] * m[mid * cols + q];
          require(s % c.groups[k - 2][r] == 0, Errc::InvalidInput, "boundary does not square to zero");
        }
    }
  }
  std::vector<DkLevel> lv;
  for (std::size_t n = 0; n <= top; ++n) lv.push_back(dk_level(c, n));

  // theta^* : level n -> level m for theta : [m] -> [n]
  auto act = [&](std::size_t n, std::size_t m, const std::vector<std::uint32_t>& theta, std::size_t x) {
    const auto v = dk_decode(x, lv[n].radix);
    std::vector<std::int64_t> out(lv[m].radix.size(), 0);
    for (std::size_t s = 0; s < lv[n].summands.size(); ++s) {
      const auto& [k, sigma] = lv[n].summands[s];
      std::vector<std::uint32_t> comp(m + 1);
      for (std::size_t j = 0; j <= m; ++j) comp[j] = sigma[theta[j]];
      std::set<std::uint32_t> image(comp.begin(), comp.end());
      const std::size_t off = lv[n].offset[s], len = c.groups[k].size();
      if (image.size() == k + 1) {
        const std::size_t to = lv[m].offset[lv[m].find.at(comp)];
        for (std::size_t i = 0; i < len; ++i) out[to + i] += v[off + i];
      } else if (k >= 1 && image.size() == k && *image.begin() == 1) {
        for (auto& e : comp) --e;
        const std::size_t to = lv[m].offset[lv[m].find.at(comp)];
        const std::size_t rows = c.groups[k - 1].size();
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t i = 0; i < len; ++i) out[to + r] += c.boundary[k][r * len + i] * v[off + i];
      }
    }
    return dk_encode(out, lv[m].radix);
  };

  SimplicialSet s;
  std::vector<std::function<std::uint32_t(std::uint32_t, std::uint32_t)>> law;
  for (std::size_t n = 0; n <= top; ++n) {
    std::size_t size = 1;
    for (std::int64_t r : lv[n].radix) {
      size *= static_cast<std::size_t>(r);
      if (size > kMaxGroup) fail(Errc::SearchBudgetExceeded, "Dold-Kan level too large");
    }
    s.sizes.push_back(size);
    law.push_back([&lv, n](std::uint32_t a, std::uint32_t b) {
      auto va = dk_decode(a, lv[n].radix);
      const auto vb = dk_decode(b, lv[n].radix);
      for (std::size_t i = 0; i < va.size(); ++i) va[i] += vb[i];
      return static_cast<std::uint32_t>(dk_encode(va, lv[n].radix));
    });
  }
  for (std::size_t n = 0; n <= top; ++n) {
    s.faces.emplace_back();
    s.degeneracies.emplace_back();
    for (std::size_t i = 0; n >= 1 && i <= n; ++i) {
      std::vector<std::uint32_t> theta(n);
      for (std::size_t j = 0; j < n; ++j) theta[j] = static_cast<std::uint32_t>(j < i ? j : j + 1);
      Map m(s.sizes[n]);
      for (std::size_t x = 0; x < m.size(); ++x) m[x] = static_cast<std::uint32_t>(act(n, n - 1, theta, x));
      s.faces[n].push_back(std::move(m));
    }
    for (std::size_t i = 0; n < top && i <= n; ++i) {
      std::vector<std::uint32_t> theta(n + 2);
      for (std::size_t j = 0; j <= n + 1; ++j) theta[j] = static_cast<std::uint32_t>(j <= i ? j : j - 1);
      Map m(s.sizes[n]);
      for (std::size_t x = 0; x < m.size(); ++x) m[x] = static_cast<std::uint32_t>(act(n, n + 1, theta, x));
      s.degeneracies[n].push_back(std::move(m));
    }
  }
  return group_on(s, law, "K");
}

// --- invariants --------------------------------------------------------------------

namespace {

std::vector<Elem> moore_chains(const SimplicialGroup& g, std::size_t k) {
  std::vector<Elem> out;
  for (Elem x = 0; x < g.levels[k].size(); ++x) {
    bool in = true;
    for (std::size_t i = 1; i <= k && in; ++i) in = g.faces[k][i](x) == 0;
    if (in) out.push_back(x);
  }
  return out;
}

std::vector<Elem> moore_boundaries(const SimplicialGroup& g, std::size_t k) {
  std::set<Elem> b;
  for (Elem y : moore_chains(g, k + 1)) b.insert(g.faces[k + 1][0](y));
  return {b.begin(), b.end()};
}

}  // namespace

QuotientGroup pi0(const SimplicialGroup& g) {
  g.validate();
  if (g.top() == 0) return quotient(g.levels[0], trivial_subgroup(g.levels[0]));
  return quotient(g.levels[0], Subgroup(g.levels[0], moore_boundaries(g, 0)));
}

std::vector<std::vector<std::int64_t>> moore_homotopy(const SimplicialGroup& g) {
  g.validate();
  require(g.levelwise_abelian(), Errc::NotAbelian, "Moore homotopy groups need abelian levels");
  std::vector<std::vector<std::int64_t>> out;
  for (std::size_t k = 0; k + 1 <= g.top(); ++k) {
    std::vector<Elem> cycles;
    for (Elem x : moore_chains(g, k))
      if (k == 0 || g.faces[k][0](x) == 0) cycles.push_back(x);
    const auto z = subgroup_as_group(Subgroup(g.levels[k], cycles));
    std::vector<Elem> back(g.levels[k].size(), 0);
    for (Elem x = 0; x < z.group.size(); ++x) back[z.inclusion(x)] = x;
    std::vector<Elem> b;
    for (Elem y : moore_boundaries(g, k)) b.push_back(back[y]);
    const auto q = quotient(z.group, Subgroup(z.group, b));
    out.push_back(abelian_structure(whole_group(q.group)).factors);
  }
  return out;
}

std::vector<std::vector<std::int64_t>> integral_homology(const SimplicialSet& x) {
  if (x.top() == 0) return {};
  const auto nz = normalize(x, x.top());
  ChainComplexZ c;
  for (std::size_t n = 0; n <= x.top(); ++n) {
    c.dims.push_back(nz.basis[n].size());
    c.d.emplace_back();
    if (n >= 1) add_boundary(x, nz, n, 0, 0, 1, c.d[n]);
  }
  return homology_upto(c, x.top() - 1);
}

namespace {

/// Coset enumeration (HLT with coincidences) over the trivial subgroup.
/// Letters 2i, 2i+1 are generator i and its inverse.
class CosetTable {
 public:
  CosetTable(std::size_t gens, std::size_t limit) : letters_(2 * gens), limit_(limit) { add(); }

  bool run(const std::vector<std::vector<int>>& rels) {
    for (std::size_t c = 0; c < table_.size(); ++c) {
      for (const auto& r : rels) {
        if (!alive(c)) break;
        if (!scan_and_fill(c, r)) return false;
      }
      for (std::size_t x = 0; x < letters_ && alive(c); ++x)
        if (table_[c][x] < 0 && !define(c, x)) return false;
    }
    return true;
  }

  /// Live cosets renumbered in order; act[g][c] for generator g.
  std::vector<std::vector<std::uint32_t>> regular() const {
    std::vector<std::int64_t> pos(table_.size(), -1);
    std::size_t n = 0;
    for (std::size_t c = 0; c < table_.size(); ++c)
      if (alive(c)) pos[c] = static_cast<std::int64_t>(n++);
    std::vector<std::vector<std::uint32_t>> act(letters_ / 2, std::vector<std::uint32_t>(n));
    for (std::size_t c = 0; c < table_.size(); ++c)
      if (alive(c))
        for (std::size_t g = 0; g < letters_ / 2; ++g)
          act[g][static_cast<std::size_t>(pos[c])] = static_cast<std::uint32_t>(pos[rep(static_cast<std::size_t>(table_[c][2 * g]))]);
    return act;
  }

 private:
  static std::size_t inv(std::size_t x) { return x ^ 1u; }
  bool alive(std::size_t c) const { return parent_[c] == c; }

  std::size_t rep(std::size_t c) const {
    while (parent_[c] != c) c = parent_[c];
    return c;
  }

  void add() {
    table_.emplace_back(letters_, -1);
    parent_.push_back(parent_.size());
  }

  bool define(std::size_t c, std::size_t x) {
    if (table_.size() >= limit_) return false;
    const std::size_t d = table_.size();
    add();
    table_[c][x] = static_cast<std::int64_t>(d);
    table_[d][inv(x)] = static_cast<std::int64_t>(c);
    return true;
  }

  bool scan_and_fill(std::size_t c, const std::vector<int>& w) {
    std::size_t f = c, b = c;
    std::size_t i = 0, j = w.size();  // j is one past the last unscanned letter
    for (;;) {
      while (i < j && table_[f][static_cast<std::size_t>(w[i])] >= 0) f = static_cast<std::size_t>(table_[f][static_cast<std::size_t>(w[i++])]);
      if (i == j) {
        if (f != b) coincidence(f, b);
        return true;
      }
      while (j > i && table_[b][inv(static_cast<std::size_t>(w[j - 1]))] >= 0)
        b = static_cast<std::size_t>(table_[b][inv(static_cast<std::size_t>(w[--j]))]);
      if (j == i) {
        coincidence(f, b);
        return true;
      }
      if (j == i + 1) {
        table_[f][static_cast<std::size_t>(w[i])] = static_cast<std::int64_t>(b);
        table_[b][inv(static_cast<std::size_t>(w[i]))] = static_cast<std::int64_t>(f);
        return true;
      }
      if (!define(f, static_cast<std::size_t>(w[i]))) return false;
    }
  }

  void merge(std::size_t k, std::size_t l, std::vector<std::size_t>& queue) {
    k = rep(k);
    l = rep(l);
    if (k == l) return;
    parent_[std::max(k, l)] = std::min(k, l);
    queue.push_back(std::max(k, l));
  }

  void coincidence(std::size_t a, std::size_t b) {
    std::vector<std::size_t> queue;
    merge(a, b, queue);
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const std::size_t e = queue[q];
      for (std::size_t x = 0; x < letters_; ++x) {
        if (table_[e][x] < 0) continue;
        const auto f = static_cast<std::size_t>(table_[e][x]);
        table_[f][inv(x)] = -1;
        const std::size_t e1 = rep(e), f1 = rep(f);
        if (table_[e1][x] >= 0) {
          merge(f1, static_cast<std::size_t>(table_[e1][x]), queue);
        } else if (table_[f1][inv(x)] >= 0) {
          merge(e1, static_cast<std::size_t>(table_[f1][inv(x)]), queue);
        } else {
          table_[e1][x] = static_cast<std::int64_t>(f1);
          table_[f1][inv(x)] = static_cast<std::int64_t>(e1);
        }
      }
    }
  }

  std::size_t letters_, limit_;
  std::vector<std::vector<std::int64_t>> table_;
  std::vector<std::size_t> parent_;
};

}  // namespace

std::optional<EdgePathGroup> edge_path_group(const SimplicialSet& x, std::size_t max_cosets) {
  require(x.sizes.at(0) == 1, Errc::InvalidInput, "edge-path group needs a single vertex");
  require(x.top() >= 2, Errc::TruncationInsufficient, "edge-path group needs 2-simplices");
  const auto deg1 = x.degenerate(1), deg2 = x.degenerate(2);
  EdgePathGroup out;
  std::vector<int> gen_of(x.sizes[1], -1);
  for (std::uint32_t e = 0; e < x.sizes[1]; ++e)
    if (!deg1[e]) {
      gen_of[e] = static_cast<int>(out.edges.size());
      out.edges.push_back(e);
    }
  if (out.edges.empty()) return out;
  std::set<std::vector<int>> rels;
  for (std::uint32_t s = 0; s < x.sizes[2]; ++s) {
    if (deg2[s]) continue;
    // d_2 s . d_0 s = d_1 s
    std::vector<int> word;
    for (const auto& [face, inverse] : {std::pair{2, 0}, std::pair{0, 0}, std::pair{1, 1}}) {
      const int g = gen_of[x.faces[2][static_cast<std::size_t>(face)][s]];
      if (g >= 0) word.push_back(2 * g + inverse);
    }
    if (!word.empty()) rels.insert(word);
  }
  CosetTable t(out.edges.size(), max_cosets);
  if (!t.run({rels.begin(), rels.end()})) return std::nullopt;
  out.act = t.regular();
  return out;
}

bool homology_equivalence(const SimplicialMap& f, const SimplicialSet& x, const SimplicialSet& y) {
  const std::size_t top = x.top();
  require(y.top() >= top && f.size() == top + 1, Errc::InvalidInput, "map and truncations do not match");
  if (top == 0) return true;
  const auto nx = normalize(x, top), ny = normalize(y, top);
  // cone_k = N_{k-1}(X) + N_k(Y)
  ChainComplexZ c;
  auto xdim = [&](std::size_t k) { return k >= 1 ? nx.basis[k - 1].size() : std::size_t{0}; };
  for (std::size_t k = 0; k <= top; ++k) {
    c.dims.push_back(xdim(k) + ny.basis[k].size());
    c.d.emplace_back();
    if (k == 0) continue;
    auto& d = c.d[k];
    const auto row_y = static_cast<std::uint32_t>(xdim(k - 1));
    if (k >= 2) add_boundary(x, nx, k - 1, 0, 0, -1, d);
    for (std::size_t b = 0; b < nx.basis[k - 1].size(); ++b) {
      const std::int64_t t = ny.index[k - 1][f[k - 1][nx.basis[k - 1][b]]];
      if (t >= 0) d.push_back({static_cast<std::uint32_t>(row_y + t), static_cast<std::uint32_t>(b), 1});
    }
    add_boundary(y, ny, k, static_cast<std::uint32_t>(xdim(k)), row_y, 1, d);
  }
  for (const auto& h : homology_upto(c, top - 1))
    if (!h.empty()) return false;
  return true;
}

SimplicialMap diagonal_to_codiagonal(const BisimplicialSet& x, const Codiagonal& nabla) {
  require(!x.triangular, Errc::TruncationInsufficient, "the diagonal needs the full square of cells");
  SimplicialMap out;
  for (std::size_t n = 0; n < nabla.tuples.size(); ++n) {
    Map m(x.sizes[n][n]);
    for (std::uint32_t c = 0; c < m.size(); ++c) {
      std::vector<std::uint32_t> t(n + 1);
      for (std::size_t i = 0; i <= n; ++i) {
        std::uint32_t v = c;
        for (std::size_t k = 0; k < i; ++k) v = x.vfaces[n][n - k][0][v];
        for (std::size_t p = n; p > i; --p) v = x.hfaces[p][n - i][p][v];
        t[i] = v;
      }
      const auto it = nabla.index[n].find(t);
      if (it == nabla.index[n].end()) throw std::logic_error("diagonal element does not land in the codiagonal");
      m[c] = it->second;
    }
    out.push_back(std::move(m));
  }
  return out;
}

DiagReport diag_vs_codiag(const BisimplicialSet& x) {
  const auto v = x.identity_violations(1);
  require(v.empty(), Errc::InvalidInput, v.empty() ? std::string() : v.front());
  DiagReport r;
  const SimplicialSet d = x.diagonal();
  const Codiagonal c = codiagonal_tuples(x, x.n);
  r.diag_homology = integral_homology(d);
  r.codiag_homology = integral_homology(c.set);
  r.equal = r.diag_homology == r.codiag_homology;
  const auto phi = diagonal_to_codiagonal(x, c);
  r.natural_map_simplicial = is_simplicial_map(phi, d, c.set);
  r.natural_map_equivalence = r.natural_map_simplicial && homology_equivalence(phi, d, c.set);
  return r;
}

// --- extensions ----------------------------------------------------------------------

void SimplicialExtension::validate() const {
  total.validate();
  base.validate();
  require(total.top() == base.top() && projection.size() == total.top() + 1, Errc::InvalidInput,
          "extension levels do not match");
  for (std::size_t n = 0; n <= total.top(); ++n) {
    const auto& p = projection[n];
    require(p.source().same_as(total.levels[n]) && p.target().same_as(base.levels[n]) && p.is_homomorphism() &&
                p.is_surjective(),
            Errc::InvalidInput, at("projection is not a surjective homomorphism", n));
    for (std::size_t i = 0; n >= 1 && i <= n; ++i)
      require(base.faces[n][i].after(p) == projection[n - 1].after(total.faces[n][i]), Errc::InvalidInput,
              at("projection does not commute with faces", n, i));
    for (std::size_t i = 0; n < total.top() && i <= n; ++i)
      require(base.degeneracies[n][i].after(p) == projection[n + 1].after(total.degeneracies[n][i]),
              Errc::InvalidInput, at("projection does not commute with degeneracies", n, i));
    const auto k = p.kernel();
    for (Elem a : k.elements())
      for (Elem b : k.elements())
        require(total.levels[n].mul(a, b) == total.levels[n].mul(b, a), Errc::NotAbelianKernel,
                at("extension kernel is not abelian", n));
  }
}

SimplicialExtension constant_extension(const GroupHom& p, std::size_t top) {
  SimplicialExtension e{SimplicialGroup::constant(p.source(), top), SimplicialGroup::constant(p.target(), top),
                        std::vector<GroupHom>(top + 1, p)};
  e.validate();
  return e;
}

namespace {

struct Product {
  SimplicialGroup group;
  std::vector<ProductGroup> parts;
  std::vector<std::map<std::pair<Elem, Elem>, Elem>> index;
};

Product simplicial_product(const SimplicialGroup& a, const SimplicialGroup& b) {
  require(a.top() == b.top(), Errc::InvalidInput, "product of differently truncated simplicial groups");
  Product out;
  for (std::size_t n = 0; n <= a.top(); ++n) {
    out.parts.push_back(direct_product(a.levels[n], b.levels[n]));
    out.group.levels.push_back(out.parts[n].group);
    out.index.emplace_back();
    for (Elem x = 0; x < out.parts[n].components.size(); ++x) out.index[n][out.parts[n].components[x]] = x;
  }
  auto pair_hom = [&](std::size_t from, std::size_t to, const GroupHom& f, const GroupHom& g) {
    std::vector<Elem> img(out.parts[from].components.size());
    for (Elem x = 0; x < img.size(); ++x) {
      const auto [u, v] = out.parts[from].components[x];
      img[x] = out.index[to].at({f(u), g(v)});
    }
    return GroupHom(out.group.levels[from], out.group.levels[to], std::move(img));
  };
  for (std::size_t n = 0; n <= a.top(); ++n) {
    out.group.faces.emplace_back();
    out.group.degeneracies.emplace_back();
    for (std::size_t i = 0; i < a.faces[n].size(); ++i)
      out.group.faces[n].push_back(pair_hom(n, n - 1, a.faces[n][i], b.faces[n][i]));
    for (std::size_t i = 0; i < a.degeneracies[n].size(); ++i)
      out.group.degeneracies[n].push_back(pair_hom(n, n + 1, a.degeneracies[n][i], b.degeneracies[n][i]));
  }
  return out;
}

}  // namespace

SimplicialExtension extension_times(const SimplicialExtension& e, const SimplicialGroup& k) {
  e.validate();
  k.validate();
  const Product g = simplicial_product(e.total, k), h = simplicial_product(e.base, k);
  SimplicialExtension out{g.group, h.group, {}};
  for (std::size_t n = 0; n <= k.top(); ++n) {
    std::vector<Elem> img(g.group.levels[n].size());
    for (Elem x = 0; x < img.size(); ++x) {
      const auto [u, v] = g.parts[n].components[x];
      img[x] = h.index[n].at({e.projection[n](u), v});
    }
    out.projection.emplace_back(g.group.levels[n], h.group.levels[n], std::move(img));
  }
  out.validate();
  return out;
}

// --- the principal fibration ---------------------------------------------------------

namespace {

/// Groupoid object in simplicial groups: objects, morphisms, source, target,
/// identity and composition of composable pairs, per level.
struct SGroupoid {
  SimplicialGroup obj, mor;
  std::vector<GroupHom> s, t, e;
  std::vector<std::function<Elem(Elem, Elem)>> comp;
};

/// nabla of the nerve of the levelwise W-bar of a groupoid in simplicial groups.
struct Tower {
  std::size_t top;
  WbarCoder wo, wm;
  SimplicialMap ws, wt, we;
  std::vector<std::vector<std::vector<std::vector<std::uint32_t>>>> chains;  // [p][q] -> sorted chains
  std::vector<std::vector<std::map<std::vector<std::uint32_t>, std::uint32_t>>> chain_index;
  BisimplicialSet nerve;
  Codiagonal nabla;

  explicit Tower(const SGroupoid& g)
      : top(g.obj.top()),
        wo(g.obj),
        wm(g.mor),
        ws(wbar_map(wm, wo, g.s)),
        wt(wbar_map(wm, wo, g.t)),
        we(wbar_map(wo, wm, g.e)) {
    auto compose_w = [&](std::size_t q, std::uint32_t a, std::uint32_t b) {
      const auto ea = wm.entries(q, a), eb = wm.entries(q, b);
      std::vector<Elem> ec(ea.size());
      std::size_t pos = 0;
      for (std::size_t i = 0; i <= q; ++i)
        for (std::size_t k = 0; k < i; ++k, ++pos) ec[pos] = g.comp[q - i](ea[pos], eb[pos]);
      return wm.element(q, ec);
    };
    chains.assign(top + 1, std::vector<std::vector<std::vector<std::uint32_t>>>(top + 1));
    chain_index.assign(top + 1, std::vector<std::map<std::vector<std::uint32_t>, std::uint32_t>>(top + 1));
    for (std::size_t q = 0; q <= top; ++q) {
      std::vector<std::vector<std::uint32_t>> by_source(wo.c.set.sizes[q]);
      for (std::uint32_t m = 0; m < wm.c.set.sizes[q]; ++m) by_source[ws[q][m]].push_back(m);
      for (std::size_t p = 0; p + q <= top; ++p) {
        auto& list = chains[p][q];
        if (p == 0) {
          for (std::uint32_t o = 0; o < wo.c.set.sizes[q]; ++o) list.push_back({o});
        } else if (p == 1) {
          for (std::uint32_t m = 0; m < wm.c.set.sizes[q]; ++m) list.push_back({m});
        } else {
          for (const auto& ch : chains[p - 1][q])
            for (std::uint32_t m : by_source[wt[q][ch.back()]]) {
              list.push_back(ch);
              list.back().push_back(m);
              if (list.size() > kMaxCells) fail(Errc::SearchBudgetExceeded, "groupoid nerve too large");
            }
          std::sort(list.begin(), list.end());
        }
        for (std::uint32_t k = 0; k < list.size(); ++k) chain_index[p][q].emplace(list[k], k);
      }
    }
    allocate(nerve, top, true);
    for (std::size_t p = 0; p <= top; ++p)
      for (std::size_t q = 0; p + q <= top; ++q) {
        const auto& list = chains[p][q];
        nerve.sizes[p][q] = list.size();
        auto find = [&](std::size_t pp, std::size_t qq, const std::vector<std::uint32_t>& ch) {
          const auto it = chain_index[pp][qq].find(ch);
          if (it == chain_index[pp][qq].end()) throw std::logic_error("groupoid nerve map left the nerve");
          return it->second;
        };
        const bool up_h = p + q + 1 <= top;
        nerve.hfaces[p][q].assign(p ? p + 1 : 0, Map(list.size()));
        nerve.hdegeneracies[p][q].assign(up_h ? p + 1 : 0, Map(list.size()));
        nerve.vfaces[p][q].assign(q ? q + 1 : 0, Map(list.size()));
        nerve.vdegeneracies[p][q].assign(up_h ? q + 1 : 0, Map(list.size()));
        for (std::uint32_t k = 0; k < list.size(); ++k) {
          const auto& ch = list[k];
          for (std::size_t i = 0; p >= 1 && i <= p; ++i) {
            std::vector<std::uint32_t> f;
            if (p == 1) {
              f = {i == 0 ? wt[q][ch[0]] : ws[q][ch[0]]};
            } else if (i == 0) {
              f.assign(ch.begin() + 1, ch.end());
            } else if (i == p) {
              f.assign(ch.begin(), ch.end() - 1);
            } else {
              f.assign(ch.begin(), ch.begin() + static_cast<std::ptrdiff_t>(i - 1));
              f.push_back(compose_w(q, ch[i - 1], ch[i]));
              f.insert(f.end(), ch.begin() + static_cast<std::ptrdiff_t>(i + 1), ch.end());
            }
            nerve.hfaces[p][q][i][k] = find(p - 1, q, f);
          }
          for (std::size_t i = 0; up_h && i <= p; ++i) {
            std::vector<std::uint32_t> f;
            if (p == 0) {
              f = {we[q][ch[0]]};
            } else {
              const std::uint32_t o = i < p ? ws[q][ch[i]] : wt[q][ch[p - 1]];
              f = ch;
              f.insert(f.begin() + static_cast<std::ptrdiff_t>(i), we[q][o]);
            }
            nerve.hdegeneracies[p][q][i][k] = find(p + 1, q, f);
          }
          const auto& level_set = p == 0 ? wo.c.set : wm.c.set;
          for (std::size_t j = 0; q >= 1 && j <= q; ++j) {
            std::vector<std::uint32_t> f(ch.size());
            for (std::size_t u = 0; u < ch.size(); ++u) f[u] = level_set.faces[q][j][ch[u]];
            nerve.vfaces[p][q][j][k] = find(p, q - 1, f);
          }
          for (std::size_t j = 0; up_h && j <= q; ++j) {
            std::vector<std::uint32_t> f(ch.size());
            for (std::size_t u = 0; u < ch.size(); ++u) f[u] = level_set.degeneracies[q][j][ch[u]];
            nerve.vdegeneracies[p][q][j][k] = find(p, q + 1, f);
          }
        }
      }
    nabla = codiagonal_tuples(nerve, top);
  }

  const SimplicialSet& set() const { return nabla.set; }
};

/// Map of nablas induced by a levelwise functor (object and morphism homs).
SimplicialMap induced(const Tower& src, const Tower& dst, const std::vector<GroupHom>& fo, const std::vector<GroupHom>& fm) {
  const auto wo = wbar_map(src.wo, dst.wo, fo), wm = wbar_map(src.wm, dst.wm, fm);
  SimplicialMap out;
  for (std::size_t n = 0; n <= src.top; ++n) {
    Map m(src.set().sizes[n]);
    for (std::uint32_t y = 0; y < m.size(); ++y) {
      const auto& t = src.nabla.tuples[n][y];
      std::vector<std::uint32_t> image(n + 1);
      for (std::size_t i = 0; i <= n; ++i) {
        const auto& ch = src.chains[i][n - i][t[i]];
        std::vector<std::uint32_t> f(ch.size());
        for (std::size_t u = 0; u < ch.size(); ++u) f[u] = (i == 0 ? wo : wm)[n - i][ch[u]];
        image[i] = dst.chain_index[i][n - i].at(f);
      }
      m[y] = dst.nabla.index[n].at(image);
    }
    out.push_back(std::move(m));
  }
  return out;
}

SGroupoid discrete(const SimplicialGroup& g) {
  SGroupoid d{g, g, {}, {}, {}, {}};
  for (const auto& lv : g.levels) {
    const GroupHom id = GroupHom::identity(lv);
    d.s.push_back(id);
    d.t.push_back(id);
    d.e.push_back(id);
    d.comp.push_back([](Elem a, Elem) { return a; });
  }
  return d;
}

/// Levelwise semidirect products X_q x| A_q with A_q = ker p_q inside G_q and
/// right action a.x = lift(x)^-1 a lift(x).
struct Semidirect {
  SimplicialGroup group;
  std::vector<std::vector<std::pair<Elem, Elem>>> parts;  // canonical element -> (x, a)
  std::vector<std::map<std::pair<Elem, Elem>, Elem>> index;
};

Semidirect semidirect(const SimplicialGroup& x, const SimplicialExtension& e, const std::vector<std::vector<Elem>>& lift) {
  Semidirect out;
  const std::size_t top = x.top();
  std::vector<std::vector<Elem>> canon(top + 1);
  SimplicialSet s;
  std::vector<std::vector<Elem>> kernel(top + 1);
  std::vector<std::map<Elem, std::size_t>> kpos(top + 1);
  std::vector<std::function<std::uint32_t(std::uint32_t, std::uint32_t)>> law;
  for (std::size_t n = 0; n <= top; ++n) {
    kernel[n] = e.projection[n].kernel().elements();
    for (std::size_t i = 0; i < kernel[n].size(); ++i) kpos[n][kernel[n][i]] = i;
    s.sizes.push_back(x.levels[n].size() * kernel[n].size());
  }
  auto raw = [&](std::size_t n, Elem u, Elem a) { return static_cast<std::uint32_t>(u * kernel[n].size() + kpos[n].at(a)); };
  auto split = [&](std::size_t n, std::uint32_t r) {
    return std::pair<Elem, Elem>{static_cast<Elem>(r / kernel[n].size()), kernel[n][r % kernel[n].size()]};
  };
  for (std::size_t n = 0; n <= top; ++n) {
    law.push_back([&, n](std::uint32_t r1, std::uint32_t r2) {
      const auto [u, a] = split(n, r1);
      const auto [v, b] = split(n, r2);
      const FiniteGroup& g = e.total.levels[n];
      return raw(n, x.levels[n].mul(u, v), g.mul(g.conj(a, lift[n][v]), b));
    });
    s.faces.emplace_back();
    s.degeneracies.emplace_back();
    for (std::size_t i = 0; n >= 1 && i <= n; ++i) {
      Map m(s.sizes[n]);
      for (std::uint32_t r = 0; r < m.size(); ++r) {
        const auto [u, a] = split(n, r);
        m[r] = raw(n - 1, x.faces[n][i](u), e.total.faces[n][i](a));
      }
      s.faces[n].push_back(std::move(m));
    }
    for (std::size_t i = 0; n < top && i <= n; ++i) {
      Map m(s.sizes[n]);
      for (std::uint32_t r = 0; r < m.size(); ++r) {
        const auto [u, a] = split(n, r);
        m[r] = raw(n + 1, x.degeneracies[n][i](u), e.total.degeneracies[n][i](a));
      }
      s.degeneracies[n].push_back(std::move(m));
    }
  }
  out.group = group_on(s, law, "semidirect", &canon);
  for (std::size_t n = 0; n <= top; ++n) {
    out.parts.emplace_back(s.sizes[n]);
    out.index.emplace_back();
    for (std::uint32_t r = 0; r < s.sizes[n]; ++r) {
      out.parts[n][canon[n][r]] = split(n, r);
      out.index[n][split(n, r)] = canon[n][r];
    }
  }
  return out;
}

std::vector<bool> image_of(const Map& m, std::size_t size) {
  std::vector<bool> out(size, false);
  for (std::uint32_t v : m) out[v] = true;
  return out;
}

bool injective(const Map& m, std::size_t size) {
  std::vector<bool> seen(size, false);
  for (std::uint32_t v : m) {
    if (seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

}  // namespace

FibrationReport fibration_data(const SimplicialExtension& e) {
  e.validate();
  const std::size_t top = e.total.top();
  require(top >= 2, Errc::TruncationInsufficient, "fibration checks need truncation level at least 2");
  FibrationReport r;
  r.top = top;
  const SimplicialGroup& g = e.total;
  const SimplicialGroup& h = e.base;

  std::vector<std::vector<Elem>> lift_g(top + 1), lift_h(top + 1);
  for (std::size_t n = 0; n <= top; ++n) {
    lift_g[n].resize(g.levels[n].size());
    std::iota(lift_g[n].begin(), lift_g[n].end(), 0u);
    lift_h[n].assign(h.levels[n].size(), 0);
    for (Elem x = g.levels[n].size(); x-- > 0;) lift_h[n][e.projection[n](x)] = x;
  }
  const Semidirect ga = semidirect(g, e, lift_g), ha = semidirect(h, e, lift_h);

  SGroupoid gamma_g{g, ga.group, {}, {}, {}, {}}, gamma_h{h, ha.group, {}, {}, {}, {}};
  std::vector<GroupHom> f_obj, f_mor, zero_mor, incl_mor, w_mor;
  for (std::size_t n = 0; n <= top; ++n) {
    const FiniteGroup& gn = g.levels[n];
    const FiniteGroup& mg = ga.group.levels[n];
    const FiniteGroup& mh = ha.group.levels[n];
    std::vector<Elem> s(mg.size()), t(mg.size()), fm(mg.size()), wm(mg.size()), eg(gn.size()), incl(gn.size());
    for (Elem m = 0; m < mg.size(); ++m) {
      const auto [u, a] = ga.parts[n][m];
      s[m] = u;
      t[m] = gn.mul(u, a);
      fm[m] = ha.index[n].at({e.projection[n](u), a});
      wm[m] = e.projection[n](u);
    }
    for (Elem u = 0; u < gn.size(); ++u) incl[u] = eg[u] = ga.index[n].at({u, 0});
    gamma_g.s.emplace_back(mg, gn, s);
    gamma_g.t.emplace_back(mg, gn, t);
    gamma_g.e.emplace_back(gn, mg, eg);
    gamma_g.comp.push_back([&ga, &gn, n](Elem x, Elem y) {
      const auto [u, a] = ga.parts[n][x];
      return ga.index[n].at({u, gn.mul(a, ga.parts[n][y].second)});
    });
    const FiniteGroup& hn = h.levels[n];
    std::vector<Elem> sh(mh.size()), eh(hn.size());
    for (Elem m = 0; m < mh.size(); ++m) sh[m] = ha.parts[n][m].first;
    for (Elem u = 0; u < hn.size(); ++u) eh[u] = ha.index[n].at({u, 0});
    gamma_h.s.emplace_back(mh, hn, sh);
    gamma_h.t.emplace_back(mh, hn, sh);
    gamma_h.e.emplace_back(hn, mh, eh);
    gamma_h.comp.push_back([&ha, &gn, n](Elem x, Elem y) {
      const auto [u, a] = ha.parts[n][x];
      return ha.index[n].at({u, gn.mul(a, ha.parts[n][y].second)});
    });
    f_obj.push_back(e.projection[n]);
    f_mor.emplace_back(mg, mh, fm);
    zero_mor.emplace_back(hn, mh, eh);
    incl_mor.emplace_back(gn, mg, incl);
    w_mor.emplace_back(mg, hn, wm);
  }
  for (std::size_t n = 0; n <= top; ++n) {
    for (const auto* hom : {&gamma_g.s[n], &gamma_g.t[n], &gamma_g.e[n], &f_mor[n], &w_mor[n]})
      if (!hom->is_homomorphism()) throw std::logic_error("groupoid structure map is not a homomorphism");
  }

  std::vector<GroupHom> id_g, id_h;
  for (std::size_t n = 0; n <= top; ++n) {
    id_g.push_back(GroupHom::identity(g.levels[n]));
    id_h.push_back(GroupHom::identity(h.levels[n]));
  }
  const Tower y(gamma_g), z(gamma_h), dg(discrete(g)), dh(discrete(h));
  const auto f = induced(y, z, f_obj, f_mor);
  const auto zero = induced(dh, z, id_h, zero_mor);
  const auto incl = induced(dg, y, id_g, incl_mor);
  const auto w = induced(y, dh, f_obj, w_mor);
  const auto dp = induced(dg, dh, f_obj, f_obj);

  const SimplicialSet wg = wbar(g), wh = wbar(h);
  // discrete towers are W-bar itself through the object of x_0
  SimplicialMap to_wg, to_wh;
  for (std::size_t n = 0; n <= top; ++n) {
    Map a(dg.set().sizes[n]), b(dh.set().sizes[n]);
    for (std::uint32_t k = 0; k < a.size(); ++k) a[k] = dg.nabla.tuples[n][k][0];
    for (std::uint32_t k = 0; k < b.size(); ++k) b[k] = dh.nabla.tuples[n][k][0];
    to_wg.push_back(std::move(a));
    to_wh.push_back(std::move(b));
  }
  SimplicialMap w_final;
  for (std::size_t n = 0; n <= top; ++n) w_final.push_back(compose(to_wh[n], w[n]));

  r.y_sizes = y.set().sizes;
  r.target_sizes = z.set().sizes;
  r.wbar_g_sizes = wg.sizes;
  r.wbar_h_sizes = wh.sizes;

  auto fail_if = [&](bool ok, const char* what) {
    if (!ok) r.failures.emplace_back(what);
    return ok;
  };
  bool ok = fail_if(y.set().identity_violations(1).empty(), "Y' violates the simplicial identities");
  ok = fail_if(z.set().identity_violations(1).empty(), "target violates the simplicial identities") && ok;
  ok = fail_if(is_simplicial_map(f, y.set(), z.set()), "f is not simplicial") && ok;
  ok = fail_if(is_simplicial_map(w_final, y.set(), wh), "w is not simplicial") && ok;
  ok = fail_if(is_simplicial_map(zero, dh.set(), z.set()), "zero section is not simplicial") && ok;
  ok = fail_if(is_simplicial_map(incl, dg.set(), y.set()), "inclusion of W-bar G is not simplicial") && ok;
  ok = fail_if(is_simplicial_map(to_wg, dg.set(), wg) && is_simplicial_map(to_wh, dh.set(), wh),
               "discrete tower is not W-bar") && ok;
  r.maps_simplicial = ok;

  bool pb = true;
  for (std::size_t n = 0; n <= top; ++n) {
    pb = fail_if(injective(to_wg[n], wg.sizes[n]) && dg.set().sizes[n] == wg.sizes[n] &&
                     injective(to_wh[n], wh.sizes[n]) && dh.set().sizes[n] == wh.sizes[n],
                 "discrete tower is not W-bar") && pb;
    pb = fail_if(injective(zero[n], z.set().sizes[n]), "zero section is not injective") && pb;
    pb = fail_if(injective(incl[n], y.set().sizes[n]), "W-bar G -> Y' is not injective") && pb;
    pb = fail_if(compose(f[n], incl[n]) == compose(zero[n], dp[n]), "square does not commute") && pb;
    const auto zero_image = image_of(zero[n], z.set().sizes[n]);
    const auto incl_image = image_of(incl[n], y.set().sizes[n]);
    std::size_t count = 0;
    bool same = true;
    for (std::uint32_t k = 0; k < y.set().sizes[n]; ++k) {
      const bool in_pullback = zero_image[f[n][k]];
      count += in_pullback;
      same = same && in_pullback == incl_image[k];
    }
    r.pullback_sizes.push_back(count);
    pb = fail_if(same && count == wg.sizes[n], "pullback along the zero section is not W-bar G") && pb;
  }
  r.pullback_identity = pb;

  std::vector<std::size_t> ly, lh;
  const auto cy = components(y.set(), ly), ch = components(wh, lh);
  std::map<std::size_t, std::size_t> comp_map;
  bool pi0 = cy.size() == ch.size();
  for (std::uint32_t v = 0; v < y.set().sizes[0]; ++v) comp_map[ly[v]] = lh[w_final[0][v]];
  std::set<std::size_t> hit;
  for (const auto& [a, b] : comp_map) hit.insert(b);
  r.pi0_bijection = fail_if(pi0 && hit.size() == ch.size() && comp_map.size() == cy.size(), "w is not a bijection on pi_0");
  const auto py = edge_path_group(y.set()), ph = edge_path_group(wh);
  bool pi1 = py && ph && py->order() == ph->order();
  if (py) r.pi1_order = py->order();
  if (pi1) {
    // w_* on the regular representations, by walking the coset graph of Y'
    std::map<std::uint32_t, std::size_t> gen_h;
    for (std::size_t i = 0; i < ph->edges.size(); ++i) gen_h[ph->edges[i]] = i;
    std::vector<std::int64_t> img(py->order(), -1);
    img[0] = 0;
    std::vector<std::uint32_t> queue{0};
    for (std::size_t q = 0; q < queue.size() && pi1; ++q) {
      const std::uint32_t c = queue[q];
      for (std::size_t i = 0; i < py->edges.size() && pi1; ++i) {
        const std::uint32_t d = py->act[i][c];
        const auto it = gen_h.find(w_final[1][py->edges[i]]);
        const auto target = static_cast<std::int64_t>(it == gen_h.end() ? static_cast<std::uint32_t>(img[c])
                                                                        : ph->act[it->second][static_cast<std::size_t>(img[c])]);
        if (img[d] < 0) {
          img[d] = target;
          queue.push_back(d);
        } else {
          pi1 = img[d] == target;
        }
      }
    }
    std::set<std::int64_t> distinct(img.begin(), img.end());
    pi1 = pi1 && distinct.size() == img.size() && !distinct.count(-1);
  }
  r.pi1_bijection = fail_if(pi1, "w is not a bijection on pi_1");
  r.w_homology_equivalence =
      fail_if(homology_equivalence(w_final, y.set(), wh), "the mapping cone of w is not acyclic in the safe range");
  return r;
}

}  // namespace obstower::simp
