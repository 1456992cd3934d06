// One line per acceptance criterion: "criterion N PASS|FAIL: details".
// Usage: acceptance <path to obstower CLI> <directory of example specs>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "obstower/app.hpp"
#include "obstower/arith.hpp"
#include "obstower/error.hpp"
#include "obstower/lie.hpp"
#include "obstower/simplicial.hpp"
#include "obstower/tower.hpp"
#include "support/samplers.hpp"
#include "support/simplicial_samplers.hpp"

using namespace obstower;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int n, const Outcome& o) {
  std::cout << "criterion " << n << (o.pass ? " PASS: " : " FAIL: ") << o.detail << std::endl;
  if (!o.pass) ++failures;
}

Outcome guarded(const std::function<Outcome()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

// --- criteria 1 and 2: lifting through abelian extensions ------------------------------

std::vector<FiniteGroup> sources() {
  return {catalog::cyclic(2),         catalog::cyclic(3),  catalog::cyclic(4),          catalog::klein4(),
          catalog::cyclic(6),         catalog::symmetric(3), catalog::cyclic(8),        catalog::abelian({2, 4}),
          catalog::abelian({2, 2, 2}), catalog::dihedral(4), catalog::quaternion8(),    catalog::alternating(4),
          catalog::dihedral(6),       catalog::abelian({4, 4}), catalog::dihedral(8),   catalog::abelian({2, 2, 4})};
}

std::vector<TowerStep> extension_corpus() {
  std::vector<TowerStep> steps;
  auto add = [&](const ExtensionDatum& e) {
    if (e.kernel.order() > 1 && e.total.size() <= 64) steps.push_back(TowerStep{e, GroupHom::identity(e.base)});
  };
  for (const auto& big : {catalog::quaternion8(), catalog::dihedral(4), catalog::abelian({2, 4}), catalog::dihedral(6),
                          catalog::dihedral(8), catalog::abelian({4, 4})}) {
    for (const auto& s : tower_from_lcs(big, whole_group(big), 3).steps)
      if (s.extension.kernel.order() > 1) steps.push_back(s);
  }
  {  // S4 over S3 with kernel V4
    const auto s4 = catalog::symmetric(4);
    Subgroup v4;
    for (const auto& n : {normal_closure(s4, {1}), normal_closure(s4, {2}), normal_closure(s4, {3})})
      if (n.size() == 4) v4 = n;
    for (Elem a = 0; v4.size() != 4 && a < s4.size(); ++a)
      if (auto n = normal_closure(s4, {a}); n.size() == 4) v4 = n;
    if (v4.size() == 4) add(ExtensionDatum::from_surjection(quotient(s4, v4).projection));
  }
  // every cohomology class of small modules over small bases
  const std::vector<FiniteGroup> bases = {catalog::cyclic(2), catalog::cyclic(3), catalog::cyclic(4),
                                          catalog::klein4(),  catalog::symmetric(3), catalog::cyclic(6),
                                          catalog::quaternion8(), catalog::dihedral(4)};
  for (const auto& b : bases) {
    std::vector<GModule> mods;
    for (const auto& m : testing::small_modules()) {
      if (m.order() * b.size() > 64) continue;
      const auto homs = enumerate_homs(b, m.group());
      // trivial action and one nontrivial action, if any
      mods.push_back(m.pullback(homs.front()));
      for (const auto& h : homs)
        if (!m.pullback(h).is_trivial_action()) {
          mods.push_back(m.pullback(h));
          break;
        }
    }
    for (const auto& m : mods) {
      const auto h2 = cohomology(m, 2);
      const auto all = h2.all_coordinates();
      for (std::size_t i = 0; i < all.size() && i < 3; ++i) add(extension_from_cocycle(h2.combination(all[i])));
    }
  }
  return steps;
}

std::size_t brute_class_count(const std::vector<GroupHom>& lifts, const TowerStep& step) {
  std::set<std::vector<Elem>> seen;
  for (const auto& l : lifts) {
    std::vector<Elem> best = l.generator_images();
    for (Elem x : step.extension.embedding) best = std::min(best, l.conjugated(x).generator_images());
    seen.insert(best);
  }
  return seen.size();
}

std::pair<Outcome, Outcome> criteria_1_2() {
  const auto t0 = Clock::now();
  const auto steps = extension_corpus();
  const auto srcs = sources();
  std::mt19937 rng(2024);
  std::size_t instances = 0, agree = 0, with_lifts = 0, torsor_ok = 0, obstructed = 0;
  std::string first_bad;
  for (std::size_t si = 0; si < steps.size(); ++si) {
    const auto& step = steps[si];
    for (const auto& g : srcs) {
      auto homs = enumerate_homs(g, step.extension.base);
      std::shuffle(homs.begin(), homs.end(), rng);
      if (homs.size() > 4) homs.resize(4);
      for (const auto& psi : homs) {
        ++instances;
        const auto brute = brute_force_lifts(psi, step);
        const auto ob = obstruction(psi, step);
        const bool zero = ob.cls.is_zero();
        obstructed += zero ? 0 : 1;
        if (zero == !brute.empty()) {
          ++agree;
        } else if (first_bad.empty()) {
          first_bad = "step " + std::to_string(si) + " source " + g.name();
        }
        if (brute.empty()) continue;
        ++with_lifts;
        // torsor: Z^1 acts simply transitively on lifts; classes mod A form one H^1-orbit
        const auto z1 = enumerate_one_cocycles(ob.cocycle.module());
        std::set<std::vector<Elem>> brute_set, orbit;
        for (const auto& l : brute) brute_set.insert(l.images());
        const auto classes = lift_classes(psi, step);
        bool ok = !classes.empty() && brute.size() == z1.size();
        if (ok) {
          for (const auto& z : z1) orbit.insert(torsor_action(step.extension, classes.front(), z).images());
          ok = orbit == brute_set && classes.size() == brute_class_count(brute, step) &&
               classes.size() == cohomology(ob.cocycle.module(), 1).size();
        }
        torsor_ok += ok ? 1 : 0;
      }
    }
  }
  const double secs = seconds_since(t0);
  Outcome c1{instances >= 500 && agree == instances && secs < 300,
             std::to_string(agree) + "/" + std::to_string(instances) + " instances agree with brute-force lift search (" +
                 std::to_string(obstructed) + " obstructed, " + std::to_string(steps.size()) + " extensions, " +
                 std::to_string(srcs.size()) + " source groups), " + std::to_string(secs).substr(0, 5) + " s" +
                 (first_bad.empty() ? "" : ", first disagreement at " + first_bad)};
  Outcome c2{with_lifts > 0 && torsor_ok == with_lifts,
             std::to_string(torsor_ok) + "/" + std::to_string(with_lifts) +
                 " liftable instances: lift count = |Z^1|, Z^1 orbit of one lift = all lifts, classes = |H^1|"};
  return {c1, c2};
}

// --- criterion 3: extension classes --------------------------------------------------

// Order of the image of M over Z/p^k, by pivoting on entries of least valuation.
long double image_order(std::vector<std::vector<std::int64_t>> m, std::int64_t p, int k) {
  std::int64_t q = 1;
  for (int i = 0; i < k; ++i) q *= p;
  auto val = [&](std::int64_t x) {
    int v = 0;
    while (v < k && x % p == 0) {
      x /= p;
      ++v;
    }
    return v;
  };
  auto inv = [&](std::int64_t u) {
    for (std::int64_t y = 1; y < q; ++y)
      if (u * y % q == 1) return y;
    throw std::logic_error("not a unit");
  };
  long double order = 1;
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  std::vector<bool> row_used(rows, false), col_used(cols, false);
  for (;;) {
    int best = k;
    std::size_t br = 0, bc = 0;
    for (std::size_t r = 0; r < rows && best > 0; ++r) {
      if (row_used[r]) continue;
      for (std::size_t c = 0; c < cols; ++c) {
        if (col_used[c] || m[r][c] == 0) continue;
        const int v = val(m[r][c]);
        if (v < best) {
          best = v;
          br = r;
          bc = c;
          if (v == 0) break;
        }
      }
    }
    if (best == k) break;
    row_used[br] = col_used[bc] = true;
    for (int i = 0; i < k - best; ++i) order *= static_cast<long double>(p);
    // pivot = u p^best; clear the column below using row br
    std::int64_t unit = m[br][bc];
    for (int i = 0; i < best; ++i) unit /= p;
    const std::int64_t ui = inv(unit % q);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == br || m[r][bc] == 0) continue;
      std::int64_t f = m[r][bc];
      for (int i = 0; i < best; ++i) f /= p;
      f = f % q * ui % q;
      for (std::size_t c = 0; c < cols; ++c) m[r][c] = ((m[r][c] - f * m[br][c]) % q + q) % q;
    }
    // the row's other entries are multiples of p^best; column operations clear them without changing the image
    for (std::size_t c = 0; c < cols; ++c)
      if (c != bc) m[br][c] = 0;
  }
  return order;
}

struct ExtCount {
  long double z2 = 0, b2 = 0;
};

ExtCount count_extension_cocycles(const GModule& a) {
  const auto& g = a.group();
  const std::size_t n = g.size(), r = a.rank();
  std::int64_t q = a.factors().empty() ? 1 : a.factors()[0];
  for (auto f : a.factors()) q = std::max(q, f);
  std::int64_t p = 2;
  while (q % p) ++p;
  int k = 0;
  for (std::int64_t x = q; x > 1; x /= p) ++k;
  ExtCount out;
  if (r == 0) return {1, 1};
  // |B^2| by enumerating normalized 1-cochains
  std::set<std::vector<std::int64_t>> bound;
  const std::size_t slots = n - 1;
  std::vector<std::size_t> digits(slots, 0);
  for (;;) {
    std::vector<ModVec> f(n, a.zero());
    for (std::size_t i = 0; i < slots; ++i) f[i + 1] = a.element(digits[i]);
    std::vector<std::int64_t> df;
    for (Elem g1 = 1; g1 < n; ++g1)
      for (Elem g2 = 1; g2 < n; ++g2) {
        const auto v = a.add(a.sub(f[g2], f[g.mul(g1, g2)]), a.act(f[g1], g2));
        df.insert(df.end(), v.begin(), v.end());
      }
    bound.insert(df);
    std::size_t i = 0;
    while (i < slots && ++digits[i] == a.order()) digits[i++] = 0;
    if (i == slots) break;
  }
  out.b2 = static_cast<long double>(bound.size());
  // |Z^2| = |C^2| / |d C^2| on normalized cochains; A is free over Z/q here
  auto pair_index = [&](Elem x, Elem y) { return ((x - 1) * (n - 1) + (y - 1)) * r; };
  std::vector<std::vector<std::int64_t>> m;
  for (Elem g1 = 1; g1 < n; ++g1)
    for (Elem g2 = 1; g2 < n; ++g2)
      for (Elem g3 = 1; g3 < n; ++g3)
        for (std::size_t i = 0; i < r; ++i) {
          std::vector<std::int64_t> row((n - 1) * (n - 1) * r, 0);
          auto bump = [&](Elem x, Elem y, std::size_t j, std::int64_t c) {
            if (x == 0 || y == 0) return;
            auto& e = row[pair_index(x, y) + j];
            e = ((e + c) % q + q) % q;
          };
          bump(g2, g3, i, 1);
          bump(g.mul(g1, g2), g3, i, -1);
          bump(g1, g.mul(g2, g3), i, 1);
          const auto& mat = a.matrix(g3);
          for (std::size_t j = 0; j < r; ++j) bump(g1, g2, j, -mat[i * r + j]);
          m.push_back(std::move(row));
        }
  long double c2 = 1;
  for (std::size_t i = 0; i < (n - 1) * (n - 1); ++i) c2 *= static_cast<long double>(a.order());
  out.z2 = c2 / image_order(std::move(m), p, k);
  return out;
}

std::vector<GModule> all_actions(const FiniteGroup& g) {
  // invertible matrices of Z/2, Z/3, Z/4, (Z/2)^2
  const std::vector<std::pair<std::vector<std::int64_t>, std::vector<std::vector<std::int64_t>>>> carriers = {
      {{2}, {{1}}},
      {{3}, {{1}, {2}}},
      {{4}, {{1}, {3}}},
      {{2, 2}, {{1, 0, 0, 1}, {0, 1, 1, 0}, {1, 1, 0, 1}, {1, 0, 1, 1}, {0, 1, 1, 1}, {1, 1, 1, 0}}}};
  std::vector<GModule> out;
  for (const auto& [factors, mats] : carriers) {
    const std::size_t gens = g.generators().size();
    std::vector<std::size_t> pick(gens, 0);
    for (;;) {
      std::vector<std::vector<std::int64_t>> chosen;
      for (auto i : pick) chosen.push_back(mats[i]);
      try {
        out.push_back(GModule::from_generators(g, factors, chosen));
      } catch (const Error&) {
      }
      std::size_t i = 0;
      while (i < gens && ++pick[i] == mats.size()) pick[i++] = 0;
      if (i == gens) break;
    }
  }
  return out;
}

Outcome criterion_3() {
  const std::vector<FiniteGroup> groups = {catalog::trivial(),      catalog::cyclic(2),     catalog::cyclic(3),
                                           catalog::cyclic(4),      catalog::klein4(),      catalog::cyclic(5),
                                           catalog::cyclic(6),      catalog::symmetric(3),  catalog::cyclic(7),
                                           catalog::cyclic(8),      catalog::abelian({2, 4}), catalog::abelian({2, 2, 2}),
                                           catalog::dihedral(4),    catalog::quaternion8()};
  std::size_t pairs = 0, ok = 0, roundtrip = 0;
  std::string bad;
  for (const auto& g : groups)
    for (const auto& a : all_actions(g)) {
      ++pairs;
      const auto h2 = cohomology(a, 2);
      const auto cnt = count_extension_cocycles(a);
      const long double classes = cnt.z2 / cnt.b2;
      bool good = classes == static_cast<long double>(h2.size());
      // every class is realised by an extension whose class reads back the same
      if (good && h2.size() <= 64)
        for (const auto& x : h2.all_coordinates()) {
          const auto e = extension_from_cocycle(h2.combination(x));
          good = good && extension_class(e).coords == h2.reduce_coordinates(x);
        }
      if (good) {
        ++ok;
      } else if (bad.empty()) {
        bad = ", first mismatch over " + g.name();
      }
      roundtrip += good ? 1 : 0;
    }
  return {ok == pairs && pairs > 0,
          std::to_string(ok) + "/" + std::to_string(pairs) +
              " (group, module) pairs with |G| <= 8, |A| <= 4: |Z^2|/|B^2| from enumeration and elimination equals |H^2|, "
              "and every class round-trips through its extension" +
              bad};
}

// --- criterion 4: compact support -------------------------------------------------------

Outcome criterion_4() {
  std::mt19937 rng(4242);
  std::size_t systems = 0, exact = 0;
  for (int t = 0; t < 200; ++t) {
    const auto s = testing::random_system(rng);
    if (s.sys.global.size() > 16 || s.sys.places.size() > 3) continue;
    ++systems;
    const auto rep = les_check(s.sys, s.module, s.ramified, 3);
    bool all = rep.exact;
    for (const auto& spot : rep.spots) all = all && spot.exact;
    exact += all ? 1 : 0;
  }
  // two places, both the identity on Z/2
  const auto c2 = catalog::cyclic(2);
  LocalGlobalSystem sys;
  sys.global = c2;
  for (const char* label : {"v1", "v2"}) sys.places.push_back(Place{label, GroupHom::identity(c2), trivial_subgroup(c2)});
  const auto m = GModule::trivial(c2, {2});
  const CompactSupport cs(sys, m, {});
  const bool hc2 = cs.orders(2) == std::vector<std::int64_t>{2};
  const bool rec = !reciprocity_obstruction(sys, m, {{1}, {0}}, {}).is_zero;
  return {systems >= 200 && exact == systems && hc2 && rec,
          std::to_string(exact) + "/" + std::to_string(systems) +
              " sampled systems exact at every spot up to degree 3; diagonal example H^2_c = Z/2: " +
              (hc2 ? "yes" : "no") + ", reciprocity((1,0)) nonzero: " + (rec ? "yes" : "no")};
}

// --- criterion 5: free Lie ranks ---------------------------------------------------------

Outcome criterion_5() {
  bool all = true;
  std::size_t checked = 0;
  std::map<std::pair<int, int>, std::int64_t> hall;
  for (int d = 1; d <= 4; ++d)
    for (int n = 1; n <= 8; ++n) {
      const auto count = static_cast<std::int64_t>(lie::hall_basis(std::vector<int>(static_cast<std::size_t>(d), 1),
                                                                   static_cast<std::size_t>(n))
                                                       .size());
      hall[{d, n}] = count;
      all = all && count == lie::witt_rank(d, static_cast<std::size_t>(n));
      ++checked;
    }
  const bool named = hall[{2, 5}] == 6 && hall[{2, 6}] == 9 && hall[{3, 2}] == 3;
  // prod_n (1 - t^n)^(-M(d,n)) = 1 / (1 - d t) through t^8, with M from the Hall counts
  bool series = true;
  for (int d = 1; d <= 4; ++d) {
    std::vector<long double> f(9, 0);
    f[0] = 1;
    for (int n = 1; n <= 8; ++n) {
      const long double w = static_cast<long double>(hall[{d, n}]);
      std::vector<long double> g(9, 0);
      for (int i = 0; i <= 8; ++i) {
        long double binom = 1;  // C(w + k - 1, k)
        for (int k = 0; i + n * k <= 8; ++k) {
          g[static_cast<std::size_t>(i + n * k)] += f[static_cast<std::size_t>(i)] * binom;
          binom = binom * (w + k) / (k + 1);
        }
      }
      f = g;
    }
    long double dk = 1;
    for (int k = 0; k <= 8; ++k, dk *= d) series = series && f[static_cast<std::size_t>(k)] == dk;
  }
  return {all && named && series,
          std::to_string(checked) + " (d,n) pairs, d <= 4, n <= 8: Hall count = Witt rank " + (all ? "all" : "NOT all") +
              "; (2,5)=6, (2,6)=9, (3,2)=3: " + (named ? "yes" : "no") + "; cyclotomic identity through t^8: " +
              (series ? "yes" : "no")};
}

// --- criterion 6: modular weights ---------------------------------------------------------

std::int64_t dim_mk(int k) {  // level one, closed form
  if (k < 0 || k % 2) return 0;
  return k % 12 == 2 ? k / 12 : k / 12 + 1;
}

std::map<int, std::int64_t> oracle_generators(int lambda, int m_max) {
  std::map<int, std::int64_t> out;
  for (int m = 2; m <= m_max; m += 2) {
    const int k = m + 2;
    const std::int64_t eis = dim_mk(k) > 0 ? 1 : 0;
    const std::int64_t cusp = dim_mk(k) - eis;
    if (cusp) out[m + 1 + m * lambda] += 2 * cusp * (m + 1);
    if (eis) out[2 * m + 2 + m * lambda] += eis * (m + 1);
  }
  return out;
}

// Lyndon words of length s over a weighted alphabet, counted by total weight.
std::map<int, std::int64_t> lyndon_weights(const std::vector<int>& letters, std::size_t s) {
  std::map<int, std::int64_t> out;
  std::vector<std::size_t> w(s, 0);
  const std::size_t a = letters.size();
  for (;;) {
    bool lyndon = true;
    for (std::size_t r = 1; r < s && lyndon; ++r) {
      // rotation by r must be strictly larger
      for (std::size_t i = 0; i < s; ++i) {
        const auto x = w[(i + r) % s], y = w[i];
        if (x != y) {
          lyndon = x > y;
          break;
        }
        if (i + 1 == s) lyndon = false;
      }
    }
    if (lyndon) {
      int total = 0;
      for (auto c : w) total += letters[c];
      out[total]++;
    }
    std::size_t i = 0;
    while (i < s && ++w[i] == a) w[i++] = 0;
    if (i == s) break;
  }
  return out;
}

Outcome criterion_6() {
  const auto h = lie::modular_h1(10);
  const bool h1 = h.total() == 3 && h.dims == std::map<int, std::int64_t>{{11, 2}, {22, 1}};
  const auto r = lie::ls_weight_report(-1, 10, 1);
  const std::map<int, std::int64_t> expect{{1, 22}, {4, 3}, {6, 5}, {8, 7}, {10, 9}, {12, 11}};
  const bool table = r.ls.dims == expect && r.e1_diag_zero && oracle_generators(-1, 10) == expect;
  bool flags = true;
  std::size_t cases = 0;
  for (int m = 0; m <= 20; ++m) {
    const auto gens = oracle_generators(-1, m);
    bool positive = true;
    for (const auto& [w, d] : gens) positive = positive && w > 0;
    for (std::size_t s = 1; s <= 5; ++s) {
      ++cases;
      const auto rep = lie::ls_weight_report(-1, m, s);
      flags = flags && rep.e1_diag_zero && positive && rep.generators.dims == gens;
    }
  }
  // brute-force Lyndon counts where the alphabet is small
  bool lyndon = true;
  for (int m : {2, 4, 6})
    for (std::size_t s = 1; s <= 4; ++s) {
      std::vector<int> letters;
      for (const auto& [w, d] : oracle_generators(-1, m))
        for (std::int64_t i = 0; i < d; ++i) letters.push_back(w);
      if (letters.size() > 14) continue;
      lyndon = lyndon && lie::ls_weight_report(-1, m, s).ls.dims == lyndon_weights(letters, s);
    }
  return {h1 && table && flags && lyndon,
          std::string("H^1(SL2(Z),V10)(-10) = {11:2, 22:1}: ") + (h1 ? "yes" : "no") +
              "; m_max=10, s=1 table {1:22,4:3,6:5,8:7,10:9,12:11} with flag: " + (table ? "yes" : "no") +
              "; flag true for " + std::to_string(cases) + " (m_max <= 20, s <= 5) cases: " + (flags ? "yes" : "no") +
              "; Lyndon-word counts agree: " + (lyndon ? "yes" : "no")};
}

// --- criterion 7: simplicial -------------------------------------------------------------

Outcome criterion_7() {
  const auto t0 = Clock::now();
  std::size_t ext = 0, ext_ok = 0;
  auto corpus = testing::constant_extension_corpus(8, 3);
  {  // products with non-constant Dold-Kan factors
    const auto z4 = catalog::cyclic(4), z2 = catalog::cyclic(2);
    const auto base = simp::constant_extension(GroupHom::from_generator_images(z4, z2, {1}), 3);
    simp::FiniteChainComplex c;
    c.groups = {{}, {2}};
    c.boundary = {{}, {}};
    corpus.push_back(simp::extension_times(base, simp::dold_kan(c, 3)));
    c.groups = {{2}, {2}};
    c.boundary = {{}, {0}};
    corpus.push_back(simp::extension_times(simp::constant_extension(GroupHom::identity(z2), 3), simp::dold_kan(c, 3)));
  }
  for (const auto& e : corpus) {
    ++ext;
    const auto r = simp::fibration_data(e);
    ext_ok += (r.failures.empty() && r.pullback_identity && r.pullback_sizes == r.wbar_g_sizes) ? 1 : 0;
  }

  std::mt19937_64 rng(77);
  std::size_t dk = 0, dk_ok = 0;
  for (int t = 0; t < 60; ++t) {
    const auto c = testing::random_chain_complex(rng);
    const auto a = simp::dold_kan(c, 3);
    const auto pa = simp::moore_homotopy(a);
    const auto pw = simp::moore_homotopy(simp::wbar_group(a));
    bool ok = pw[0].empty();
    for (std::size_t i = 0; i < pa.size(); ++i) ok = ok && testing::matches(testing::brute_homology(c, i), pa[i]);
    for (std::size_t i = 1; i < pw.size(); ++i) ok = ok && pw[i] == pa[i - 1];
    ++dk;
    dk_ok += ok ? 1 : 0;
  }

  std::mt19937_64 rng2(5);
  std::size_t bi = 0, bi_ok = 0, nontrivial = 0;
  for (int t = 0; t < 60; ++t) {
    const auto x = testing::random_bisimplicial(rng2);
    const auto r = simp::diag_vs_codiag(x);
    ++bi;
    bi_ok += (x.identity_violations().empty() && r.equal && r.natural_map_equivalence) ? 1 : 0;
    bool nt = false;
    for (std::size_t k = 0; k < r.diag_homology.size(); ++k)
      nt = nt || (k == 0 ? r.diag_homology[k].size() > 1 : !r.diag_homology[k].empty());
    nontrivial += nt ? 1 : 0;
  }
  return {ext >= 50 && ext_ok == ext && dk >= 50 && dk_ok == dk && bi >= 50 && bi_ok == bi,
          "pullback identity exact at N=3 for " + std::to_string(ext_ok) + "/" + std::to_string(ext) +
              " extensions; pi_i(W-bar A) = pi_{i-1}(A) for " + std::to_string(dk_ok) + "/" + std::to_string(dk) +
              " Dold-Kan inputs (checked against enumeration); diag vs codiagonal homology equal for " +
              std::to_string(bi_ok) + "/" + std::to_string(bi) + " bisimplicial sets (" + std::to_string(nontrivial) +
              " with nontrivial reduced homology); " + std::to_string(seconds_since(t0)).substr(0, 5) + " s"};
}

// --- criteria 8 and 9: the CLI --------------------------------------------------------------

struct CliRun {
  int status = -1;
  std::string out;
  double secs = 0;
};

CliRun cli(const std::string& exe, const std::string& args) {
  CliRun r;
  const auto t0 = Clock::now();
  FILE* p = popen((exe + " " + args + " 2>/dev/null").c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.secs = seconds_since(t0);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

Outcome criterion_8(const std::string& exe, const std::string& specs) {
  const auto a = cli(exe, "tower --spec " + specs + "/q8_tower_blocked.json");
  const auto b = cli(exe, "tower --spec " + specs + "/q8_tower_lifts.json");
  if (a.status != 0 || b.status != 0) return {false, "CLI exited with " + std::to_string(a.status) + "/" + std::to_string(b.status)};
  const auto ja = json::parse(a.out)["results"]["run"], jb = json::parse(b.out)["results"]["run"];
  bool blocked = false;
  for (const auto& l : ja["levels"])
    if (l["level"] == 2) blocked = l["obstructed"].get<bool>() && ja["blocked_at"] == 2;
  const bool lifted = jb["completed"].get<bool>();
  return {blocked && lifted && a.secs < 1.0 && b.secs < 1.0,
          std::string("psi0 = id on Z/2 x Z/2: level-2 obstruction nonzero: ") + (blocked ? "yes" : "no") + " (" +
              std::to_string(a.secs).substr(0, 5) + " s); Z/4 onto a Z/2 factor: full lift: " + (lifted ? "yes" : "no") +
              " (" + std::to_string(b.secs).substr(0, 5) + " s)"};
}

Outcome criterion_9(const std::string& exe, const std::string& specs) {
  std::size_t runs = 0, same = 0;
  std::string bad;
  for (const auto& entry : std::filesystem::directory_iterator(specs)) {
    if (entry.path().extension() != ".json") continue;
    const std::string kind = json::parse(std::ifstream(entry.path()))["kind"];
    const auto a = cli(exe, kind + " --spec " + entry.path().string() + " --jobs 1");
    const auto b = cli(exe, kind + " --spec " + entry.path().string() + " --jobs 4");
    ++runs;
    if (a.status != 0 || b.status != 0) {
      bad = entry.path().filename().string();
      continue;
    }
    auto ja = json::parse(a.out), jb = json::parse(b.out);
    const auto stripped_a = app::without_timing(ja), stripped_b = app::without_timing(jb);
    auto inner = stripped_a;
    inner.erase("report_sha256");
    const bool hash_ok = app::sha256_hex(inner.dump()) == stripped_a["report_sha256"];
    if (stripped_a.dump(2) == stripped_b.dump(2) && hash_ok)
      ++same;
    else
      bad = entry.path().filename().string();
  }
  return {runs >= 5 && same == runs,
          std::to_string(same) + "/" + std::to_string(runs) +
              " example specs give byte-identical reports across runs (timing removed), with worker counts 1 and 4" +
              (bad.empty() ? "" : ", differing: " + bad)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <obstower CLI> <example spec dir>\n";
    return 2;
  }
  const std::string exe = argv[1], specs = argv[2];
  auto [c1, c2] = [&] {
    try {
      return criteria_1_2();
    } catch (const std::exception& e) {
      Outcome bad{false, std::string("exception: ") + e.what()};
      return std::make_pair(bad, bad);
    }
  }();
  report(1, c1);
  report(2, c2);
  report(3, guarded(criterion_3));
  report(4, guarded(criterion_4));
  report(5, guarded(criterion_5));
  report(6, guarded(criterion_6));
  report(7, guarded(criterion_7));
  report(8, guarded([&] { return criterion_8(exe, specs); }));
  report(9, guarded([&] { return criterion_9(exe, specs); }));
  return failures == 0 ? 0 : 1;
}
