#include "obstower/lie.hpp"

#include <algorithm>
#include <stdexcept>

namespace obstower::lie {

namespace {

using Big = __int128;
using Poly = std::map<int, Big>;  // Laurent polynomial in the weight variable

std::int64_t narrow(Big x) {
  if (x > INT64_MAX || x < INT64_MIN) throw std::overflow_error("dimension exceeds the int64 range");
  return static_cast<std::int64_t>(x);
}

Big checked_mul(Big a, Big b) {
  const Big lim = static_cast<Big>(1) << 100;
  if (a != 0 && b != 0 && ((a > 0 ? a : -a) > lim / (b > 0 ? b : -b)))
    throw std::overflow_error("dimension exceeds the supported range");
  return a * b;
}

Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) out[wa + wb] += checked_mul(ca, cb);
  return out;
}

Poly power(const Poly& p, std::size_t k) {
  Poly out{{0, 1}};
  for (std::size_t i = 0; i < k; ++i) out = multiply(out, p);
  return out;
}

}  // namespace

std::int64_t GradedSpace::total() const {
  std::int64_t s = 0;
  for (const auto& [w, d] : dims) s += d;
  return s;
}

int GradedSpace::min_weight() const {
  if (dims.empty()) throw std::logic_error("min_weight of the zero space");
  return dims.begin()->first;
}

void GradedSpace::add(int weight, std::int64_t dim) {
  if (dim < 0) throw std::invalid_argument("negative dimension");
  if (dim == 0) return;
  dims[weight] += dim;
}

std::vector<int> HallElement::leaves() const {
  if (is_leaf()) return {generator};
  auto l = left->leaves();
  for (int x : right->leaves()) l.push_back(x);
  return l;
}

std::string HallElement::to_string() const {
  if (is_leaf()) return "x" + std::to_string(generator + 1);
  return "[" + left->to_string() + "," + right->to_string() + "]";
}

std::vector<HallElement> hall_basis(const std::vector<int>& weights, std::size_t n) {
  if (n == 0) throw std::invalid_argument("hall_basis needs n >= 1");
  // all basic commutators of degree <= n, ordered by degree then creation
  std::vector<std::shared_ptr<const HallElement>> all;
  std::vector<std::vector<std::size_t>> by_degree(n + 1);
  std::map<const HallElement*, std::size_t> index;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    auto e = std::make_shared<HallElement>();
    e->generator = static_cast<int>(i);
    e->weight = weights[i];
    index[e.get()] = all.size();
    by_degree[1].push_back(all.size());
    all.push_back(e);
  }
  for (std::size_t deg = 2; deg <= n; ++deg) {
    for (std::size_t du = deg - 1; du >= 1; --du) {
      const std::size_t dv = deg - du;
      for (std::size_t u : by_degree[du])
        for (std::size_t v : by_degree[dv]) {
          if (u <= v) continue;
          const auto& eu = all[u];
          if (!eu->is_leaf() && index.at(eu->right.get()) > v) continue;
          auto e = std::make_shared<HallElement>();
          e->left = eu;
          e->right = all[v];
          e->degree = deg;
          e->weight = eu->weight + all[v]->weight;
          index[e.get()] = all.size();
          by_degree[deg].push_back(all.size());
          all.push_back(e);
        }
    }
  }
  std::vector<HallElement> out;
  for (std::size_t i : by_degree[n]) out.push_back(*all[i]);
  return out;
}

std::int64_t moebius(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("moebius needs n >= 1");
  int sign = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

std::int64_t witt_rank(std::int64_t d, std::size_t n) {
  if (n == 0) throw std::invalid_argument("witt_rank needs n >= 1");
  if (d < 0) throw std::invalid_argument("witt_rank needs d >= 0");
  Big sum = 0;
  for (std::size_t e = 1; e <= n; ++e) {
    if (n % e) continue;
    Big pw = 1;
    for (std::size_t i = 0; i < n / e; ++i) pw = checked_mul(pw, d);
    sum += moebius(static_cast<std::int64_t>(e)) * pw;
  }
  return narrow(sum / static_cast<Big>(n));
}

GradedSpace colie_weights(const GradedSpace& v, std::size_t s) {
  if (s == 0) throw std::invalid_argument("colie_weights needs s >= 1");
  Poly p;
  for (const auto& [w, d] : v.dims) p[w] = d;
  GradedSpace out;
  std::map<int, Big> acc;
  for (std::size_t e = 1; e <= s; ++e) {
    if (s % e) continue;
    const std::int64_t mu = moebius(static_cast<std::int64_t>(e));
    if (mu == 0) continue;
    const Poly pe = power(p, s / e);
    // P(q^e)^{s/e} contributes mu(e) c at weight e*w
    for (const auto& [w, c] : pe) acc[w * static_cast<int>(e)] += mu * c;
  }
  for (const auto& [w, c] : acc) {
    if (c == 0) continue;
    if (c % static_cast<Big>(s) != 0 || c < 0) throw std::logic_error("necklace count is not a non-negative integer");
    out.add(w, narrow(c / static_cast<Big>(s)));
  }
  return out;
}

GradedSpace magnus_graded(const GradedSpace& ab, std::size_t s) { return colie_weights(ab, s); }

std::int64_t dim_modular(int k) {
  if (k < 0 || k % 2) return 0;
  std::int64_t count = 0;
  for (int a = 0; 4 * a <= k; ++a)
    if ((k - 4 * a) % 6 == 0) ++count;
  return count;
}

std::int64_t dim_cusp(int k) {
  if (k < 4 || k % 2) return 0;
  return std::max<std::int64_t>(dim_modular(k) - 1, 0);
}

std::int64_t dim_eisenstein(int k) { return dim_modular(k) - dim_cusp(k); }

GradedSpace modular_h1(int m) {
  GradedSpace out;
  if (m <= 0 || m % 2) return out;
  const std::int64_t cusp = 2 * dim_cusp(m + 2), eis = dim_eisenstein(m + 2);
  out.add(m + 1, cusp);
  out.add(2 * m + 2, eis);
  if (cusp) out.labels[m + 1] = "cusp";
  if (eis) out.labels[2 * m + 2] = "Eisenstein";
  return out;
}

LsReport ls_weight_report(int lambda_weight, int m_max, std::size_t s) {
  if (s == 0) throw std::invalid_argument("ls_weight_report needs s >= 1");
  LsReport rep;
  rep.lambda_weight = lambda_weight;
  rep.m_max = m_max;
  rep.s = s;
  for (int m = 0; m <= m_max; ++m)
    for (const auto& [w, d] : modular_h1(m).dims) rep.generators.add(w + m * lambda_weight, d * (m + 1));
  rep.ls = colie_weights(rep.generators, s);
  rep.e1_diag_zero = rep.ls.empty() || rep.ls.min_weight() > 0;
  return rep;
}

}  // namespace obstower::lie
