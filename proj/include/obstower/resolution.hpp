#pragma once

// Free resolutions of Z/p^k over (Z/p^k)[G], the normalized bar resolution,
// and comparison maps between them.
//
// Modules are right modules. An element of a free module F_n of rank r is a
// dense vector indexed by (j, g) -> j*|G| + g, standing for sum c e_j.g.
// The bar module Bar_n has basis the cells [g1|...|gn] with all g_i != 1:
//   d[g1|..|gn] = [g2|..|gn] + sum_i (-1)^i [..|g_i g_{i+1}|..] + (-1)^n [g1|..|g_{n-1}].g_n

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "obstower/group.hpp"
#include "obstower/module.hpp"
#include "obstower/zmod.hpp"

namespace obstower::res {

using zmod::Vector;

/// Sparse element of a normalized bar module.
class BarChain {
 public:
  using Key = std::pair<std::vector<Elem>, Elem>;  // (cell, g) for [cell].g

  void add(const std::vector<Elem>& cell, Elem g, std::int64_t coef, const zmod::Ring& ring);
  void add(const BarChain& other, std::int64_t coef, const zmod::Ring& ring);
  const std::map<Key, std::int64_t>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

 private:
  std::map<Key, std::int64_t> terms_;
};

BarChain bar_boundary(const FiniteGroup& g, const zmod::Ring& ring, const BarChain& x);
/// Contracting homotopy [cell].g -> (-1)^{n+1} [cell|g] (zero when g = 1).
BarChain bar_homotopy(const FiniteGroup& g, const zmod::Ring& ring, const BarChain& x);
BarChain bar_right_mul(const FiniteGroup& g, const zmod::Ring& ring, const BarChain& x, Elem h);
/// Image under the map induced by phi: H -> G.
BarChain bar_map(const GroupHom& phi, const zmod::Ring& ring, const BarChain& x);

Vector right_mul(const FiniteGroup& g, const Vector& x, Elem h);

class Resolution {
 public:
  /// Cached per (group table, ring, top degree).
  static std::shared_ptr<const Resolution> get(const FiniteGroup& g, const zmod::Ring& ring, int top);

  const FiniteGroup& group() const noexcept { return group_; }
  const zmod::Ring& ring() const noexcept { return ring_; }
  int top() const noexcept { return top_; }
  std::size_t rank(int n) const { return rank_.at(static_cast<std::size_t>(n)); }
  std::size_t dim(int n) const { return rank(n) * group_.size(); }

  /// d(e_j) in F_{n-1}, n >= 1.
  const Vector& boundary_of_generator(int n, std::size_t j) const { return gen_boundary_.at(n).at(j); }
  /// d_n x, n >= 1; for n = 0 the augmentation, returned as a length-1 vector.
  Vector boundary(int n, const Vector& x) const;
  /// Contracting homotopy s_n : F_n -> F_{n+1}, n <= top - 1; ds + sd = 1.
  Vector homotopy(int n, const Vector& x) const;

  /// Chain map F -> Bar on generators (alpha_n(e_j)), n <= top.
  const BarChain& to_bar(int n, std::size_t j) const;
  /// Chain map Bar -> F on a cell (beta_n([cell])), n <= top.
  Vector from_bar_cell(int n, const std::vector<Elem>& cell) const;
  Vector from_bar(int n, const BarChain& x) const;
  /// alpha_n on an arbitrary element of F_n.
  BarChain to_bar(int n, const Vector& x) const;
  /// Homotopy T_n : Bar_n -> Bar_{n+1} with dT + Td = alpha beta - 1, T_0 = 0;
  /// on the cell [cell].1, n <= top - 1.
  BarChain bar_comparison_homotopy(int n, const std::vector<Elem>& cell) const;
  BarChain bar_comparison_homotopy(int n, const BarChain& x) const;

  Resolution(const FiniteGroup& g, const zmod::Ring& ring, int top);

 private:
  FiniteGroup group_;
  zmod::Ring ring_;
  int top_;
  std::vector<std::size_t> rank_;
  std::vector<std::vector<Vector>> gen_boundary_;  // index n >= 1
  std::vector<zmod::Matrix> boundary_;             // index n >= 1
  std::vector<std::unique_ptr<zmod::SmithForm>> smith_;  // index n >= 1
  mutable std::vector<std::vector<BarChain>> alpha_;
  mutable std::mutex memo_mutex_;
  mutable std::vector<std::map<std::vector<Elem>, Vector>> beta_;
  mutable std::vector<std::map<std::vector<Elem>, BarChain>> t_;
};

/// gamma: F^H -> F^G covering phi: H -> G, gamma(x.h) = gamma(x).phi(h).
class ComparisonMap {
 public:
  ComparisonMap(std::shared_ptr<const Resolution> src, std::shared_ptr<const Resolution> tgt, GroupHom phi, int top);
  const Vector& on_generator(int n, std::size_t j) const { return images_.at(n).at(j); }
  Vector apply(int n, const Vector& x) const;
  const GroupHom& hom() const noexcept { return phi_; }
  const Resolution& source() const noexcept { return *src_; }
  const Resolution& target() const noexcept { return *tgt_; }

  /// Homotopy P_n : F^H_n -> Bar^G_{n+1} with dP + Pd = alpha_G gamma - Bar(phi) alpha_H.
  const BarChain& homotopy_to_bar(int n, std::size_t j) const;
  BarChain homotopy_to_bar(int n, const Vector& x) const;

  /// Homotopy Q_n : Bar^H_n -> F^G_{n+1} with dQ + Qd = gamma beta_H - beta_G Bar(phi), Q_0 = 0.
  Vector homotopy_from_bar(int n, const std::vector<Elem>& cell) const;
  Vector homotopy_from_bar(int n, const BarChain& x) const;

 private:
  void ensure_homotopy(int n) const;

  std::shared_ptr<const Resolution> src_, tgt_;
  GroupHom phi_;
  std::vector<std::vector<Vector>> images_;
  mutable std::mutex memo_mutex_;
  mutable std::vector<std::vector<BarChain>> p_;
  mutable int p_top_ = -1;
  mutable std::vector<std::map<std::vector<Elem>, Vector>> q_;
};

/// Cochain complex Hom_G(F_*, A_p) for one primary component, presented over
/// R^{r_n m} modulo the relations of A_p.
class CochainComplex {
 public:
  CochainComplex(std::shared_ptr<const Resolution> res, PrimaryComponent comp);

  const Resolution& resolution() const noexcept { return *res_; }
  std::shared_ptr<const Resolution> resolution_ptr() const noexcept { return res_; }
  const PrimaryComponent& component() const noexcept { return comp_; }
  const zmod::Ring& ring() const noexcept { return comp_.ring; }
  std::size_t dim(int n) const { return res_->rank(n) * comp_.rank(); }

  /// d^n : C^n -> C^{n+1}, n <= top - 1.
  const zmod::Matrix& differential(int n) const;
  std::vector<Vector> relations(int n) const;
  Vector reduce(int n, Vector u) const;
  bool is_zero(int n, const Vector& u) const;
  /// u(x) in A_p for u in C^n and x in F_n.
  Vector evaluate(int n, const Vector& u, const Vector& x) const;
  /// H^n as a subquotient of R^{dim n}; n <= top - 1.
  const zmod::Subquotient& cohomology(int n) const;
  bool is_cocycle(int n, const Vector& u) const;

 private:
  std::shared_ptr<const Resolution> res_;
  PrimaryComponent comp_;
  mutable std::mutex mutex_;
  mutable std::map<int, zmod::Matrix> diff_;
  mutable std::map<int, zmod::Subquotient> coh_;
};

}  // namespace obstower::res
