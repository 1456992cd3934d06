#pragma once

#include <cstdint>
#include <vector>

#include "obstower/group.hpp"
#include "obstower/zmod.hpp"

namespace obstower {

using ModVec = std::vector<std::int64_t>;

/// Invariant factors (each > 1, d1 | d2 | ...) of the product of cyclic groups Z/f.
std::vector<std::int64_t> invariant_factors(const std::vector<std::int64_t>& cyclic_orders);

/// Prime factorisation as (p, e) pairs, ascending.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

/// p-primary part of a finite G-module, presented over R = Z/p^k as
/// R^m modulo the relations p^{a_i} e_i. The action matrices are lifted to R.
struct PrimaryComponent {
  std::int64_t p = 2;
  zmod::Ring ring;
  std::vector<int> exps;            // a_i, 1 <= a_i <= k
  std::vector<std::size_t> source;  // invariant factor of the parent carrying coordinate i
  std::vector<std::int64_t> idempotent;
  std::vector<zmod::Matrix> action;  // per group element, acting on column vectors

  std::size_t rank() const noexcept { return exps.size(); }
  /// Generators of the relation submodule, as vectors of R^m.
  std::vector<zmod::Vector> relations() const;
  zmod::Vector reduce(zmod::Vector v) const;
};

/// Finite abelian group Z/d1 + ... + Z/dr with a right action of a finite group.
///
/// Elements are integer vectors with coordinate i reduced mod d_i. The action
/// of g is a matrix M_g with (a.g)_i = sum_j M_g(i,j) a_j, so M_{gh} = M_h M_g.
class GModule {
 public:
  GModule() = default;

  /// Action given by one row-major r x r matrix per generator of g.
  /// Validates well-definedness and the group relations.
  static GModule from_generators(const FiniteGroup& g, const std::vector<std::int64_t>& factors,
                                 const std::vector<std::vector<std::int64_t>>& generator_matrices);
  /// Trivial action; `orders` need not be in invariant-factor form.
  static GModule trivial(const FiniteGroup& g, const std::vector<std::int64_t>& orders);
  /// Action given on every element; no relation check beyond well-definedness.
  static GModule from_element_matrices(const FiniteGroup& g, const std::vector<std::int64_t>& factors,
                                       std::vector<std::vector<std::int64_t>> matrices);

  const FiniteGroup& group() const noexcept { return group_; }
  const std::vector<std::int64_t>& factors() const noexcept { return factors_; }
  std::size_t rank() const noexcept { return factors_.size(); }
  std::size_t order() const noexcept;

  /// Row-major r x r matrix of g.
  const std::vector<std::int64_t>& matrix(Elem g) const { return matrices_.at(g); }
  ModVec act(const ModVec& a, Elem g) const;
  ModVec add(const ModVec& a, const ModVec& b) const;
  ModVec sub(const ModVec& a, const ModVec& b) const;
  ModVec neg(const ModVec& a) const;
  ModVec scale(const ModVec& a, std::int64_t c) const;
  ModVec reduce(ModVec a) const;
  ModVec zero() const { return ModVec(rank(), 0); }
  bool is_zero(const ModVec& a) const;

  /// Mixed-radix index, first coordinate most significant.
  std::size_t index_of(const ModVec& a) const;
  ModVec element(std::size_t index) const;

  bool is_trivial_action() const;
  /// Module over the source of psi with h acting as psi(h).
  GModule pullback(const GroupHom& psi) const;
  /// Same carrier and action, over a canonically equal group handle.
  GModule rebased(const FiniteGroup& g) const;

  std::vector<PrimaryComponent> primary_components() const;
  /// Coordinates of a in the component; and back.
  zmod::Vector project(const PrimaryComponent& c, const ModVec& a) const;
  ModVec include(const PrimaryComponent& c, const zmod::Vector& y) const;

  bool operator==(const GModule& o) const {
    return group_.same_as(o.group_) && factors_ == o.factors_ && matrices_ == o.matrices_;
  }

 private:
  FiniteGroup group_;
  std::vector<std::int64_t> factors_;
  std::vector<std::vector<std::int64_t>> matrices_;
};

/// Invariant-factor structure of an abelian subgroup, with an explicit basis.
struct AbelianStructure {
  std::vector<std::int64_t> factors;  // invariant factors > 1
  std::vector<Elem> basis;             // ambient elements, basis[i] has order factors[i]
  std::vector<ModVec> coords;          // per ambient element; empty for elements outside
  std::vector<Elem> element_of;        // module index -> ambient element

  std::size_t order() const;
  const ModVec& coordinates(Elem e) const { return coords.at(e); }
};

/// Throws NotAbelian if the subgroup is not abelian.
AbelianStructure abelian_structure(const Subgroup& a);

}  // namespace obstower
