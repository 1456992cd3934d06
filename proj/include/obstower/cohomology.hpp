#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "obstower/group.hpp"
#include "obstower/module.hpp"
#include "obstower/resolution.hpp"
#include "obstower/zmod.hpp"

namespace obstower {

/// Normalized inhomogeneous cochain G^n -> A, stored densely over the
/// canonical element order (first argument most significant).
class Cochain {
 public:
  Cochain() = default;
  Cochain(GModule module, std::size_t degree);  // zero cochain

  /// Values laid out as [flat tuple index][module coordinate]; validated.
  static Cochain from_values(GModule module, std::size_t degree, std::vector<std::int64_t> values);

  const GModule& module() const noexcept { return module_; }
  const FiniteGroup& group() const noexcept { return module_.group(); }
  std::size_t degree() const noexcept { return degree_; }
  std::size_t tuple_count() const noexcept { return tuples_; }
  const std::vector<std::int64_t>& values() const noexcept { return values_; }

  std::size_t flat_index(const std::vector<Elem>& args) const;
  std::vector<Elem> args_of(std::size_t flat) const;
  ModVec at(const std::vector<Elem>& args) const;
  ModVec at_flat(std::size_t flat) const;
  void set(const std::vector<Elem>& args, const ModVec& v);
  void set_flat(std::size_t flat, const ModVec& v);

  bool is_normalized() const;
  bool is_zero() const;
  Cochain operator+(const Cochain& o) const;
  Cochain operator-(const Cochain& o) const;
  Cochain scaled(std::int64_t c) const;
  bool operator==(const Cochain& o) const { return degree_ == o.degree_ && module_ == o.module_ && values_ == o.values_; }

  /// Precomposition with psi^n; the module is pulled back.
  Cochain pullback(const GroupHom& psi) const;
  /// Same values over a pulled-back module (for cochains already over the source).
  Cochain with_module(const GModule& m) const;

 private:
  GModule module_;
  std::size_t degree_ = 0;
  std::size_t tuples_ = 1;
  std::vector<std::int64_t> values_;
};

/// Bar differential; see resolution.hpp for the sign convention.
Cochain coboundary(const Cochain& f);
bool is_cocycle(const Cochain& f);

struct CohomologyOptions {
  std::size_t max_degree = 3;
};

/// H^n(G, A) with explicit representatives.
///
/// Computed from a free resolution per primary component of A; generators
/// are cyclic of prime-power order and listed prime by prime.
class CohomologyGroup {
 public:
  struct Part {
    std::shared_ptr<const res::CochainComplex> complex;
    std::size_t offset = 0;  // index of the first generator of this part
  };

  CohomologyGroup() = default;
  CohomologyGroup(GModule module, std::size_t degree, std::vector<Part> parts);

  std::size_t degree() const noexcept { return degree_; }
  const GModule& module() const noexcept { return module_; }
  const FiniteGroup& group() const noexcept { return module_.group(); }
  /// Order of each generator (prime powers).
  const std::vector<std::int64_t>& orders() const noexcept { return orders_; }
  std::size_t ngens() const noexcept { return orders_.size(); }
  std::vector<std::int64_t> invariant_factors() const;
  /// Order of the group (saturates at 2^63).
  std::uint64_t size() const;
  bool is_trivial() const noexcept { return orders_.empty(); }
  const std::vector<Part>& parts() const noexcept { return parts_; }

  /// Coordinates of the class of a cocycle; throws NotACocycle.
  std::vector<std::int64_t> coordinates(const Cochain& cocycle) const;
  bool is_coboundary(const Cochain& cocycle) const;
  Cochain representative(std::size_t i) const;
  Cochain combination(const std::vector<std::int64_t>& coords) const;
  std::vector<std::int64_t> reduce_coordinates(std::vector<std::int64_t> coords) const;

  /// Resolution-level coordinates: one cocycle vector per part.
  std::vector<std::int64_t> coordinates_of_parts(const std::vector<zmod::Vector>& cocycles) const;
  std::vector<zmod::Vector> parts_of(const Cochain& cocycle) const;
  /// All classes, as coordinate vectors in lexicographic order.
  std::vector<std::vector<std::int64_t>> all_coordinates() const;

 private:
  Cochain from_parts(const std::vector<zmod::Vector>& parts) const;

  GModule module_;
  std::size_t degree_ = 0;
  std::vector<Part> parts_;
  std::vector<std::int64_t> orders_;
};

CohomologyGroup cohomology(const GModule& a, std::size_t n, CohomologyOptions opts = {});

/// Cochain complexes of A (one per primary component) over a resolution
/// of the given top degree; cached.
std::vector<std::shared_ptr<const res::CochainComplex>> cochain_complexes(const GModule& a, int top);

/// u(x) for a bar cochain f evaluated on a bar chain, projected to one component.
zmod::Vector evaluate_on_bar(const Cochain& f, const PrimaryComponent& comp, const res::BarChain& x);

/// Some w with dw = c, if c is a coboundary (c of degree >= 1).
std::optional<Cochain> solve_coboundary(const Cochain& c);

/// Normalized bar complex: d^n as integer matrices, rows reduced mod the
/// invariant factors of A. Cochain space in degree n is A^{(|G|-1)^n}.
struct BarComplex {
  std::vector<std::size_t> cochain_ranks;  // number of copies of A per degree
  std::vector<zint::IntMatrix> differentials;
};
BarComplex bar_complex(const GModule& a, std::size_t max_degree, std::size_t degree_budget = 4);

/// Elementary divisors of H^n computed directly on the normalized bar complex.
std::vector<std::int64_t> bar_cohomology_orders(const GModule& a, std::size_t n);

// --- extensions -------------------------------------------------------------

/// 1 -> A -> total -> base -> 1 with A abelian and a set-section s, s(1) = 1.
struct ExtensionDatum {
  FiniteGroup base;
  GModule kernel;
  FiniteGroup total;
  GroupHom projection;
  std::vector<Elem> embedding;         // module element index -> total element
  std::vector<std::int64_t> kernel_of;  // total element -> module element index, -1 outside
  std::vector<Elem> section;           // base element -> total element

  Elem iota(const ModVec& a) const { return embedding.at(kernel.index_of(a)); }
  ModVec kernel_coords(Elem x) const;

  /// From a surjection with abelian kernel; section = least preimage.
  /// Throws NotAbelianKernel.
  static ExtensionDatum from_surjection(const GroupHom& p);
  ExtensionDatum with_section(std::vector<Elem> s) const;
  /// Checks every invariant; throws InvalidInput.
  void validate() const;
  /// c(g,h) = s(gh)^{-1} s(g) s(h), read in A.
  Cochain factor_set() const;
};

struct CohomologyClass {
  CohomologyGroup group;
  std::vector<std::int64_t> coords;
  Cochain cocycle;  // a representative used to compute it

  bool is_zero() const;
};

CohomologyClass class_of(const Cochain& cocycle);
CohomologyClass extension_class(const ExtensionDatum& e);
/// Total group on pairs (g, a) with (g,a)(h,b) = (gh, a.h + b + c(g,h)). Throws NotACocycle.
ExtensionDatum extension_from_cocycle(const Cochain& c);
ExtensionDatum semidirect_product(const GModule& a);
CohomologyClass pullback_class(const GroupHom& psi, const CohomologyClass& cls);
/// g -> lift(g) iota(z(g)); z a 1-cocycle for the pulled-back module. Throws NotACocycle.
GroupHom torsor_action(const ExtensionDatum& e, const GroupHom& lift, const Cochain& z);

/// Brute-force enumeration of Z^1(G, A) (oracle; |A|^{#gens} assignments).
std::vector<Cochain> enumerate_one_cocycles(const GModule& a, std::uint64_t budget = 10'000'000);

}  // namespace obstower
