#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace obstower {

using Elem = std::uint32_t;

/// A finite group given by its full multiplication table.
///
/// Elements are indices 0..n-1 in canonical order: identity first, then
/// breadth-first over right multiplication by the generators, so every
/// element appears at the position of its shortlex-least generator word.
/// The handle is cheap to copy; the table is shared and immutable.
class FiniteGroup {
 public:
  /// Trivial group.
  FiniteGroup();

  /// Builds a group from an arbitrary multiplication table and generating
  /// set. Validates the group axioms and re-indexes canonically. Throws
  /// Error(InvalidInput) on malformed input.
  static FiniteGroup from_table(const std::vector<std::vector<Elem>>& table, const std::vector<Elem>& generators,
                                std::string name = {});

  /// Like from_table, but `old_index[i]` reports the input index of
  /// canonical element i.
  static FiniteGroup from_table(const std::vector<std::vector<Elem>>& table, const std::vector<Elem>& generators,
                                std::string name, std::vector<Elem>* old_index);

  /// Skips the associativity check; for tables derived from existing groups.
  static FiniteGroup from_trusted_table(const std::vector<std::vector<Elem>>& table,
                                        const std::vector<Elem>& generators, std::string name,
                                        std::vector<Elem>* old_index = nullptr);

  std::size_t size() const noexcept;
  Elem identity() const noexcept { return 0; }
  Elem mul(Elem a, Elem b) const noexcept;
  Elem inv(Elem a) const noexcept;
  Elem conj(Elem a, Elem by) const noexcept { return mul(mul(inv(by), a), by); }  // by^-1 a by
  Elem commutator(Elem a, Elem b) const noexcept { return mul(mul(a, b), mul(inv(a), inv(b))); }
  Elem pow(Elem a, std::int64_t e) const noexcept;
  std::size_t order_of(Elem a) const noexcept;

  const std::vector<Elem>& generators() const noexcept;
  const std::string& name() const noexcept;
  FiniteGroup renamed(std::string name) const;

  /// Position of element e in the canonical spanning tree: e = parent(e) * generator(gen_index(e)).
  Elem tree_parent(Elem e) const noexcept;
  std::size_t tree_generator(Elem e) const noexcept;

  bool is_abelian() const noexcept;
  /// Table equality (same canonical presentation).
  bool same_as(const FiniteGroup& other) const noexcept;
  std::uint64_t fingerprint() const noexcept;
  const void* identity_key() const noexcept { return impl_.get(); }

  struct Impl;  // opaque

 private:
  explicit FiniteGroup(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

class Subgroup {
 public:
  Subgroup() = default;
  Subgroup(FiniteGroup parent, std::vector<Elem> members);  // members need not be sorted

  const FiniteGroup& parent() const noexcept { return parent_; }
  const std::vector<Elem>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  bool contains(Elem e) const noexcept { return e < member_.size() && member_[e]; }
  bool operator==(const Subgroup& o) const noexcept { return elements_ == o.elements_; }

 private:
  FiniteGroup parent_;
  std::vector<Elem> elements_;
  std::vector<bool> member_;
};

class GroupHom {
 public:
  GroupHom() = default;
  /// Unchecked construction from the full image vector.
  GroupHom(FiniteGroup source, FiniteGroup target, std::vector<Elem> image);

  /// Extends generator images along the canonical spanning tree and checks
  /// the homomorphism property; throws Error(InvalidInput) if it fails.
  static GroupHom from_generator_images(const FiniteGroup& source, const FiniteGroup& target,
                                        const std::vector<Elem>& images);
  static std::optional<GroupHom> try_from_generator_images(const FiniteGroup& source, const FiniteGroup& target,
                                                           const std::vector<Elem>& images);
  static GroupHom identity(const FiniteGroup& g);
  static GroupHom trivial(const FiniteGroup& source, const FiniteGroup& target);

  const FiniteGroup& source() const noexcept { return source_; }
  const FiniteGroup& target() const noexcept { return target_; }
  Elem operator()(Elem e) const noexcept { return image_[e]; }
  const std::vector<Elem>& images() const noexcept { return image_; }
  std::vector<Elem> generator_images() const;

  /// this after `first`: x -> this(first(x)).
  GroupHom after(const GroupHom& first) const;
  /// x -> by^-1 this(x) by.
  GroupHom conjugated(Elem by) const;

  bool is_homomorphism() const;
  bool is_injective() const;
  bool is_surjective() const;
  Subgroup kernel() const;
  Subgroup image() const;

  bool operator==(const GroupHom& o) const noexcept { return image_ == o.image_; }
  /// Enumeration order: lexicographic on generator images.
  bool operator<(const GroupHom& o) const { return generator_images() < o.generator_images(); }

 private:
  FiniteGroup source_;
  FiniteGroup target_;
  std::vector<Elem> image_;
};

// --- subgroups --------------------------------------------------------------

Subgroup trivial_subgroup(const FiniteGroup& g);
Subgroup whole_group(const FiniteGroup& g);
Subgroup generated_subgroup(const FiniteGroup& g, const std::vector<Elem>& gens);
bool is_normal(const Subgroup& h);
Subgroup normal_closure(const FiniteGroup& g, const std::vector<Elem>& gens);
Subgroup center(const FiniteGroup& g);

/// Smallest subgroup containing all [h,k] = h k h^-1 k^-1.
Subgroup commutator_subgroup(const FiniteGroup& g, const Subgroup& h, const Subgroup& k);

/// [N]_1 = N, [N]_{k+1} = [N, [N]_k]; returns `depth` terms. Throws NotNormal.
std::vector<Subgroup> lower_central_series(const FiniteGroup& g, const Subgroup& n, std::size_t depth);

// --- homomorphisms ----------------------------------------------------------

struct SearchBudget {
  std::uint64_t max_assignments = 10'000'000;
};

/// All homomorphisms G -> H, ordered lexicographically by generator images.
/// Throws SearchBudgetExceeded when |H|^{#gens} exceeds the budget.
std::vector<GroupHom> enumerate_homs(const FiniteGroup& g, const FiniteGroup& h, SearchBudget budget = {});

/// Homomorphisms whose generator images are drawn from per-generator candidate lists.
std::vector<GroupHom> enumerate_homs_restricted(const FiniteGroup& g, const FiniteGroup& h,
                                                const std::vector<std::vector<Elem>>& candidates,
                                                SearchBudget budget = {});

struct ConjugacyClassOfHoms {
  GroupHom representative;           // least member in enumeration order
  std::vector<std::size_t> members;  // indices into the input list, ascending
};

/// Orbits of the input under post-conjugation by `by`. Throws MixedTargets.
std::vector<ConjugacyClassOfHoms> homs_mod_conjugacy(const std::vector<GroupHom>& homs, const Subgroup& by);

std::optional<GroupHom> find_isomorphism(const FiniteGroup& g, const FiniteGroup& h, SearchBudget budget = {});
inline bool are_isomorphic(const FiniteGroup& g, const FiniteGroup& h) { return find_isomorphism(g, h).has_value(); }

// --- constructions ----------------------------------------------------------

struct QuotientGroup {
  FiniteGroup group;
  GroupHom projection;
  std::vector<Elem> coset_representative;  // least element of each coset
};

/// G / N with canonical coset ordering. Throws NotNormal.
QuotientGroup quotient(const FiniteGroup& g, const Subgroup& n);

struct ProductGroup {
  FiniteGroup group;
  std::vector<std::pair<Elem, Elem>> components;  // element -> (g, h)
  GroupHom first_projection;
  GroupHom second_projection;
  GroupHom first_inclusion;
  GroupHom second_inclusion;
};

ProductGroup direct_product(const FiniteGroup& g, const FiniteGroup& h);

/// Subgroup turned into a group in its own right, with the inclusion.
struct SubgroupAsGroup {
  FiniteGroup group;
  GroupHom inclusion;
};
SubgroupAsGroup subgroup_as_group(const Subgroup& h, std::string name = {});

namespace catalog {

FiniteGroup trivial();
FiniteGroup cyclic(std::size_t n);
/// Dihedral group of order 2n.
FiniteGroup dihedral(std::size_t n);
FiniteGroup symmetric(std::size_t n);  // n <= 5
FiniteGroup alternating(std::size_t n);  // n <= 5
FiniteGroup quaternion8();
FiniteGroup klein4();
/// Z/d1 x Z/d2 x ...
FiniteGroup abelian(const std::vector<std::int64_t>& factors);
/// Group generated by the given permutations of {0..degree-1}.
FiniteGroup permutation_group(std::size_t degree, const std::vector<std::vector<std::uint32_t>>& gens,
                              std::string name = {});
/// Looks up a short name: "S3", "Q8", "D4", "A4", "V4", "C6", "Z6", "1", ...
FiniteGroup by_name(const std::string& name);

}  // namespace catalog

/// Canonical word (generator indices) of an element.
std::vector<std::size_t> canonical_word(const FiniteGroup& g, Elem e);

}  // namespace obstower
