#pragma once

// Toy local-global systems: a finite "global" group with decomposition maps
// G_v -> global and inertia subgroups I_v, restricted-product cohomology,
// compact-support cohomology as the cocone of localization, and the
// reciprocity map into H^2_c.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "obstower/cohomology.hpp"
#include "obstower/tower.hpp"

namespace obstower {

struct Place {
  std::string label;
  GroupHom decomposition;  // G_v -> global
  Subgroup inertia;        // I_v, normal in G_v
};

struct LocalGlobalSystem {
  FiniteGroup global;
  std::vector<Place> places;

  /// Throws InvalidInput.
  void validate() const;
  std::vector<std::string> labels() const;
};

/// The group and module used at one place for a given coefficient module.
struct LocalModel {
  std::string label;
  bool unramified = false;  // G_v / I_v in place of G_v
  FiniteGroup group;
  GroupHom to_global;
  GroupHom from_decomposition;  // G_v -> group (identity or the quotient map)
  GModule module;               // global module pulled back along to_global
};

/// Places outside `ramified` must have I_v acting trivially (RamificationMismatch).
/// Unramified places use G_v/I_v when the decomposition map kills I_v, and
/// G_v otherwise.
std::vector<LocalModel> local_models(const LocalGlobalSystem& sys, const GModule& m,
                                     const std::vector<std::string>& ramified);

/// Places whose inertia acts nontrivially on m.
std::vector<std::string> ramified_places(const LocalGlobalSystem& sys, const GModule& m);

struct AdelicCohomology {
  std::size_t degree = 0;
  std::vector<LocalModel> places;
  std::vector<CohomologyGroup> local;
  std::vector<std::int64_t> orders;  // concatenated over places
  CohomologyGroup global;
  /// Row i: adelic coordinates of the localization of global generator i.
  std::vector<std::vector<std::int64_t>> localization;

  std::vector<std::int64_t> localize(const std::vector<std::int64_t>& global_coords) const;
  std::uint64_t size() const;
};

AdelicCohomology adelic_cohomology(const LocalGlobalSystem& sys, const GModule& m, std::size_t n,
                                   const std::vector<std::string>& ramified);

struct LesNode {
  std::string name;
  std::vector<std::int64_t> orders;
};

struct LesSpot {
  std::string name;  // the middle node
  bool exact = false;
  std::uint64_t image_order = 0;
  std::uint64_t kernel_order = 0;
};

struct LesReport {
  std::vector<LesNode> nodes;
  std::vector<LesSpot> spots;
  bool exact = true;
};

/// Cocone of C(global, M) -> prod_v C(L_v, M): degree n is
/// C^n(global) + sum_v C^{n-1}(L_v), with d(x, y) = (dx, loc x - dy).
class CompactSupport {
 public:
  CompactSupport(const LocalGlobalSystem& sys, const GModule& m, const std::vector<std::string>& ramified,
                 std::size_t max_degree = 3);

  const GModule& module() const noexcept { return module_; }
  const std::vector<LocalModel>& places() const noexcept { return places_; }
  std::size_t max_degree() const noexcept { return max_degree_; }

  /// Elementary divisors of H^n_c, n <= max_degree + 1.
  std::vector<std::int64_t> orders(std::size_t n) const;
  std::uint64_t size(std::size_t n) const;

  /// Coordinates of a cone cocycle given by bar cochains: X of degree n on the
  /// global group and Y_v of degree n-1 on each local group.
  std::vector<std::int64_t> coordinates(std::size_t n, const Cochain& x, const std::vector<Cochain>& y) const;
  /// Bar-level cone cocycle representing generator i of H^n_c.
  std::pair<Cochain, std::vector<Cochain>> representative(std::size_t n, std::size_t i) const;
  bool is_cone_cocycle(const Cochain& x, const std::vector<Cochain>& y) const;

  /// Images of generators, as coordinate rows, for the maps of the long exact
  /// sequence. Coordinates are prime-major; adelic ones are place-major within a prime.
  std::vector<std::vector<std::int64_t>> map_to_global(std::size_t n) const;      // H^n_c -> H^n(global)
  std::vector<std::vector<std::int64_t>> map_localize(std::size_t n) const;       // H^n(global) -> H^n(A)
  std::vector<std::vector<std::int64_t>> map_connecting(std::size_t n) const;     // H^n(A) -> H^{n+1}_c
  std::vector<std::int64_t> global_orders(std::size_t n) const;
  std::vector<std::int64_t> adelic_orders(std::size_t n) const;
  /// Exactness of the long exact sequence up to H^{up_to}(A); up_to <= max_degree.
  LesReport les(std::size_t up_to) const;

  struct Part;

 private:
  GModule module_;
  std::vector<LocalModel> places_;
  std::size_t max_degree_;
  std::vector<std::shared_ptr<Part>> parts_;
};

/// 0 -> H^0_c -> H^0(G) -> H^0(A) -> H^1_c -> ... -> H^{up_to}(A) -> H^{up_to+1}_c.
LesReport les_check(const LocalGlobalSystem& sys, const GModule& m, const std::vector<std::string>& ramified,
                    std::size_t up_to = 3);

struct ReciprocityResult {
  std::vector<std::int64_t> hc2_orders;
  std::vector<std::int64_t> coords;
  bool is_zero = false;
};

/// d(alpha) = [(0, -alpha)] in H^2_c for alpha = (alpha_v) with alpha_v given
/// by coordinates in H^1(L_v, A).
ReciprocityResult reciprocity_obstruction(const LocalGlobalSystem& sys, const GModule& a,
                                          const std::vector<std::vector<std::int64_t>>& local_classes,
                                          const std::vector<std::string>& ramified);

struct ReciprocityLevel {
  std::size_t level = 0;
  std::vector<std::int64_t> global_obstruction;  // coordinates in H^2(global, A_n)
  bool global_obstructed = false;
  std::vector<std::int64_t> hc2_orders;
  std::vector<std::int64_t> difference;  // coordinates in H^2_c
  bool difference_zero = false;
  bool continuation_found = false;  // a global lift matching the local lifts up to A-conjugacy
  std::optional<GroupHom> chosen_global;
};

struct ReciprocityReport {
  std::vector<ReciprocityLevel> levels;
  bool completed = false;
  std::optional<std::size_t> stopped_at;
};

/// local_lifts[n-1][v] : G_v -> Pi_n. Level-1 lifts cover psi_global0 o dec_v;
/// level n+1 lifts cover level n lifts. Every place uses its full G_v.
/// Throws Inadmissible (a local obstruction is nonzero) or IncompatibleLocalData.
ReciprocityReport reciprocity_tower(const LocalGlobalSystem& sys, const Tower& tower, const GroupHom& psi_global0,
                                    const std::vector<std::vector<GroupHom>>& local_lifts);

}  // namespace obstower
