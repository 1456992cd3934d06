#pragma once

// Towers of abelian extensions ... -> Pi_n -> Pi_{n-1} -> ... -> Pi_0 and
// level-by-level lifting of a homomorphism G -> Pi_0.

#include <optional>
#include <string>
#include <vector>

#include "obstower/cohomology.hpp"

namespace obstower {

struct TowerStep {
  ExtensionDatum extension;  // Pi_n -> Pi_{n-1}, kernel A_n over Pi_{n-1}
  GroupHom action_quotient;  // Pi_{n-1} -> G_act; the action on A_n factors through it

  /// Kernel module over G_act.
  GModule descended_module() const;
  /// Throws InvalidInput if conjugation does not factor through action_quotient.
  void validate() const;
};

struct Tower {
  FiniteGroup base;  // Pi_0
  std::vector<TowerStep> steps;
  std::vector<std::string> warnings;

  const FiniteGroup& level(std::size_t n) const { return n == 0 ? base : steps.at(n - 1).extension.total; }
  void validate() const;
};

/// Pi_n = Pi / [N]_{n+1}; step n has kernel [N]_n / [N]_{n+1} and acts through Pi / N.
Tower tower_from_lcs(const FiniteGroup& pi, const Subgroup& n, std::size_t depth);

struct Obstruction {
  Cochain cocycle;  // over psi^* A
  CohomologyClass cls;
};

/// Factor set of s o psi for the stored section (or a supplied one).
Obstruction obstruction(const GroupHom& psi, const TowerStep& step,
                        const std::optional<std::vector<Elem>>& section = std::nullopt);

/// One homomorphism per class of lifts mod conjugation by A, each the least
/// member of its class, sorted. Empty iff the obstruction is nonzero.
std::vector<GroupHom> lift_classes(const GroupHom& psi, const TowerStep& step);

/// Some lift of psi, if one exists (from a trivialization of the obstruction).
std::optional<GroupHom> some_lift(const GroupHom& psi, const TowerStep& step);

/// Exhaustive search over preimages of the generator images (test oracle).
std::vector<GroupHom> brute_force_lifts(const GroupHom& psi, const TowerStep& step, SearchBudget budget = {});

/// Least representative of the class of a lift under conjugation by A.
GroupHom canonical_lift(const GroupHom& lift, const TowerStep& step);

struct E1Entry {
  std::size_t s = 0, t = 0;
  int degree = 0;
  enum class State { Computed, ForcedZero, Uncomputed } state = State::Computed;
  std::vector<std::int64_t> orders;  // elementary divisors
  std::vector<std::int64_t> invariant_factors;
};

struct E1Page {
  std::size_t s_max = 0, t_max = 0;
  std::vector<E1Entry> entries;  // ordered by (s, t)

  const E1Entry* find(std::size_t s, std::size_t t) const;
};

/// H^{1+s-t}(G, A_s) with G acting through psi0: G -> Pi_0 -> G_act.
/// Requires every action quotient to land in Pi_0 (as for LCS towers).
E1Page e1_page(const Tower& tower, const GroupHom& psi0, std::size_t s_max, std::size_t t_max,
               std::size_t max_degree = 3);

/// Module A_s as a G-module through psi0.
GModule e1_module(const Tower& tower, std::size_t s, const GroupHom& psi0);

struct LevelReport {
  std::size_t level = 0;
  std::vector<std::int64_t> h2_orders;
  std::vector<std::int64_t> obstruction_coords;
  bool obstructed = false;
  std::size_t lift_class_count = 0;
  std::vector<std::int64_t> h1_orders;
  std::optional<GroupHom> chosen_lift;
};

struct TreeNode {
  std::size_t level = 0;
  std::ptrdiff_t parent = -1;
  std::vector<Elem> generator_images;
  bool obstructed_below = false;
  std::size_t children = 0;
};

struct LiftReport {
  GroupHom start;
  std::vector<LevelReport> levels;  // one per step attempted
  bool completed = false;
  std::optional<std::size_t> blocked_at;
  std::vector<TreeNode> tree;  // only with full_tree
  bool tree_truncated = false;
};

struct RunOptions {
  bool full_tree = false;
  std::size_t width_cap = 64;
  std::size_t start_level = 0;  // psi0 targets level(start_level)
};

LiftReport run_tower(const GroupHom& psi0, const Tower& tower, RunOptions opts = {});

}  // namespace obstower
