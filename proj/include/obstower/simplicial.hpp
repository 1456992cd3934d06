#pragma once

// Finite truncations of simplicial sets, simplicial groups and bisimplicial
// sets; nerve, codiagonal, W-bar, Moore homotopy, integral homology, and the
// principal fibration attached to an abelian extension of simplicial groups.
//
// Every simplicial object is truncated at a top level N. Homology and
// homotopy in degree k are only reported when k + 1 <= N.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "obstower/group.hpp"

namespace obstower::simp {

using Map = std::vector<std::uint32_t>;

struct SimplicialSet {
  std::vector<std::size_t> sizes;            // levels 0..N
  std::vector<std::vector<Map>> faces;       // faces[n][i] : X_n -> X_{n-1}, n >= 1
  std::vector<std::vector<Map>> degeneracies;  // degeneracies[n][i] : X_n -> X_{n+1}, n < N

  std::size_t top() const noexcept { return sizes.empty() ? 0 : sizes.size() - 1; }
  /// First violations of the simplicial identities (empty when valid).
  std::vector<std::string> identity_violations(std::size_t limit = 8) const;
  std::vector<bool> degenerate(std::size_t n) const;
  SimplicialSet truncated(std::size_t n) const;
};

/// A levelwise map; checked against faces and degeneracies by is_simplicial_map.
using SimplicialMap = std::vector<Map>;
bool is_simplicial_map(const SimplicialMap& f, const SimplicialSet& x, const SimplicialSet& y);

struct SimplicialGroup {
  std::vector<FiniteGroup> levels;
  std::vector<std::vector<GroupHom>> faces;
  std::vector<std::vector<GroupHom>> degeneracies;

  std::size_t top() const noexcept { return levels.empty() ? 0 : levels.size() - 1; }
  /// Throws InvalidInput on a non-homomorphism or a failed identity.
  void validate() const;
  SimplicialSet underlying() const;
  bool levelwise_abelian() const;

  static SimplicialGroup constant(const FiniteGroup& g, std::size_t top);
};

/// Cells (p, q) exist for p, q <= N, and only for p + q <= N when `triangular`.
struct BisimplicialSet {
  std::size_t n = 0;
  bool triangular = false;
  std::vector<std::vector<std::size_t>> sizes;  // [p][q]
  // [p][q][i]; horizontal maps change p, vertical maps change q
  std::vector<std::vector<std::vector<Map>>> hfaces, vfaces, hdegeneracies, vdegeneracies;

  bool defined(std::size_t p, std::size_t q) const noexcept {
    return p <= n && q <= n && (!triangular || p + q <= n);
  }
  std::vector<std::string> identity_violations(std::size_t limit = 8) const;
  /// Level n is X_{n,n} with d_i = d^h_i d^v_i. Requires the full square.
  SimplicialSet diagonal() const;
};

// --- constructions ------------------------------------------------------------

/// (BG)_{p,q} = (G_q)^p, horizontal = nerve direction. Cells are encoded in
/// mixed radix, first entry most significant.
BisimplicialSet nerve(const SimplicialGroup& g, bool triangular = true);

struct Codiagonal {
  SimplicialSet set;
  std::vector<std::vector<std::vector<std::uint32_t>>> tuples;  // [p][x] = (x_0, ..., x_p), x_i in X_{i,p-i}
  std::vector<std::map<std::vector<std::uint32_t>, std::uint32_t>> index;
};

/// Throws TruncationInsufficient when top > X.n.
Codiagonal codiagonal_tuples(const BisimplicialSet& x, std::size_t top);
SimplicialSet codiagonal(const BisimplicialSet& x, std::size_t top);
SimplicialSet wbar(const SimplicialGroup& g);
/// W-bar of a levelwise abelian simplicial group, as a simplicial group.
/// Throws NotAbelian.
SimplicialGroup wbar_group(const SimplicialGroup& a);

/// Weakly increasing vertex sequences whose support lies in a facet.
SimplicialSet ordered_complex(std::size_t vertices, const std::vector<std::vector<std::uint32_t>>& facets,
                              std::size_t top);
/// X_{p,q} = K_p x L_q.
BisimplicialSet external_product(const SimplicialSet& k, const SimplicialSet& l);
/// X_{p,q} = K_{p+q+1}; needs K up to level 2N+1.
BisimplicialSet decalage(const SimplicialSet& k, std::size_t n);
BisimplicialSet product(const BisimplicialSet& x, const BisimplicialSet& y);

/// Bounded chain complex of finite abelian groups, degrees 0..top.
struct FiniteChainComplex {
  std::vector<std::vector<std::int64_t>> groups;    // cyclic orders of C_k
  std::vector<std::vector<std::int64_t>> boundary;  // d_k : C_k -> C_{k-1}, row-major, k >= 1 (index 0 unused)
};

/// Simplicial abelian group whose Moore complex is c.
SimplicialGroup dold_kan(const FiniteChainComplex& c, std::size_t top);

// --- invariants ---------------------------------------------------------------

/// pi_k for k <= top - 1 as invariant factors, via the Moore complex
/// N_k = cap_{i>0} ker d_i with boundary d_0. Throws NotAbelian unless every
/// level is abelian.
std::vector<std::vector<std::int64_t>> moore_homotopy(const SimplicialGroup& g);
/// G_0 / d_0(ker d_1), for any simplicial group.
QuotientGroup pi0(const SimplicialGroup& g);

/// H_k(X; Z) for k <= top - 1, normalized chains; a 0 entry stands for Z.
std::vector<std::vector<std::int64_t>> integral_homology(const SimplicialSet& x);
/// Edge-path group of a reduced simplicial set (a single vertex), presented
/// by nondegenerate edges and one relation per 2-simplex, as the regular
/// permutation representation from coset enumeration. Empty when the
/// enumeration exceeds `max_cosets`.
struct EdgePathGroup {
  std::vector<std::uint32_t> edges;             // generator i is edge edges[i]
  std::vector<std::vector<std::uint32_t>> act;  // act[i][c] = c . edge_i
  std::size_t order() const { return act.empty() ? 1 : act[0].size(); }
};
std::optional<EdgePathGroup> edge_path_group(const SimplicialSet& x, std::size_t max_cosets = 100000);

/// True when the mapping cone of f is acyclic in degrees <= top(x) - 1, so f is
/// an isomorphism on H_k for k <= top - 2 and onto in degree top - 1.
bool homology_equivalence(const SimplicialMap& f, const SimplicialSet& x, const SimplicialSet& y);

/// x -> (x_0, ..., x_n), x_i = (d^h_{i+1})^{n-i} (d^v_0)^i x.
SimplicialMap diagonal_to_codiagonal(const BisimplicialSet& x, const Codiagonal& nabla);

struct DiagReport {
  std::vector<std::vector<std::int64_t>> diag_homology, codiag_homology;
  bool equal = false;
  bool natural_map_simplicial = false;
  bool natural_map_equivalence = false;
};
DiagReport diag_vs_codiag(const BisimplicialSet& x);

// --- abelian extensions --------------------------------------------------------

struct SimplicialExtension {
  SimplicialGroup total;  // G
  SimplicialGroup base;   // H
  std::vector<GroupHom> projection;

  /// Throws InvalidInput or NotAbelianKernel.
  void validate() const;
};

/// Levelwise constant extension from a surjection with abelian kernel.
SimplicialExtension constant_extension(const GroupHom& p, std::size_t top);
/// (G x K) -> (H x K) for a simplicial group K.
SimplicialExtension extension_times(const SimplicialExtension& e, const SimplicialGroup& k);

struct FibrationReport {
  std::size_t top = 0;
  std::vector<std::size_t> y_sizes, wbar_g_sizes, wbar_h_sizes, target_sizes, pullback_sizes;
  bool maps_simplicial = false;    // f, w, zero section, inclusion of W-bar G
  bool pullback_identity = false;  // Y' x_target W-bar H == W-bar G, levelwise bijection
  bool pi0_bijection = false;
  bool pi1_bijection = false;  // edge-path groups, by coset enumeration
  std::size_t pi1_order = 0;
  bool w_homology_equivalence = false;  // cone of w acyclic in degrees <= top - 1
  std::vector<std::string> failures;
};

/// Y' = W[ W(G x| A) => W G ] with f : Y' -> W[ W(H x| A) => W H ] and w : Y' -> W H,
/// checked elementwise within the truncation.
FibrationReport fibration_data(const SimplicialExtension& e);

}  // namespace obstower::simp
