#pragma once

// Seeded generators of small simplicial inputs, shared by the CLI suites and
// the tests.

#include <random>
#include <vector>

#include "obstower/simplicial.hpp"

namespace obstower::sample {

std::size_t product_order(const std::vector<std::int64_t>& cyclic_orders);

/// Bounded chain complex in degrees 0..2 whose Dold-Kan image and its W-bar
/// stay within group-table limits at truncation 3.
simp::FiniteChainComplex random_chain_complex(std::mt19937_64& rng);

/// Small complex on 2..max_vertices vertices with facets of size <= 3, so
/// holes (circles, hollow triangles) are common.
simp::SimplicialSet random_ordered_complex(std::mt19937_64& rng, std::size_t max_vertices, std::size_t top);

/// Full-square bisimplicial set at N = 3 from one of a few families.
simp::BisimplicialSet random_bisimplicial(std::mt19937_64& rng);

/// Constant extensions G -> G/N for abelian normal N, |G| <= max_order.
std::vector<simp::SimplicialExtension> constant_extension_corpus(std::size_t max_order, std::size_t top);

}  // namespace obstower::sample
