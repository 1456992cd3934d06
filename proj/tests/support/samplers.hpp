#pragma once

// Random small local-global systems shared by the unit and acceptance tests.

#include <random>
#include <string>
#include <vector>

#include "obstower/arith.hpp"

namespace obstower::testing {

inline std::vector<FiniteGroup> small_globals() {
  return {catalog::cyclic(2),       catalog::cyclic(3),       catalog::cyclic(4),   catalog::klein4(),
          catalog::symmetric(3),    catalog::cyclic(6),       catalog::dihedral(4), catalog::quaternion8(),
          catalog::abelian({2, 4}), catalog::abelian({2, 2, 2}), catalog::cyclic(8), catalog::alternating(4),
          catalog::dihedral(6),     catalog::trivial()};
}

// Modules over small quotients; pulled back along random homomorphisms.
inline std::vector<GModule> small_modules() {
  const auto one = catalog::trivial(), c2 = catalog::cyclic(2), c3 = catalog::cyclic(3), c4 = catalog::cyclic(4);
  return {
      GModule::trivial(one, {2}),
      GModule::trivial(one, {3}),
      GModule::trivial(one, {4}),
      GModule::trivial(one, {2, 2}),
      GModule::trivial(one, {9}),
      GModule::trivial(one, {6}),
      GModule::from_generators(c2, {3}, {{2}}),
      GModule::from_generators(c2, {4}, {{3}}),
      GModule::from_generators(c2, {2, 2}, {{0, 1, 1, 0}}),
      GModule::from_generators(c2, {3, 3}, {{0, 1, 1, 0}}),
      GModule::from_generators(c3, {2, 2}, {{0, 1, 1, 1}}),
      GModule::from_generators(c3, {7}, {{2}}),
      GModule::from_generators(c4, {5}, {{2}}),
      GModule::from_generators(c4, {2, 2}, {{1, 1, 0, 1}}),
  };
}

inline GModule random_module(std::mt19937& rng, const FiniteGroup& g) {
  const auto mods = small_modules();
  for (;;) {
    const GModule& m = mods[rng() % mods.size()];
    const auto homs = enumerate_homs(g, m.group());
    if (homs.empty()) continue;
    return m.pullback(homs[rng() % homs.size()]);
  }
}

inline Subgroup random_normal_subgroup(std::mt19937& rng, const FiniteGroup& g) {
  switch (rng() % 3) {
    case 0: return trivial_subgroup(g);
    case 1: return whole_group(g);
    default: return normal_closure(g, {static_cast<Elem>(rng() % g.size())});
  }
}

inline Place random_place(std::mt19937& rng, const FiniteGroup& global, const std::string& label) {
  Place p;
  p.label = label;
  if (rng() % 2 == 0) {
    const Elem a = static_cast<Elem>(rng() % global.size());
    const Elem b = static_cast<Elem>(rng() % global.size());
    const auto sub = subgroup_as_group(rng() % 3 == 0 ? generated_subgroup(global, {a, b})
                                                       : generated_subgroup(global, {a}));
    p.decomposition = sub.inclusion;
  } else {
    const std::vector<FiniteGroup> srcs = {catalog::trivial(), catalog::cyclic(2), catalog::cyclic(4),
                                           catalog::klein4()};
    const auto& src = srcs[rng() % srcs.size()];
    const auto homs = enumerate_homs(src, global);
    p.decomposition = homs[rng() % homs.size()];
  }
  p.inertia = random_normal_subgroup(rng, p.decomposition.source());
  return p;
}

struct SampledSystem {
  LocalGlobalSystem sys;
  GModule module;
  std::vector<std::string> ramified;
};

inline SampledSystem random_system(std::mt19937& rng) {
  const auto globals = small_globals();
  SampledSystem s;
  s.sys.global = globals[rng() % globals.size()];
  const std::size_t nplaces = 1 + rng() % 3;
  for (std::size_t v = 0; v < nplaces; ++v) s.sys.places.push_back(random_place(rng, s.sys.global, "v" + std::to_string(v + 1)));
  s.module = random_module(rng, s.sys.global);
  s.ramified = ramified_places(s.sys, s.module);
  for (const auto& p : s.sys.places)
    if (rng() % 3 == 0 && std::find(s.ramified.begin(), s.ramified.end(), p.label) == s.ramified.end())
      s.ramified.push_back(p.label);
  return s;
}

}  // namespace obstower::testing
