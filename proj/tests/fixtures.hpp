#pragma once

#include <cstdint>

#include "vsf/data_io.hpp"
#include "vsf/sim.hpp"

namespace fixture {

/// Node 1 = 2 * node 0 + 1 (+ link noise); node 0 is a noisy offset sine.
inline vsf::Dataset affine_pair(std::uint64_t seed, std::size_t length, double link_noise,
                                double base_noise = 0.0, double period = 48.0) {
  vsf::SyntheticSpec spec;
  spec.node_count = 2;
  spec.length = length;
  spec.base = vsf::SineDrift{period, 3.0, base_noise, 20.0, 0.0, 0.3 * double(seed % 7)};
  spec.links = {{0, 1, 2.0, 1.0, link_noise}};
  spec.rng_seed = seed;
  return vsf::generate_synthetic(spec);
}

inline vsf::SimConfig small_config() {
  vsf::SimConfig cfg;
  cfg.training_len = 100;
  cfg.operational_len = 20;
  cfg.revalidation_len = 5;
  cfg.filter_order = 4;
  return cfg;
}

inline vsf::RoleAssignment pinned(std::size_t n, std::size_t type1,
                                  std::vector<vsf::NodeIndex> companions) {
  auto a = vsf::RoleAssignment::all_type2(n);
  a.roles[type1] = vsf::Role::TypeI;
  a.companions[type1] = std::move(companions);
  return a;
}

}  // namespace fixture
