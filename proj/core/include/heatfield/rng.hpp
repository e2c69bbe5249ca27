#pragma once

#include <cstdint>
#include <random>

namespace heatfield {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Generator for path j of an ensemble with the given master seed. Depends on
/// (seed, j) only, which makes ensembles prefix-stable in n_paths.
std::mt19937_64 path_stream(std::uint64_t seed, std::uint64_t j);

/// Standard normal draws via Marsaglia's polar method (identical across
/// standard libraries, unlike std::normal_distribution).
class StdNormal {
 public:
  double operator()(std::mt19937_64& g);

 private:
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace heatfield
