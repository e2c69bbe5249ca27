#include "heatfield/rng.hpp"

#include <cmath>

namespace heatfield {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 path_stream(std::uint64_t seed, std::uint64_t j) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(j + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

double StdNormal::operator()(std::mt19937_64& g) {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
  double u, v, s;
  do {
    u = 2.0 * static_cast<double>(g() >> 11) * scale - 1.0;
    v = 2.0 * static_cast<double>(g() >> 11) * scale - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

}  // namespace heatfield
