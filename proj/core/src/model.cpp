#include "heatfield/model.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "heatfield/constants.hpp"
#include "heatfield/errors.hpp"

namespace heatfield {

std::string_view to_string(Kernel k) {
  return k == Kernel::Riesz ? "riesz" : "bessel";
}

Kernel kernel_from_string(std::string_view s) {
  if (s == "riesz" || s == "Riesz") return Kernel::Riesz;
  if (s == "bessel" || s == "Bessel") return Kernel::Bessel;
  throw ParameterDomainError("unknown kernel '" + std::string(s) +
                             "' (expected riesz or bessel)");
}

double ModelParams::beta() const noexcept { return std::min(1.0, raw_beta()); }

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // splitmix64 finalizer applied to the running state
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

}  // namespace

std::uint64_t ModelParams::fingerprint() const noexcept {
  std::uint64_t h = 0x6865617466696c64ULL;
  h = mix(h, std::bit_cast<std::uint64_t>(H));
  h = mix(h, std::bit_cast<std::uint64_t>(alpha));
  h = mix(h, static_cast<std::uint64_t>(d));
  h = mix(h, static_cast<std::uint64_t>(kernel));
  h = mix(h, std::bit_cast<std::uint64_t>(T));
  return h;
}

void check_ranges(const ModelParams& p) {
  std::ostringstream os;
  if (!(p.H > 0.5 && p.H < 1.0)) {
    os << "Hurst index H=" << p.H << " outside (1/2, 1)";
  } else if (p.d < 1 || p.d > 3) {
    os << "spatial dimension d=" << p.d << " not in {1,2,3}";
  } else if (!(p.alpha > 0.0 && p.alpha < p.d)) {
    os << "spectral exponent alpha=" << p.alpha << " outside (0, d=" << p.d << ")";
  } else if (!(p.T > 0.0) || !std::isfinite(p.T)) {
    os << "time horizon T=" << p.T << " must be positive";
  } else {
    return;
  }
  throw ParameterDomainError(os.str());
}

bool validate_existence(const ModelParams& p) noexcept {
  return p.d < 4.0 * p.H + p.alpha;
}

ModelParams ModelParams::make(double H, double alpha, int d, Kernel kernel,
                              double T) {
  ModelParams p{H, alpha, d, kernel, T};
  check_ranges(p);
  if (!validate_existence(p)) {
    std::ostringstream os;
    os << "existence condition d < 4H + alpha violated: d=" << d
       << ", 4H+alpha=" << 4.0 * H + alpha;
    throw ParameterDomainError(os.str());
  }
  return p;
}

double spectral_weight(const ModelParams& p, double r) {
  if (r < 0.0 || std::isnan(r)) throw DomainError("spectral_weight: negative radius");
  if (p.kernel == Kernel::Riesz) {
    if (r == 0.0) throw DomainError("spectral_weight: Riesz weight is singular at r=0");
    return std::pow(r, -p.alpha);
  }
  return std::pow(1.0 + r * r, -0.5 * p.alpha);
}

double riesz_real_kernel(const ModelParams& p, double x) {
  if (x <= 0.0 || std::isnan(x)) throw DomainError("riesz_real_kernel: |x| must be > 0");
  return constants::riesz_real_constant(p) * std::pow(x, p.alpha - p.d);
}

}  // namespace heatfield
