#ifndef DRAINET_RNG_HPP
#define DRAINET_RNG_HPP

#include <cmath>
#include <numbers>

#include "drainet/common.hpp"

namespace drainet {

inline constexpr u64 kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer (Stafford mix 13); full avalanche on 64 bits.
inline constexpr u64 mix64(u64 z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Stateless counter-based hash of (seed, x, t, stream). One stream per
// per-cell variable, so every lattice cell is addressable without storage.
inline constexpr u64 cell_hash(u64 seed, i64 x, i64 t, u64 stream) {
  u64 h = seed + kGolden * (stream + 1);
  h = mix64(h ^ static_cast<u64>(x));
  h = mix64(h ^ static_cast<u64>(t));
  return mix64(h);
}

// Uniform double in [0, 1) from the top 53 bits.
inline constexpr double to_u01(u64 h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline constexpr u64 derive_seed(u64 seed, u64 index) {
  return mix64(mix64(seed + kGolden) ^ (index * 0xd1342543de82ef95ULL + 1));
}

inline u64 hash_str(const std::string& s) {
  u64 h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Small sequential generator for replica-local sampling (selector coins,
// Gaussian increments of the continuum reference pair). Box-Muller is done
// by hand so that trajectories are bit-reproducible across platforms.
class SplitMix {
 public:
  explicit SplitMix(u64 seed) : state_(seed) {}

  u64 next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  double next_u01() { return to_u01(next_u64()); }

  // uniform in {0, 1, ..., m-1}; m small, modulo bias negligible
  u64 next_below(u64 m) { return next_u64() % m; }

  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_u01();
    while (u1 <= 0.0) u1 = next_u01();
    const double u2 = next_u01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  u64 state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace drainet

#endif
