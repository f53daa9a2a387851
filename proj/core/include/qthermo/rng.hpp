#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qthermo {

inline constexpr std::string_view kGeneratorIdentity =
    "std::mt19937_64 seeded per trial by splitmix64(seed, trial); uniform = top 53 bits; v1";

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stream key for trial `trial` of an experiment seeded with `seed`; depends on
/// nothing else.
inline constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t trial) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(trial + 0x632be59bd9b4e019ULL));
}

/// Per-trial random stream. mt19937_64 output is fixed by the standard, and
/// the uniform mapping is done here rather than through
/// std::uniform_real_distribution, so draws are identical across toolchains.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial) : engine_(derive_stream(seed, trial)) {}

  /// Uniform double in [0, 1).
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qthermo
