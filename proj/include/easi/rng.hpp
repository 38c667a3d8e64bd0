#pragma once

#include <cstdint>

namespace easi {

// Finalizer of the splitmix64 generator (Stafford mix13 constants).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Sequential splitmix64 stream. Deterministic for a given seed on every
/// platform, which keeps seeded runs byte-reproducible.
class SplitMix {
 public:
  explicit constexpr SplitMix(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }

  /// Uniform double in [0, 1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Counter-based draw: (seed, stream, t) maps to one fixed 64-bit word, so
// samples can be generated in any order, from any thread, with one value.
constexpr std::uint64_t counter_word(std::uint64_t seed, std::uint64_t stream, std::uint64_t t) {
  std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ull);
  h = mix64(h ^ (stream + 0x6a09e667f3bcc909ull));
  h = mix64(h ^ (t + 0xbb67ae8584caa73bull));
  return h;
}

/// Uniform double in [0, 1).
constexpr double unit_from_word(std::uint64_t w) {
  return static_cast<double>(w >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1), both endpoints excluded.
constexpr double open_unit_from_word(std::uint64_t w) {
  return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
}

/// Derives an independent sub-seed for a named purpose (mixing matrix,
/// source stream, separator init) from one experiment seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t purpose) {
  return mix64(mix64(seed + 0x9e3779b97f4a7c15ull) ^ purpose);
}

}  // namespace easi
