#pragma once

#include <cstdint>

namespace ncg {

// Stream tags used to derive independent child streams. Keeping them in one
// place avoids accidental collisions between subsystems.
namespace rngtag {
inline constexpr std::uint64_t kNetRound = 1;
inline constexpr std::uint64_t kNetInner = 2;
inline constexpr std::uint64_t kNetLoss = 3;
inline constexpr std::uint64_t kFloodFault = 4;
inline constexpr std::uint64_t kFloodTrial = 5;
inline constexpr std::uint64_t kTrial = 6;
inline constexpr std::uint64_t kEmit = 7;
inline constexpr std::uint64_t kSourceSample = 8;
inline constexpr std::uint64_t kNetModel = 9;
inline constexpr std::uint64_t kMessage = 10;
inline constexpr std::uint64_t kBinSeed = 11;
inline constexpr std::uint64_t kScan = 12;
}  // namespace rngtag

// Deterministic hierarchical RNG. A stream is identified by a 64-bit key;
// child streams are derived by mixing tag words into the key, independent of
// how much the parent has been sampled. This makes trials and rounds
// reproducible regardless of evaluation order. Sampling runs splitmix64 on
// the derived state, so creating a stream is free of warm-up cost.
class RngStream {
public:
  explicit RngStream(std::uint64_t key) : key_(key), state_(mix(key ^ 0x6a09e667f3bcc909ull)) {}

  RngStream child(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    std::uint64_t k = key_;
    k = mix(k ^ (a + 0x9e3779b97f4a7c15ull));
    k = mix(k ^ (b + 0x3c6ef372fe94f82bull));
    k = mix(k ^ (c + 0xbb67ae8584caa73bull));
    return RngStream(k);
  }

  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Unbiased draw from [0, n), n >= 1 (Lemire's multiply-shift rejection).
  std::uint32_t below(std::uint32_t n) {
    std::uint64_t x = next_u64();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t t = (0 - static_cast<std::uint64_t>(n)) % n;
      while (lo < t) {
        x = next_u64();
        m = static_cast<unsigned __int128>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 64);
  }

  double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

private:
  std::uint64_t key_;
  std::uint64_t state_;
};

}  // namespace ncg
