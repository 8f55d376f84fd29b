#pragma once

// Deterministic random streams.
//
// Every random quantity is drawn from a substream whose key is derived from
// (seed, purpose, round, index). Draws therefore do not depend on the order
// in which substreams are consumed, which lets sampling run on any number of
// threads without changing results. The generator is SplitMix64 and the
// uniform conversion uses the top 53 bits, so output is bit-identical across
// platforms and standard libraries.

#include <cstdint>
#include <string_view>

namespace stackop::rng {

inline constexpr std::string_view kGeneratorName = "splitmix64-substream-v1";

enum class Purpose : std::uint64_t {
  Graph = 1,
  Perturbation = 2,  // the perturbation behind the played strategy x^(t)
  Sampling = 3,      // the r draws used to estimate selection probabilities
  RoundPick = 4,     // T_min
};

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_key(std::uint64_t seed, Purpose purpose, std::uint64_t round,
                                   std::uint64_t index) noexcept {
  std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ (static_cast<std::uint64_t>(purpose) * 0xd1b54a32d192ed03ULL));
  h = mix64(h ^ (round * 0xaef17502108ef2d9ULL));
  return mix64(h ^ (index * 0xdb4f0b9175ae2165ULL));
}

class Stream {
 public:
  explicit constexpr Stream(std::uint64_t key) noexcept : state_(key) {}
  constexpr Stream(std::uint64_t seed, Purpose purpose, std::uint64_t round,
                   std::uint64_t index) noexcept
      : state_(derive_key(seed, purpose, round, index)) {}

  constexpr std::uint64_t next_u64() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform on [0, 1).
  constexpr double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer on [0, bound), bound > 0. Rejection keeps it unbiased.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound);
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % bound;
  }

 private:
  std::uint64_t state_;
};

}  // namespace stackop::rng
