#pragma once

#include <cstdint>
#include <string_view>

namespace jdafc {

/*------------------------------------------------------------------------------------------------*/

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t
mix64(std::uint64_t z)
noexcept
{
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a, used to turn stream labels into substream keys.
constexpr std::uint64_t
hash_label(std::string_view label)
noexcept
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : label)
  {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/*------------------------------------------------------------------------------------------------*/

/// SplitMix64 generator (Steele, Lea, Flood). Every stream in the project derives from this, so
/// the output for a given seed is fixed by the test vectors in tests/test_rng.cpp.
class splitmix64
{
public:

  using result_type = std::uint64_t;

  static constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

  constexpr explicit splitmix64(std::uint64_t seed = 0) noexcept
    : state_{seed}
  {}

  /// Independent stream keyed by (seed, key). Used for per-symbol and per-path substreams.
  static constexpr splitmix64
  keyed(std::uint64_t seed, std::uint64_t key)
  noexcept
  {
    return splitmix64{mix64(seed ^ mix64(key + golden_gamma))};
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~std::uint64_t{0}; }

  constexpr result_type
  operator()()
  noexcept
  {
    state_ += golden_gamma;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 bits of resolution.
  constexpr double
  uniform()
  noexcept
  {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). Lemire's multiply-shift with rejection, bound > 0.
  constexpr std::uint64_t
  below(std::uint64_t bound)
  noexcept
  {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound)
    {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold)
      {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  constexpr std::uint64_t state() const noexcept { return state_; }

private:

  std::uint64_t state_;
};

} // namespace jdafc
