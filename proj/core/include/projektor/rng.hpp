#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace projektor {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based draw: the value depends only on (seed, counter).
constexpr std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t counter) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
}

__extension__ using uint128 = unsigned __int128;

// Uniform integer in [0, bound) by multiply-high.
constexpr std::uint64_t bounded(std::uint64_t draw, std::uint64_t bound) noexcept {
  return static_cast<std::uint64_t>((static_cast<uint128>(draw) * bound) >> 64);
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(splitmix64(seed) ^ splitmix64(stream + 0x1234567ULL)) {}

  std::uint64_t next_u64() noexcept { return counter_draw(seed_, counter_++); }
  std::uint64_t below(std::uint64_t bound) noexcept { return bounded(next_u64(), bound); }

  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double normal() noexcept {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace projektor
