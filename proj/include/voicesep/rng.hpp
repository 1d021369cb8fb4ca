// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_RNG_HPP_
#define VOICESEP_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace voicesep {

/// SplitMix64 as a counter-based generator: the n-th output is a pure
/// function of (seed, n), so streams can be forked and replayed exactly.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  static constexpr std::uint64_t Mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  result_type operator()() {
    ++counter_;
    return Mix(seed_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  // Independent stream derived from this seed and a tag.
  SplitMix64 Fork(std::uint64_t tag) const {
    return SplitMix64(Mix(seed_ ^ Mix(tag + 0x632be59bd9b4e019ULL)));
  }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t Below(std::uint64_t n) {
    // Lemire's multiply-shift; the bias is below 2^-64 * n.
    __extension__ using Wide = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<Wide>((*this)()) * n) >> 64);
  }

  double Normal() {
    double u1 = Uniform();
    while (u1 <= 0.0) u1 = Uniform();
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

// Fisher-Yates with our own generator so the permutation does not depend on
// the standard library's shuffle implementation.
template <typename RandomIt>
void SeededShuffle(RandomIt first, RandomIt last, SplitMix64& rng) {
  const auto n = last - first;
  for (auto i = n - 1; i > 0; --i) {
    const auto j = static_cast<decltype(i)>(
        rng.Below(static_cast<std::uint64_t>(i) + 1));
    std::swap(first[i], first[j]);
  }
}

}  // namespace voicesep

#endif  // VOICESEP_RNG_HPP_
