#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace docmt::prng {

// splitmix64 (Steele, Lea & Flood / Vigna). The whole sequence is a pure
// function of the 64-bit seed, so anything shuffled with it reproduces
// bit-for-bit across runs, platforms and compilers.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Integer in [0, bound). bound must be > 0. Plain modulo: the tiny bias is
  // irrelevant here, identical results everywhere are not.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  // Double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Derives an independent generator for item `index` of a run seeded with
// `seed`. Used where items may be processed out of order (worker pools) but
// results must not depend on scheduling.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(seed ^ (0xA0761D6478BD642FULL * (index + 1)));
}

// Fisher-Yates driven by splitmix64: for i = n-1 .. 1, j = next() % (i+1),
// swap(v[i], v[j]). This exact recipe is the reproducibility contract for
// dataset splits and instruction shuffling.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace docmt::prng
