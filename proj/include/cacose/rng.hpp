#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cacose {

// All randomness in the project flows through named substreams derived from
// one run seed, so changing e.g. the split stream leaves parameter init
// untouched. Draws are built on raw mt19937_64 output instead of the
// standard <random> distributions, whose algorithms are implementation
// defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  static uint64_t derive(uint64_t seed, std::string_view stream, uint64_t salt = 0) {
    uint64_t h = 0xcbf29ce484222325ull ^ seed;
    for (char c : stream) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ull;
    }
    h ^= salt + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    // splitmix64 finalizer
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebull;
    h ^= h >> 31;
    return h;
  }

  static Rng substream(uint64_t seed, std::string_view stream, uint64_t salt = 0) {
    return Rng(derive(seed, stream, salt));
  }

  uint64_t next_u64() { return engine_(); }

  // uniform in [0, 1)
  double next_double() { return (engine_() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  bool bernoulli(double p) { return next_double() < p; }

  // uniform integer in [0, n), n >= 1; rejection keeps it unbiased
  uint64_t next_below(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cacose
