#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace sharedword {

// Portable deterministic generator. std::mt19937_64 has a standardized output
// sequence; the distributions below are implemented here because the
// standard library's are not reproducible across implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent sub-stream derived from a root seed and a stream name, so that
  // sampling, training and attack randomness never interfere.
  static Rng stream(std::uint64_t root_seed, std::string_view name);

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n);

  // Uniform in [0, 1).
  double uniform01();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[uniform_index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t fnv1a64(std::string_view text);

}  // namespace sharedword
