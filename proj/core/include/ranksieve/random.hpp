#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ranksieve/model.hpp"

namespace ranksieve {

/// Seeded stream with fully specified transforms, so draws are identical
/// across standard libraries (std distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Standard normal by Box-Muller; values come in pairs.
  double normal();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Fisher-Yates shuffle of v.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }
  /// Student t with 4 degrees of freedom as Z / sqrt(chi2_4 / 4).
  double student_t4();
  double cauchy();
  double exponential(double rate);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0;
  bool has_spare_ = false;
};

/// Derives an independent seed for stream `index` of a base seed (splitmix64).
std::uint64_t split_seed(std::uint64_t base, std::uint64_t index);

}  // namespace ranksieve
