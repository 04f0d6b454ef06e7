#pragma once

#include <cstdint>

namespace pcegsa {

/// Counter-based random source: every draw is a pure function of
/// (seed, stream, row, slot), so rows can be generated in any order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t row, std::uint64_t slot) const;
  /// Standard normal via the probit of uniform(row, slot).
  double normal(std::uint64_t row, std::uint64_t slot) const;

  static std::uint64_t mix(std::uint64_t x);

 private:
  std::uint64_t key_;
};

}  // namespace pcegsa
