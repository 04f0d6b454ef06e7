#include "pcegsa/rng.hpp"

#include "pcegsa/marginal.hpp"

namespace pcegsa {

std::uint64_t CounterRng::mix(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double CounterRng::uniform(std::uint64_t row, std::uint64_t slot) const {
  const std::uint64_t bits = mix(key_ ^ mix(row * 0x9e3779b97f4a7c15ULL + mix(slot)));
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t row, std::uint64_t slot) const { return normal_icdf(uniform(row, slot)); }

}  // namespace pcegsa
