#pragma once

#include <cmath>
#include <cstdint>

namespace pdmp {

// Counter-based stream built on the splitmix64 finalizer: output k is a hash
// of (seed, stream id, k).  Racing clocks stay reproducible no matter which
// one wins, because each clock type owns a stream and consumes nothing from
// the others.
class RngStream {
 public:
  RngStream() = default;
  RngStream(std::uint64_t seed, std::uint64_t stream) { key_ = mix2(seed, stream); }

  std::uint64_t next_u64() {
    std::uint64_t z = key_ + (++ctr_) * 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // open (0,1): never returns an exact 0 or 1, so log() stays finite
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform()); }

  double normal() {
    double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  double sign() { return (next_u64() & 1u) ? 1.0 : -1.0; }

 private:
  static std::uint64_t mix2(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t ctr_ = 0;
};

// One stream per clock type (plus one for model/data initialization).
struct RngBundle {
  RngStream reflect;
  RngStream refresh;
  RngStream unstick;
  RngStream boundary;
  RngStream init;

  explicit RngBundle(std::uint64_t seed)
      : reflect(seed, 1), refresh(seed, 2), unstick(seed, 3), boundary(seed, 4), init(seed, 5) {}
};

// Derives an independent chain seed from a base seed.
inline std::uint64_t chain_seed(std::uint64_t seed, std::uint64_t chain) {
  RngStream s(seed, 0xc001d00dull + chain);
  return s.next_u64();
}

}  // namespace pdmp
