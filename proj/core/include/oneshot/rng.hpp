#pragma once

#include <cstdint>

namespace oneshot {

// Counter-based generator: draw i is splitmix64(seed + i * golden). The state is
// a plain value; copying it forks the stream. Gaussian draws use Box-Muller
// written out here so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1].
  double uniform_open_zero();
  double gaussian();
  std::uint64_t below(std::uint64_t n);

  // Independent stream keyed by (seed, tag); used for per-trial seeding.
  Rng derive(std::uint64_t tag) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace oneshot
