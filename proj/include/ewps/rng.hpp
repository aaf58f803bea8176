// Copyright (c) 2026 the ewps authors
// Distributed under the MIT License (see LICENSE).

#ifndef EWPS_RNG_HPP
#define EWPS_RNG_HPP

#include <cstdint>
#include <random>

namespace ewps {

/// Deterministic uniform(0,1) stream. The mapping from raw 64-bit output to
/// doubles is fixed here (rather than via std::uniform_real_distribution,
/// whose algorithm is implementation-defined) so that seeded runs are
/// bit-identical everywhere. Values are strictly inside (0,1).
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    // 53 random bits centered in each cell of a 2^53 grid
    return (static_cast<double>(engine_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  std::uint64_t next_raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ewps

#endif  // EWPS_RNG_HPP
