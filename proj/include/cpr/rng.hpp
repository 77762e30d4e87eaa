#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace cpr {

/// Reproducible random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. A stream is identified by (seed, stream index); the engine seed
/// is splitmix64(splitmix64(seed) ^ (stream + 0x9E3779B97F4A7C15)). Uniforms
/// take the top 53 bits of one engine draw, normals use Box-Muller on two
/// uniforms and cache the second value. None of this goes through
/// std::*_distribution, whose output is implementation-defined.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Uniform on [0, 1).
  double uniform();
  double normal();
  /// Standard complex normal: real and imaginary parts are independent N(0, 1).
  std::complex<double> complex_normal();

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace cpr
