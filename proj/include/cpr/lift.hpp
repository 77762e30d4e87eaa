#pragma once

// Phase-lift machinery over real frames.
//
// Half-vectorization order is diagonal first, then the strict upper triangle
// row-wise:
//   v(Q) = (q_11, q_22, ..., q_mm, q_12, ..., q_1m, q_23, ..., q_(m-1)m)
// and omega(phi) = (phi_1^2, ..., phi_m^2, 2 phi_1 phi_2, ..., 2 phi_(m-1) phi_m)
// so that <omega(phi), v(Q)> = phi^T Q phi.
//
// Note: the 3x3 and 6x6 determinants usually written for m = 2, 3 list the
// columns in a different order (a_1^2, 2 a_1 a_2, a_2^2 for m = 2). That is a
// column permutation of Omega, so it can flip the sign of det(Omega) but never
// whether it vanishes. All code here uses the order above.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cpr/algebra.hpp"
#include "cpr/frames.hpp"

namespace cpr {

inline std::size_t lift_dim(std::size_t m) { return m * (m + 1) / 2; }

class LiftVector {
 public:
  LiftVector(std::size_t m, std::vector<double> coeffs);

  std::size_t m() const noexcept { return m_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator[](std::size_t i) const { return coeffs_[i]; }

  /// Infers m from a length of the form m(m+1)/2.
  static LiftVector from_coeffs(std::vector<double> coeffs);

  friend bool operator==(const LiftVector&, const LiftVector&) = default;

 private:
  std::size_t m_;
  std::vector<double> coeffs_;
};

/// Pairs (i, j), i < j, in the off-diagonal part of the v(Q) order.
std::vector<std::pair<std::size_t, std::size_t>> offdiag_pairs(std::size_t m);

LiftVector omega(std::span<const double> phi);
LiftVector vectorize(const SymmetricLift& q);
SymmetricLift devectorize(const LiftVector& v);

/// N x m(m+1)/2 matrix whose row k is omega(phi_k).
class OmegaMatrix {
 public:
  explicit OmegaMatrix(const RealFrame& frame);

  std::size_t n() const noexcept { return static_cast<std::size_t>(rows_.rows()); }
  std::size_t m() const noexcept { return m_; }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(rows_.cols()); }
  const RowMatrixXd& matrix() const noexcept { return rows_; }

  /// Omega * v through the active SIMD kernel.
  std::vector<double> apply(std::span<const double> v) const;

 private:
  std::size_t m_;
  RowMatrixXd rows_;
};

OmegaMatrix omega_matrix(const RealFrame& frame);

/// (phi_1^T Q phi_1, ..., phi_N^T Q phi_N) evaluated as quadratic forms.
std::vector<double> apply_lift(const RealFrame& frame, const SymmetricLift& q);

struct MeasurementVector {
  std::vector<double> values;
  /// Simulation noise level, relative to the mean noiseless measurement.
  std::optional<double> noise_sigma;
};

/// Options for simulated noise: b_n += N(0, (sigma * mean(b))^2) from Rng(seed, 0).
struct NoiseOptions {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// b_n = |<x, phi_n>|^2, optionally with additive Gaussian noise.
MeasurementVector measure(const RealFrame& frame, const ComplexSignal& x,
                          std::optional<NoiseOptions> noise = std::nullopt);
MeasurementVector measure(const ComplexFrame& frame, const ComplexSignal& x,
                          std::optional<NoiseOptions> noise = std::nullopt);

/// Noiseless |<x, phi_n>|^2 for a real frame given x = a + i b as separate
/// real and imaginary parts. Writes n values to `out`; `scratch` must hold 2n.
void frame_energies(const RealFrame& frame, std::span<const double> re, std::span<const double> im,
                    std::span<double> scratch, std::span<double> out);

/// Singular values above tol * sigma_max. Default tol = m * eps * 64.
std::size_t numeric_rank(const SymmetricLift& q, std::optional<double> tol = std::nullopt);

}  // namespace cpr
