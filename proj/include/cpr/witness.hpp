#pragma once

// Explicit pairs (x, y) of non-equivalent signals with a prescribed
// difference of real lifts H = Re(x x* - y y*). Any real frame whose vectors
// satisfy phi^T H phi = 0 measures x and y identically.

#include <optional>
#include <span>
#include <vector>

#include "cpr/algebra.hpp"
#include "cpr/frames.hpp"

namespace cpr {

struct WitnessPair {
  ComplexSignal x;
  ComplexSignal y;
  /// The matrix H the pair realizes.
  SymmetricLift target;
  /// ||Re(x x* - y y*) - H||_F / max(||H||_F, eps)
  double residual;
};

/// Builds the WitnessPair record for (x, y) against `target`, computing the residual.
WitnessPair make_witness(ComplexSignal x, ComplexSignal y, SymmetricLift target);

/// Re(x x* - y y*) = diag(a, b, -c) for a, b, c > 0.
WitnessPair witness_diag_m3(double a, double b, double c);

/// Re(x x* - y y*) = diag(a, 0, -c) for a, c > 0.
WitnessPair witness_diag_m3_degenerate(double a, double c);

/// Re(x x* - y y*) = diag(a, -c) for a, c > 0.
WitnessPair witness_diag_m2(double a, double c);

/// Relative eigenvalue threshold below which witness_general treats an
/// eigenvalue of H as zero.
inline constexpr double kWitnessEigTol = 1e-10;

/// Realizes an indefinite symmetric H (m = 2 or 3) as Re(x x* - y y*) through
/// an orthogonal eigendecomposition of H. Throws DefiniteInput when H has no
/// eigenvalue of one of the two signs, WrongDimension for m >= 4.
WitnessPair witness_general(const SymmetricLift& h);

/// Frame of n vectors (cos t, sin t, 1) on the cone x1^2 + x2^2 = x3^2.
/// Default angles t_k = 2 pi k / n.
RealFrame cone_frame(std::size_t n, std::optional<std::vector<double>> angles = std::nullopt);

}  // namespace cpr
