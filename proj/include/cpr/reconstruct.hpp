#pragma once

// Signal recovery, up to global phase and conjugation, from b_n = |<x, phi_n>|^2.
//
// Every measurement is linear in the real lift: b_n = <omega(phi_n), v(Re(x x*))>.
// When Omega is injective the lift is a least-squares solve followed by a
// rank-2 PSD factorization; otherwise alternating projections search the
// affine solution set for a rank-2 PSD point.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cpr/algebra.hpp"
#include "cpr/frames.hpp"
#include "cpr/lift.hpp"

namespace cpr {

struct ReconstructionResult {
  /// Canonical class representative.
  ComplexSignal estimate;
  /// ||Omega v(Re(xhat xhat*)) - b|| / ||b||
  double lift_residual = 0.0;
  /// Eigenvalue mass dropped by the rank-2 truncation, relative to the total.
  double rank_excess = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

inline constexpr double kPsdTol = 1e-8;

struct Rank2Factor {
  ComplexSignal x;
  /// Eigenvalues of Q, descending.
  Eigen::VectorXd eigenvalues;
  /// Eigenvalues that were kept after clamping: (l1, max(l2, 0), 0, ...).
  Eigen::VectorXd kept;
};

/// x = sqrt(l1) u1 + i sqrt(l2) u2 from the top two eigenpairs of Q. Throws
/// NotPSD if an eigenvalue lies below -tol * ||Q||_2.
Rank2Factor factor_rank2_detailed(const SymmetricLift& q, double tol = kPsdTol);
ComplexSignal factor_rank2(const SymmetricLift& q, double tol = kPsdTol);

/// Nuclear-norm fraction of the discarded spectrum.
double rank_excess(const Rank2Factor& f);

struct LinearOptions {
  double rank_tol = kRankTol;
  double psd_tol = kPsdTol;
};

/// Least-squares lift inversion. Throws Underdetermined when Omega is not
/// injective. With b.noise_sigma set, the PSD tolerance widens to the level
/// the noise can reach through the pseudoinverse of Omega.
ReconstructionResult reconstruct_linear(const RealFrame& frame, const MeasurementVector& b,
                                        const LinearOptions& options = {});

struct AltProjOptions {
  std::size_t max_iter = 500;
  std::size_t restarts = 50;
  std::uint64_t seed = 0;
  double tol = 1e-10;
};

/// Per-iteration trace of one alternating-projection run.
struct AltProjTrace {
  /// Distance between the affine iterate and its rank-2 PSD projection.
  std::vector<double> gaps;
};

/// Alternating projections between {v : Omega v = b_ls} and rank-2 PSD lifts,
/// run in coordinates where the Euclidean norm equals the Frobenius norm of Q.
/// Restart 0 starts at the minimum-norm solution; restart r > 0 from the lift
/// of a random signal from Rng(seed, r). Stops at the first converged restart
/// (in index order) or returns the best one with converged = false.
ReconstructionResult reconstruct_altproj(const RealFrame& frame, const MeasurementVector& b,
                                         const AltProjOptions& options = {},
                                         AltProjTrace* trace = nullptr);

/// ||measure(frame, xhat) - b|| / max(||b||, eps)
double residual(const RealFrame& frame, const ComplexSignal& xhat, const MeasurementVector& b);

}  // namespace cpr
