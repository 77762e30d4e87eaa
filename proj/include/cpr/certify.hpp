#pragma once

// Deciding conjugate phase retrievability of real frames.
//
// Exact for m = 2 (complement property) and m = 3 (injectivity of Omega);
// for m >= 4 an injective Omega certifies, anything else is Undecided unless
// a randomized search produces an explicit witness pair.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cpr/frames.hpp"
#include "cpr/lift.hpp"
#include "cpr/witness.hpp"

namespace cpr {

enum class Verdict { CertifiedCPR, NotCPR, Undecided };

enum class Method {
  Det2,
  Det3,
  KernelInjective,
  ComplementPropertyM2,
  TooFewVectors,
  KernelWitness,
  SearchWitness,
  MonteCarlo,
};

std::string_view to_string(Verdict v);
std::string_view to_string(Method m);

struct SearchStats {
  std::size_t budget = 0;
  std::size_t restarts = 0;
  std::uint64_t seed = 0;
  /// Smallest objective reached over the restarts that ran.
  double best_objective = 0.0;
};

struct Certificate {
  Verdict verdict = Verdict::Undecided;
  Method method = Method::MonteCarlo;
  std::optional<double> det_value;
  std::optional<std::size_t> kernel_dim;
  std::optional<WitnessPair> witness;
  /// Index set I (0-based) such that neither {phi_i : i in I} nor its complement spans.
  std::optional<std::vector<std::size_t>> violating_set;
  std::optional<SearchStats> trials;
};

// Complement property

enum class Field { Real, Complex };

struct ComplementResult {
  bool holds = true;
  /// Present when the property fails.
  std::optional<std::vector<std::size_t>> violating_set;
};

inline constexpr std::size_t kComplementCap = 24;

/// Exhaustive check over the 2^(n-1) splits {I, I^c}. Throws CapExceeded for n > cap.
ComplementResult complement_property(const RealFrame& frame, Field field = Field::Real,
                                     std::size_t cap = kComplementCap);
ComplementResult complement_property(const ComplexFrame& frame, std::size_t cap = kComplementCap);

/// Pair (u + v, u - v) with u, v unit vectors orthogonal to the two sides of a
/// failed split. Both sides measure it identically: (u.phi)(v.phi) = 0 on every vector.
WitnessPair complement_witness(const RealFrame& frame, const std::vector<std::size_t>& violating);

// Kernel of Omega

/// Orthonormal basis of the numerical nullspace (sigma <= tol * sigma_max, plus
/// the cols - rows trailing directions when Omega is wide).
std::vector<LiftVector> kernel_basis(const OmegaMatrix& omega, double tol = kRankTol);

/// Hadamard bound: product of the row norms of a square Omega.
double hadamard_bound(const OmegaMatrix& omega);

inline constexpr double kDetTol = 1e-10;

// Witness search

struct SearchOptions {
  std::size_t budget = 10000;
  std::uint64_t seed = 0;
  /// Minimum class distance a witness must keep.
  double delta = 0.1;
  /// Objective level that counts as a hit.
  double accept = 1e-12;
  double barrier_weight = 1e3;
  std::size_t max_iterations = 200;
};

struct SearchResult {
  std::optional<WitnessPair> witness;
  SearchStats stats;
};

/// Witness from a kernel element of Omega (m = 2, 3 only).
WitnessPair falsify_exact(const RealFrame& frame, double tol = kRankTol);

/// Multistart Levenberg-Marquardt over pairs of unit vectors minimizing
///   ||measure(x) - measure(y)||^2 + w * max(0, delta - d(x, y))^2.
/// Restart i draws its start from Rng(seed, i). Deterministic in (budget, seed)
/// regardless of CPR_THREADS.
SearchResult falsify_search(const RealFrame& frame, const SearchOptions& options = {});

// Certification

struct CertifyOptions {
  double kernel_tol = kRankTol;
  double det_tol = kDetTol;
  /// Restarts of falsify_search for undecided m >= 4 frames; 0 skips the search.
  std::size_t search_budget = 0;
  std::uint64_t seed = 0;
};

Certificate certify(const RealFrame& frame, const CertifyOptions& options = {});

/// Measurement gap ||measure(x) - measure(y)|| relative to ||measure(x)||.
double witness_gap(const RealFrame& frame, const WitnessPair& w);

// Strict conjugate phase retrieval

enum class StrictVerdict { StrictlyCPR, ComplexPRCandidate, NotCPR, Undecided };

std::string_view to_string(StrictVerdict v);

struct StrictReport {
  StrictVerdict verdict = StrictVerdict::Undecided;
  /// y outside the phased-real set with |<y, phi_n>| = |<conj(y), phi_n>| for all n.
  std::optional<ComplexSignal> witness_y;
  std::size_t im_gram_nullity = 0;
  /// Largest per-vector residual |sum_{j<k} Im(y_j conj y_k) Im(conj(phi_j) phi_k)|
  /// relative to ||y||^2 ||phi_n||^2.
  double max_residual = 0.0;
};

struct StrictOptions {
  double tol = 1e-9;
  std::size_t restarts = 50;
  std::size_t max_iterations = 2000;
  std::uint64_t seed = 0;
};

/// N x m(m-1)/2 matrix with row n = (Im(conj(phi_jn) phi_kn))_{j<k}.
Eigen::MatrixXd im_gram(const ComplexFrame& frame);

/// Classifies whether a frame cannot separate some y from conj(y). Never
/// asserts conjugate phase retrievability itself; combine with certify.
StrictReport strict_report(const ComplexFrame& frame, const StrictOptions& options = {});

}  // namespace cpr
