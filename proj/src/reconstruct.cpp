#include "cpr/reconstruct.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "cpr/error.hpp"
#include "cpr/parallel.hpp"
#include "cpr/rng.hpp"

namespace cpr {
namespace {

constexpr double kTiny = std::numeric_limits<double>::min();

double norm2(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

// Fixes the sign of an eigenvector: largest-magnitude entry positive, first index on ties.
void orient(Eigen::Ref<Eigen::VectorXd> u) {
  Eigen::Index arg = 0;
  for (Eigen::Index i = 1; i < u.size(); ++i)
    if (std::abs(u(i)) > std::abs(u(arg))) arg = i;
  if (u(arg) < 0.0) u = -u;
}

// Frobenius-isometric coordinates: w = D v with D = 1 on the diagonal entries
// and sqrt(2) on the off-diagonal ones, so |w| = ||Q||_F.
Eigen::VectorXd lift_weights(std::size_t m) {
  Eigen::VectorXd d = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(lift_dim(m)), std::sqrt(2.0));
  d.head(static_cast<Eigen::Index>(m)).setOnes();
  return d;
}

SymmetricLift lift_from_weighted(const Eigen::VectorXd& w, const Eigen::VectorXd& d, std::size_t m) {
  const Eigen::VectorXd v = w.cwiseQuotient(d);
  return devectorize(LiftVector(m, std::vector<double>(v.data(), v.data() + v.size())));
}

Eigen::VectorXd weighted_from_lift(const SymmetricLift& q, const Eigen::VectorXd& d) {
  const LiftVector v = vectorize(q);
  return Eigen::Map<const Eigen::VectorXd>(v.coeffs().data(), static_cast<Eigen::Index>(v.coeffs().size()))
      .cwiseProduct(d);
}

double lift_fit(const OmegaMatrix& omega, const ComplexSignal& x, std::span<const double> b) {
  const LiftVector v = vectorize(real_lift(x));
  const std::vector<double> pred = omega.apply(v.coeffs());
  double s = 0.0;
  for (std::size_t n = 0; n < pred.size(); ++n) s += (pred[n] - b[n]) * (pred[n] - b[n]);
  return std::sqrt(s) / std::max(norm2(b), kTiny);
}

void validate_measurements(const RealFrame& frame, const MeasurementVector& b) {
  if (b.values.size() != frame.n()) {
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(frame.n()) + " measurements, got " +
                    std::to_string(b.values.size()));
  }
  for (double v : b.values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "measurement is not finite");
  }
}

}  // namespace

Rank2Factor factor_rank2_detailed(const SymmetricLift& q, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q.to_eigen());
  const Eigen::VectorXd lambda = eig.eigenvalues().reverse();
  Eigen::MatrixXd u = eig.eigenvectors().rowwise().reverse();
  const double spectral = lambda.cwiseAbs().maxCoeff();
  const Eigen::Index m = lambda.size();
  if (lambda(m - 1) < -tol * spectral) {
    throw Error(ErrorCode::NotPSD, "lift has eigenvalue " + std::to_string(lambda(m - 1)) +
                                       " below -" + std::to_string(tol) + " * ||Q|| = " +
                                       std::to_string(-tol * spectral));
  }
  // Eigenvalues at round-off level are zero; otherwise their square roots
  // leak an imaginary part of order sqrt(eps) into real signals.
  const double floor = static_cast<double>(m) * std::numeric_limits<double>::epsilon() * 64.0 * spectral;
  Eigen::VectorXd kept = Eigen::VectorXd::Zero(m);
  kept(0) = lambda(0) > floor ? lambda(0) : 0.0;
  if (m > 1) kept(1) = lambda(1) > floor ? lambda(1) : 0.0;

  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(m);
  orient(u.col(0));
  x += std::sqrt(kept(0)) * u.col(0).cast<Complex>();
  if (m > 1) {
    orient(u.col(1));
    x += Complex{0.0, std::sqrt(kept(1))} * u.col(1).cast<Complex>();
  }
  return Rank2Factor{ComplexSignal::from_eigen(x), lambda, kept};
}

ComplexSignal factor_rank2(const SymmetricLift& q, double tol) {
  return factor_rank2_detailed(q, tol).x;
}

double rank_excess(const Rank2Factor& f) {
  const double total = f.eigenvalues.cwiseAbs().sum();
  const double dropped = (f.eigenvalues - f.kept).cwiseAbs().sum();
  return dropped / std::max(total, kTiny);
}

ReconstructionResult reconstruct_linear(const RealFrame& frame, const MeasurementVector& b,
                                        const LinearOptions& options) {
  validate_measurements(frame, b);
  const OmegaMatrix omega = omega_matrix(frame);
  const std::size_t cols = omega.cols();
  if (frame.n() < cols) {
    throw Error(ErrorCode::Underdetermined,
                std::to_string(frame.n()) + " measurements cannot determine a lift with " +
                    std::to_string(cols) + " unknowns; use the altproj method");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(omega.matrix()),
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s(0) == 0.0 || s(s.size() - 1) <= options.rank_tol * s(0)) {
    throw Error(ErrorCode::Underdetermined, "Omega is rank deficient; use the altproj method");
  }
  const Eigen::Map<const Eigen::VectorXd> bv(b.values.data(), static_cast<Eigen::Index>(b.values.size()));
  const Eigen::VectorXd v = svd.solve(bv);
  const SymmetricLift q = devectorize(LiftVector(frame.m(), std::vector<double>(v.data(), v.data() + v.size())));

  double psd_tol = options.psd_tol;
  if (b.noise_sigma && *b.noise_sigma > 0.0) {
    // Expected noise norm sigma * mean(b) * sqrt(N), amplified by 1 / sigma_min(Omega);
    // ||dQ||_2 <= ||dQ||_F <= sqrt(2) |dv|. Three standard deviations of headroom.
    const double mean = std::abs(bv.mean());
    const double noise = *b.noise_sigma * mean * std::sqrt(static_cast<double>(b.values.size()));
    const double dq = 3.0 * std::sqrt(2.0) * noise / s(s.size() - 1);
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q.to_eigen(), Eigen::EigenvaluesOnly).eigenvalues();
    psd_tol = std::max(psd_tol, dq / std::max(ev.cwiseAbs().maxCoeff(), kTiny));
  }
  const Rank2Factor f = factor_rank2_detailed(q, psd_tol);
  ReconstructionResult result{canonical_rep(f.x), 0.0, rank_excess(f), 0, true};
  result.lift_residual = lift_fit(omega, result.estimate, b.values);
  return result;
}

namespace {

struct AltProjRun {
  std::optional<ComplexSignal> x;
  double fit = std::numeric_limits<double>::infinity();
  double excess = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> gaps;
};

}  // namespace

ReconstructionResult reconstruct_altproj(const RealFrame& frame, const MeasurementVector& b,
                                         const AltProjOptions& options, AltProjTrace* trace) {
  validate_measurements(frame, b);
  const std::size_t m = frame.m();
  const OmegaMatrix omega = omega_matrix(frame);
  const Eigen::VectorXd d = lift_weights(m);
  const Eigen::MatrixXd weighted = omega.matrix() * d.cwiseInverse().asDiagonal();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(weighted, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += (s(0) > 0.0 && s(i) > kRankTol * s(0)) ? 1 : 0;
  const auto ur = svd.matrixU().leftCols(rank);
  const auto vr = svd.matrixV().leftCols(rank);
  const Eigen::VectorXd inv_s = s.head(rank).cwiseInverse();

  const Eigen::Map<const Eigen::VectorXd> bv(b.values.data(), static_cast<Eigen::Index>(b.values.size()));
  const Eigen::VectorXd b_ls = ur * (ur.transpose() * bv);
  const double b_norm = bv.norm();
  // Affine projection: w - W^+ (W w - b_ls)
  auto project_affine = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd {
    const Eigen::VectorXd r = weighted * w - b_ls;
    return w - vr * (inv_s.asDiagonal() * (ur.transpose() * r));
  };

  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
  std::vector<AltProjRun> runs(restarts);

  double total_b = bv.sum();
  auto attempt = [&](std::size_t r) {
    AltProjRun& run = runs[r];
    Eigen::VectorXd a;
    if (r == 0) {
      a = project_affine(Eigen::VectorXd::Zero(weighted.cols()));
    } else {
      ComplexSignal x0 = random_signal(m, options.seed, r);
      const MeasurementVector b0 = measure(frame, x0);
      const double e0 = std::accumulate(b0.values.begin(), b0.values.end(), 0.0);
      if (e0 > 0.0 && total_b > 0.0) x0 = x0.scaled(std::sqrt(total_b / e0));
      a = project_affine(weighted_from_lift(real_lift(x0), d));
    }
    for (std::size_t it = 0; it < options.max_iter; ++it) {
      const Rank2Factor f = factor_rank2_detailed(lift_from_weighted(a, d, m),
                                                  std::numeric_limits<double>::infinity());
      const Eigen::VectorXd low = weighted_from_lift(real_lift(f.x), d);
      run.gaps.push_back((a - low).norm());
      const double fit = (weighted * low - b_ls).norm() / std::max(b_norm, kTiny);
      run.iterations = it + 1;
      if (fit < run.fit) {
        run.fit = fit;
        run.x = f.x;
        run.excess = rank_excess(f);
      }
      if (fit <= options.tol && (b_norm == 0.0 || run.excess <= options.tol)) {
        run.converged = true;
        return true;
      }
      a = project_affine(low);
    }
    return false;
  };
  const auto first = first_success(restarts, attempt);

  std::size_t pick = 0;
  if (first) {
    pick = *first;
  } else {
    for (std::size_t r = 1; r < restarts; ++r)
      if (runs[r].fit < runs[pick].fit) pick = r;
  }
  AltProjRun& best = runs[pick];
  if (trace) trace->gaps = best.gaps;
  ComplexSignal estimate = canonical_rep(best.x ? *best.x : ComplexSignal::zeros(m));
  ReconstructionResult result{estimate, 0.0, best.excess, best.iterations, best.converged};
  result.lift_residual = lift_fit(omega, result.estimate, b.values);
  return result;
}

double residual(const RealFrame& frame, const ComplexSignal& xhat, const MeasurementVector& b) {
  validate_measurements(frame, b);
  const MeasurementVector pred = measure(frame, xhat);
  double s = 0.0;
  for (std::size_t n = 0; n < pred.values.size(); ++n) {
    s += (pred.values[n] - b.values[n]) * (pred.values[n] - b.values[n]);
  }
  return std::sqrt(s) / std::max(norm2(b.values), std::numeric_limits<double>::epsilon());
}

}  // namespace cpr
