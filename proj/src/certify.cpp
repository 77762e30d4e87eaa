#include "cpr/certify.hpp"

#include <bit>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cpr/error.hpp"

namespace cpr {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::CertifiedCPR: return "CertifiedCPR";
    case Verdict::NotCPR: return "NotCPR";
    case Verdict::Undecided: return "Undecided";
  }
  return "Unknown";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Det2: return "Det2";
    case Method::Det3: return "Det3";
    case Method::KernelInjective: return "KernelInjective";
    case Method::ComplementPropertyM2: return "ComplementPropertyM2";
    case Method::TooFewVectors: return "TooFewVectors";
    case Method::KernelWitness: return "KernelWitness";
    case Method::SearchWitness: return "SearchWitness";
    case Method::MonteCarlo: return "MonteCarlo";
  }
  return "Unknown";
}

// Complement property

namespace {

template <typename Matrix>
ComplementResult complement_scan(const Matrix& a, std::size_t cap) {
  const auto m = static_cast<std::size_t>(a.rows());
  const auto n = static_cast<std::size_t>(a.cols());
  if (n > cap) {
    throw Error(ErrorCode::CapExceeded,
                "complement property check is exponential in n; n = " + std::to_string(n) +
                    " exceeds the cap of " + std::to_string(cap));
  }
  auto spans = [&](std::uint32_t mask) {
    const auto count = static_cast<std::size_t>(std::popcount(mask));
    if (count < m) return false;
    Matrix sub(a.rows(), static_cast<Eigen::Index>(count));
    Eigen::Index c = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (mask & (1u << k)) sub.col(c++) = a.col(static_cast<Eigen::Index>(k));
    return matrix_rank(sub) == m;
  };
  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1u;
  // I always contains vector 0, so each split {I, I^c} is visited once.
  const std::uint32_t rest = static_cast<std::uint32_t>(n - 1);
  for (std::uint32_t bits = 0; bits < (1u << rest); ++bits) {
    const std::uint32_t in = (bits << 1) | 1u;
    const std::uint32_t out = full & ~in;
    if (spans(in) || spans(out)) continue;
    std::vector<std::size_t> set;
    for (std::size_t k = 0; k < n; ++k)
      if (in & (1u << k)) set.push_back(k);
    return ComplementResult{false, std::move(set)};
  }
  return ComplementResult{true, std::nullopt};
}

Eigen::VectorXd unit_normal_to(const Eigen::MatrixXd& vectors, Eigen::Index m) {
  if (vectors.cols() == 0) return Eigen::VectorXd::Unit(m, 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(vectors, Eigen::ComputeFullU);
  return svd.matrixU().col(m - 1);
}

}  // namespace

ComplementResult complement_property(const RealFrame& frame, Field field, std::size_t cap) {
  if (field == Field::Complex) {
    return complement_scan(Eigen::MatrixXcd(frame.matrix().cast<Complex>()), cap);
  }
  return complement_scan(Eigen::MatrixXd(frame.matrix()), cap);
}

ComplementResult complement_property(const ComplexFrame& frame, std::size_t cap) {
  return complement_scan(frame.matrix(), cap);
}

WitnessPair complement_witness(const RealFrame& frame, const std::vector<std::size_t>& violating) {
  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < frame.n(); ++k)
    if (std::find(violating.begin(), violating.end(), k) == violating.end()) rest.push_back(k);
  const auto m = static_cast<Eigen::Index>(frame.m());
  const Eigen::MatrixXd side_a = frame.columns(violating);
  const Eigen::MatrixXd side_b = frame.columns(rest);
  if (matrix_rank(side_a) == frame.m() || matrix_rank(side_b) == frame.m()) {
    throw Error(ErrorCode::InvalidArgument, "index set does not violate the complement property");
  }
  const Eigen::VectorXd u = unit_normal_to(side_a, m);
  const Eigen::VectorXd v = unit_normal_to(side_b, m);
  const Eigen::VectorXd plus = u + v;
  const Eigen::VectorXd minus = u - v;
  ComplexSignal x = ComplexSignal::from_real(std::span<const double>(plus.data(), plus.size()));
  ComplexSignal y = ComplexSignal::from_real(std::span<const double>(minus.data(), minus.size()));
  SymmetricLift target = real_lift(x) - real_lift(y);
  return make_witness(std::move(x), std::move(y), std::move(target));
}

// Kernel of Omega

std::vector<LiftVector> kernel_basis(const OmegaMatrix& omega, double tol) {
  const RowMatrixXd& a = omega.matrix();
  const Eigen::Index cols = a.cols();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(a), Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  std::vector<LiftVector> basis;
  for (Eigen::Index i = 0; i < cols; ++i) {
    const bool null = i >= s.size() || smax == 0.0 || s(i) <= tol * smax;
    if (!null) continue;
    const Eigen::VectorXd v = svd.matrixV().col(i);
    basis.emplace_back(omega.m(), std::vector<double>(v.data(), v.data() + v.size()));
  }
  return basis;
}

double hadamard_bound(const OmegaMatrix& omega) {
  double bound = 1.0;
  for (Eigen::Index r = 0; r < omega.matrix().rows(); ++r) bound *= omega.matrix().row(r).norm();
  return bound;
}

// Exact falsification

WitnessPair falsify_exact(const RealFrame& frame, double tol) {
  if (frame.m() != 2 && frame.m() != 3) {
    throw Error(ErrorCode::WrongDimension, "falsify_exact handles m = 2 and m = 3 only");
  }
  const std::vector<LiftVector> kernel = kernel_basis(omega_matrix(frame), tol);
  if (kernel.empty()) {
    throw Error(ErrorCode::NoKernel, "Omega is injective; the frame admits no kernel witness");
  }
  // Every nonzero kernel element of a spanning frame is indefinite; take the
  // basis element whose smaller-magnitude signed eigenvalue is largest.
  double best_score = -1.0;
  SymmetricLift best(frame.m());
  for (const LiftVector& v : kernel) {
    SymmetricLift q = devectorize(v);
    q = q * (1.0 / q.frobenius());
    const Eigen::VectorXd lambda =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q.to_eigen(), Eigen::EigenvaluesOnly)
            .eigenvalues();
    const double score = std::min(lambda(lambda.size() - 1), -lambda(0));
    if (score > best_score) {
      best_score = score;
      best = q;
    }
  }
  if (best_score <= kWitnessEigTol) {
    throw Error(ErrorCode::IndefinitenessViolation,
                "kernel element is semidefinite; the frame vectors do not span");
  }
  return witness_general(best);
}

double witness_gap(const RealFrame& frame, const WitnessPair& w) {
  const MeasurementVector bx = measure(frame, w.x);
  const MeasurementVector by = measure(frame, w.y);
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t n = 0; n < bx.values.size(); ++n) {
    diff += (bx.values[n] - by.values[n]) * (bx.values[n] - by.values[n]);
    ref += bx.values[n] * bx.values[n];
  }
  return std::sqrt(diff) / std::max(std::sqrt(ref), std::numeric_limits<double>::min());
}

// Certification

Certificate certify(const RealFrame& frame, const CertifyOptions& options) {
  const std::size_t m = frame.m();
  const std::size_t n = frame.n();
  const OmegaMatrix omega = omega_matrix(frame);

  Certificate cert;
  const bool square = n == lift_dim(m);
  bool det_certifies = false;
  if (square) {
    const double det = Eigen::MatrixXd(omega.matrix()).partialPivLu().determinant();
    cert.det_value = det;
    det_certifies = std::abs(det) > options.det_tol * hadamard_bound(omega);
  }
  const std::vector<LiftVector> kernel = kernel_basis(omega, options.kernel_tol);
  cert.kernel_dim = kernel.size();

  if (m >= 2 && n <= 2 * m - 2) {
    // No split can leave a side with m vectors.
    std::vector<std::size_t> side(m - 1);
    for (std::size_t k = 0; k < m - 1; ++k) side[k] = k;
    cert.verdict = Verdict::NotCPR;
    cert.method = Method::TooFewVectors;
    cert.witness = complement_witness(frame, side);
    cert.violating_set = std::move(side);
    return cert;
  }

  if (m == 2) {
    ComplementResult cp = complement_property(frame);
    if (cp.holds) {
      cert.verdict = Verdict::CertifiedCPR;
      cert.method = (n == 3 && det_certifies) ? Method::Det2 : Method::ComplementPropertyM2;
    } else {
      cert.verdict = Verdict::NotCPR;
      cert.method = Method::KernelWitness;
      cert.violating_set = std::move(cp.violating_set);
      cert.witness = falsify_exact(frame, options.kernel_tol);
    }
    return cert;
  }

  if (kernel.empty()) {
    cert.verdict = Verdict::CertifiedCPR;
    cert.method = (m == 3 && square && det_certifies) ? Method::Det3 : Method::KernelInjective;
    return cert;
  }

  if (m == 3) {
    cert.verdict = Verdict::NotCPR;
    cert.method = Method::KernelWitness;
    cert.witness = falsify_exact(frame, options.kernel_tol);
    return cert;
  }

  // m >= 4 with a nontrivial kernel: no exact test is available.
  cert.verdict = Verdict::Undecided;
  cert.method = Method::MonteCarlo;
  cert.trials = SearchStats{options.search_budget, 0, options.seed, 0.0};
  if (options.search_budget > 0) {
    SearchOptions search;
    search.budget = options.search_budget;
    search.seed = options.seed;
    SearchResult found = falsify_search(frame, search);
    cert.trials = found.stats;
    if (found.witness && witness_gap(frame, *found.witness) <= 1e-9 &&
        conj_class_distance(found.witness->x, found.witness->y) >= 0.05) {
      cert.verdict = Verdict::NotCPR;
      cert.method = Method::SearchWitness;
      cert.witness = std::move(found.witness);
    }
  }
  return cert;
}

}  // namespace cpr
