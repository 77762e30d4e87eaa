#include <cmath>
#include <limits>

#include "cpr/certify.hpp"
#include "cpr/error.hpp"
#include "cpr/rng.hpp"

namespace cpr {

std::string_view to_string(StrictVerdict v) {
  switch (v) {
    case StrictVerdict::StrictlyCPR: return "StrictlyCPR";
    case StrictVerdict::ComplexPRCandidate: return "ComplexPRCandidate";
    case StrictVerdict::NotCPR: return "NotCPR";
    case StrictVerdict::Undecided: return "Undecided";
  }
  return "Unknown";
}

Eigen::MatrixXd im_gram(const ComplexFrame& frame) {
  const auto pairs = offdiag_pairs(frame.m());
  Eigen::MatrixXd g(static_cast<Eigen::Index>(frame.n()), static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t n = 0; n < frame.n(); ++n) {
    for (std::size_t c = 0; c < pairs.size(); ++c) {
      const auto [j, k] = pairs[c];
      g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c)) =
          (std::conj(frame(j, n)) * frame(k, n)).imag();
    }
  }
  return g;
}

namespace {

// s over the pairs j < k  <->  antisymmetric S with S_jk = s_jk
Eigen::MatrixXd antisymmetric(const Eigen::VectorXd& s, std::size_t m) {
  const auto pairs = offdiag_pairs(m);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t c = 0; c < pairs.size(); ++c) {
    const auto j = static_cast<Eigen::Index>(pairs[c].first);
    const auto k = static_cast<Eigen::Index>(pairs[c].second);
    a(j, k) = s(static_cast<Eigen::Index>(c));
    a(k, j) = -s(static_cast<Eigen::Index>(c));
  }
  return a;
}

Eigen::VectorXd pair_vector(const Eigen::MatrixXd& a) {
  const auto m = static_cast<std::size_t>(a.rows());
  const auto pairs = offdiag_pairs(m);
  Eigen::VectorXd s(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t c = 0; c < pairs.size(); ++c) {
    s(static_cast<Eigen::Index>(c)) =
        a(static_cast<Eigen::Index>(pairs[c].first), static_cast<Eigen::Index>(pairs[c].second));
  }
  return s;
}

// Best rank-2 approximation of an antisymmetric matrix (top singular pair).
Eigen::MatrixXd rank2_part(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto u = svd.matrixU().leftCols(2);
  const auto v = svd.matrixV().leftCols(2);
  const Eigen::MatrixXd r = u * svd.singularValues().head(2).asDiagonal() * v.transpose();
  return 0.5 * (r - r.transpose());
}

// y = a + i b with b a^T - a b^T = S for an antisymmetric S of rank 2:
// a is a unit vector in the range of S and b = S a.
ComplexSignal realize(const Eigen::MatrixXd& s) {
  Eigen::Index col = 0;
  s.colwise().norm().maxCoeff(&col);
  const Eigen::VectorXd a = s.col(col).normalized();
  const Eigen::VectorXd b = s * a;
  return ComplexSignal::from_parts(std::span<const double>(a.data(), static_cast<std::size_t>(a.size())),
                                   std::span<const double>(b.data(), static_cast<std::size_t>(b.size())));
}

double max_residual(const ComplexFrame& frame, const Eigen::MatrixXd& g, const ComplexSignal& y) {
  const auto pairs = offdiag_pairs(frame.m());
  Eigen::VectorXd s(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t c = 0; c < pairs.size(); ++c) {
    s(static_cast<Eigen::Index>(c)) = (y[pairs[c].first] * std::conj(y[pairs[c].second])).imag();
  }
  const Eigen::VectorXd r = g * s;
  double worst = 0.0;
  for (Eigen::Index n = 0; n < r.size(); ++n) {
    const double scale = y.norm_sq() * frame.matrix().col(n).squaredNorm();
    worst = std::max(worst, std::abs(r(n)) / std::max(scale, std::numeric_limits<double>::min()));
  }
  return worst;
}

}  // namespace

StrictReport strict_report(const ComplexFrame& frame, const StrictOptions& options) {
  const std::size_t m = frame.m();
  StrictReport report;
  if (m < 2) {
    // every y in C^1 is a unimodular multiple of a real number
    report.verdict = StrictVerdict::ComplexPRCandidate;
    return report;
  }
  const Eigen::MatrixXd g = im_gram(frame);
  const Eigen::Index pcount = g.cols();

  // Entries of G scale like |phi|^2, so the null threshold is tied to the frame
  // energy rather than to sigma_max(G): a phased-real frame must give G ~ 0.
  const double energy = frame.matrix().squaredNorm();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index i = 0; i < pcount; ++i) {
    if (i >= sv.size() || sv(i) <= kRankTol * energy) null_cols.push_back(i);
  }
  report.im_gram_nullity = null_cols.size();
  if (null_cols.empty()) {
    report.verdict = StrictVerdict::ComplexPRCandidate;
    return report;
  }
  Eigen::MatrixXd basis(pcount, static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t c = 0; c < null_cols.size(); ++c)
    basis.col(static_cast<Eigen::Index>(c)) = svd.matrixV().col(null_cols[c]);

  std::optional<ComplexSignal> y;
  if (null_cols.size() == static_cast<std::size_t>(pcount)) {
    // G vanishes: any non-phased-real y works.
    std::vector<Complex> e(m, Complex{0.0, 0.0});
    e[0] = {1.0, 0.0};
    e[1] = {0.0, 1.0};
    y = ComplexSignal(std::move(e));
  } else if (m <= 3) {
    // every nonzero antisymmetric 2x2 or 3x3 matrix has rank 2
    y = realize(antisymmetric(basis.col(0), m));
  } else {
    // Alternating projection between the null space and rank-2 antisymmetric matrices.
    const Eigen::MatrixXd proj = basis * basis.transpose();
    for (std::size_t restart = 0; restart < options.restarts && !y; ++restart) {
      Rng rng(options.seed, restart);
      Eigen::VectorXd coeff(basis.cols());
      for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff(i) = rng.normal();
      Eigen::VectorXd s = (basis * coeff).normalized();
      for (std::size_t it = 0; it < options.max_iterations; ++it) {
        const Eigen::VectorXd low = pair_vector(rank2_part(antisymmetric(s, m)));
        const Eigen::VectorXd back = proj * low;
        if ((low - back).norm() <= options.tol * low.norm()) {
          ComplexSignal candidate = realize(antisymmetric(low, m));
          if (max_residual(frame, g, candidate) <= options.tol) y = std::move(candidate);
          break;
        }
        if (back.norm() == 0.0) break;
        s = back.normalized();
      }
    }
  }

  if (!y) {
    report.verdict = StrictVerdict::Undecided;
    return report;
  }
  report.max_residual = max_residual(frame, g, *y);
  if (report.max_residual > options.tol || is_phased_real(*y)) {
    report.verdict = StrictVerdict::Undecided;
    return report;
  }
  report.verdict = StrictVerdict::StrictlyCPR;
  report.witness_y = std::move(y);
  return report;
}

}  // namespace cpr
