#pragma once

#include <cmath>
#include <vector>

#include "cpr/certify.hpp"
#include "cpr/simd/kernels.hpp"

namespace cpr::detail {

// Objective over p = (a_x, b_x, a_y, b_y) in R^{4m} with s = |p|^2, so the
// pair is measured on the sphere |x|^2 + |y|^2 = 1:
//   r_n = (|<a_x + i b_x, phi_n>|^2 - |<a_y + i b_y, phi_n>|^2) / s,   n < N
//   r_N = sqrt(w) * max(0, delta - ||D||_F),   D = (A_x - A_y) / s
// with A = a a^T + b b^T.
class PairObjective {
 public:
  PairObjective(const RealFrame& frame, const SearchOptions& opt)
      : frame_(frame),
        m_(static_cast<Eigen::Index>(frame.m())),
        n_(static_cast<Eigen::Index>(frame.n())),
        delta_(opt.delta),
        sqrt_w_(std::sqrt(opt.barrier_weight)),
        proj_(4 * frame.n()),
        diff_(m_, m_),
        dv_(m_) {}

  Eigen::Index residuals() const { return n_ + 1; }
  Eigen::Index params() const { return 4 * m_; }

  // Fills r (and J when non-null); returns |r|^2.
  double evaluate(const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    const auto& k = simd::active();
    const auto stride = static_cast<std::size_t>(frame_.matrix().outerStride());
    const auto n = static_cast<std::size_t>(n_);
    for (int part = 0; part < 4; ++part) {
      k.matvec_t(frame_.matrix().data(), frame_.m(), n, stride, p.data() + part * m_,
                 proj_.data() + part * n);
    }
    const double s = p.squaredNorm();
    const double inv = 1.0 / s;
    const double* pr[4] = {proj_.data(), proj_.data() + n, proj_.data() + 2 * n, proj_.data() + 3 * n};
    const double sign[4] = {1.0, 1.0, -1.0, -1.0};

    for (Eigen::Index i = 0; i < n_; ++i) {
      const double ex = pr[0][i] * pr[0][i] + pr[1][i] * pr[1][i];
      const double ey = pr[2][i] * pr[2][i] + pr[3][i] * pr[3][i];
      r(i) = (ex - ey) * inv;
      if (jac) {
        auto row = jac->row(i);
        const auto phi = frame_.matrix().col(i);
        for (int part = 0; part < 4; ++part) {
          row.segment(part * m_, m_) =
              (2.0 * inv) * (sign[part] * pr[part][i] * phi - r(i) * p.segment(part * m_, m_));
        }
      }
    }

    const auto ax = p.segment(0, m_);
    const auto bx = p.segment(m_, m_);
    const auto ay = p.segment(2 * m_, m_);
    const auto by = p.segment(3 * m_, m_);
    diff_.noalias() = ax * ax.transpose();
    diff_.noalias() += bx * bx.transpose();
    diff_.noalias() -= ay * ay.transpose();
    diff_.noalias() -= by * by.transpose();
    diff_ *= inv;
    const double d = diff_.norm();
    distance_ = d;
    const double gap = delta_ - d;
    r(n_) = gap > 0.0 ? sqrt_w_ * gap : 0.0;
    if (jac) {
      auto row = jac->row(n_);
      if (gap > 0.0 && d > 0.0) {
        // grad d = (2 / (d s)) (+-D u - d^2 u) for each block u
        const double c = -sqrt_w_ * 2.0 * inv / d;
        for (int part = 0; part < 4; ++part) {
          const auto u = p.segment(part * m_, m_);
          dv_.noalias() = diff_ * u;
          row.segment(part * m_, m_) = c * (sign[part] * dv_ - d * d * u);
        }
      } else {
        row.setZero();
      }
    }
    return r.squaredNorm();
  }

  double distance() const { return distance_; }

 private:
  const RealFrame& frame_;
  Eigen::Index m_;
  Eigen::Index n_;
  double delta_;
  double sqrt_w_;
  std::vector<double> proj_;
  Eigen::MatrixXd diff_;
  Eigen::VectorXd dv_;
  double distance_ = 0.0;
};

}  // namespace cpr::detail
