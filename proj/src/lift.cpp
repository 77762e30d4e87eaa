#include "cpr/lift.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cpr/error.hpp"
#include "cpr/rng.hpp"
#include "cpr/simd/kernels.hpp"

namespace cpr {
namespace {

std::size_t dim_from_length(std::size_t len) {
  // m(m+1)/2 = len
  const auto m = static_cast<std::size_t>((std::sqrt(8.0 * static_cast<double>(len) + 1.0) - 1.0) / 2.0 + 0.5);
  if (m == 0 || lift_dim(m) != len) {
    throw Error(ErrorCode::DimensionMismatch,
                "length " + std::to_string(len) + " is not of the form m(m+1)/2");
  }
  return m;
}

void add_noise(MeasurementVector& b, const NoiseOptions& noise) {
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) {
    throw Error(ErrorCode::InvalidArgument, "noise_sigma must be a finite value >= 0");
  }
  b.noise_sigma = noise.sigma;
  if (noise.sigma == 0.0 || b.values.empty()) return;
  const double mean =
      std::accumulate(b.values.begin(), b.values.end(), 0.0) / static_cast<double>(b.values.size());
  Rng rng(noise.seed, 0);
  for (double& v : b.values) v += noise.sigma * mean * rng.normal();
}

}  // namespace

LiftVector::LiftVector(std::size_t m, std::vector<double> coeffs)
    : m_(m), coeffs_(std::move(coeffs)) {
  if (m == 0 || coeffs_.size() != lift_dim(m)) {
    throw Error(ErrorCode::DimensionMismatch,
                "lift vector for m = " + std::to_string(m) + " needs " +
                    std::to_string(lift_dim(m)) + " coefficients, got " +
                    std::to_string(coeffs_.size()));
  }
}

LiftVector LiftVector::from_coeffs(std::vector<double> coeffs) {
  const std::size_t m = dim_from_length(coeffs.size());
  return LiftVector(m, std::move(coeffs));
}

std::vector<std::pair<std::size_t, std::size_t>> offdiag_pairs(std::size_t m) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(m * (m - 1) / 2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  return pairs;
}

LiftVector omega(std::span<const double> phi) {
  const std::size_t m = phi.size();
  std::vector<double> c(lift_dim(m));
  for (std::size_t i = 0; i < m; ++i) c[i] = phi[i] * phi[i];
  std::size_t k = m;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) c[k++] = 2.0 * phi[i] * phi[j];
  return LiftVector(m, std::move(c));
}

LiftVector vectorize(const SymmetricLift& q) {
  const std::size_t m = q.m();
  std::vector<double> c(lift_dim(m));
  for (std::size_t i = 0; i < m; ++i) c[i] = q(i, i);
  std::size_t k = m;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) c[k++] = q(i, j);
  return LiftVector(m, std::move(c));
}

SymmetricLift devectorize(const LiftVector& v) {
  const std::size_t m = v.m();
  SymmetricLift q(m);
  for (std::size_t i = 0; i < m; ++i) q.set(i, i, v[i]);
  std::size_t k = m;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) q.set(i, j, v[k++]);
  return q;
}

OmegaMatrix::OmegaMatrix(const RealFrame& frame)
    : m_(frame.m()),
      rows_(static_cast<Eigen::Index>(frame.n()), static_cast<Eigen::Index>(lift_dim(frame.m()))) {
  for (std::size_t k = 0; k < frame.n(); ++k) {
    const LiftVector w = omega(frame.column(k));
    for (std::size_t c = 0; c < w.coeffs().size(); ++c)
      rows_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) = w[c];
  }
}

std::vector<double> OmegaMatrix::apply(std::span<const double> v) const {
  if (v.size() != cols()) {
    throw Error(ErrorCode::DimensionMismatch, "lift vector length does not match Omega");
  }
  std::vector<double> out(n());
  simd::active().matvec(rows_.data(), n(), cols(), static_cast<std::size_t>(rows_.outerStride()),
                        v.data(), out.data());
  return out;
}

OmegaMatrix omega_matrix(const RealFrame& frame) { return OmegaMatrix(frame); }

std::vector<double> apply_lift(const RealFrame& frame, const SymmetricLift& q) {
  if (q.m() != frame.m()) {
    throw Error(ErrorCode::DimensionMismatch, "lift dimension does not match frame");
  }
  const Eigen::MatrixXd qm = q.to_eigen();
  std::vector<double> out(frame.n());
  for (std::size_t k = 0; k < frame.n(); ++k) {
    const Eigen::VectorXd phi = frame.matrix().col(static_cast<Eigen::Index>(k));
    out[k] = phi.dot(qm * phi);
  }
  return out;
}

void frame_energies(const RealFrame& frame, std::span<const double> re, std::span<const double> im,
                    std::span<double> scratch, std::span<double> out) {
  const std::size_t n = frame.n();
  const auto& k = simd::active();
  const auto& a = frame.matrix();
  const auto stride = static_cast<std::size_t>(a.outerStride());
  // Phi^T a and Phi^T b; <x, phi> = phi.a + i phi.b for real phi
  k.matvec_t(a.data(), frame.m(), n, stride, re.data(), scratch.data());
  k.matvec_t(a.data(), frame.m(), n, stride, im.data(), scratch.data() + n);
  k.sum_sq2(scratch.data(), scratch.data() + n, out.data(), n);
}

MeasurementVector measure(const RealFrame& frame, const ComplexSignal& x,
                          std::optional<NoiseOptions> noise) {
  if (x.m() != frame.m()) {
    throw Error(ErrorCode::DimensionMismatch, "signal dimension " + std::to_string(x.m()) +
                                                  " does not match frame dimension " +
                                                  std::to_string(frame.m()));
  }
  const std::vector<double> re = x.real_part();
  const std::vector<double> im = x.imag_part();
  std::vector<double> scratch(2 * frame.n());
  MeasurementVector b{std::vector<double>(frame.n()), std::nullopt};
  frame_energies(frame, re, im, scratch, b.values);
  if (noise) add_noise(b, *noise);
  return b;
}

MeasurementVector measure(const ComplexFrame& frame, const ComplexSignal& x,
                          std::optional<NoiseOptions> noise) {
  if (x.m() != frame.m()) {
    throw Error(ErrorCode::DimensionMismatch, "signal dimension " + std::to_string(x.m()) +
                                                  " does not match frame dimension " +
                                                  std::to_string(frame.m()));
  }
  MeasurementVector b{std::vector<double>(frame.n()), std::nullopt};
  for (std::size_t k = 0; k < frame.n(); ++k) {
    Complex inner{0.0, 0.0};
    for (std::size_t j = 0; j < frame.m(); ++j) inner += x[j] * std::conj(frame(j, k));
    b.values[k] = std::norm(inner);
  }
  if (noise) add_noise(b, *noise);
  return b;
}

std::size_t numeric_rank(const SymmetricLift& q, std::optional<double> tol) {
  const double rel =
      tol.value_or(static_cast<double>(q.m()) * std::numeric_limits<double>::epsilon() * 64.0);
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(q.to_eigen()).singularValues();
  if (s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > rel * s(0) ? 1 : 0;
  return r;
}

}  // namespace cpr
