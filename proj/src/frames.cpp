#include "cpr/frames.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include "cpr/error.hpp"
#include "cpr/rng.hpp"

namespace cpr {
namespace {

template <typename Matrix>
void validate_frame(const Matrix& a) {
  if (a.rows() < 1) throw Error(ErrorCode::InvalidArgument, "frame dimension m must be >= 1");
  if (a.cols() < a.rows()) {
    throw Error(ErrorCode::InvalidArgument,
                "a frame needs n >= m vectors (m = " + std::to_string(a.rows()) +
                    ", n = " + std::to_string(a.cols()) + ")");
  }
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      if (!std::isfinite(std::abs(a(j, k)))) {
        throw Error(ErrorCode::NonFinite, "frame entry (" + std::to_string(j) + ", " +
                                              std::to_string(k) + ") is not finite");
      }
    }
  }
  if (matrix_rank(Eigen::Matrix<typename Matrix::Scalar, Eigen::Dynamic, Eigen::Dynamic>(a)) < static_cast<std::size_t>(a.rows())) {
    throw Error(ErrorCode::InvalidArgument, "frame vectors do not span the signal space");
  }
}

}  // namespace

std::size_t matrix_rank(const Eigen::MatrixXd& a, double rel_tol) {
  if (a.size() == 0) return 0;
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > rel_tol * s(0) ? 1 : 0;
  return r;
}

std::size_t matrix_rank(const Eigen::MatrixXcd& a, double rel_tol) {
  if (a.size() == 0) return 0;
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXcd>(a).singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > rel_tol * s(0) ? 1 : 0;
  return r;
}

// RealFrame

RealFrame::RealFrame(RowMatrixXd entries) : entries_(std::move(entries)) {
  validate_frame(entries_);
}

RealFrame RealFrame::from_columns(const std::vector<std::vector<double>>& columns) {
  if (columns.empty()) throw Error(ErrorCode::InvalidArgument, "frame has no vectors");
  const std::size_t m = columns.front().size();
  RowMatrixXd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k].size() != m) {
      throw Error(ErrorCode::DimensionMismatch,
                  "frame vector " + std::to_string(k) + " has length " +
                      std::to_string(columns[k].size()) + ", expected " + std::to_string(m));
    }
    for (std::size_t j = 0; j < m; ++j)
      a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = columns[k][j];
  }
  return RealFrame(std::move(a));
}

std::vector<double> RealFrame::column(std::size_t k) const {
  std::vector<double> c(m());
  for (std::size_t j = 0; j < m(); ++j) c[j] = (*this)(j, k);
  return c;
}

Eigen::MatrixXd RealFrame::columns(std::span<const std::size_t> idx) const {
  Eigen::MatrixXd out(entries_.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c)
    out.col(static_cast<Eigen::Index>(c)) = entries_.col(static_cast<Eigen::Index>(idx[c]));
  return out;
}

// ComplexFrame

ComplexFrame::ComplexFrame(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  validate_frame(entries_);
}

ComplexFrame::ComplexFrame(const RealFrame& real)
    : entries_(real.matrix().cast<Complex>()) {}

ComplexSignal ComplexFrame::column(std::size_t k) const {
  return ComplexSignal::from_eigen(entries_.col(static_cast<Eigen::Index>(k)));
}

bool ComplexFrame::is_real() const { return (entries_.imag().array() == 0.0).all(); }

RealFrame ComplexFrame::to_real() const {
  if (!is_real()) throw Error(ErrorCode::NotRealFrame, "frame has complex entries");
  return RealFrame(RowMatrixXd(entries_.real()));
}

// Generation

RealFrame random_frame(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m < 1 || n < m) {
    throw Error(ErrorCode::InvalidArgument, "random frame needs 1 <= m <= n (m = " +
                                                std::to_string(m) + ", n = " + std::to_string(n) +
                                                ")");
  }
  Rng rng(seed, 0);
  for (int redraws = 0;; ++redraws) {
    RowMatrixXd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      for (Eigen::Index j = 0; j < a.rows(); ++j) a(j, k) = rng.normal();
    if (matrix_rank(Eigen::MatrixXd(a)) == m) {
      if (redraws > 0) std::clog << "random_frame: redrew " << redraws << " rank-deficient samples\n";
      return RealFrame(std::move(a));
    }
  }
}

ComplexFrame random_complex_frame(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m < 1 || n < m) {
    throw Error(ErrorCode::InvalidArgument, "random frame needs 1 <= m <= n");
  }
  Rng rng(seed, 0);
  for (int redraws = 0;; ++redraws) {
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      for (Eigen::Index j = 0; j < a.rows(); ++j) a(j, k) = rng.complex_normal();
    if (matrix_rank(a) == m) {
      if (redraws > 0) std::clog << "random_complex_frame: redrew " << redraws << " samples\n";
      return ComplexFrame(std::move(a));
    }
  }
}

ComplexSignal random_signal(std::size_t m, std::uint64_t seed, std::uint64_t stream) {
  Rng rng(seed, stream);
  std::vector<Complex> e(m);
  for (Complex& z : e) z = rng.complex_normal();
  return ComplexSignal(std::move(e));
}

std::size_t generic_cpr_size(std::size_t m) {
  if (m < 2) throw Error(ErrorCode::InvalidArgument, "generic_cpr_size needs m >= 2");
  if (m == 2) return 3;
  if (m == 3) return 6;
  return 4 * m - 6;
}

FrameBounds frame_bounds(const RealFrame& frame) {
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(frame.matrix()).singularValues();
  return {s(s.size() - 1) * s(s.size() - 1), s(0) * s(0)};
}

FrameBounds frame_bounds(const ComplexFrame& frame) {
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXcd>(frame.matrix()).singularValues();
  return {s(s.size() - 1) * s(s.size() - 1), s(0) * s(0)};
}

}  // namespace cpr
