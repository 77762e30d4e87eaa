#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cpr/algebra.hpp"

namespace cpr {

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Relative singular-value threshold used for spanning and kernel decisions.
inline constexpr double kRankTol = 1e-10;

/// m x n real matrix whose columns phi_1..phi_n span R^m (and hence C^m).
/// Stored row-major: row j holds coordinate j of every frame vector, which is
/// the layout the measurement kernels stream over.
class RealFrame {
 public:
  explicit RealFrame(RowMatrixXd entries);
  /// columns[k] is phi_k
  static RealFrame from_columns(const std::vector<std::vector<double>>& columns);

  std::size_t m() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t n() const noexcept { return static_cast<std::size_t>(entries_.cols()); }
  double operator()(std::size_t j, std::size_t k) const {
    return entries_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
  }
  std::vector<double> column(std::size_t k) const;
  const RowMatrixXd& matrix() const noexcept { return entries_; }
  /// Frame restricted to the given column indices (not re-validated as spanning).
  Eigen::MatrixXd columns(std::span<const std::size_t> idx) const;

  friend bool operator==(const RealFrame& a, const RealFrame& b) {
    return a.entries_.rows() == b.entries_.rows() && a.entries_.cols() == b.entries_.cols() &&
           a.entries_ == b.entries_;
  }

 private:
  RowMatrixXd entries_;
};

/// m x n complex matrix whose columns span C^m.
class ComplexFrame {
 public:
  explicit ComplexFrame(Eigen::MatrixXcd entries);
  explicit ComplexFrame(const RealFrame& real);

  std::size_t m() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t n() const noexcept { return static_cast<std::size_t>(entries_.cols()); }
  Complex operator()(std::size_t j, std::size_t k) const {
    return entries_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
  }
  ComplexSignal column(std::size_t k) const;
  const Eigen::MatrixXcd& matrix() const noexcept { return entries_; }
  bool is_real() const;
  /// Throws NotRealFrame unless every imaginary part is exactly zero.
  RealFrame to_real() const;

  friend bool operator==(const ComplexFrame& a, const ComplexFrame& b) {
    return a.entries_.rows() == b.entries_.rows() && a.entries_.cols() == b.entries_.cols() &&
           a.entries_ == b.entries_;
  }

 private:
  Eigen::MatrixXcd entries_;
};

/// Count of singular values above rel_tol * sigma_max.
std::size_t matrix_rank(const Eigen::MatrixXd& a, double rel_tol = kRankTol);
std::size_t matrix_rank(const Eigen::MatrixXcd& a, double rel_tol = kRankTol);

/// i.i.d. N(0,1) entries drawn column by column from Rng(seed, 0); redraws in
/// the probability-zero event of a rank-deficient sample.
RealFrame random_frame(std::size_t m, std::size_t n, std::uint64_t seed);
ComplexFrame random_complex_frame(std::size_t m, std::size_t n, std::uint64_t seed);

/// Standard complex normal signal drawn from Rng(seed, stream).
ComplexSignal random_signal(std::size_t m, std::uint64_t seed, std::uint64_t stream = 0);

/// Number of generic real vectors that suffices for conjugate phase retrieval
/// on C^m: 3 for m = 2, 6 for m = 3, 4m - 6 beyond.
std::size_t generic_cpr_size(std::size_t m);

struct FrameBounds {
  double lower;
  double upper;
};

/// Optimal frame bounds: squared extreme singular values of the frame matrix.
FrameBounds frame_bounds(const RealFrame& frame);
FrameBounds frame_bounds(const ComplexFrame& frame);

}  // namespace cpr
