#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cpr/algebra.hpp"
#include "cpr/frames.hpp"
#include "cpr/rng.hpp"

namespace cpr::testing {

inline ComplexSignal gaussian_signal(Rng& rng, std::size_t m) {
  std::vector<Complex> e(m);
  for (auto& z : e) z = rng.complex_normal();
  return ComplexSignal(std::move(e));
}

inline ComplexSignal unit_signal(Rng& rng, std::size_t m) {
  const ComplexSignal x = gaussian_signal(rng, m);
  return x.scaled(1.0 / x.norm());
}

inline std::vector<double> gaussian_vector(Rng& rng, std::size_t m) {
  std::vector<double> v(m);
  for (double& t : v) t = rng.normal();
  return v;
}

inline Eigen::MatrixXd gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = rng.normal();
  return a;
}

inline SymmetricLift random_symmetric(Rng& rng, std::size_t m) {
  return SymmetricLift::from_matrix(gaussian_matrix(rng, m, m));
}

// Haar-ish orthogonal matrix from the QR factor of a Gaussian matrix.
inline Eigen::MatrixXd random_orthogonal(Rng& rng, std::size_t m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(rng, m, m));
  return qr.householderQ();
}

inline Complex phase(double theta) { return std::polar(1.0, theta); }

inline double rel(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace cpr::testing
