#include "cpr/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cpr/error.hpp"

namespace cpr {
namespace {

void require_finite(std::span<const Complex> entries) {
  for (std::size_t j = 0; j < entries.size(); ++j) {
    if (!std::isfinite(entries[j].real()) || !std::isfinite(entries[j].imag())) {
      throw Error(ErrorCode::NonFinite, "signal entry " + std::to_string(j) + " is not finite");
    }
  }
}

void require_same_dim(const ComplexSignal& x, const ComplexSignal& y) {
  if (x.m() != y.m()) {
    throw Error(ErrorCode::DimensionMismatch,
                "signals have dimensions " + std::to_string(x.m()) + " and " +
                    std::to_string(y.m()));
  }
}

double comparison_scale(const ComplexSignal& x, const ComplexSignal& y) {
  return std::max({x.norm_sq(), y.norm_sq(), std::numeric_limits<double>::epsilon()});
}

}  // namespace

// ComplexSignal

ComplexSignal::ComplexSignal(std::vector<Complex> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorCode::InvalidArgument, "signal dimension must be >= 1");
  require_finite(entries_);
}

ComplexSignal::ComplexSignal(std::initializer_list<Complex> entries)
    : ComplexSignal(std::vector<Complex>(entries)) {}

ComplexSignal ComplexSignal::zeros(std::size_t m) {
  return ComplexSignal(std::vector<Complex>(m, Complex{0.0, 0.0}));
}

ComplexSignal ComplexSignal::from_real(std::span<const double> re) {
  std::vector<Complex> e(re.size());
  for (std::size_t j = 0; j < re.size(); ++j) e[j] = {re[j], 0.0};
  return ComplexSignal(std::move(e));
}

ComplexSignal ComplexSignal::from_parts(std::span<const double> re, std::span<const double> im) {
  if (re.size() != im.size()) {
    throw Error(ErrorCode::DimensionMismatch, "real and imaginary parts differ in length");
  }
  std::vector<Complex> e(re.size());
  for (std::size_t j = 0; j < re.size(); ++j) e[j] = {re[j], im[j]};
  return ComplexSignal(std::move(e));
}

double ComplexSignal::norm_sq() const {
  double s = 0.0;
  for (const Complex& z : entries_) s += std::norm(z);
  return s;
}

double ComplexSignal::norm() const { return std::sqrt(norm_sq()); }

ComplexSignal ComplexSignal::conj() const {
  std::vector<Complex> e(entries_.size());
  std::transform(entries_.begin(), entries_.end(), e.begin(),
                 [](const Complex& z) { return std::conj(z); });
  return ComplexSignal(std::move(e));
}

ComplexSignal ComplexSignal::scaled(Complex factor) const {
  std::vector<Complex> e(entries_.size());
  std::transform(entries_.begin(), entries_.end(), e.begin(),
                 [factor](const Complex& z) { return factor * z; });
  return ComplexSignal(std::move(e));
}

std::vector<double> ComplexSignal::real_part() const {
  std::vector<double> out(entries_.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = entries_[j].real();
  return out;
}

std::vector<double> ComplexSignal::imag_part() const {
  std::vector<double> out(entries_.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = entries_[j].imag();
  return out;
}

Eigen::VectorXcd ComplexSignal::to_eigen() const {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(entries_.size()));
  for (std::size_t j = 0; j < entries_.size(); ++j) v(static_cast<Eigen::Index>(j)) = entries_[j];
  return v;
}

ComplexSignal ComplexSignal::from_eigen(const Eigen::VectorXcd& v) {
  return ComplexSignal(std::vector<Complex>(v.data(), v.data() + v.size()));
}

// SymmetricLift

SymmetricLift::SymmetricLift(std::size_t m) : m_(m), upper_(m * (m + 1) / 2, 0.0) {
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "matrix dimension must be >= 1");
}

SymmetricLift::SymmetricLift(std::size_t m, std::vector<double> upper)
    : m_(m), upper_(std::move(upper)) {
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "matrix dimension must be >= 1");
  if (upper_.size() != m * (m + 1) / 2) {
    throw Error(ErrorCode::DimensionMismatch,
                "upper triangle of a " + std::to_string(m) + "x" + std::to_string(m) +
                    " matrix needs " + std::to_string(m * (m + 1) / 2) + " entries, got " +
                    std::to_string(upper_.size()));
  }
}

SymmetricLift SymmetricLift::from_upper(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
  const auto m = static_cast<std::size_t>(a.rows());
  SymmetricLift q(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j)
      q.set(i, j, a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  return q;
}

SymmetricLift SymmetricLift::from_matrix(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
  return from_upper(0.5 * (a + a.transpose()));
}

SymmetricLift SymmetricLift::identity(std::size_t m) {
  SymmetricLift q(m);
  for (std::size_t i = 0; i < m; ++i) q.set(i, i, 1.0);
  return q;
}

std::size_t SymmetricLift::index(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  // rows 0..i-1 contribute m, m-1, ..., m-i+1 entries
  return i * m_ - i * (i - 1) / 2 + (j - i);
}

Eigen::MatrixXd SymmetricLift::to_eigen() const {
  const auto m = static_cast<Eigen::Index>(m_);
  Eigen::MatrixXd a(m, m);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j, ++k) {
      a(i, j) = upper_[k];
      a(j, i) = upper_[k];
    }
  }
  return a;
}

double SymmetricLift::frobenius() const {
  double s = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < m_; ++i) {
    for (std::size_t j = i; j < m_; ++j, ++k) s += (i == j ? 1.0 : 2.0) * upper_[k] * upper_[k];
  }
  return std::sqrt(s);
}

SymmetricLift SymmetricLift::operator+(const SymmetricLift& other) const {
  if (other.m_ != m_) throw Error(ErrorCode::DimensionMismatch, "matrix dimensions differ");
  std::vector<double> u(upper_.size());
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = upper_[k] + other.upper_[k];
  return SymmetricLift(m_, std::move(u));
}

SymmetricLift SymmetricLift::operator-(const SymmetricLift& other) const {
  if (other.m_ != m_) throw Error(ErrorCode::DimensionMismatch, "matrix dimensions differ");
  std::vector<double> u(upper_.size());
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = upper_[k] - other.upper_[k];
  return SymmetricLift(m_, std::move(u));
}

SymmetricLift SymmetricLift::operator*(double s) const {
  std::vector<double> u(upper_);
  for (double& v : u) v *= s;
  return SymmetricLift(m_, std::move(u));
}

// Operations

SymmetricLift real_lift(const ComplexSignal& x) {
  const std::size_t m = x.m();
  SymmetricLift q(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j; k < m; ++k) {
      // Re(x_j conj(x_k)) = a_j a_k + b_j b_k
      q.set(j, k, x[j].real() * x[k].real() + x[j].imag() * x[k].imag());
    }
  }
  return q;
}

bool phase_equivalent(const ComplexSignal& x, const ComplexSignal& y, double tol) {
  require_same_dim(x, y);
  double s = 0.0;
  for (std::size_t j = 0; j < x.m(); ++j) {
    for (std::size_t k = 0; k < x.m(); ++k) {
      s += std::norm(x[j] * std::conj(x[k]) - y[j] * std::conj(y[k]));
    }
  }
  return std::sqrt(s) <= tol * comparison_scale(x, y);
}

double conj_class_distance(const ComplexSignal& x, const ComplexSignal& y) {
  require_same_dim(x, y);
  return (real_lift(x) - real_lift(y)).frobenius();
}

bool conj_equivalent(const ComplexSignal& x, const ComplexSignal& y, double tol) {
  return conj_class_distance(x, y) <= tol * comparison_scale(x, y);
}

bool is_phased_real(const ComplexSignal& y, double tol) {
  const double bound = tol * y.norm_sq();
  for (std::size_t j = 0; j < y.m(); ++j) {
    for (std::size_t k = j + 1; k < y.m(); ++k) {
      if (std::abs((y[j] * std::conj(y[k])).imag()) > bound) return false;
    }
  }
  return true;
}

namespace {

ComplexSignal canonical_step(const ComplexSignal& x, double tol) {
  std::vector<Complex> e(x.entries().begin(), x.entries().end());
  std::size_t top = 0;
  double top_mod = -1.0;
  for (std::size_t j = 0; j < e.size(); ++j) {
    const double mod = std::abs(e[j]);
    if (mod > top_mod) {
      top_mod = mod;
      top = j;
    }
  }
  if (top_mod == 0.0) return ComplexSignal::zeros(e.size());

  if (!(e[top].imag() == 0.0 && e[top].real() > 0.0)) {
    const Complex rot = std::conj(e[top]) / top_mod;
    for (Complex& z : e) z *= rot;
    e[top] = {top_mod, 0.0};
  }

  const double bound = tol * x.norm();
  for (const Complex& z : e) {
    if (std::abs(z.imag()) > bound) {
      if (z.imag() < 0.0) {
        for (Complex& w : e) w = std::conj(w);
      }
      break;
    }
  }
  // drop signed zeros
  for (Complex& z : e) z = {z.real() + 0.0, z.imag() + 0.0};
  return ComplexSignal(std::move(e));
}

}  // namespace

ComplexSignal canonical_rep(const ComplexSignal& x, double tol) {
  // The phase rotation can perturb moduli by an ulp and move a near-tied
  // maximum, so iterate to a fixed point.
  ComplexSignal current = canonical_step(x, tol);
  for (int pass = 0; pass < 8; ++pass) {
    ComplexSignal next = canonical_step(current, tol);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

}  // namespace cpr
