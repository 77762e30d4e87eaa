#pragma once

// Complex signals, the two equivalence relations on them and the real
// outer-product lift Re(x x*).
//
// Inner products follow <x, phi> = sum_j x_j * conj(phi_j), so that
// |<x, phi>|^2 = phi^* (x x^*) phi.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cpr {

using Complex = std::complex<double>;

/// Default relative tolerance for the equivalence tests.
inline constexpr double kEquivTol = 1e-9;

/// A point of C^m. Construction rejects empty and non-finite input.
class ComplexSignal {
 public:
  explicit ComplexSignal(std::vector<Complex> entries);
  ComplexSignal(std::initializer_list<Complex> entries);

  static ComplexSignal zeros(std::size_t m);
  static ComplexSignal from_real(std::span<const double> re);
  /// x = a + i b
  static ComplexSignal from_parts(std::span<const double> re, std::span<const double> im);

  std::size_t m() const noexcept { return entries_.size(); }
  const Complex& operator[](std::size_t j) const { return entries_[j]; }
  std::span<const Complex> entries() const noexcept { return entries_; }

  double norm_sq() const;
  double norm() const;

  /// Coordinate-wise conjugate.
  ComplexSignal conj() const;
  ComplexSignal scaled(Complex factor) const;
  std::vector<double> real_part() const;
  std::vector<double> imag_part() const;

  Eigen::VectorXcd to_eigen() const;
  static ComplexSignal from_eigen(const Eigen::VectorXcd& v);

  friend bool operator==(const ComplexSignal&, const ComplexSignal&) = default;

 private:
  std::vector<Complex> entries_;
};

/// Exactly symmetric real m x m matrix, stored as its upper triangle row-wise:
/// (0,0) (0,1) ... (0,m-1) (1,1) ... (m-1,m-1).
class SymmetricLift {
 public:
  explicit SymmetricLift(std::size_t m);
  SymmetricLift(std::size_t m, std::vector<double> upper);

  /// Takes the upper triangle of `a`; the lower triangle is ignored.
  static SymmetricLift from_upper(const Eigen::MatrixXd& a);
  /// Symmetrizes (a + a^T) / 2.
  static SymmetricLift from_matrix(const Eigen::MatrixXd& a);
  static SymmetricLift identity(std::size_t m);

  std::size_t m() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const { return upper_[index(i, j)]; }
  void set(std::size_t i, std::size_t j, double value) { upper_[index(i, j)] = value; }
  std::span<const double> upper() const noexcept { return upper_; }

  Eigen::MatrixXd to_eigen() const;
  double frobenius() const;

  SymmetricLift operator+(const SymmetricLift& other) const;
  SymmetricLift operator-(const SymmetricLift& other) const;
  SymmetricLift operator*(double s) const;

  friend bool operator==(const SymmetricLift&, const SymmetricLift&) = default;

 private:
  std::size_t index(std::size_t i, std::size_t j) const;

  std::size_t m_;
  std::vector<double> upper_;
};

/// Q_jk = Re(x_j conj(x_k)); equivalently a a^T + b b^T for x = a + i b.
SymmetricLift real_lift(const ComplexSignal& x);

/// x ~ y: x = e^{i theta} y, tested as ||x x* - y y*||_F <= tol * scale.
bool phase_equivalent(const ComplexSignal& x, const ComplexSignal& y, double tol = kEquivTol);

/// x ~conj y: x ~ y or x ~ conj(y), tested as Re(x x*) == Re(y y*) up to tol * scale.
bool conj_equivalent(const ComplexSignal& x, const ComplexSignal& y, double tol = kEquivTol);

/// ||Re(x x*) - Re(y y*)||_F, a metric on conjugate-equivalence classes.
double conj_class_distance(const ComplexSignal& x, const ComplexSignal& y);

/// y is a unimodular multiple of a real vector.
bool is_phased_real(const ComplexSignal& y, double tol = kEquivTol);

/// Representative of the conjugate-equivalence class of x:
///  (a) the first coordinate of maximal modulus is real and nonnegative;
///  (b) the first coordinate with |Im| > tol * ||x|| has positive imaginary part.
/// Idempotent bit-for-bit. Only almost-everywhere continuous: modulus ties and
/// phased-real inputs resolve by index order.
ComplexSignal canonical_rep(const ComplexSignal& x, double tol = kEquivTol);

}  // namespace cpr
