#include "cpr/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cpr/error.hpp"

namespace cpr {
namespace {

void require_positive(std::initializer_list<double> values, const char* op) {
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, std::string(op) + " needs finite positive inputs");
    }
  }
}

SymmetricLift diagonal(std::initializer_list<double> d) {
  SymmetricLift q(d.size());
  std::size_t i = 0;
  for (double v : d) {
    q.set(i, i, v);
    ++i;
  }
  return q;
}

// diag(a, mid, -c) with |mid| tiny, using the degenerate phase pattern: the
// middle coordinate sits at a quarter turn from both neighbours, so its
// modulus enters only the (2,2) entry and can absorb `mid` exactly.
std::pair<ComplexSignal, ComplexSignal> flat_middle_pair(double a, double mid, double c) {
  const double s = std::sqrt(a * c);
  const double x2 = std::sqrt(s + std::max(mid, 0.0));
  const double y2 = std::sqrt(s + std::max(-mid, 0.0));
  // theta = psi = (pi, pi/2, 0)
  const Complex e2{0.0, 1.0};
  ComplexSignal x{Complex{-std::sqrt(2.0 * a), 0.0}, x2 * e2, Complex{std::sqrt(c), 0.0}};
  ComplexSignal y{Complex{-std::sqrt(a), 0.0}, y2 * e2, Complex{std::sqrt(2.0 * c), 0.0}};
  return {std::move(x), std::move(y)};
}

ComplexSignal rotate(const Eigen::MatrixXd& u, const ComplexSignal& z) {
  return ComplexSignal::from_eigen(u.cast<Complex>() * z.to_eigen());
}

int sign_of(double lambda, double zero_band) {
  if (lambda > zero_band) return 1;
  if (lambda < -zero_band) return -1;
  return 0;
}

}  // namespace

WitnessPair make_witness(ComplexSignal x, ComplexSignal y, SymmetricLift target) {
  const double err = ((real_lift(x) - real_lift(y)) - target).frobenius();
  const double scale = std::max(target.frobenius(), std::numeric_limits<double>::epsilon());
  return WitnessPair{std::move(x), std::move(y), std::move(target), err / scale};
}

// The free modulus |y1| is sqrt(a), which makes every construction
// homogeneous: scaling the target by s scales x and y by sqrt(s).
WitnessPair witness_diag_m3(double a, double b, double c) {
  require_positive({a, b, c}, "witness_diag_m3");
  // theta_1 = psi_1 = pi/2, the rest 0
  const Complex i{0.0, 1.0};
  ComplexSignal x{std::sqrt(2.0 * a) * i, Complex{std::sqrt(2.0 * b), 0.0}, Complex{std::sqrt(c), 0.0}};
  ComplexSignal y{std::sqrt(a) * i, Complex{std::sqrt(b), 0.0}, Complex{std::sqrt(2.0 * c), 0.0}};
  return make_witness(std::move(x), std::move(y), diagonal({a, b, -c}));
}

WitnessPair witness_diag_m3_degenerate(double a, double c) {
  require_positive({a, c}, "witness_diag_m3_degenerate");
  auto [x, y] = flat_middle_pair(a, 0.0, c);
  return make_witness(std::move(x), std::move(y), diagonal({a, 0.0, -c}));
}

WitnessPair witness_diag_m2(double a, double c) {
  require_positive({a, c}, "witness_diag_m2");
  const Complex i{0.0, 1.0};
  ComplexSignal x{std::sqrt(2.0 * a) * i, Complex{std::sqrt(c), 0.0}};
  ComplexSignal y{std::sqrt(a) * i, Complex{std::sqrt(2.0 * c), 0.0}};
  return make_witness(std::move(x), std::move(y), diagonal({a, -c}));
}

WitnessPair witness_general(const SymmetricLift& h) {
  const std::size_t m = h.m();
  if (m != 2 && m != 3) {
    throw Error(ErrorCode::WrongDimension,
                "explicit witnesses are only constructed for m = 2, 3 (got m = " +
                    std::to_string(m) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h.to_eigen());
  // descending order
  const Eigen::VectorXd lambda = eig.eigenvalues().reverse();
  const Eigen::MatrixXd u = eig.eigenvectors().rowwise().reverse();
  const double band = kWitnessEigTol * h.frobenius();
  const int top = sign_of(lambda(0), band);
  const int bottom = sign_of(lambda(static_cast<Eigen::Index>(m) - 1), band);
  if (top <= 0 || bottom >= 0) {
    throw Error(ErrorCode::DefiniteInput,
                "target is semidefinite up to tolerance; no witness pair is constructed");
  }

  ComplexSignal x = ComplexSignal::zeros(m);
  ComplexSignal y = ComplexSignal::zeros(m);
  if (m == 2) {
    const WitnessPair base = witness_diag_m2(lambda(0), -lambda(1));
    x = rotate(u, base.x);
    y = rotate(u, base.y);
  } else {
    const int middle = sign_of(lambda(1), band);
    if (middle > 0) {
      const WitnessPair base = witness_diag_m3(lambda(0), lambda(1), -lambda(2));
      x = rotate(u, base.x);
      y = rotate(u, base.y);
    } else if (middle == 0) {
      auto [bx, by] = flat_middle_pair(lambda(0), lambda(1), -lambda(2));
      x = rotate(u, bx);
      y = rotate(u, by);
    } else {
      // Pattern (+, -, -): realize -H, whose descending spectrum is
      // (-l3, -l2, -l1) on the reversed basis, then swap the roles of x and y.
      const Eigen::MatrixXd ur = u.rowwise().reverse();
      const WitnessPair base = witness_diag_m3(-lambda(2), -lambda(1), lambda(0));
      x = rotate(ur, base.y);
      y = rotate(ur, base.x);
    }
  }
  return make_witness(std::move(x), std::move(y), h);
}

RealFrame cone_frame(std::size_t n, std::optional<std::vector<double>> angles) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "cone frame needs n >= 3 vectors");
  std::vector<double> t;
  if (angles) {
    t = *angles;
    if (t.size() != n) {
      throw Error(ErrorCode::DimensionMismatch, "cone frame needs exactly n angles");
    }
    for (double v : t) {
      if (!(v >= 0.0 && v < 2.0 * std::numbers::pi)) {
        throw Error(ErrorCode::InvalidArgument, "cone angles must lie in [0, 2 pi)");
      }
    }
    std::vector<double> sorted = t;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::InvalidArgument, "cone angles must be distinct");
    }
  } else {
    t.resize(n);
    for (std::size_t k = 0; k < n; ++k)
      t[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  }
  RowMatrixXd a(3, static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const auto c = static_cast<Eigen::Index>(k);
    a(0, c) = std::cos(t[k]);
    a(1, c) = std::sin(t[k]);
    a(2, c) = 1.0;
  }
  return RealFrame(std::move(a));
}

}  // namespace cpr
