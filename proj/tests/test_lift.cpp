#include <gtest/gtest.h>

#include <numeric>

#include "cpr/error.hpp"
#include "cpr/lift.hpp"
#include "support.hpp"

using namespace cpr;

namespace {

const Complex I{0.0, 1.0};

std::vector<double> coeffs(const LiftVector& v) { return {v.coeffs().begin(), v.coeffs().end()}; }

}  // namespace

TEST(Omega, Examples) {
  EXPECT_EQ(coeffs(omega(std::vector<double>{1, 0})), (std::vector<double>{1, 0, 0}));
  EXPECT_EQ(coeffs(omega(std::vector<double>{1, 1})), (std::vector<double>{1, 1, 2}));
  EXPECT_EQ(coeffs(omega(std::vector<double>{1, 2, 3})), (std::vector<double>{1, 4, 9, 4, 6, 12}));
}

TEST(Omega, PairsWithVectorizedLift) {
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 1 + t % 7;
    const auto phi = cpr::testing::gaussian_vector(rng, m);
    const SymmetricLift q = cpr::testing::random_symmetric(rng, m);
    const LiftVector w = omega(phi);
    const LiftVector v = vectorize(q);
    const double pairing = std::inner_product(w.coeffs().begin(), w.coeffs().end(), v.coeffs().begin(), 0.0);
    const Eigen::Map<const Eigen::VectorXd> p(phi.data(), static_cast<Eigen::Index>(m));
    const double quad = p.dot(q.to_eigen() * p);
    EXPECT_NEAR(pairing, quad, 1e-12 * (1.0 + std::abs(quad)));
  }
}

TEST(Vectorize, Examples) {
  EXPECT_EQ(coeffs(vectorize(SymmetricLift::identity(2))), (std::vector<double>{1, 1, 0}));
  Eigen::Matrix2d a;
  a << 0, 5, 5, 0;
  EXPECT_EQ(coeffs(vectorize(SymmetricLift::from_upper(a))), (std::vector<double>{0, 0, 5}));
}

TEST(Vectorize, RoundTripIsExact) {
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    const SymmetricLift q = cpr::testing::random_symmetric(rng, 1 + t % 9);
    EXPECT_EQ(devectorize(vectorize(q)), q);
    const LiftVector v = vectorize(q);
    EXPECT_EQ(vectorize(devectorize(v)), v);
  }
}

TEST(LiftVector, InfersDimensionAndRejectsBadLength) {
  EXPECT_EQ(LiftVector::from_coeffs({1, 2, 3, 4, 5, 6}).m(), 3u);
  try {
    LiftVector::from_coeffs({1, 2, 3, 4});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(OmegaMatrix, Examples) {
  const RealFrame f = RealFrame::from_columns({{1, 0}, {0, 1}, {1, 1}});
  const OmegaMatrix om = omega_matrix(f);
  Eigen::Matrix3d want;
  want << 1, 0, 0, 0, 1, 0, 1, 1, 2;
  EXPECT_EQ(Eigen::MatrixXd(om.matrix()), Eigen::MatrixXd(want));

  const OmegaMatrix id = omega_matrix(RealFrame::from_columns({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  Eigen::MatrixXd pattern = Eigen::MatrixXd::Zero(3, 6);
  pattern.leftCols(3).setIdentity();
  EXPECT_EQ(Eigen::MatrixXd(id.matrix()), pattern);

  const OmegaMatrix big = omega_matrix(random_frame(4, 10, 3));
  EXPECT_EQ(big.n(), 10u);
  EXPECT_EQ(big.cols(), 10u);
}

TEST(OmegaMatrix, RowsAreOmegaOfColumns) {
  const RealFrame f = random_frame(5, 9, 4);
  const OmegaMatrix om = omega_matrix(f);
  for (std::size_t k = 0; k < f.n(); ++k) {
    const auto w = omega(f.column(k));
    for (std::size_t c = 0; c < om.cols(); ++c)
      EXPECT_EQ(om.matrix()(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)), w[c]);
  }
}

TEST(ApplyLift, Examples) {
  const RealFrame f = random_frame(3, 7, 5);
  for (double v : apply_lift(f, SymmetricLift(3))) EXPECT_EQ(v, 0.0);
  const auto norms = apply_lift(f, SymmetricLift::identity(3));
  for (std::size_t k = 0; k < f.n(); ++k) {
    const auto c = f.column(k);
    EXPECT_NEAR(norms[k], std::inner_product(c.begin(), c.end(), c.begin(), 0.0), 1e-13);
  }
}

TEST(ApplyLift, EqualsOmegaTimesVector) {
  Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 2 + t % 5;
    const RealFrame f = random_frame(m, m + 4, 100 + t);
    const SymmetricLift q = cpr::testing::random_symmetric(rng, m);
    const auto direct = apply_lift(f, q);
    const auto lifted = omega_matrix(f).apply(vectorize(q).coeffs());
    for (std::size_t k = 0; k < f.n(); ++k) EXPECT_NEAR(direct[k], lifted[k], 1e-12 * (1.0 + std::abs(direct[k])));
  }
  EXPECT_THROW(apply_lift(random_frame(3, 4, 1), SymmetricLift(2)), Error);
}

TEST(Measure, Examples) {
  const RealFrame f = RealFrame::from_columns({{1, 0}, {0, 1}, {1, 1}});
  const auto b = measure(f, ComplexSignal{1.0, I});
  ASSERT_EQ(b.values.size(), 3u);
  EXPECT_DOUBLE_EQ(b.values[0], 1.0);
  EXPECT_DOUBLE_EQ(b.values[1], 1.0);
  EXPECT_DOUBLE_EQ(b.values[2], 2.0);
  EXPECT_FALSE(b.noise_sigma.has_value());
  for (double v : measure(f, ComplexSignal::zeros(2)).values) EXPECT_EQ(v, 0.0);

  Rng rng(7);
  const RealFrame g = random_frame(4, 9, 8);
  const auto xr = cpr::testing::gaussian_vector(rng, 4);
  const auto br = measure(g, ComplexSignal::from_real(xr));
  for (std::size_t k = 0; k < g.n(); ++k) {
    const auto c = g.column(k);
    const double dot = std::inner_product(c.begin(), c.end(), xr.begin(), 0.0);
    EXPECT_NEAR(br.values[k], dot * dot, 1e-12 * (1.0 + dot * dot));
  }
}

TEST(Measure, DimensionMismatch) {
  try {
    measure(random_frame(3, 5, 1), ComplexSignal{1.0, 2.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  EXPECT_THROW(measure(random_frame(3, 5, 1), ComplexSignal{1.0, 2.0, 3.0}, NoiseOptions{-1.0, 0}), Error);
}

TEST(Measure, IdentityChain) {
  Rng rng(9);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t m = 1 + t % 8;
    const auto x = cpr::testing::gaussian_signal(rng, m);
    std::vector<std::vector<double>> cols{cpr::testing::gaussian_vector(rng, m)};
    for (std::size_t j = 0; j < m; ++j) {
      cols.emplace_back(m, 0.0);
      cols.back()[j] = 1.0;
    }
    const RealFrame f = RealFrame::from_columns(cols);
    const auto phi = f.column(0);
    Complex ip{0.0, 0.0};
    for (std::size_t j = 0; j < m; ++j) ip += x[j] * phi[j];
    const double direct = std::norm(ip);
    const double quad = apply_lift(f, real_lift(x))[0];
    const auto w = omega(phi);
    const auto v = vectorize(real_lift(x));
    const double paired = std::inner_product(w.coeffs().begin(), w.coeffs().end(), v.coeffs().begin(), 0.0);
    const double measured = measure(f, x).values[0];
    const double scale = std::max(direct, 1e-300) + x.norm_sq() * 1e-6;
    EXPECT_LE(std::abs(quad - direct), 1e-10 * scale);
    EXPECT_LE(std::abs(paired - direct), 1e-10 * scale);
    EXPECT_LE(std::abs(measured - direct), 1e-10 * scale);
  }
}

TEST(Measure, ComplexFrameMatchesRealFrameOnRealInput) {
  Rng rng(10);
  const RealFrame f = random_frame(3, 8, 11);
  const ComplexFrame cf(f);
  const auto x = cpr::testing::gaussian_signal(rng, 3);
  const auto a = measure(f, x).values;
  const auto b = measure(cf, x).values;
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-12 * (1.0 + a[k]));
}

TEST(Measure, NoiseIsSeededAndScaled) {
  Rng rng(12);
  const RealFrame f = random_frame(3, 400, 13);
  const auto x = cpr::testing::gaussian_signal(rng, 3);
  const auto clean = measure(f, x);
  const auto n1 = measure(f, x, NoiseOptions{0.01, 5});
  const auto n2 = measure(f, x, NoiseOptions{0.01, 5});
  const auto n3 = measure(f, x, NoiseOptions{0.01, 6});
  EXPECT_EQ(n1.values, n2.values);
  EXPECT_NE(n1.values, n3.values);
  ASSERT_TRUE(n1.noise_sigma);
  EXPECT_EQ(*n1.noise_sigma, 0.01);
  const double mean = std::accumulate(clean.values.begin(), clean.values.end(), 0.0) / 400.0;
  double ss = 0.0;
  for (std::size_t k = 0; k < 400; ++k) ss += std::pow(n1.values[k] - clean.values[k], 2);
  const double sd = std::sqrt(ss / 400.0);
  EXPECT_NEAR(sd / (0.01 * mean), 1.0, 0.2);
}

TEST(NumericRank, Examples) {
  EXPECT_EQ(numeric_rank(real_lift(ComplexSignal{1.0, I, 0.0, 0.0})), 2u);
  EXPECT_EQ(numeric_rank(real_lift(ComplexSignal{1.0, -2.0, 0.5})), 1u);
  EXPECT_EQ(numeric_rank(SymmetricLift(4)), 0u);
  EXPECT_EQ(numeric_rank(SymmetricLift::identity(5)), 5u);
}

TEST(NumericRank, Subadditive) {
  Rng rng(14);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 2 + t % 7;
    const auto q1 = real_lift(cpr::testing::gaussian_signal(rng, m));
    const auto q2 = real_lift(cpr::testing::gaussian_signal(rng, m)) * -1.0;
    EXPECT_LE(numeric_rank(q1 + q2), numeric_rank(q1) + numeric_rank(q2));
  }
}
