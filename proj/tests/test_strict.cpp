#include <gtest/gtest.h>

#include "cpr/certify.hpp"
#include "cpr/error.hpp"
#include "support.hpp"

using namespace cpr;

namespace {

const Complex I{0.0, 1.0};

Complex inner(const ComplexSignal& x, const Eigen::VectorXcd& phi) {
  Complex s{0.0, 0.0};
  for (std::size_t j = 0; j < x.m(); ++j) s += x[j] * std::conj(phi(static_cast<Eigen::Index>(j)));
  return s;
}

// |<y, phi_n>| = |<conj y, phi_n>| on every frame vector.
void expect_conjugation_blind(const ComplexFrame& f, const ComplexSignal& y) {
  for (std::size_t n = 0; n < f.n(); ++n) {
    const Eigen::VectorXcd phi = f.matrix().col(static_cast<Eigen::Index>(n));
    const double a = std::norm(inner(y, phi));
    const double b = std::norm(inner(y.conj(), phi));
    EXPECT_LE(std::abs(a - b), 1e-9 * y.norm_sq() * phi.squaredNorm()) << "vector " << n;
  }
}

ComplexFrame phased_real_frame(Rng& rng, std::size_t m, std::size_t n) {
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const Complex ph = cpr::testing::phase(rng.uniform() * 6.3);
    for (Eigen::Index j = 0; j < a.rows(); ++j) a(j, k) = ph * rng.normal();
  }
  return ComplexFrame(a);
}

}  // namespace

TEST(ImSumIdentity, Holds) {
  Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t m = 1 + t % 6;
    const auto x = cpr::testing::gaussian_signal(rng, m);
    const auto phi = cpr::testing::gaussian_signal(rng, m).to_eigen();
    const double lhs = std::norm(inner(x, phi)) - std::norm(inner(x.conj(), phi));
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k)
        sum += (x[j] * std::conj(x[k])).imag() *
               (std::conj(phi(static_cast<Eigen::Index>(j))) * phi(static_cast<Eigen::Index>(k))).imag();
    EXPECT_LE(std::abs(lhs + 4.0 * sum), 1e-10 * (x.norm_sq() * phi.squaredNorm()));
  }
}

TEST(ImGram, Rows) {
  Eigen::MatrixXcd a(2, 2);
  a << 1.0, 1.0, I, 0.0;
  const Eigen::MatrixXd g = im_gram(ComplexFrame(a));
  ASSERT_EQ(g.rows(), 2);
  ASSERT_EQ(g.cols(), 1);
  EXPECT_DOUBLE_EQ(g(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(g(1, 0), 0.0);
  EXPECT_EQ(im_gram(ComplexFrame(random_frame(4, 7, 1))).norm(), 0.0);
}

TEST(StrictReport, RealFrame) {
  const RealFrame f = RealFrame::from_columns({{1, 0}, {0, 1}, {1, 1}});
  const StrictReport r = strict_report(ComplexFrame(f));
  EXPECT_EQ(r.verdict, StrictVerdict::StrictlyCPR);
  ASSERT_TRUE(r.witness_y);
  EXPECT_EQ(*r.witness_y, (ComplexSignal{1.0, I}));
  EXPECT_EQ(r.im_gram_nullity, 1u);
  for (std::size_t m = 2; m <= 6; ++m) {
    const auto g = ComplexFrame(random_frame(m, 2 * m, m));
    const StrictReport s = strict_report(g);
    EXPECT_EQ(s.verdict, StrictVerdict::StrictlyCPR);
    ASSERT_TRUE(s.witness_y);
    EXPECT_FALSE(is_phased_real(*s.witness_y));
    expect_conjugation_blind(g, *s.witness_y);
  }
}

TEST(StrictReport, ComplexVectorForcesCandidate) {
  Eigen::MatrixXcd a(2, 3);
  a << 1.0, 1.0, 0.0, I, 0.0, 1.0;
  const StrictReport r = strict_report(ComplexFrame(a));
  EXPECT_EQ(r.verdict, StrictVerdict::ComplexPRCandidate);
  EXPECT_FALSE(r.witness_y);
  EXPECT_EQ(r.im_gram_nullity, 0u);
}

TEST(StrictReport, PhasedRealFrames) {
  Rng rng(2);
  for (std::size_t m = 2; m <= 5; ++m) {
    const ComplexFrame f = phased_real_frame(rng, m, 2 * m + 1);
    const StrictReport r = strict_report(f);
    EXPECT_EQ(r.verdict, StrictVerdict::StrictlyCPR) << m;
    ASSERT_TRUE(r.witness_y);
    expect_conjugation_blind(f, *r.witness_y);
  }
}

TEST(StrictReport, ConsistentAtM2) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const ComplexFrame f = random_complex_frame(2, 2 + s % 4, s);
    const StrictReport r = strict_report(f);
    EXPECT_NE(r.verdict, StrictVerdict::StrictlyCPR) << s;
    EXPECT_EQ(r.verdict, StrictVerdict::ComplexPRCandidate);
  }
}

TEST(StrictReport, M3WitnessFromNullspace) {
  // Two complex vectors in C^3 leave a one-dimensional null space of G.
  for (std::uint64_t s = 0; s < 30; ++s) {
    Eigen::MatrixXcd a(3, 3);
    const ComplexFrame rnd = random_complex_frame(3, 3, s);
    a = rnd.matrix();
    a.col(2) = a.col(2).real().cast<Complex>();
    const ComplexFrame f(a);
    const StrictReport r = strict_report(f);
    EXPECT_EQ(r.im_gram_nullity, 1u);
    EXPECT_EQ(r.verdict, StrictVerdict::StrictlyCPR);
    ASSERT_TRUE(r.witness_y);
    EXPECT_FALSE(is_phased_real(*r.witness_y));
    expect_conjugation_blind(f, *r.witness_y);
    EXPECT_LE(r.max_residual, 1e-9);
  }
  EXPECT_EQ(strict_report(random_complex_frame(3, 5, 1)).verdict, StrictVerdict::ComplexPRCandidate);
}

TEST(StrictReport, M4RankTwoRealization) {
  int strict = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    Eigen::MatrixXcd a = random_complex_frame(4, 4, s).matrix();
    // two real columns keep G small enough to leave room for a rank-2 element
    a.col(2) = a.col(2).real().cast<Complex>();
    a.col(3) = a.col(3).real().cast<Complex>();
    const ComplexFrame f(a);
    const StrictReport r = strict_report(f);
    EXPECT_NE(r.verdict, StrictVerdict::ComplexPRCandidate);
    if (r.verdict == StrictVerdict::StrictlyCPR) {
      ++strict;
      ASSERT_TRUE(r.witness_y);
      expect_conjugation_blind(f, *r.witness_y);
    }
  }
  EXPECT_GE(strict, 15);
  EXPECT_EQ(strict_report(random_complex_frame(4, 8, 3)).verdict, StrictVerdict::ComplexPRCandidate);
}

TEST(StrictReport, DimensionOne) {
  Eigen::MatrixXcd a(1, 2);
  a << I, 1.0;
  EXPECT_EQ(strict_report(ComplexFrame(a)).verdict, StrictVerdict::ComplexPRCandidate);
}
