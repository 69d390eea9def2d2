#include <gtest/gtest.h>

#include "seqiso/linalg.hpp"

using namespace seqiso;

namespace {

ComplexMatrix real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  ComplexMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

ComplexMatrix random_hermitian(Eigen::Index n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  ComplexMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(gen);
      const double im = normal(gen);
      m(i, j) = Complex(re, im);
    }
  return hermitian_part(scale * m);
}

// U diag(d) U^H with d drawn on [lo, hi].
ComplexMatrix random_with_spectrum(Eigen::Index n, std::uint64_t seed, double lo, double hi) {
  const ComplexMatrix u = random_unitary(n, derive_seed(seed, 0));
  std::mt19937_64 gen(derive_seed(seed, 1));
  std::uniform_real_distribution<double> d(lo, hi);
  RealVector v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = d(gen);
  return hermitian_part(u * v.cast<Complex>().asDiagonal() * u.adjoint());
}

}  // namespace

TEST(HermEig, DiagonalInput) {
  const EigenSystem es = herm_eig(real_matrix({{3, 0}, {0, 1}}));
  EXPECT_NEAR(es.eigenvalues(0), 1.0, 1e-15);
  EXPECT_NEAR(es.eigenvalues(1), 3.0, 1e-15);
  EXPECT_LE((es.basis - real_matrix({{0, 1}, {1, 0}})).norm(), 1e-15);
}

TEST(HermEig, TwoByTwoSymmetric) {
  const EigenSystem es = herm_eig(real_matrix({{2, 1}, {1, 2}}));
  EXPECT_NEAR(es.eigenvalues(0), 1.0, 1e-14);
  EXPECT_NEAR(es.eigenvalues(1), 3.0, 1e-14);
  // phase convention: first component positive real
  const double r = M_SQRT1_2;
  EXPECT_LE((es.basis.col(0) - Eigen::Vector2cd(r, -r)).norm(), 1e-14);
  EXPECT_LE((es.basis.col(1) - Eigen::Vector2cd(r, r)).norm(), 1e-14);
}

TEST(HermEig, Identity) {
  const RealVector ev = eigenvalues(ComplexMatrix::Identity(4, 4));
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(ev(i), 1.0);
}

TEST(HermEig, RejectsNonHermitian) {
  try {
    herm_eig(real_matrix({{1, 2}, {0, 1}}));
    FAIL() << "expected NotHermitian";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
  }
}

TEST(HermEig, ReconstructionUpToSixteen) {
  for (int n = 1; n <= 16; ++n)
    for (std::uint64_t s = 0; s < 4; ++s) {
      const double scale = s % 2 ? 1e3 : 1e-3;
      const ComplexMatrix m = random_hermitian(n, 1000 * n + s, scale);
      const EigenSystem es = herm_eig(m);
      const ComplexMatrix rebuilt = es.basis * es.eigenvalues.cast<Complex>().asDiagonal() * es.basis.adjoint();
      EXPECT_LE((rebuilt - m).norm(), 1e-10 * std::max(1.0, m.norm())) << "n=" << n;
      EXPECT_LE((es.basis.adjoint() * es.basis - ComplexMatrix::Identity(n, n)).norm(), 1e-12);
      for (int k = 1; k < n; ++k) EXPECT_LE(es.eigenvalues(k - 1), es.eigenvalues(k));
    }
}

TEST(HermEig, EigenvaluesMatchIndependentSolver) {
  for (int n = 2; n <= 8; ++n) {
    const ComplexMatrix m = random_hermitian(n, 77 + n);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> oracle(m);
    EXPECT_LE((eigenvalues(m) - oracle.eigenvalues()).norm(), 1e-12);
  }
}

TEST(HermEig, PhaseConvention) {
  for (int n = 2; n <= 6; ++n) {
    const EigenSystem es = herm_eig(random_hermitian(n, 5 * n));
    for (int c = 0; c < n; ++c) {
      int k = 0;
      while (std::abs(es.basis(k, c)) <= kPhaseModulusFloor) ++k;
      EXPECT_GT(es.basis(k, c).real(), 0.0);
      EXPECT_NEAR(es.basis(k, c).imag(), 0.0, 1e-15);
    }
  }
}

TEST(HermEig, Deterministic) {
  const ComplexMatrix m = random_hermitian(5, 9);
  const EigenSystem a = herm_eig(m), b = herm_eig(m);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ(a.basis, b.basis);
}

TEST(PsdSqrt, Diagonal) {
  const ComplexMatrix r = psd_sqrt(real_matrix({{4, 0}, {0, 9}}));
  EXPECT_LE((r - real_matrix({{2, 0}, {0, 3}})).norm(), 1e-15);
}

TEST(PsdSqrt, TwoByTwoSymmetric) {
  const double a = (std::sqrt(3.0) + 1) / 2, b = (std::sqrt(3.0) - 1) / 2;
  const ComplexMatrix r = psd_sqrt(real_matrix({{2, 1}, {1, 2}}));
  EXPECT_LE((r - real_matrix({{a, b}, {b, a}})).norm(), 1e-14);
  EXPECT_NEAR(r(0, 0).real(), 1.36603, 5e-6);
  EXPECT_NEAR(r(0, 1).real(), 0.36603, 5e-6);
}

TEST(PsdSqrt, Zero) { EXPECT_EQ(psd_sqrt(ComplexMatrix::Zero(3, 3)).norm(), 0.0); }

TEST(PsdSqrt, ClampsRoundOffNegatives) {
  const ComplexMatrix m = real_matrix({{1, 0}, {0, -5e-11}});
  const ComplexMatrix r = psd_sqrt(m);
  EXPECT_LE((r - real_matrix({{1, 0}, {0, 0}})).norm(), 1e-15);
}

TEST(PsdSqrt, RejectsNegative) {
  try {
    psd_sqrt(real_matrix({{1, 0}, {0, -1e-6}}));
    FAIL() << "expected NotPSD";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPSD);
  }
}

TEST(PsdSqrt, SquaresBack) {
  for (int n = 1; n <= 8; ++n)
    for (std::uint64_t s = 0; s < 5; ++s) {
      // include rank-deficient inputs
      ComplexMatrix m = random_with_spectrum(n, 31 * n + s, 0.0, 3.0);
      if (s == 4 && n > 1) {
        const ComplexMatrix g = random_hermitian(n, s).leftCols(1);
        m = g * g.adjoint();
      }
      const ComplexMatrix r = psd_sqrt(m);
      EXPECT_LE((r * r - m).norm(), 1e-9 * std::max(1.0, m.norm())) << "n=" << n;
    }
}

TEST(DenmanBeavers, AgreesWithSpectral) {
  for (int n = 1; n <= 6; ++n)
    for (std::uint64_t s = 0; s < 10; ++s) {
      const ComplexMatrix m = random_with_spectrum(n, 7 * n + s, 1e-2, 10.0);
      EXPECT_LE((psd_sqrt(m) - denman_beavers_sqrt(m)).norm(), 1e-8);
    }
}

TEST(PsdPower, Examples) {
  EXPECT_NEAR(psd_power(real_matrix({{0.25}}), 0.5)(0, 0).real(), 0.5, 1e-15);
  const ComplexMatrix m = real_matrix({{2, 1}, {1, 2}});
  EXPECT_LE((psd_power(m, 2.0) - real_matrix({{5, 4}, {4, 5}})).norm(), 1e-13);
  EXPECT_LE((psd_power(m, 2.0) - m * m).norm(), 1e-13);
  const ComplexMatrix e = random_with_spectrum(4, 3, 0.0, 1.0);
  EXPECT_LE((psd_power(e, 1.0) - e).norm(), 1e-14);
}

TEST(PsdPower, RejectsBadExponent) {
  for (double p : {0.0, -1.0}) {
    try {
      psd_power(ComplexMatrix::Identity(2, 2), p);
      FAIL() << "expected BadExponent";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::BadExponent);
    }
  }
}

TEST(PsdPower, RejectsNegative) {
  try {
    psd_power(real_matrix({{-1}}), 2.0);
    FAIL() << "expected NotPSD";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPSD);
  }
}

TEST(PsdPower, InverseExponentRoundTrip) {
  for (double p : {0.5, 2.0, 3.0})
    for (int n = 1; n <= 6; ++n) {
      const ComplexMatrix m = random_with_spectrum(n, 100 * n, 0.1, 2.0);
      EXPECT_LE((psd_power(psd_power(m, p), 1.0 / p) - m).norm(), 1e-8) << "p=" << p << " n=" << n;
    }
}

TEST(RandomUnitary, DimensionOne) {
  const ComplexMatrix u = random_unitary(1, 42);
  EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-15);
}

TEST(RandomUnitary, DeterministicAndUnitary) {
  EXPECT_EQ(random_unitary(3, 7), random_unitary(3, 7));
  EXPECT_NE(random_unitary(3, 7), random_unitary(3, 8));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ComplexMatrix u = random_unitary(3, s);
    EXPECT_LE((u.adjoint() * u - ComplexMatrix::Identity(3, 3)).norm(), 1e-10);
  }
}

// Haar measure is invariant under diagonal phases, so E[U_00] = 0 and
// E[|U_00|^2] = 1/n.
TEST(RandomUnitary, HaarMoments) {
  const int n = 3, samples = 4000;
  Complex mean = 0.0;
  double second = 0.0;
  for (int s = 0; s < samples; ++s) {
    const ComplexMatrix u = random_unitary(n, static_cast<std::uint64_t>(s));
    mean += u(0, 0);
    second += std::norm(u(0, 0));
  }
  EXPECT_LE(std::abs(mean / double(samples)), 0.05);
  EXPECT_NEAR(second / samples, 1.0 / n, 0.02);
}

TEST(RandomEffectMatrix, Examples) {
  const ComplexMatrix e1 = random_effect_matrix(1, 3);
  EXPECT_GE(e1(0, 0).real(), 0.0);
  EXPECT_LE(e1(0, 0).real(), 1.0);
  EXPECT_EQ(random_effect_matrix(4, 11), random_effect_matrix(4, 11));
  for (int n = 1; n <= 6; ++n)
    for (std::uint64_t s = 0; s < 10; ++s) {
      const RealVector ev = eigenvalues(random_effect_matrix(n, s));
      EXPECT_GE(ev.minCoeff(), -1e-12);
      EXPECT_LE(ev.maxCoeff(), 1.0 + 1e-12);
    }
}

TEST(Seeds, DerivedStreamsDiffer) {
  EXPECT_NE(derive_seed(0, 0), derive_seed(0, 1));
  EXPECT_NE(derive_seed(0, 1), derive_seed(1, 0));
  EXPECT_EQ(derive_seed(5, 9), derive_seed(5, 9));
}

TEST(PhaseDistance, IgnoresGlobalPhase) {
  const ComplexMatrix u = random_unitary(3, 1);
  EXPECT_LE(phase_distance(u, std::polar(1.0, 0.7) * u), 1e-14);
  EXPECT_GT(phase_distance(u, random_unitary(3, 2)), 0.1);
}
