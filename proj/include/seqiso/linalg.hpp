#pragma once

// Dense complex matrix primitives: Hermitian eigendecomposition by cyclic
// Jacobi rotations, spectral functions of positive semidefinite matrices,
// and seeded random unitaries / effects.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "seqiso/errors.hpp"

namespace seqiso {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

struct EigenSystem {
  RealVector eigenvalues;  // ascending
  ComplexMatrix basis;     // unitary, columns are eigenvectors
};

inline constexpr int kMaxJacobiSweeps = 100;
inline constexpr double kJacobiOffDiagonalRel = 1e-13;
inline constexpr double kPsdClampTol = 1e-10;
inline constexpr double kPhaseModulusFloor = 1e-12;
inline constexpr double kZeroEigenvalueUlps = 16.0;

// ---------------------------------------------------------------------------
// seeds

/// splitmix64 finalizer; used for counter-based sub-seed derivation.
constexpr std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Independent stream `stream` of the master seed. Trials derive their seed
/// from (master, trial index) so they can run in any order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix_seed(mix_seed(master) ^ mix_seed(stream + 0x632BE59BD9B4E019ULL));
}

// ---------------------------------------------------------------------------
// small helpers

inline double hermitian_defect(const ComplexMatrix& m) { return (m - m.adjoint()).norm(); }

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

inline bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index q = 1; q < a.rows(); ++q)
    for (Eigen::Index p = 0; p < q; ++p) sum += std::norm(a(p, q));
  return std::sqrt(2.0 * sum);
}

// Makes the first entry of modulus > floor in each column positive real.
inline void normalize_column_phases(ComplexMatrix& v, double floor) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const double mag = std::abs(v(i, j));
      if (mag > floor) {
        v.col(j) *= std::conj(v(i, j)) / mag;
        v(i, j) = Complex(mag, 0.0);
        break;
      }
    }
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// eigendecomposition

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
///
/// Each rotation first removes the phase of a(p,q) with a diagonal unitary
/// and then applies the real symmetric Jacobi rotation. Sweeps stop once the
/// off-diagonal Frobenius norm drops below 1e-13 * ||M||_F.
inline EigenSystem herm_eig(const ComplexMatrix& m, double tol = 1e-9) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorCode::NotHermitian, "matrix must be square and nonempty");
  if (!all_finite(m)) throw Error(ErrorCode::NotHermitian, "matrix has non-finite entries");
  const double defect = hermitian_defect(m);
  if (defect > tol) {
    std::ostringstream os;
    os << "||M - M^H||_F = " << defect << " exceeds " << tol;
    throw Error(ErrorCode::NotHermitian, os.str());
  }

  const Eigen::Index n = m.rows();
  ComplexMatrix a = hermitian_part(m);
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double threshold = kJacobiOffDiagonalRel * a.norm();

  int sweeps = 0;
  while (detail::off_diagonal_norm(a) > threshold) {
    if (++sweeps > kMaxJacobiSweeps)
      throw Error(ErrorCode::NoConvergence, "Jacobi iteration exceeded 100 sweeps");
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const Complex phase = apq / mag;
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = std::abs(theta) > 1e150
                             ? 0.5 / theta
                             : std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(1.0, theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // J = diag(1, conj(phase)) * [[c, s], [-s, c]] acting on (p, q)
        const Complex jpp(c, 0.0), jpq(s, 0.0);
        const Complex jqp = -s * std::conj(phase), jqq = c * std::conj(phase);

        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
        a(p, q) = a(q, p) = Complex(0.0, 0.0);
        a(p, p) = Complex(a(p, p).real(), 0.0);
        a(q, q) = Complex(a(q, q).real(), 0.0);
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });

  EigenSystem out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = a(src, src).real();
    out.basis.col(k) = v.col(src);
  }
  detail::normalize_column_phases(out.basis, kPhaseModulusFloor);
  return out;
}

inline RealVector eigenvalues(const ComplexMatrix& m, double tol = 1e-9) {
  return herm_eig(m, tol).eigenvalues;
}

/// Largest eigenvalue modulus of a Hermitian matrix.
inline double operator_norm(const ComplexMatrix& m, double tol = 1e-9) {
  const RealVector ev = eigenvalues(m, tol);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

// ---------------------------------------------------------------------------
// spectral functions

template <class F>
ComplexMatrix spectral_apply(const EigenSystem& es, F&& f) {
  const RealVector mapped = es.eigenvalues.unaryExpr(std::forward<F>(f));
  ComplexMatrix out = es.basis * mapped.cast<Complex>().asDiagonal() * es.basis.adjoint();
  return hermitian_part(out);
}

namespace detail {

inline EigenSystem psd_eig(const ComplexMatrix& m, double tol) {
  EigenSystem es = herm_eig(m, std::max(tol, 1e-9 * std::max(1.0, m.norm())));
  const double lowest = es.eigenvalues.size() ? es.eigenvalues(0) : 0.0;
  if (lowest < -tol) {
    std::ostringstream os;
    os << "eigenvalue " << lowest << " below -" << tol;
    throw Error(ErrorCode::NotPSD, os.str());
  }
  // Eigenvalues within round-off of zero are zero; otherwise sqrt would turn
  // 1e-16 noise on a projection into 1e-8 errors.
  const double top = es.eigenvalues.size() ? std::abs(es.eigenvalues(es.eigenvalues.size() - 1)) : 0.0;
  const double floor = kZeroEigenvalueUlps * static_cast<double>(m.rows()) * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, top);
  for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i)
    if (es.eigenvalues(i) <= floor) es.eigenvalues(i) = 0.0;
  return es;
}

}  // namespace detail

inline ComplexMatrix psd_sqrt(const ComplexMatrix& m, double tol = kPsdClampTol) {
  return spectral_apply(detail::psd_eig(m, tol), [](double x) { return std::sqrt(x); });
}

/// lambda -> lambda^p in the eigenbasis of m, with 0^p = 0.
inline ComplexMatrix psd_power(const ComplexMatrix& m, double p, double tol = kPsdClampTol) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    std::ostringstream os;
    os << "exponent " << p << " must be a positive real";
    throw Error(ErrorCode::BadExponent, os.str());
  }
  return spectral_apply(detail::psd_eig(m, tol),
                        [p](double x) { return x == 0.0 ? 0.0 : std::pow(x, p); });
}

// ---------------------------------------------------------------------------
// random generation

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal pushed into Q.
inline ComplexMatrix random_unitary(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix z(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(gen);
      const double im = normal(gen);
      z(i, j) = Complex(re, im) * M_SQRT1_2;
    }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// U diag(t) U^H with t_i uniform on [0, 1].
inline ComplexMatrix random_effect_matrix(Eigen::Index n, std::uint64_t seed) {
  const ComplexMatrix u = random_unitary(n, derive_seed(seed, 0));
  std::mt19937_64 gen(derive_seed(seed, 1));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  RealVector t(n);
  for (Eigen::Index i = 0; i < n; ++i) t(i) = uniform(gen);
  return hermitian_part(u * t.cast<Complex>().asDiagonal() * u.adjoint());
}

/// Min over global phases of ||a - e^{i theta} b||_F.
inline double phase_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Complex overlap = (b.adjoint() * a).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0, 0.0);
  return (a - phase * b).norm();
}

inline constexpr int kDenmanBeaversMaxIter = 100;

/// Square root by the Denman-Beavers iteration; independent of herm_eig and
/// meant for positive-definite inputs only.
inline ComplexMatrix denman_beavers_sqrt(const ComplexMatrix& m, double rel_tol = 1e-14) {
  ComplexMatrix y = m;
  ComplexMatrix z = ComplexMatrix::Identity(m.rows(), m.cols());
  for (int k = 0; k < kDenmanBeaversMaxIter; ++k) {
    const ComplexMatrix y_inv = y.partialPivLu().inverse();
    const ComplexMatrix z_inv = z.partialPivLu().inverse();
    const ComplexMatrix y_next = 0.5 * (y + z_inv);
    z = 0.5 * (z + y_inv);
    const double step = (y_next - y).norm();
    y = y_next;
    if (!all_finite(y)) break;
    if (step <= rel_tol * y.norm()) return hermitian_part(y);
  }
  throw Error(ErrorCode::NoConvergence, "Denman-Beavers iteration did not converge");
}

}  // namespace seqiso
