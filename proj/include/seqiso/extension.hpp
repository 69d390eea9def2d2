#pragma once

// Constructive engines behind the decomposition:
//
//  * extend_to_linear: lifts an effect map to a real-linear map on the
//    self-adjoint part (extended complex-linearly), with diagnostics that
//    certify the E-isomorphism hypotheses and the Jordan property.
//  * commutative_recover: normal form f -> (f o pi)^p of a multiplicative
//    bijection between commutative effect algebras via the log transfer.
//  * split_jordan: splits a Jordan *-isomorphism blockwise into
//    multiplicative and antimultiplicative parts and recovers the unitaries
//    from images of matrix units.

#include <cmath>
#include <limits>

#include "seqiso/morphisms.hpp"

namespace seqiso {

// ---------------------------------------------------------------------------
// self-adjoint coordinates

/// Per block: E_jj (j ascending), then for j < k the pair
/// (E_jk + E_kj)/2 and i(E_kj - E_jk)/2.
inline std::vector<AlgebraElement> hermitian_basis(const AlgebraSpec& spec) {
  std::vector<AlgebraElement> basis;
  for (std::size_t b = 0; b < spec.block_count(); ++b) {
    const int n = spec.block_size(b);
    auto unit = [&](int j, int k) {
      ComplexMatrix m = ComplexMatrix::Zero(n, n);
      m(j, k) = 1.0;
      return m;
    };
    auto place = [&](ComplexMatrix m) {
      AlgebraElement x = AlgebraElement::zero(spec);
      x.set_part(b, std::move(m));
      basis.push_back(std::move(x));
    };
    for (int j = 0; j < n; ++j) place(unit(j, j));
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        place(0.5 * (unit(j, k) + unit(k, j)));
        place(Complex(0.0, 0.5) * (unit(k, j) - unit(j, k)));
      }
  }
  return basis;
}

/// Coordinates of a self-adjoint element in hermitian_basis order.
inline RealVector hermitian_coordinates(const AlgebraElement& h) {
  RealVector c(h.spec().linear_dimension());
  Eigen::Index at = 0;
  for (const auto& m : h.parts()) {
    const Eigen::Index n = m.rows();
    for (Eigen::Index j = 0; j < n; ++j) c(at++) = m(j, j).real();
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = j + 1; k < n; ++k) {
        const Complex hjk = 0.5 * (m(j, k) + std::conj(m(k, j)));
        c(at++) = 2.0 * hjk.real();
        c(at++) = -2.0 * hjk.imag();
      }
  }
  return c;
}

inline AlgebraElement from_hermitian_coordinates(const AlgebraSpec& spec, const RealVector& c) {
  AlgebraElement out = AlgebraElement::zero(spec);
  Eigen::Index at = 0;
  for (std::size_t b = 0; b < spec.block_count(); ++b) {
    const int n = spec.block_size(b);
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) m(j, j) = c(at++);
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const double re = c(at++), im = c(at++);
        m(j, k) = Complex(0.5 * re, -0.5 * im);
        m(k, j) = std::conj(m(j, k));
      }
    out.set_part(b, std::move(m));
  }
  return out;
}

/// Largest eigenvalue modulus over all blocks of a self-adjoint element.
inline double element_operator_norm(const AlgebraElement& h) {
  double out = 0.0;
  for (const auto& m : h.parts()) out = std::max(out, operator_norm(m, std::numeric_limits<double>::infinity()));
  return out;
}

// ---------------------------------------------------------------------------
// the three-stage lift, evaluated pointwise through the oracle

/// ||A|| phi(A / ||A||) on positive A; zero maps to zero.
inline AlgebraElement psi_positive(const SequentialMapOracle& m, const AlgebraElement& a,
                                   const ToleranceConfig& cfg = {}) {
  const double norm = element_operator_norm(a);
  if (norm == 0.0) return AlgebraElement::zero(m.target);
  const Effect scaled = Effect::checked((1.0 / norm) * a, cfg);
  return norm * apply_map(m, scaled, cfg).element();
}

/// psi_positive(S+) - psi_positive(S-) on self-adjoint S.
inline AlgebraElement psi_selfadjoint(const SequentialMapOracle& m, const AlgebraElement& s,
                                      const ToleranceConfig& cfg = {}) {
  auto part = [&](bool positive) {
    return s.map_parts([&](const ComplexMatrix& x) -> ComplexMatrix {
      const EigenSystem es = herm_eig(x, std::numeric_limits<double>::infinity());
      return spectral_apply(es, [positive](double v) { return positive ? std::max(v, 0.0) : std::max(-v, 0.0); });
    });
  };
  return psi_positive(m, part(true), cfg) - psi_positive(m, part(false), cfg);
}

/// psi_selfadjoint(Re X) + i psi_selfadjoint(Im X).
inline AlgebraElement psi_extend(const SequentialMapOracle& m, const AlgebraElement& x,
                                 const ToleranceConfig& cfg = {}) {
  return psi_selfadjoint(m, real_part(x), cfg) + Complex(0.0, 1.0) * psi_selfadjoint(m, imag_part(x), cfg);
}

// ---------------------------------------------------------------------------

struct ExtensionDiagnostics {
  double additivity_residual = 0.0;   // max ||phi(A+B) - phi(A) - phi(B)||, A+B <= I
  double homogeneity_residual = 0.0;  // max ||phi(lA) - l phi(A)||, l in {0.1..0.9}
  int order_violations = 0;           // sampled A <= B with phi(A) not <= phi(B)
  double jordan_residual = 0.0;       // max ||Phi(S^2) - Phi(S)^2||, S = S^*, ||S|| <= 1
  double unitality_residual = 0.0;    // ||Phi(I) - I||
  double agreement_residual = 0.0;    // max ||Phi(E) - phi(E)|| on sampled effects
  double pipeline_residual = 0.0;     // max ||Phi(X) - psi_extend(X)|| on sampled elements
};

/// Real-linear operator on self-adjoint coordinates, extended complex-linearly.
class LinearExtension {
 public:
  LinearExtension(AlgebraSpec source, AlgebraSpec target, Eigen::MatrixXd matrix)
      : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {}

  const AlgebraSpec& source() const noexcept { return source_; }
  const AlgebraSpec& target() const noexcept { return target_; }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  const ExtensionDiagnostics& diagnostics() const noexcept { return diagnostics_; }
  void set_diagnostics(const ExtensionDiagnostics& d) { diagnostics_ = d; }

  AlgebraElement apply_selfadjoint(const AlgebraElement& s) const {
    require_same_spec(s.spec(), source_);
    return from_hermitian_coordinates(target_, matrix_ * hermitian_coordinates(s));
  }

  AlgebraElement apply(const AlgebraElement& x) const {
    return apply_selfadjoint(real_part(x)) + Complex(0.0, 1.0) * apply_selfadjoint(imag_part(x));
  }

 private:
  AlgebraSpec source_;
  AlgebraSpec target_;
  Eigen::MatrixXd matrix_;
  ExtensionDiagnostics diagnostics_;
};

/// Raised when the additivity diagnostic shows the oracle is not an
/// E-isomorphism; carries the full diagnostics.
class NotEIsomorphismError : public Error {
 public:
  explicit NotEIsomorphismError(const ExtensionDiagnostics& d)
      : Error(ErrorCode::NotEIsomorphism,
              "additivity residual " + std::to_string(d.additivity_residual) + " on sums inside the effect interval"),
        diagnostics_(d) {}
  const ExtensionDiagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  ExtensionDiagnostics diagnostics_;
};

inline constexpr double kAdditivityFactor = 100.0;

/// Assembles Phi column by column. Each basis element S is moved into the
/// effect interval as X = (S + ||S|| I) / (2||S||) and recovered afterwards
/// as Phi(S) = 2||S|| phi(X) - ||S|| phi(I).
inline LinearExtension extend_to_linear(const SequentialMapOracle& m, const ToleranceConfig& cfg = {}) {
  validate(cfg);
  const AlgebraSpec& src = m.source;
  const AlgebraElement id = AlgebraElement::identity(src);
  const AlgebraElement phi_id = apply_map(m, Effect::trusted(id), cfg).element();
  auto phi = [&](const AlgebraElement& x) { return apply_map(m, Effect::checked(x, cfg), cfg).element(); };

  const std::vector<AlgebraElement> basis = hermitian_basis(src);
  Eigen::MatrixXd matrix(m.target.linear_dimension(), src.linear_dimension());
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const double norm = element_operator_norm(basis[b]);
    const AlgebraElement shifted = (0.5 / norm) * (basis[b] + norm * id);
    const AlgebraElement image = (2.0 * norm) * phi(shifted) - norm * phi_id;
    matrix.col(static_cast<Eigen::Index>(b)) = hermitian_coordinates(image);
  }
  LinearExtension ext(src, m.target, std::move(matrix));

  ExtensionDiagnostics d;
  d.unitality_residual = distance(ext.apply_selfadjoint(id), AlgebraElement::identity(m.target));

  const double fixed_pairs[][2] = {{0.5, 0.5}, {0.25, 0.25}, {0.25, 0.5}};
  for (const auto& pr : fixed_pairs) {
    const AlgebraElement a = pr[0] * id, b = pr[1] * id;
    d.additivity_residual = std::max(d.additivity_residual, distance(phi(a + b), phi(a) + phi(b)));
  }

  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t s = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
    std::mt19937_64 gen(derive_seed(s, 7));
    const double r1 = uniform(gen);
    const double r2 = (1.0 - r1) * uniform(gen);
    const AlgebraElement e1 = random_effect(src, derive_seed(s, 0));
    const AlgebraElement e2 = random_effect(src, derive_seed(s, 1));
    const AlgebraElement a = r1 * e1, b = r2 * e2;
    const AlgebraElement pa = phi(a), pb = phi(b), pab = phi(a + b);

    d.additivity_residual = std::max(d.additivity_residual, distance(pab, pa + pb));

    // a <= a + b
    const AlgebraElement gap = pab - pa;
    for (const auto& part : gap.parts())
      if (eigenvalues(hermitian_part(part), std::numeric_limits<double>::infinity())(0) < -cfg.eq_tol) {
        ++d.order_violations;
        break;
      }

    const double lambda = 0.1 * static_cast<double>(1 + t % 9);
    d.homogeneity_residual = std::max(d.homogeneity_residual, distance(phi(lambda * e1), lambda * phi(e1)));

    const AlgebraElement sa = random_hermitian_unit_ball(src, derive_seed(s, 2));
    const AlgebraElement image = ext.apply_selfadjoint(sa);
    d.jordan_residual = std::max(d.jordan_residual, distance(ext.apply_selfadjoint(sa * sa), image * image));

    d.agreement_residual = std::max(d.agreement_residual, distance(ext.apply(e2), phi(e2)));

    if (t < 20) {
      const AlgebraElement x = random_element(src, derive_seed(s, 3));
      d.pipeline_residual = std::max(d.pipeline_residual, distance(ext.apply(x), psi_extend(m, x, cfg)));
    }
  }
  ext.set_diagnostics(d);
  if (d.additivity_residual > kAdditivityFactor * cfg.eq_tol) throw NotEIsomorphismError(d);
  return ext;
}

// ---------------------------------------------------------------------------
// commutative sector

/// f -> (f o pi)^p, i.e. phi(f)_j = f_{perm[j]}^{exponents[j]}.
struct CommutativeRecovery {
  std::vector<std::size_t> perm;  // target coordinate -> source coordinate
  std::vector<double> exponents;  // indexed by target coordinate
  double residual = 0.0;
};

/// h -> -ln phi(exp(-h)) for h >= 0 on an all-size-1 spec; turns a
/// multiplicative map into an additive one.
inline RealVector log_transfer(const SequentialMapOracle& m, const RealVector& h, const ToleranceConfig& cfg = {}) {
  std::vector<ComplexMatrix> parts;
  for (Eigen::Index i = 0; i < h.size(); ++i) parts.push_back(ComplexMatrix::Constant(1, 1, std::exp(-h(i))));
  const Effect image = apply_map(m, Effect::checked({m.source, std::move(parts)}, cfg), cfg);
  RealVector out(static_cast<Eigen::Index>(m.target.block_count()));
  for (std::size_t j = 0; j < m.target.block_count(); ++j)
    out(static_cast<Eigen::Index>(j)) = -std::log(std::max(image.element().part(j)(0, 0).real(), 0.0));
  return out;
}

inline constexpr double kExponentCrossCheckTol = 1e-6;
inline constexpr double kMovedCoordinateTol = 1e-9;

/// Probes with effects equal to 1 except 0.5 (and then 0.25) at one source
/// coordinate; the single target coordinate that moves identifies the
/// permutation, the log ratio gives the exponent.
inline CommutativeRecovery commutative_recover(const SequentialMapOracle& m, const ToleranceConfig& cfg = {}) {
  if (!m.source.is_commutative() || !m.target.is_commutative() ||
      m.source.block_count() != m.target.block_count())
    throw Error(ErrorCode::NotCommutativeSpec,
                "source " + to_string(m.source) + " and target " + to_string(m.target) +
                    " must be all-size-1 with equal block counts");
  const std::size_t k = m.source.block_count();
  const auto kk = static_cast<Eigen::Index>(k);
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

  CommutativeRecovery rec;
  rec.perm.assign(k, kUnset);
  rec.exponents.assign(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    RealVector h = RealVector::Zero(kk);
    h(static_cast<Eigen::Index>(i)) = std::log(2.0);
    const RealVector half = log_transfer(m, h, cfg);
    h(static_cast<Eigen::Index>(i)) = std::log(4.0);
    const RealVector quarter = log_transfer(m, h, cfg);

    std::size_t moved = kUnset;
    for (std::size_t j = 0; j < k; ++j) {
      if (std::abs(half(static_cast<Eigen::Index>(j))) > kMovedCoordinateTol) {
        if (moved != kUnset)
          throw Error(ErrorCode::RecoveryFailed, "probe of coordinate " + std::to_string(i) + " moved several targets");
        moved = j;
      }
    }
    if (moved == kUnset)
      throw Error(ErrorCode::RecoveryFailed, "probe of coordinate " + std::to_string(i) + " moved no target");
    if (rec.perm[moved] != kUnset)
      throw Error(ErrorCode::RecoveryFailed, "two source coordinates map to target " + std::to_string(moved));

    const double p = half(static_cast<Eigen::Index>(moved)) / std::log(2.0);
    const double p_check = quarter(static_cast<Eigen::Index>(moved)) / std::log(4.0);
    if (!std::isfinite(p) || !(p > 0.0) || std::abs(p - p_check) > kExponentCrossCheckTol) {
      std::ostringstream os;
      os << "exponent at target " << moved << " inconsistent: " << p << " (0.5 probe) vs " << p_check
         << " (0.25 probe)";
      throw Error(ErrorCode::RecoveryFailed, os.str());
    }
    rec.perm[moved] = i;
    rec.exponents[moved] = p;
  }

  constexpr int kGrid = 100;
  for (int g = 0; g < kGrid; ++g) {
    std::vector<ComplexMatrix> parts;
    std::vector<double> f(k);
    for (std::size_t i = 0; i < k; ++i) {
      f[i] = static_cast<double>((g + 17 * static_cast<int>(i)) % kGrid) / (kGrid - 1);
      parts.push_back(ComplexMatrix::Constant(1, 1, f[i]));
    }
    const Effect image = apply_map(m, Effect::trusted({m.source, std::move(parts)}), cfg);
    for (std::size_t j = 0; j < k; ++j) {
      const double base = f[rec.perm[j]];
      const double expected = base == 0.0 ? 0.0 : std::pow(base, rec.exponents[j]);
      rec.residual = std::max(rec.residual, std::abs(image.element().part(j)(0, 0) - expected));
    }
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Jordan splitting

enum class BlockKind { Scalar, Multiplicative, Antimultiplicative };

constexpr std::string_view to_string(BlockKind k) {
  switch (k) {
    case BlockKind::Scalar: return "scalar";
    case BlockKind::Multiplicative: return "multiplicative";
    case BlockKind::Antimultiplicative: return "antimultiplicative";
  }
  return "unknown";
}

struct JordanSplit {
  std::vector<std::size_t> correspondence;  // source block -> target block
  std::vector<BlockKind> kinds;             // per source block
  std::vector<ComplexMatrix> unitaries;     // per source block, phase-normalized
  double residual = 0.0;
};

inline constexpr double kJordanResidualMax = 1e-7;
inline constexpr double kKindSmall = 1e-6;
inline constexpr double kKindLarge = 1e-3;
inline constexpr double kUnitaryPhaseFloor = 1e-8;

namespace detail {

inline void normalize_global_phase(ComplexMatrix& u) {
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double mag = std::abs(u(i, 0));
    if (mag > kUnitaryPhaseFloor) {
      u *= std::conj(u(i, 0)) / mag;
      u(i, 0) = mag;
      return;
    }
  }
}

}  // namespace detail

inline JordanSplit split_jordan(const LinearExtension& phi, const ToleranceConfig& /*cfg*/ = {}) {
  const ExtensionDiagnostics& diag = phi.diagnostics();
  if (!(diag.jordan_residual <= kJordanResidualMax)) {
    std::ostringstream os;
    os << "Jordan residual " << diag.jordan_residual << " exceeds " << kJordanResidualMax;
    throw Error(ErrorCode::NotJordan, os.str());
  }
  const AlgebraSpec& src = phi.source();
  const AlgebraSpec& tgt = phi.target();
  const std::size_t k = src.block_count();
  if (tgt.block_count() != k) throw Error(ErrorCode::NotJordan, "block counts differ");

  JordanSplit out;
  out.correspondence.assign(k, 0);
  std::vector<bool> taken(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    const AlgebraElement image = phi.apply_selfadjoint(block_projection(src, i));
    std::size_t found = k;
    for (std::size_t j = 0; j < k; ++j)
      if (image.part(j).norm() > 0.5) {
        if (found != k) throw Error(ErrorCode::NotJordan, "central projection image spans several blocks");
        found = j;
      }
    if (found == k || taken[found] || tgt.block_size(found) != src.block_size(i) ||
        distance(image, block_projection(tgt, found)) > kKindSmall)
      throw Error(ErrorCode::NotJordan, "image of central projection " + std::to_string(i) +
                                            " is not a minimal central projection of matching size");
    taken[found] = true;
    out.correspondence[i] = found;
  }

  for (std::size_t i = 0; i < k; ++i) {
    const int n = src.block_size(i);
    const std::size_t j = out.correspondence[i];
    if (n == 1) {
      out.kinds.push_back(BlockKind::Scalar);
      out.unitaries.push_back(ComplexMatrix::Identity(1, 1));
      out.residual = std::max(out.residual, distance(phi.apply(block_projection(src, i)), block_projection(tgt, j)));
      continue;
    }
    const MatrixUnitSystem units = matrix_units(src, i);
    std::vector<ComplexMatrix> image(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        image[static_cast<std::size_t>(a * n + b)] = phi.apply(units.unit(a, b)).part(j);
    auto img = [&](int a, int b) -> const ComplexMatrix& { return image[static_cast<std::size_t>(a * n + b)]; };

    double forward = 0.0, reversed = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          const ComplexMatrix& prod = img(a, c);  // Phi(E_ab E_bc)
          forward = std::max(forward, (prod - img(a, b) * img(b, c)).norm());
          reversed = std::max(reversed, (prod - img(b, c) * img(a, b)).norm());
        }
    BlockKind kind;
    if (forward < kKindSmall && reversed > kKindLarge)
      kind = BlockKind::Multiplicative;
    else if (reversed < kKindSmall && forward > kKindLarge)
      kind = BlockKind::Antimultiplicative;
    else {
      std::ostringstream os;
      os << "block " << i << ": product residual " << forward << ", reversed " << reversed;
      throw Error(ErrorCode::AmbiguousKind, os.str());
    }

    // Phi(E_00) = u_0 u_0^H; w spans its range.
    const EigenSystem es = herm_eig(hermitian_part(img(0, 0)), std::numeric_limits<double>::infinity());
    const Eigen::VectorXcd w = es.basis.col(n - 1);
    ComplexMatrix u(n, n);
    for (int c = 0; c < n; ++c)
      u.col(c) = (kind == BlockKind::Multiplicative ? img(c, 0) : img(0, c)) * w;
    detail::normalize_global_phase(u);

    double res = (u.adjoint() * u - ComplexMatrix::Identity(n, n)).norm();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        ComplexMatrix e = ComplexMatrix::Zero(n, n);
        if (kind == BlockKind::Multiplicative)
          e(a, b) = 1.0;
        else
          e(b, a) = 1.0;
        res = std::max(res, (img(a, b) - u * e * u.adjoint()).norm());
      }
    out.residual = std::max(out.residual, res);
    out.kinds.push_back(kind);
    out.unitaries.push_back(std::move(u));
  }
  return out;
}

}  // namespace seqiso
