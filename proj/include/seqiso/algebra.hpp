#pragma once

// Finite-dimensional von Neumann algebras modelled as direct sums of full
// matrix blocks M_{n_1} + ... + M_{n_k}, together with their effects,
// projections, center and matrix units.

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "seqiso/errors.hpp"
#include "seqiso/linalg.hpp"

namespace seqiso {

struct ToleranceConfig {
  double eq_tol = 1e-9;
  double psd_tol = 1e-10;
  int trials = 200;
  std::uint64_t seed = 0;
};

inline void validate(const ToleranceConfig& cfg) {
  if (!(cfg.eq_tol > 0.0) || !(cfg.psd_tol > 0.0))
    throw Error(ErrorCode::InvariantError, "tolerances must be positive");
  if (cfg.trials < 1) throw Error(ErrorCode::InvariantError, "trials must be positive");
}

// ---------------------------------------------------------------------------

class AlgebraSpec {
 public:
  AlgebraSpec() : blocks_{1} {}
  explicit AlgebraSpec(std::vector<int> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw Error(ErrorCode::InvalidSpec, "an algebra needs at least one block");
    for (int n : blocks_)
      if (n < 1) throw Error(ErrorCode::InvalidSpec, "block sizes must be positive");
  }

  const std::vector<int>& blocks() const noexcept { return blocks_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  int block_size(std::size_t i) const { return blocks_.at(i); }

  /// sum of n_i^2
  int linear_dimension() const {
    int d = 0;
    for (int n : blocks_) d += n * n;
    return d;
  }

  bool is_commutative() const {
    for (int n : blocks_)
      if (n != 1) return false;
    return true;
  }

  bool has_noncommutative_block() const { return !is_commutative(); }

  /// Sub-algebra formed by the listed blocks, in the listed order.
  AlgebraSpec restrict(std::span<const std::size_t> indices) const {
    std::vector<int> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(block_size(i));
    return AlgebraSpec(std::move(out));
  }

  friend bool operator==(const AlgebraSpec&, const AlgebraSpec&) = default;

 private:
  std::vector<int> blocks_;
};

inline std::string to_string(const AlgebraSpec& spec) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < spec.block_count(); ++i) os << (i ? "," : "") << spec.block_size(i);
  os << ']';
  return os.str();
}

inline void require_same_spec(const AlgebraSpec& a, const AlgebraSpec& b) {
  if (!(a == b))
    throw Error(ErrorCode::SpecMismatch, "spec " + to_string(a) + " vs " + to_string(b));
}

// ---------------------------------------------------------------------------

/// A block-diagonal operator: one square complex matrix per block.
class AlgebraElement {
 public:
  AlgebraElement(AlgebraSpec spec, std::vector<ComplexMatrix> parts)
      : spec_(std::move(spec)), parts_(std::move(parts)) {
    if (parts_.size() != spec_.block_count())
      throw Error(ErrorCode::SpecMismatch, "part count does not match spec " + to_string(spec_));
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      const int n = spec_.block_size(i);
      if (parts_[i].rows() != n || parts_[i].cols() != n)
        throw Error(ErrorCode::SpecMismatch, "part " + std::to_string(i) + " has wrong size for spec " +
                                                 to_string(spec_));
    }
  }

  static AlgebraElement zero(const AlgebraSpec& spec) {
    std::vector<ComplexMatrix> parts;
    for (int n : spec.blocks()) parts.push_back(ComplexMatrix::Zero(n, n));
    return {spec, std::move(parts)};
  }

  static AlgebraElement identity(const AlgebraSpec& spec) {
    std::vector<ComplexMatrix> parts;
    for (int n : spec.blocks()) parts.push_back(ComplexMatrix::Identity(n, n));
    return {spec, std::move(parts)};
  }

  const AlgebraSpec& spec() const noexcept { return spec_; }
  std::size_t block_count() const noexcept { return parts_.size(); }
  std::span<const ComplexMatrix> parts() const noexcept { return parts_; }
  const ComplexMatrix& part(std::size_t i) const { return parts_.at(i); }

  /// Replaces block i; the size must stay the same.
  void set_part(std::size_t i, ComplexMatrix m) {
    if (m.rows() != parts_.at(i).rows() || m.cols() != parts_.at(i).cols())
      throw Error(ErrorCode::SpecMismatch, "replacement part has wrong size");
    parts_[i] = std::move(m);
  }

  /// Frobenius norm over all blocks.
  double norm() const {
    double s = 0.0;
    for (const auto& p : parts_) s += p.squaredNorm();
    return std::sqrt(s);
  }

  template <class F>
  AlgebraElement map_parts(F&& f) const {
    std::vector<ComplexMatrix> out;
    out.reserve(parts_.size());
    for (const auto& p : parts_) out.push_back(f(p));
    return {spec_, std::move(out)};
  }

  AlgebraElement adjoint() const {
    return map_parts([](const ComplexMatrix& m) -> ComplexMatrix { return m.adjoint(); });
  }

  AlgebraElement& operator+=(const AlgebraElement& o) {
    require_same_spec(spec_, o.spec_);
    for (std::size_t i = 0; i < parts_.size(); ++i) parts_[i] += o.parts_[i];
    return *this;
  }
  AlgebraElement& operator-=(const AlgebraElement& o) {
    require_same_spec(spec_, o.spec_);
    for (std::size_t i = 0; i < parts_.size(); ++i) parts_[i] -= o.parts_[i];
    return *this;
  }
  AlgebraElement& operator*=(Complex s) {
    for (auto& p : parts_) p *= s;
    return *this;
  }

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(AlgebraElement a, Complex s) { return a *= s; }
  friend AlgebraElement operator*(Complex s, AlgebraElement a) { return a *= s; }
  friend AlgebraElement operator*(double s, AlgebraElement a) { return a *= Complex(s, 0.0); }

  /// Blockwise operator product.
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_spec(a.spec_, b.spec_);
    std::vector<ComplexMatrix> out;
    out.reserve(a.parts_.size());
    for (std::size_t i = 0; i < a.parts_.size(); ++i) out.push_back(a.parts_[i] * b.parts_[i]);
    return {a.spec_, std::move(out)};
  }

 private:
  AlgebraSpec spec_;
  std::vector<ComplexMatrix> parts_;
};

inline double distance(const AlgebraElement& a, const AlgebraElement& b) { return (a - b).norm(); }

/// Scale-aware equality: ||a - b||_F <= tol * max(1, ||a||_F).
inline bool approx_equal(const AlgebraElement& a, const AlgebraElement& b, double tol) {
  return distance(a, b) <= tol * std::max(1.0, a.norm());
}

inline AlgebraElement real_part(const AlgebraElement& x) { return 0.5 * (x + x.adjoint()); }
inline AlgebraElement imag_part(const AlgebraElement& x) {
  return Complex(0.0, -0.5) * (x - x.adjoint());
}

/// Places `local` (an element of the sub-algebra of the listed blocks) into
/// the full algebra, zero elsewhere.
inline AlgebraElement embed(const AlgebraSpec& full, std::span<const std::size_t> indices,
                            const AlgebraElement& local) {
  AlgebraElement out = AlgebraElement::zero(full);
  for (std::size_t j = 0; j < indices.size(); ++j) out.set_part(indices[j], local.part(j));
  return out;
}

/// Compresses x onto the listed blocks.
inline AlgebraElement extract(const AlgebraElement& x, std::span<const std::size_t> indices) {
  std::vector<ComplexMatrix> parts;
  for (std::size_t i : indices) parts.push_back(x.part(i));
  return {x.spec().restrict(indices), std::move(parts)};
}

// ---------------------------------------------------------------------------
// effects and projections

namespace detail {

inline double worst_spectral_excursion(const AlgebraElement& x, double herm_tol, double* offending) {
  double worst = 0.0;
  for (const auto& p : x.parts()) {
    if (!all_finite(p)) {
      *offending = std::numeric_limits<double>::quiet_NaN();
      return std::numeric_limits<double>::infinity();
    }
    if (hermitian_defect(p) > herm_tol * std::max(1.0, p.norm())) {
      *offending = std::numeric_limits<double>::quiet_NaN();
      return std::numeric_limits<double>::infinity();
    }
    const RealVector ev = herm_eig(p, std::numeric_limits<double>::infinity()).eigenvalues;
    const double lo = -ev(0), hi = ev(ev.size() - 1) - 1.0;
    if (lo > worst) worst = lo, *offending = ev(0);
    if (hi > worst) worst = hi, *offending = ev(ev.size() - 1);
  }
  return worst;
}

}  // namespace detail

/// An element with 0 <= x <= I, checked at construction.
class Effect {
 public:
  static Effect checked(AlgebraElement x, const ToleranceConfig& cfg = {}) {
    double offending = 0.0;
    const double excursion = detail::worst_spectral_excursion(x, cfg.eq_tol, &offending);
    if (excursion > cfg.psd_tol) {
      std::ostringstream os;
      os << "element is not an effect (offending eigenvalue " << offending << ")";
      throw Error(ErrorCode::NotEffect, os.str());
    }
    return Effect(std::move(x));
  }

  /// For values that are effects by construction.
  static Effect trusted(AlgebraElement x) { return Effect(std::move(x)); }

  const AlgebraElement& element() const noexcept { return value_; }
  operator const AlgebraElement&() const noexcept { return value_; }
  const AlgebraSpec& spec() const noexcept { return value_.spec(); }

 private:
  explicit Effect(AlgebraElement x) : value_(std::move(x)) {}
  AlgebraElement value_;
};

namespace detail {

inline double idempotent_defect(const AlgebraElement& x) {
  double worst = 0.0;
  for (const auto& p : x.parts()) {
    worst = std::max(worst, (p * p - p).norm());
    worst = std::max(worst, hermitian_defect(p));
  }
  return worst;
}

}  // namespace detail

/// A self-adjoint idempotent.
class Projection {
 public:
  static Projection checked(AlgebraElement x, const ToleranceConfig& cfg = {}) {
    const double defect = detail::idempotent_defect(x);
    if (defect > cfg.eq_tol) {
      std::ostringstream os;
      os << "||P^2 - P|| or ||P - P^H|| = " << defect;
      throw Error(ErrorCode::NotProjection, os.str());
    }
    return Projection(Effect::trusted(std::move(x)));
  }
  static Projection trusted(AlgebraElement x) { return Projection(Effect::trusted(std::move(x))); }

  const Effect& effect() const noexcept { return value_; }
  const AlgebraElement& element() const noexcept { return value_.element(); }
  operator const Effect&() const noexcept { return value_; }
  operator const AlgebraElement&() const noexcept { return value_.element(); }
  const AlgebraSpec& spec() const noexcept { return value_.spec(); }

 private:
  explicit Projection(Effect e) : value_(std::move(e)) {}
  Effect value_;
};

// ---------------------------------------------------------------------------
// operations

inline Effect scalar_element(const AlgebraSpec& spec, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw Error(ErrorCode::BadScalar, "scalar " + std::to_string(lambda) + " outside [0,1]");
  return Effect::trusted(lambda * AlgebraElement::identity(spec));
}

struct ElementFlags {
  bool is_effect = false;
  bool is_projection = false;
  bool is_central = false;
  bool is_abelian_projection = false;
};

/// Distance of each part from the nearest scalar multiple of its identity.
inline double central_defect(const AlgebraElement& x) {
  double worst = 0.0;
  for (const auto& p : x.parts()) {
    const Complex mean = p.trace() / static_cast<double>(p.rows());
    worst = std::max(worst, (p - mean * ComplexMatrix::Identity(p.rows(), p.cols())).norm());
  }
  return worst;
}

inline bool is_central(const AlgebraElement& x, double tol) {
  return central_defect(x) <= tol * std::max(1.0, x.norm());
}

/// Number of eigenvalues >= 0.5 in each part of a projection.
inline std::vector<int> projection_ranks(const AlgebraElement& p) {
  std::vector<int> ranks;
  for (const auto& m : p.parts()) {
    const RealVector ev = herm_eig(m, std::numeric_limits<double>::infinity()).eigenvalues;
    ranks.push_back(static_cast<int>((ev.array() >= 0.5).count()));
  }
  return ranks;
}

inline ElementFlags classify_element(const AlgebraElement& x, const ToleranceConfig& cfg = {}) {
  ElementFlags f;
  double offending = 0.0;
  f.is_effect = detail::worst_spectral_excursion(x, cfg.eq_tol, &offending) <= cfg.psd_tol;
  f.is_projection = f.is_effect && detail::idempotent_defect(x) <= cfg.eq_tol;
  f.is_central = is_central(x, cfg.eq_tol);
  if (f.is_projection) {
    const auto ranks = projection_ranks(x);
    f.is_abelian_projection = std::all_of(ranks.begin(), ranks.end(), [](int r) { return r <= 1; });
  }
  return f;
}

inline Projection block_projection(const AlgebraSpec& spec, std::size_t block) {
  AlgebraElement z = AlgebraElement::zero(spec);
  z.set_part(block, ComplexMatrix::Identity(spec.block_size(block), spec.block_size(block)));
  return Projection::trusted(std::move(z));
}

/// Minimal central projections: the block indicators.
inline std::vector<Projection> center_projections(const AlgebraSpec& spec) {
  std::vector<Projection> out;
  for (std::size_t i = 0; i < spec.block_count(); ++i) out.push_back(block_projection(spec, i));
  return out;
}

/// Smallest central projection dominating p: identity on every block where p
/// is nonzero.
inline Projection central_carrier(const AlgebraElement& p, const ToleranceConfig& cfg = {}) {
  const Projection checked = Projection::checked(p, cfg);
  AlgebraElement out = AlgebraElement::zero(p.spec());
  for (std::size_t i = 0; i < p.block_count(); ++i)
    if (checked.element().part(i).norm() > cfg.eq_tol)
      out.set_part(i, ComplexMatrix::Identity(p.spec().block_size(i), p.spec().block_size(i)));
  return Projection::trusted(std::move(out));
}

class MatrixUnitSystem {
 public:
  MatrixUnitSystem(const AlgebraSpec& spec, std::size_t block) : block_(block) {
    if (block >= spec.block_count())
      throw Error(ErrorCode::BadIndex, "block index " + std::to_string(block) + " out of range");
    n_ = spec.block_size(block);
    units_.reserve(static_cast<std::size_t>(n_ * n_));
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        AlgebraElement e = AlgebraElement::zero(spec);
        ComplexMatrix m = ComplexMatrix::Zero(n_, n_);
        m(j, k) = 1.0;
        e.set_part(block, std::move(m));
        units_.push_back(std::move(e));
      }
  }

  std::size_t block() const noexcept { return block_; }
  int size() const noexcept { return n_; }
  /// E_{jk} = e_j e_k^H inside the block (0-based j, k).
  const AlgebraElement& unit(int j, int k) const {
    if (j < 0 || k < 0 || j >= n_ || k >= n_) throw Error(ErrorCode::BadIndex, "matrix unit index");
    return units_[static_cast<std::size_t>(j * n_ + k)];
  }

 private:
  std::size_t block_;
  int n_ = 0;
  std::vector<AlgebraElement> units_;
};

inline MatrixUnitSystem matrix_units(const AlgebraSpec& spec, std::size_t block) { return {spec, block}; }

/// tr(x_i) / n_i for every block.
inline Eigen::VectorXcd trace_per_block(const AlgebraElement& x) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(x.block_count()));
  for (std::size_t i = 0; i < x.block_count(); ++i)
    out(static_cast<Eigen::Index>(i)) = x.part(i).trace() / static_cast<double>(x.part(i).rows());
  return out;
}

/// Block size n -> central projection onto the type I_n summand.
inline std::map<int, Projection> type_partition(const AlgebraSpec& spec) {
  std::map<int, AlgebraElement> acc;
  for (std::size_t i = 0; i < spec.block_count(); ++i) {
    const int n = spec.block_size(i);
    auto it = acc.try_emplace(n, AlgebraElement::zero(spec)).first;
    it->second.set_part(i, ComplexMatrix::Identity(n, n));
  }
  std::map<int, Projection> out;
  for (auto& [n, e] : acc) out.emplace(n, Projection::trusted(std::move(e)));
  return out;
}

/// Indices of the size-1 blocks (the commutative summand), in order.
inline std::vector<std::size_t> commutative_blocks(const AlgebraSpec& spec) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < spec.block_count(); ++i)
    if (spec.block_size(i) == 1) out.push_back(i);
  return out;
}

inline std::vector<std::size_t> noncommutative_blocks(const AlgebraSpec& spec) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < spec.block_count(); ++i)
    if (spec.block_size(i) > 1) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// generators

inline Effect random_effect(const AlgebraSpec& spec, std::uint64_t seed) {
  std::vector<ComplexMatrix> parts;
  for (std::size_t i = 0; i < spec.block_count(); ++i)
    parts.push_back(random_effect_matrix(spec.block_size(i), derive_seed(seed, i)));
  return Effect::trusted({spec, std::move(parts)});
}

/// Arbitrary (non-Hermitian) element with Gaussian entries.
inline AlgebraElement random_element(const AlgebraSpec& spec, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::vector<ComplexMatrix> parts;
  for (int n : spec.blocks()) {
    ComplexMatrix m(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double re = normal(gen);
        const double im = normal(gen);
        m(i, j) = Complex(re, im);
      }
    parts.push_back(std::move(m));
  }
  return {spec, std::move(parts)};
}

/// Random self-adjoint element of operator norm at most 1.
inline AlgebraElement random_hermitian_unit_ball(const AlgebraSpec& spec, std::uint64_t seed) {
  const Effect e = random_effect(spec, seed);
  return 2.0 * e.element() - AlgebraElement::identity(spec);
}

/// Projection U diag(mask) U^H per block, with U Haar random.
inline Projection projection_from_masks(const AlgebraSpec& spec, const std::vector<std::vector<int>>& masks,
                                        std::uint64_t unitary_seed) {
  std::vector<ComplexMatrix> parts;
  for (std::size_t i = 0; i < spec.block_count(); ++i) {
    const int n = spec.block_size(i);
    const ComplexMatrix u = random_unitary(n, derive_seed(unitary_seed, i));
    RealVector d(n);
    for (int k = 0; k < n; ++k) d(k) = masks.at(i).at(static_cast<std::size_t>(k)) ? 1.0 : 0.0;
    parts.push_back(hermitian_part(u * d.cast<Complex>().asDiagonal() * u.adjoint()));
  }
  return Projection::trusted({spec, std::move(parts)});
}

inline std::vector<std::vector<int>> random_masks(const AlgebraSpec& spec, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<std::vector<int>> masks;
  for (int n : spec.blocks()) {
    std::vector<int> m(static_cast<std::size_t>(n));
    for (auto& b : m) b = coin(gen) ? 1 : 0;
    masks.push_back(std::move(m));
  }
  return masks;
}

inline Projection random_projection(const AlgebraSpec& spec, std::uint64_t seed) {
  return projection_from_masks(spec, random_masks(spec, derive_seed(seed, 0)), derive_seed(seed, 1));
}

/// v v^H / |v|^2 placed in one block.
inline Projection rank_one_projection(const AlgebraSpec& spec, std::size_t block, const Eigen::VectorXcd& v) {
  if (block >= spec.block_count()) throw Error(ErrorCode::BadIndex, "block index out of range");
  if (v.size() != spec.block_size(block)) throw Error(ErrorCode::SpecMismatch, "vector length");
  const Eigen::VectorXcd u = v.normalized();
  AlgebraElement p = AlgebraElement::zero(spec);
  p.set_part(block, u * u.adjoint());
  return Projection::trusted(std::move(p));
}

/// Largest ||P A P||_F over rank-one projections P = v v^H, with v ranging
/// over the standard basis and `random_per_block` seeded unit vectors in
/// every block. Only A = 0 has every compression vanish.
inline double max_rank_one_compression(const AlgebraElement& a, std::uint64_t seed, int random_per_block = 50) {
  double worst = 0.0;
  const AlgebraSpec& spec = a.spec();
  for (std::size_t i = 0; i < spec.block_count(); ++i) {
    const int n = spec.block_size(i);
    std::vector<Eigen::VectorXcd> probes;
    for (int k = 0; k < n; ++k) probes.push_back(Eigen::VectorXcd::Unit(n, k));
    std::mt19937_64 gen(derive_seed(seed, i));
    std::normal_distribution<double> normal;
    for (int r = 0; r < random_per_block; ++r) {
      Eigen::VectorXcd v(n);
      for (int k = 0; k < n; ++k) {
        const double re = normal(gen);
        const double im = normal(gen);
        v(k) = Complex(re, im);
      }
      probes.push_back(v.normalized());
    }
    for (const auto& v : probes) {
      const ComplexMatrix p = v * v.adjoint();
      worst = std::max(worst, (p * a.part(i) * p).norm());
    }
  }
  return worst;
}

}  // namespace seqiso
