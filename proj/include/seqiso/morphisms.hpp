#pragma once

// Sequential isomorphisms as opaque callables, with serializable recipes
// (MapDescriptor) for the standard families: *-isomorphisms (unitary
// conjugation), *-antiisomorphisms (transpose then conjugation), pointwise
// power maps on commutative blocks, direct sums and compositions.

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <variant>

#include "seqiso/sequential.hpp"

namespace seqiso {

struct MapDescriptor;
using DescriptorPtr = std::shared_ptr<const MapDescriptor>;

/// X_i -> U_{s(i)} X_i U_{s(i)}^H placed at target block s(i). `perm` holds
/// s (0-based, source -> target); `unitaries` is indexed by target block.
struct UnitaryConjugation {
  std::vector<std::size_t> perm;
  std::vector<ComplexMatrix> unitaries;
};

/// Same as UnitaryConjugation with X_i replaced by its transpose.
struct TransposeConjugation {
  std::vector<std::size_t> perm;
  std::vector<ComplexMatrix> unitaries;
};

/// x_i -> x_i^{p_i} on an all-size-1 spec.
struct PowerMap {
  std::vector<double> exponents;
};

struct DirectSumPart {
  std::vector<std::size_t> source_blocks;
  std::vector<std::size_t> target_blocks;
  DescriptorPtr map;
};

struct DirectSum {
  std::vector<DirectSumPart> parts;
};

/// outer o inner
struct Composition {
  DescriptorPtr outer;
  DescriptorPtr inner;
};

struct MapDescriptor {
  std::variant<UnitaryConjugation, TransposeConjugation, PowerMap, DirectSum, Composition> node;
};

template <class T>
DescriptorPtr make_descriptor(T node) {
  return std::make_shared<const MapDescriptor>(MapDescriptor{std::move(node)});
}

struct MapShape {
  AlgebraSpec source;
  AlgebraSpec target;
};

inline constexpr double kDescriptorUnitarityTol = 1e-10;

namespace detail {

[[noreturn]] inline void invalid(const std::string& what) { throw Error(ErrorCode::DescriptorInvalid, what); }

inline void check_permutation(const std::vector<std::size_t>& perm, std::size_t k, const char* where) {
  if (perm.size() != k) invalid(std::string(where) + ": permutation length does not match block count");
  std::vector<bool> seen(k, false);
  for (std::size_t s : perm) {
    if (s >= k || seen[s]) invalid(std::string(where) + ": perm is not a permutation");
    seen[s] = true;
  }
}

inline MapShape conjugation_shape(const std::vector<std::size_t>& perm_in, const std::vector<ComplexMatrix>& us,
                                  double unitarity_tol, const char* where) {
  const std::size_t k = us.size();
  if (k == 0) invalid(std::string(where) + ": no unitaries");
  std::vector<std::size_t> perm = perm_in;
  if (perm.empty()) {
    perm.resize(k);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
  }
  check_permutation(perm, k, where);
  std::vector<int> target(k), source(k);
  for (std::size_t j = 0; j < k; ++j) {
    const ComplexMatrix& u = us[j];
    if (u.rows() != u.cols() || u.rows() < 1) invalid(std::string(where) + ": unitaries must be square");
    if (!all_finite(u)) invalid(std::string(where) + ": unitary has non-finite entries");
    const double defect = (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
    if (defect > unitarity_tol) {
      std::ostringstream os;
      os << where << ": unitary " << j << " violates unitarity (||U^H U - I||_F = " << defect << ")";
      invalid(os.str());
    }
    target[j] = static_cast<int>(u.rows());
  }
  for (std::size_t i = 0; i < k; ++i) source[i] = target[perm[i]];
  return {AlgebraSpec(source), AlgebraSpec(target)};
}

}  // namespace detail

inline std::vector<std::size_t> identity_perm(std::size_t k) {
  std::vector<std::size_t> p(k);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return p;
}

inline std::vector<std::size_t> inverse_perm(const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  return inv;
}

/// Source and target specs implied by a descriptor; throws DescriptorInvalid
/// naming the first violated invariant.
inline MapShape infer_shape(const MapDescriptor& d, double unitarity_tol = kDescriptorUnitarityTol) {
  return std::visit(
      [&](const auto& node) -> MapShape {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, UnitaryConjugation>) {
          return detail::conjugation_shape(node.perm, node.unitaries, unitarity_tol, "unitary");
        } else if constexpr (std::is_same_v<T, TransposeConjugation>) {
          return detail::conjugation_shape(node.perm, node.unitaries, unitarity_tol, "transpose");
        } else if constexpr (std::is_same_v<T, PowerMap>) {
          if (node.exponents.empty()) detail::invalid("power: no exponents");
          for (double p : node.exponents)
            if (!(p > 0.0) || !std::isfinite(p)) detail::invalid("power: exponents must be positive");
          AlgebraSpec s(std::vector<int>(node.exponents.size(), 1));
          return {s, s};
        } else if constexpr (std::is_same_v<T, DirectSum>) {
          if (node.parts.empty()) detail::invalid("direct_sum: no parts");
          std::size_t total = 0;
          for (const auto& part : node.parts) total += part.source_blocks.size();
          std::vector<int> source(total, 0), target(total, 0);
          std::size_t target_total = 0;
          for (const auto& part : node.parts) {
            if (!part.map) detail::invalid("direct_sum: part without map");
            const MapShape sub = infer_shape(*part.map, unitarity_tol);
            if (part.source_blocks.size() != sub.source.block_count() ||
                part.target_blocks.size() != sub.target.block_count())
              detail::invalid("direct_sum: block ranges do not match part specs");
            target_total += part.target_blocks.size();
            for (std::size_t j = 0; j < part.source_blocks.size(); ++j) {
              const std::size_t g = part.source_blocks[j];
              if (g >= total || source[g] != 0) detail::invalid("direct_sum: source blocks overlap or out of range");
              source[g] = sub.source.block_size(j);
            }
            for (std::size_t j = 0; j < part.target_blocks.size(); ++j) {
              const std::size_t g = part.target_blocks[j];
              if (g >= total || target[g] != 0) detail::invalid("direct_sum: target blocks overlap or out of range");
              target[g] = sub.target.block_size(j);
            }
          }
          if (target_total != total) detail::invalid("direct_sum: source and target block counts differ");
          return {AlgebraSpec(source), AlgebraSpec(target)};
        } else {
          if (!node.outer || !node.inner) detail::invalid("compose: missing operand");
          const MapShape inner = infer_shape(*node.inner, unitarity_tol);
          const MapShape outer = infer_shape(*node.outer, unitarity_tol);
          if (!(inner.target == outer.source))
            detail::invalid("compose: inner target " + to_string(inner.target) + " does not chain into outer source " +
                            to_string(outer.source));
          return {inner.source, outer.target};
        }
      },
      d.node);
}

/// Evaluates a descriptor on any element of its source algebra (the maps
/// are linear except PowerMap, which expects effects).
inline AlgebraElement evaluate(const MapDescriptor& d, const AlgebraElement& x) {
  return std::visit(
      [&](const auto& node) -> AlgebraElement {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, UnitaryConjugation> || std::is_same_v<T, TransposeConjugation>) {
          constexpr bool transpose = std::is_same_v<T, TransposeConjugation>;
          const std::size_t k = node.unitaries.size();
          const std::vector<std::size_t> perm = node.perm.empty() ? identity_perm(k) : node.perm;
          std::vector<int> target_sizes;
          for (const auto& u : node.unitaries) target_sizes.push_back(static_cast<int>(u.rows()));
          AlgebraElement out = AlgebraElement::zero(AlgebraSpec(target_sizes));
          for (std::size_t i = 0; i < k; ++i) {
            const ComplexMatrix& u = node.unitaries[perm[i]];
            const ComplexMatrix xi = transpose ? ComplexMatrix(x.part(i).transpose()) : x.part(i);
            out.set_part(perm[i], u * xi * u.adjoint());
          }
          return out;
        } else if constexpr (std::is_same_v<T, PowerMap>) {
          std::vector<ComplexMatrix> parts;
          for (std::size_t i = 0; i < node.exponents.size(); ++i) {
            // same round-off floor as psd_power
            const double raw = x.part(i)(0, 0).real();
            const double v = raw <= kZeroEigenvalueUlps * std::numeric_limits<double>::epsilon() ? 0.0 : raw;
            ComplexMatrix m(1, 1);
            m(0, 0) = v == 0.0 ? 0.0 : std::pow(v, node.exponents[i]);
            parts.push_back(std::move(m));
          }
          return {x.spec(), std::move(parts)};
        } else if constexpr (std::is_same_v<T, DirectSum>) {
          const MapShape shape = infer_shape(d, std::numeric_limits<double>::infinity());
          AlgebraElement out = AlgebraElement::zero(shape.target);
          for (const auto& part : node.parts) {
            const AlgebraElement local = evaluate(*part.map, extract(x, part.source_blocks));
            for (std::size_t j = 0; j < part.target_blocks.size(); ++j)
              out.set_part(part.target_blocks[j], local.part(j));
          }
          return out;
        } else {
          return evaluate(*node.outer, evaluate(*node.inner, x));
        }
      },
      d.node);
}

// ---------------------------------------------------------------------------

/// An effect-to-effect map known only through evaluation. The descriptor,
/// when present, is ground truth for tests; analysis never reads it.
struct SequentialMapOracle {
  AlgebraSpec source;
  AlgebraSpec target;
  std::function<AlgebraElement(const AlgebraElement&)> eval;
  std::optional<MapDescriptor> descriptor;
};

inline SequentialMapOracle build_map(const MapDescriptor& d, double unitarity_tol = kDescriptorUnitarityTol) {
  const MapShape shape = infer_shape(d, unitarity_tol);
  return {shape.source, shape.target, [d](const AlgebraElement& x) { return evaluate(d, x); }, d};
}

inline SequentialMapOracle identity_map(const AlgebraSpec& spec) {
  std::vector<ComplexMatrix> us;
  for (int n : spec.blocks()) us.push_back(ComplexMatrix::Identity(n, n));
  return build_map(MapDescriptor{UnitaryConjugation{identity_perm(spec.block_count()), std::move(us)}});
}

/// Evaluates the oracle and validates that it returned an effect on its
/// target; violations are reported, never clamped.
inline Effect apply_map(const SequentialMapOracle& m, const Effect& a, const ToleranceConfig& cfg = {}) {
  require_same_spec(a.spec(), m.source);
  AlgebraElement out = m.eval(a.element());
  if (!(out.spec() == m.target))
    throw Error(ErrorCode::SpecMismatch, "oracle returned spec " + to_string(out.spec()) + ", expected " +
                                             to_string(m.target));
  try {
    return Effect::checked(std::move(out), cfg);
  } catch (const Error& e) {
    throw Error(ErrorCode::OracleRangeError, std::string("oracle output is not an effect: ") + e.what());
  }
}

struct PlacedOracle {
  SequentialMapOracle map;
  std::vector<std::size_t> source_blocks;
  std::vector<std::size_t> target_blocks;
};

/// Direct sum; each part acts on its listed source blocks and writes to its
/// listed target blocks.
inline SequentialMapOracle direct_sum(std::vector<PlacedOracle> parts) {
  if (parts.empty()) throw Error(ErrorCode::SpecMismatch, "direct sum of nothing");
  std::size_t total = 0;
  for (const auto& p : parts) total += p.source_blocks.size();
  std::vector<int> source(total, 0), target(total, 0);
  std::size_t target_total = 0;
  for (const auto& p : parts) {
    if (p.source_blocks.size() != p.map.source.block_count() ||
        p.target_blocks.size() != p.map.target.block_count())
      throw Error(ErrorCode::SpecMismatch, "block ranges do not match part specs");
    target_total += p.target_blocks.size();
    for (std::size_t j = 0; j < p.source_blocks.size(); ++j) {
      const std::size_t g = p.source_blocks[j];
      if (g >= total || source[g] != 0) throw Error(ErrorCode::SpecMismatch, "source block ranges overlap");
      source[g] = p.map.source.block_size(j);
    }
    for (std::size_t j = 0; j < p.target_blocks.size(); ++j) {
      const std::size_t g = p.target_blocks[j];
      if (g >= total || target[g] != 0) throw Error(ErrorCode::SpecMismatch, "target block ranges overlap");
      target[g] = p.map.target.block_size(j);
    }
  }
  if (target_total != total) throw Error(ErrorCode::SpecMismatch, "block counts differ");

  SequentialMapOracle out;
  out.source = AlgebraSpec(source);
  out.target = AlgebraSpec(target);
  const AlgebraSpec tspec = out.target;
  out.eval = [parts, tspec](const AlgebraElement& x) {
    AlgebraElement y = AlgebraElement::zero(tspec);
    for (const auto& p : parts) {
      const AlgebraElement local = p.map.eval(extract(x, p.source_blocks));
      for (std::size_t j = 0; j < p.target_blocks.size(); ++j) y.set_part(p.target_blocks[j], local.part(j));
    }
    return y;
  };
  if (std::all_of(parts.begin(), parts.end(), [](const PlacedOracle& p) { return p.map.descriptor.has_value(); })) {
    DirectSum ds;
    for (const auto& p : parts)
      ds.parts.push_back({p.source_blocks, p.target_blocks, std::make_shared<const MapDescriptor>(*p.map.descriptor)});
    out.descriptor = MapDescriptor{std::move(ds)};
  }
  return out;
}

/// Direct sum with parts laid out on consecutive blocks.
inline SequentialMapOracle direct_sum(const std::vector<SequentialMapOracle>& maps) {
  std::vector<PlacedOracle> parts;
  std::size_t s = 0, t = 0;
  for (const auto& m : maps) {
    PlacedOracle p{m, {}, {}};
    for (std::size_t j = 0; j < m.source.block_count(); ++j) p.source_blocks.push_back(s++);
    for (std::size_t j = 0; j < m.target.block_count(); ++j) p.target_blocks.push_back(t++);
    parts.push_back(std::move(p));
  }
  return direct_sum(std::move(parts));
}

/// outer o inner
inline SequentialMapOracle compose(const SequentialMapOracle& outer, const SequentialMapOracle& inner) {
  require_same_spec(inner.target, outer.source);
  SequentialMapOracle out;
  out.source = inner.source;
  out.target = outer.target;
  out.eval = [o = outer.eval, i = inner.eval](const AlgebraElement& x) { return o(i(x)); };
  if (outer.descriptor && inner.descriptor)
    out.descriptor = MapDescriptor{Composition{std::make_shared<const MapDescriptor>(*outer.descriptor),
                                               std::make_shared<const MapDescriptor>(*inner.descriptor)}};
  return out;
}

// ---------------------------------------------------------------------------

struct AxiomSample {
  double max_residual = 0.0;  // max ||phi(A o B) - phi(A) o phi(B)||_F
  std::optional<AlgebraElement> worst_a;
  std::optional<AlgebraElement> worst_b;
};

/// Samples phi(A o B) = phi(A) o phi(B) over cfg.trials seeded pairs. Every
/// fourth trial draws A as a projection to exercise singular square roots.
inline AxiomSample sample_sequential_axiom(const SequentialMapOracle& m, const ToleranceConfig& cfg = {}) {
  AxiomSample out;
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t s = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
    const Effect a = (t % 4 == 3) ? random_projection(m.source, derive_seed(s, 0)).effect()
                                  : random_effect(m.source, derive_seed(s, 0));
    const Effect b = random_effect(m.source, derive_seed(s, 1));
    const Effect lhs = apply_map(m, seq_product(a, b), cfg);
    const Effect rhs = seq_product(apply_map(m, a, cfg), apply_map(m, b, cfg));
    const double r = distance(lhs, rhs);
    if (!out.worst_a || r > out.max_residual) {
      out.max_residual = r;
      out.worst_a = a.element();
      out.worst_b = b.element();
    }
  }
  return out;
}

}  // namespace seqiso
