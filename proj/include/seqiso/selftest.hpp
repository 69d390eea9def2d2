#pragma once

// Acceptance suite: nine property checks run end to end on seeded inputs.

#include <chrono>
#include <functional>
#include <string>

#include "seqiso/analyzer.hpp"
#include "seqiso/generate.hpp"

namespace seqiso {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// Runs `body`, then fails the criterion if it exceeded `budget` seconds.
template <class F>
CriterionResult timed(int id, std::string name, F&& body, double budget = std::numeric_limits<double>::infinity()) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds > budget) {
    r.pass = false;
    r.detail += "; over the " + fmt(budget) + " s budget";
  }
  return r;
}

inline bool in_band(double v, double lo, double hi) { return v > lo && v <= hi; }

}  // namespace detail

inline constexpr double kBandLow = 1e-9;
inline constexpr double kBandHigh = 1e-6;

/// 1000 effect pairs per n in {2,...,5}: independent, co-diagonal, B = A^2,
/// and co-diagonal with a projection. Pairs with a residual in the band
/// (1e-9, 1e-6] are regenerated.
inline CriterionResult criterion_commutativity(std::uint64_t seed, int pairs = 1000) {
  return detail::timed(1, "commutativity equivalence", [&](CriterionResult& r) {
    int disagreements = 0, regenerated = 0, commuting = 0;
    for (int n = 2; n <= 5; ++n) {
      const AlgebraSpec spec({n});
      for (int t = 0; t < pairs; ++t) {
        for (int attempt = 0;; ++attempt) {
          const std::uint64_t s = derive_seed(derive_seed(derive_seed(seed, static_cast<std::uint64_t>(n)), static_cast<std::uint64_t>(t)),
                                              static_cast<std::uint64_t>(attempt));
          Effect a = random_effect(spec, derive_seed(s, 0));
          Effect b = random_effect(spec, derive_seed(s, 1));
          if (t % 4 != 0) {
            const ComplexMatrix u = random_unitary(n, derive_seed(s, 2));
            std::mt19937_64 gen(derive_seed(s, 3));
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            RealVector da(n), db(n);
            for (int k = 0; k < n; ++k) {
              da(k) = unit(gen);
              db(k) = t % 4 == 3 ? std::round(unit(gen)) : unit(gen);
            }
            if (t % 4 == 2) db = da.array().square();
            auto diag = [&](const RealVector& d) {
              return Effect::trusted(AlgebraElement(spec, {hermitian_part(u * d.cast<Complex>().asDiagonal() * u.adjoint())}));
            };
            a = diag(da);
            b = diag(db);
          }
          const CommutationWitness w = commutation_witness(a, b);
          if (detail::in_band(w.seq_residual, kBandLow, kBandHigh) || detail::in_band(w.comm_residual, kBandLow, kBandHigh)) {
            ++regenerated;
            if (attempt < 100) continue;
          }
          const bool seq_flag = w.seq_residual <= kBandLow;
          const bool comm_flag = w.comm_residual <= kBandLow;
          commuting += comm_flag;
          disagreements += seq_flag != comm_flag;
          break;
        }
      }
    }
    r.pass = disagreements == 0;
    r.detail = std::to_string(disagreements) + " disagreements over " + std::to_string(4 * pairs) + " pairs (" +
               std::to_string(commuting) + " commuting, " + std::to_string(regenerated) + " regenerated)";
  }, 10.0);
}

/// Sequential characterizations of P <= Q and PQ = 0 against QP = P and
/// PQ = 0 computed with ordinary products.
inline CriterionResult criterion_projection_relations(std::uint64_t seed, int pairs = 500) {
  return detail::timed(2, "projection characterizations", [&](CriterionResult& r) {
    const std::vector<AlgebraSpec> specs{AlgebraSpec({2}), AlgebraSpec({3}), AlgebraSpec({4}), AlgebraSpec({1, 2}),
                                         AlgebraSpec({2, 3})};
    const double tol = 1e-9;
    int disagreements = 0, leq_true = 0, orth_true = 0;
    for (int t = 0; t < pairs; ++t) {
      const AlgebraSpec& spec = specs[static_cast<std::size_t>(t) % specs.size()];
      const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(t));
      auto [p, q] = detail::projection_pair(spec, s, t % 4 == 3 ? 0 : t % 4);
      if (t % 4 == 3) q = p;
      const ProjectionRelations rel = proj_relations(p, q);
      const bool leq_direct = distance(q.element() * p.element(), p) <= tol;
      const bool orth_direct = (p.element() * q.element()).norm() <= tol;
      const bool leq_expected = (t % 4 == 0 || t % 4 == 3) ? true : leq_direct;
      const bool orth_expected = t % 4 == 1 ? true : orth_direct;
      disagreements += (rel.leq != leq_direct) + (rel.orthogonal != orth_direct) + (leq_direct != leq_expected) +
                       (orth_direct != orth_expected);
      leq_true += rel.leq;
      orth_true += rel.orthogonal;
    }
    r.pass = disagreements == 0;
    r.detail = std::to_string(disagreements) + " disagreements over " + std::to_string(pairs) + " pairs (" +
               std::to_string(leq_true) + " ordered, " + std::to_string(orth_true) + " orthogonal)";
  });
}

/// Linear extension of 50 random Jordan automorphisms of M_2 + M_3.
inline CriterionResult criterion_extension(std::uint64_t seed, int oracles = 50, int fresh = 200) {
  return detail::timed(3, "extension round-trip", [&](CriterionResult& r) {
    const AlgebraSpec spec({2, 3});
    double additivity = 0.0, jordan = 0.0, agreement = 0.0;
    for (int k = 0; k < oracles; ++k) {
      const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(k));
      const SequentialMapOracle m = build_map(random_jordan_descriptor(spec, derive_seed(s, 0)));
      ToleranceConfig cfg;
      cfg.seed = derive_seed(s, 1);
      const LinearExtension ext = extend_to_linear(m, cfg);
      additivity = std::max(additivity, ext.diagnostics().additivity_residual);
      jordan = std::max(jordan, ext.diagnostics().jordan_residual);
      for (int t = 0; t < fresh; ++t) {
        const Effect e = random_effect(spec, derive_seed(derive_seed(s, 2), static_cast<std::uint64_t>(t)));
        agreement = std::max(agreement, distance(ext.apply(e), m.eval(e)));
      }
    }
    r.pass = additivity <= 1e-8 && jordan <= 1e-8 && agreement <= 1e-8;
    r.detail = "additivity " + detail::fmt(additivity) + ", jordan " + detail::fmt(jordan) + ", agreement " +
               detail::fmt(agreement);
  }, 30.0);
}

/// Canonical mixed case on [1,1,2,3] over 25 pairs of random unitaries.
inline CriterionResult criterion_decomposition(std::uint64_t seed, int repeats = 25) {
  return detail::timed(4, "blind decomposition", [&](CriterionResult& r) {
    const std::vector<BlockKind> expected_kinds{BlockKind::Scalar, BlockKind::Scalar, BlockKind::Antimultiplicative,
                                                BlockKind::Multiplicative};
    int failures = 0;
    double exponent_err = 0.0, unitary_err = 0.0;
    std::string first_failure;
    for (int k = 0; k < repeats; ++k) {
      const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(k));
      const ComplexMatrix u2 = random_unitary(2, derive_seed(s, 0));
      const ComplexMatrix u3 = random_unitary(3, derive_seed(s, 1));
      ToleranceConfig cfg;
      cfg.seed = derive_seed(s, 2);
      const DecompositionReport rep = decompose(build_map(canonical_descriptor(u2, u3)), cfg);
      bool ok = rep.verdict == Verdict::Decomposed && rep.kinds == expected_kinds && rep.commutative_part &&
                rep.commutative_part->perm == std::vector<std::size_t>{0, 1};
      if (ok) {
        const auto& e = rep.commutative_part->exponents;
        const double ee = std::max(std::abs(e[0] - 0.5), std::abs(e[1] - 2.0));
        const double ue = std::max(phase_distance(rep.unitaries[2], u2), phase_distance(rep.unitaries[3], u3));
        exponent_err = std::max(exponent_err, ee);
        unitary_err = std::max(unitary_err, ue);
        ok = ee <= 1e-7 && ue <= 1e-7;
      }
      if (!ok) {
        ++failures;
        if (first_failure.empty())
          first_failure = "; repeat " + std::to_string(k) + ": " + std::string(to_string(rep.verdict)) + " " + rep.reason;
      }
    }
    r.pass = failures == 0;
    r.detail = std::to_string(failures) + "/" + std::to_string(repeats) + " failed, exponent error " +
               detail::fmt(exponent_err) + ", unitary error " + detail::fmt(unitary_err) + first_failure;
  });
}

/// Power maps with p != 1 are sequential automorphisms that are not
/// E-isomorphisms.
inline CriterionResult criterion_negative_soundness(std::uint64_t seed) {
  return detail::timed(5, "negative soundness", [&](CriterionResult& r) {
    const std::vector<std::vector<double>> cases{{2.0}, {0.5}, {0.5, 2.0}, {1.0, 1.0, 3.0}, {1.0, 1.0 + 1e-5}, {0.25, 4.0, 1.5, 0.8}};
    int missed = 0;
    double axiom = 0.0;
    for (std::size_t c = 0; c < cases.size(); ++c) {
      const SequentialMapOracle m = build_map({PowerMap{cases[c]}});
      ToleranceConfig cfg;
      cfg.seed = derive_seed(seed, c);
      cfg.trials = 500;
      axiom = std::max(axiom, sample_sequential_axiom(m, cfg).max_residual);
      try {
        extend_to_linear(m, cfg);
        ++missed;
      } catch (const NotEIsomorphismError&) {
      }
    }
    r.pass = missed == 0 && axiom <= 1e-9;
    r.detail = std::to_string(missed) + " power maps extended, axiom residual " + detail::fmt(axiom);
  });
}

inline std::vector<MapDescriptor> homogeneity_oracles(std::uint64_t seed) {
  DirectSum swap;  // exchange the two M_2 blocks
  swap.parts.push_back({{0}, {1}, make_descriptor(block_map(ConjugationKind::Unitary, 2, derive_seed(seed, 0)))});
  swap.parts.push_back({{1}, {0}, make_descriptor(block_map(ConjugationKind::Transpose, 2, derive_seed(seed, 1)))});
  return {block_map(ConjugationKind::Unitary, 2, derive_seed(seed, 2)),
          block_map(ConjugationKind::Transpose, 3, derive_seed(seed, 3)),
          random_jordan_descriptor(AlgebraSpec({2, 3}), derive_seed(seed, 4)),
          {std::move(swap)},
          random_jordan_descriptor(AlgebraSpec({1, 2, 3}), derive_seed(seed, 5)),
          random_sequential_descriptor(AlgebraSpec({1, 1, 2, 3}), derive_seed(seed, 6))};
}

/// phi(lA) = l phi(A) and phi(I/2) = I/2 on the noncommutative summand.
inline CriterionResult criterion_homogeneity(std::uint64_t seed, int samples = 50) {
  return detail::timed(6, "homogeneity and midpoint", [&](CriterionResult& r) {
    double homogeneity = 0.0, midpoint = 0.0;
    const auto oracles = homogeneity_oracles(seed);
    for (std::size_t k = 0; k < oracles.size(); ++k) {
      const SequentialMapOracle m = build_map(oracles[k]);
      const std::vector<std::size_t> nc = noncommutative_blocks(m.source);
      AlgebraElement unit = AlgebraElement::zero(m.source);
      for (std::size_t i : nc) unit.set_part(i, ComplexMatrix::Identity(m.source.block_size(i), m.source.block_size(i)));
      const AlgebraElement image_unit = m.eval(unit);
      midpoint = std::max({midpoint, distance(m.eval(0.5 * unit), 0.5 * image_unit),
                           distance(image_unit * image_unit, image_unit)});
      for (int t = 0; t < samples; ++t) {
        const AlgebraElement a = random_effect(m.source, derive_seed(derive_seed(seed, 100 + k), static_cast<std::uint64_t>(t))).element() * unit;
        const AlgebraElement fa = m.eval(a);
        for (int l = 1; l <= 9; ++l) homogeneity = std::max(homogeneity, distance(m.eval(0.1 * l * a), 0.1 * l * fa));
      }
    }
    r.pass = homogeneity <= 1e-9 && midpoint <= 1e-9;
    r.detail = std::to_string(oracles.size()) + " oracles, homogeneity " + detail::fmt(homogeneity) + ", midpoint " +
               detail::fmt(midpoint);
  });
}

/// Central additivity on sequential isomorphisms of M_2 + M_3.
inline CriterionResult criterion_central_additivity(std::uint64_t seed, int oracles = 10) {
  return detail::timed(7, "central additivity", [&](CriterionResult& r) {
    const AlgebraSpec spec({2, 3});
    std::vector<SequentialMapOracle> maps{identity_map(spec)};
    DirectSum all_transpose;
    all_transpose.parts.push_back({{0}, {0}, make_descriptor(block_map(ConjugationKind::Transpose, 2, derive_seed(seed, 0)))});
    all_transpose.parts.push_back({{1}, {1}, make_descriptor(block_map(ConjugationKind::Transpose, 3, derive_seed(seed, 1)))});
    maps.push_back(build_map({std::move(all_transpose)}));
    for (int k = 0; k < oracles; ++k)
      maps.push_back(build_map(random_jordan_descriptor(spec, derive_seed(seed, 10 + static_cast<std::uint64_t>(k)))));
    double worst = 0.0;
    for (std::size_t k = 0; k < maps.size(); ++k) {
      ToleranceConfig cfg;
      cfg.seed = derive_seed(seed, 1000 + k);
      worst = std::max(worst, lemma_central_additivity(maps[k], cfg).max_residual);
    }
    r.pass = worst <= 1e-9;
    r.detail = std::to_string(maps.size()) + " oracles x 200 samples, residual " + detail::fmt(worst);
  });
}

/// Every nonzero element has a nonvanishing rank-one compression.
inline CriterionResult criterion_compression(std::uint64_t seed, int elements = 100) {
  return detail::timed(8, "rank-one compression", [&](CriterionResult& r) {
    int vanished = 0;
    double smallest = std::numeric_limits<double>::infinity();
    for (int t = 0; t < elements; ++t) {
      const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(t));
      const AlgebraSpec spec = random_spec(derive_seed(s, 0));
      AlgebraElement a = random_element(spec, derive_seed(s, 1));
      if (t % 2 == 1) {  // support on a single block
        const std::size_t keep = static_cast<std::size_t>(t) % spec.block_count();
        for (std::size_t i = 0; i < spec.block_count(); ++i)
          if (i != keep) a.set_part(i, ComplexMatrix::Zero(spec.block_size(i), spec.block_size(i)));
      }
      const double c = max_rank_one_compression(a, derive_seed(s, 2));
      smallest = std::min(smallest, c);
      vanished += c <= 1e-8;
    }
    const AlgebraSpec zero_spec({1, 2, 3});
    const double zero = max_rank_one_compression(AlgebraElement::zero(zero_spec), seed);
    r.pass = vanished == 0 && zero <= 1e-8;
    r.detail = std::to_string(vanished) + " nonzero elements undetected (smallest max " + detail::fmt(smallest) +
               "), zero element max " + detail::fmt(zero);
  });
}

/// Spectral square root against the Denman-Beavers iteration.
inline CriterionResult criterion_sqrt_oracle(std::uint64_t seed, int matrices = 200) {
  return detail::timed(9, "square-root dual oracle", [&](CriterionResult& r) {
    double worst = 0.0;
    for (int t = 0; t < matrices; ++t) {
      const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(t));
      const int n = 1 + t % 6;
      const ComplexMatrix u = random_unitary(n, derive_seed(s, 0));
      std::mt19937_64 gen(derive_seed(s, 1));
      std::uniform_real_distribution<double> spread(-2.0, 1.0);  // eigenvalues in [1e-2, 10]
      RealVector d(n);
      for (int k = 0; k < n; ++k) d(k) = std::pow(10.0, spread(gen));
      const ComplexMatrix m = hermitian_part(u * d.cast<Complex>().asDiagonal() * u.adjoint());
      worst = std::max(worst, (psd_sqrt(m) - denman_beavers_sqrt(m)).norm());
    }
    r.pass = worst <= 1e-8;
    r.detail = std::to_string(matrices) + " matrices, max difference " + detail::fmt(worst);
  });
}

inline std::vector<CriterionResult> run_acceptance(std::uint64_t seed = 0) {
  return {criterion_commutativity(derive_seed(seed, 1)),    criterion_projection_relations(derive_seed(seed, 2)),
          criterion_extension(derive_seed(seed, 3)),        criterion_decomposition(derive_seed(seed, 4)),
          criterion_negative_soundness(derive_seed(seed, 5)), criterion_homogeneity(derive_seed(seed, 6)),
          criterion_central_additivity(derive_seed(seed, 7)), criterion_compression(derive_seed(seed, 8)),
          criterion_sqrt_oracle(derive_seed(seed, 9))};
}

inline std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail << " (" << std::fixed;
  os.precision(2);
  os << r.seconds << " s)";
  return os.str();
}

}  // namespace seqiso
