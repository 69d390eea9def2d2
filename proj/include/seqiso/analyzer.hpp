#pragma once

// Blind decomposition of a sequential isomorphism phi into a multiplicative
// part on the commutative summand and a *-isomorphism / *-antiisomorphism on
// the rest, certified by sampled lemma-level obligations.

#include <optional>
#include <string>

#include "seqiso/extension.hpp"
#include "seqiso/io.hpp"

namespace seqiso {

struct LemmaResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool skipped = false;
  std::vector<AlgebraElement> witness;  // worst-case inputs
};

struct LemmaReport {
  std::vector<LemmaResult> entries;

  bool all_pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const LemmaResult& r) { return r.pass; });
  }
  const LemmaResult& at(std::string_view name) const {
    for (const auto& e : entries)
      if (e.name == name) return e;
    throw Error(ErrorCode::BadIndex, "no lemma named " + std::string(name));
  }
};

namespace detail {

class WorstCase {
 public:
  explicit WorstCase(std::string name, double tol) { r_.name = std::move(name), r_.tolerance = tol; }

  void observe(double residual, std::initializer_list<const AlgebraElement*> inputs) {
    if (r_.witness.empty() || residual > r_.max_residual) {
      r_.max_residual = std::max(r_.max_residual, residual);
      r_.witness.clear();
      for (const auto* x : inputs) r_.witness.push_back(*x);
    }
  }

  LemmaResult finish() {
    r_.pass = r_.max_residual <= r_.tolerance;
    return r_;
  }

  static LemmaResult skipped(std::string name, double tol) {
    LemmaResult r;
    r.name = std::move(name);
    r.tolerance = tol;
    r.skipped = true;
    return r;
  }

 private:
  LemmaResult r_;
};

inline Effect map_effect(const SequentialMapOracle& m, const AlgebraElement& x, const ToleranceConfig& cfg) {
  return apply_map(m, Effect::trusted(x), cfg);
}

inline std::vector<double> random_unit_scalars(std::size_t k, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out(k);
  for (auto& v : out) v = u(gen);
  return out;
}

inline AlgebraElement central_from_scalars(const AlgebraSpec& spec, const std::vector<double>& z) {
  AlgebraElement out = AlgebraElement::zero(spec);
  for (std::size_t i = 0; i < spec.block_count(); ++i)
    out.set_part(i, z[i] * ComplexMatrix::Identity(spec.block_size(i), spec.block_size(i)));
  return out;
}

// Two projections built in a common random basis: nested, orthogonal, or
// (mode 2) independent.
inline std::pair<Projection, Projection> projection_pair(const AlgebraSpec& spec, std::uint64_t seed, int mode) {
  if (mode == 2) return {random_projection(spec, derive_seed(seed, 0)), random_projection(spec, derive_seed(seed, 1))};
  std::mt19937_64 gen(derive_seed(seed, 2));
  std::uniform_int_distribution<int> pick(0, 2);
  std::vector<std::vector<int>> mp, mq;
  for (int n : spec.blocks()) {
    std::vector<int> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const int r = pick(gen);
      if (mode == 0) {  // P <= Q
        b[static_cast<std::size_t>(k)] = r > 0;
        a[static_cast<std::size_t>(k)] = r > 1;
      } else {  // PQ = 0
        a[static_cast<std::size_t>(k)] = r == 1;
        b[static_cast<std::size_t>(k)] = r == 2;
      }
    }
    mp.push_back(a);
    mq.push_back(b);
  }
  const std::uint64_t useed = derive_seed(seed, 3);
  return {projection_from_masks(spec, mp, useed), projection_from_masks(spec, mq, useed)};
}

// Abelian projection: in each block either zero or a random rank-one
// projection, according to `support`.
inline Projection abelian_projection(const AlgebraSpec& spec, const std::vector<int>& support, std::uint64_t seed) {
  AlgebraElement p = AlgebraElement::zero(spec);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  for (std::size_t i = 0; i < spec.block_count(); ++i) {
    if (!support[i]) continue;
    const int n = spec.block_size(i);
    Eigen::VectorXcd v(n);
    for (int k = 0; k < n; ++k) {
      const double re = normal(gen);
      const double im = normal(gen);
      v(k) = Complex(re, im);
    }
    v.normalize();
    p.set_part(i, v * v.adjoint());
  }
  return Projection::trusted(std::move(p));
}

inline double relation_mismatch(bool before, double before_res, bool after, double after_res) {
  return (before || after) ? std::max(before_res, after_res) : 0.0;
}

}  // namespace detail

namespace detail {

inline auto effect_map(const SequentialMapOracle& m, const ToleranceConfig& cfg) {
  return [&m, cfg](const AlgebraElement& x) { return map_effect(m, x, cfg); };
}

}  // namespace detail

/// Projections map to projections; order and orthogonality agree
/// before and after mapping.
inline LemmaResult lemma_projection_relations(const SequentialMapOracle& m, const ToleranceConfig& cfg = {}) {
  const double tol = cfg.eq_tol;
  const auto phi = detail::effect_map(m, cfg);
  detail::WorstCase w("projection_relations", tol);
  for (int t = 0; t < cfg.trials; ++t) {
    const auto [p, q] = detail::projection_pair(m.source, derive_seed(cfg.seed ^ 0x3, static_cast<std::uint64_t>(t)), t % 3);
    const Effect fp = phi(p), fq = phi(q);
    double r = std::max(detail::idempotent_defect(fp), detail::idempotent_defect(fq));
    const double leq_before = distance(seq_product(q, p), p);
    const double leq_after = distance(seq_product(fq, fp), fp);
    const double orth_before = seq_product(p, q).element().norm();
    const double orth_after = seq_product(fp, fq).element().norm();
    r = std::max(r, detail::relation_mismatch(leq_before <= tol, leq_before, leq_after <= tol, leq_after));
    r = std::max(r, detail::relation_mismatch(orth_before <= tol, orth_before, orth_after <= tol, orth_after));
    w.observe(r, {&p.element(), &q.element()});
  }
  return w.finish();
}

/// phi(ZP + Z'P') = phi(ZP) + phi(Z'P') for central effects Z, Z' and
/// orthogonal projections P, P'.
inline LemmaResult lemma_central_additivity(const SequentialMapOracle& m, const ToleranceConfig& cfg = {}) {
  const AlgebraSpec& src = m.source;
  const auto phi = detail::effect_map(m, cfg);
  detail::WorstCase w("central_additivity", cfg.eq_tol);
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t s = derive_seed(cfg.seed ^ 0x4, static_cast<std::uint64_t>(t));
    const auto [p, pp] = detail::projection_pair(src, s, 1);
    const AlgebraElement z = detail::central_from_scalars(src, detail::random_unit_scalars(src.block_count(), derive_seed(s, 10)));
    const AlgebraElement zz = detail::central_from_scalars(src, detail::random_unit_scalars(src.block_count(), derive_seed(s, 11)));
    const AlgebraElement a = z * p.element(), b = zz * pp.element();
    const double r = distance(phi(a + b), phi(a).element() + phi(b).element());
    w.observe(r, {&z, &p.element(), &zz, &pp.element()});
  }
  return w.finish();
}

/// A and B commute iff phi(A) and phi(B) do. Even trials use B = A^2.
inline LemmaResult lemma_commutation(const SequentialMapOracle& m, const ToleranceConfig& cfg = {}) {
  const double tol = cfg.eq_tol;
  const auto phi = detail::effect_map(m, cfg);
  detail::WorstCase w("commutation", tol);
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t s = derive_seed(cfg.seed ^ 0x5, static_cast<std::uint64_t>(t));
    const Effect a = random_effect(m.source, derive_seed(s, 0));
    Effect b = random_effect(m.source, derive_seed(s, 1));
    if (t % 2 == 0) b = Effect::trusted(a.element().map_parts([](const ComplexMatrix& x) { return psd_power(x, 2.0); }));
    const CommutationWitness before = commutation_witness(a, b);
    const CommutationWitness after = commutation_witness(phi(a), phi(b));
    const double r = detail::relation_mismatch(before.comm_residual <= tol, before.comm_residual,
                                               after.comm_residual <= tol, after.comm_residual);
    w.observe(r, {&a.element(), &b.element()});
  }
  return w.finish();
}

/// phi(lA) = l phi(A) for l in {0.1, ..., 0.9} and A supported on the
/// noncommutative summand, plus phi(P/2) = phi(P)/2 for its unit P. Skipped
/// when every block has size 1.
inline LemmaResult lemma_homogeneity(const SequentialMapOracle& m, const ToleranceConfig& cfg = {}) {
  const AlgebraSpec& src = m.source;
  const std::vector<std::size_t> nc = noncommutative_blocks(src);
  if (nc.empty()) return detail::WorstCase::skipped("homogeneity", cfg.eq_tol);
  const auto phi = detail::effect_map(m, cfg);
  detail::WorstCase w("homogeneity", cfg.eq_tol);
  AlgebraElement sector = AlgebraElement::zero(src);
  for (std::size_t i : nc) sector.set_part(i, ComplexMatrix::Identity(src.block_size(i), src.block_size(i)));
  const AlgebraElement half = 0.5 * sector;
  w.observe(distance(phi(half), 0.5 * phi(sector).element()), {&half});
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t s = derive_seed(cfg.seed ^ 0x6, static_cast<std::uint64_t>(t));
    const AlgebraElement a = random_effect(src, s).element() * sector;
    const AlgebraElement fa = phi(a);
    double r = 0.0;
    for (int l = 1; l <= 9; ++l) {
      const double lambda = 0.1 * l;
      r = std::max(r, distance(phi(lambda * a), lambda * fa));
    }
    w.observe(r, {&a});
  }
  return w.finish();
}

/// Abelian projections map to abelian projections and equality of
/// central carriers is preserved. Flag mismatches report 1.
inline LemmaResult lemma_abelian(const SequentialMapOracle& m, const ToleranceConfig& cfg = {}) {
  const AlgebraSpec& src = m.source;
  const auto phi = detail::effect_map(m, cfg);
  detail::WorstCase w("abelian_projections", cfg.eq_tol);
  ToleranceConfig loose = cfg;
  loose.eq_tol = std::max(cfg.eq_tol, 1e-8);
  auto abelian = [&](const AlgebraElement& x) { return classify_element(x, loose).is_abelian_projection; };
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t s = derive_seed(cfg.seed ^ 0x9, static_cast<std::uint64_t>(t));
    const std::size_t k = src.block_count();
    std::mt19937_64 gen(derive_seed(s, 0));
    std::bernoulli_distribution coin(0.5);
    std::vector<int> sp(k), sq(k);
    for (std::size_t i = 0; i < k; ++i) sp[i] = coin(gen);
    const bool equivalent = coin(gen);
    for (std::size_t i = 0; i < k; ++i) sq[i] = equivalent ? sp[i] : coin(gen);
    const Projection p = detail::abelian_projection(src, sp, derive_seed(s, 1));
    const Projection q = detail::abelian_projection(src, sq, derive_seed(s, 2));
    const Projection general = random_projection(src, derive_seed(s, 3));

    const Effect fp = phi(p), fq = phi(q), fg = phi(general);
    double r = std::max({detail::idempotent_defect(fp), detail::idempotent_defect(fq), detail::idempotent_defect(fg)});
    if (r <= cfg.eq_tol) {
      if (abelian(p) != abelian(fp) || abelian(q) != abelian(fq) || abelian(general) != abelian(fg)) r = 1.0;
      const bool eq_before = distance(central_carrier(p, loose), central_carrier(q, loose)) == 0.0;
      const bool eq_after = distance(central_carrier(fp, loose), central_carrier(fq, loose)) == 0.0;
      if (eq_before != eq_after) r = 1.0;
    }
    w.observe(r, {&p.element(), &q.element(), &general.element()});
  }
  return w.finish();
}

/// All lemma-level obligations a sequential isomorphism meets. Relation
/// checks report the larger of the two residuals whenever the relation holds
/// on either side.
inline LemmaReport lemma_suite(const SequentialMapOracle& m, const ToleranceConfig& cfg = {}) {
  validate(cfg);
  LemmaReport report;
  report.entries.push_back(lemma_projection_relations(m, cfg));
  report.entries.push_back(lemma_central_additivity(m, cfg));
  report.entries.push_back(lemma_commutation(m, cfg));
  report.entries.push_back(lemma_homogeneity(m, cfg));
  report.entries.push_back(lemma_abelian(m, cfg));
  return report;
}

// ---------------------------------------------------------------------------

/// Source block -> target block, read off the images of the minimal central
/// projections. Each image must itself be a minimal central projection of
/// the same size.
inline std::vector<std::size_t> block_correspondence(const SequentialMapOracle& m, const ToleranceConfig& cfg = {}) {
  const AlgebraSpec& src = m.source;
  const AlgebraSpec& tgt = m.target;
  if (src.block_count() != tgt.block_count())
    throw Error(ErrorCode::CorrespondenceFailed,
                "source " + to_string(src) + " and target " + to_string(tgt) + " have different block counts");
  const double tol = std::max(cfg.eq_tol, 1e-8);
  std::vector<std::size_t> out(src.block_count());
  std::vector<bool> taken(tgt.block_count(), false);
  for (std::size_t i = 0; i < src.block_count(); ++i) {
    const Effect image = detail::map_effect(m, block_projection(src, i), cfg);
    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::CorrespondenceFailed,
                  "central projection of block " + std::to_string(i + 1) + " " + why + "; image " +
                      to_json(image.element()).dump());
    };
    const ElementFlags flags = classify_element(image, cfg);
    if (!flags.is_projection || !is_central(image, tol)) fail("does not map to a central projection");
    std::size_t found = tgt.block_count();
    for (std::size_t j = 0; j < tgt.block_count(); ++j)
      if (image.element().part(j).norm() > 0.5) {
        if (found != tgt.block_count()) fail("maps onto several blocks");
        found = j;
      }
    if (found == tgt.block_count()) fail("maps to zero");
    if (tgt.block_size(found) != src.block_size(i)) fail("maps to a block of different size");
    if (taken[found]) fail("shares its image block with another block");
    taken[found] = true;
    out[i] = found;
  }
  return out;
}

/// Oracle restricted to the listed source blocks (zero elsewhere), read back
/// on the listed target blocks.
inline SequentialMapOracle restrict_oracle(const SequentialMapOracle& m, const std::vector<std::size_t>& source_blocks,
                                           const std::vector<std::size_t>& target_blocks) {
  SequentialMapOracle out;
  out.source = m.source.restrict(source_blocks);
  out.target = m.target.restrict(target_blocks);
  out.eval = [eval = m.eval, full = m.source, source_blocks, target_blocks](const AlgebraElement& x) {
    return extract(eval(embed(full, source_blocks, x)), target_blocks);
  };
  return out;
}

// ---------------------------------------------------------------------------

enum class Verdict { Decomposed, Partial, Failed };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Decomposed: return "decomposed";
    case Verdict::Partial: return "partial";
    case Verdict::Failed: return "failed";
  }
  return "unknown";
}

/// Commutative recovery expressed in global block indices.
struct CommutativePart {
  std::vector<std::size_t> source_blocks;  // size-1 source blocks, ascending
  std::vector<std::size_t> target_blocks;  // their images, ascending
  std::vector<std::size_t> perm;           // target_blocks[j] is fed by source block perm[j]
  std::vector<double> exponents;           // exponent at target_blocks[j]
  double residual = 0.0;
};

struct DecompositionReport {
  Verdict verdict = Verdict::Failed;
  std::string reason;
  std::vector<std::size_t> correspondence;  // per source block
  std::vector<BlockKind> kinds;             // per source block
  std::vector<ComplexMatrix> unitaries;     // per source block (1x1 identity on scalar blocks)
  std::optional<CommutativePart> commutative_part;
  std::optional<JordanSplit> jordan_part;  // local to the noncommutative sector
  std::optional<ExtensionDiagnostics> extension;
  std::optional<double> fixed_scalar;
  bool extends_to_star_maps = false;
  LemmaReport lemmas;
  std::vector<std::pair<std::string, double>> residuals;
  double max_residual = 0.0;
  ToleranceConfig config;
};

inline constexpr double kCertifiedResidual = 1e-6;
inline constexpr double kFixedScalarTol = 1e-9;
inline constexpr double kUnitExponentTol = 1e-7;
inline constexpr double kScalarProbes[] = {0.25, 0.5, 0.75};

/// Map rebuilt from a report: power map plus block permutation on the
/// commutative summand, unitary / transpose conjugation on each other block.
inline MapDescriptor recovered_descriptor(const DecompositionReport& r) {
  DirectSum ds;
  if (r.commutative_part && !r.commutative_part->source_blocks.empty()) {
    const CommutativePart& c = *r.commutative_part;
    const std::size_t k = c.source_blocks.size();
    std::vector<std::size_t> sigma(k);  // local source -> local target
    std::vector<double> exps(k);
    for (std::size_t j = 0; j < k; ++j) {
      const auto it = std::find(c.source_blocks.begin(), c.source_blocks.end(), c.perm[j]);
      const auto i = static_cast<std::size_t>(it - c.source_blocks.begin());
      sigma[i] = j;
      exps[i] = c.exponents[j];
    }
    auto power = make_descriptor(PowerMap{exps});
    auto move = make_descriptor(UnitaryConjugation{sigma, std::vector<ComplexMatrix>(k, ComplexMatrix::Identity(1, 1))});
    ds.parts.push_back({c.source_blocks, c.target_blocks, make_descriptor(Composition{move, power})});
  }
  for (std::size_t i = 0; i < r.kinds.size(); ++i) {
    if (r.kinds[i] == BlockKind::Scalar) continue;
    const std::vector<ComplexMatrix> us{r.unitaries[i]};
    DescriptorPtr d = r.kinds[i] == BlockKind::Multiplicative ? make_descriptor(UnitaryConjugation{{0}, us})
                                                              : make_descriptor(TransposeConjugation{{0}, us});
    ds.parts.push_back({{i}, {r.correspondence[i]}, d});
  }
  return {std::move(ds)};
}

/// Runs the full pipeline. Mathematical mismatches end in a failed verdict
/// with a reason; only oracle evaluation errors propagate.
inline DecompositionReport decompose(const SequentialMapOracle& m, const ToleranceConfig& cfg = {}) {
  validate(cfg);
  DecompositionReport rep;
  rep.config = cfg;
  const AlgebraSpec& src = m.source;
  auto note = [&](std::string name, double v) {
    rep.residuals.emplace_back(std::move(name), v);
    rep.max_residual = std::max(rep.max_residual, v);
  };
  auto fail = [&](std::string why) {
    rep.verdict = Verdict::Failed;
    rep.reason = std::move(why);
    return rep;
  };

  rep.lemmas = lemma_suite(m, cfg);
  for (const auto& l : rep.lemmas.entries)
    if (!l.skipped) note("lemma_" + l.name, l.max_residual);

  try {
    rep.correspondence = block_correspondence(m, cfg);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CorrespondenceFailed) throw;
    return fail(e.what());
  }
  rep.kinds.assign(src.block_count(), BlockKind::Scalar);
  rep.unitaries.assign(src.block_count(), ComplexMatrix::Identity(1, 1));

  auto sector = [&](const std::vector<std::size_t>& blocks) {
    std::vector<std::size_t> images;
    for (std::size_t i : blocks) images.push_back(rep.correspondence[i]);
    std::sort(images.begin(), images.end());
    return images;
  };
  // phi must keep each summand inside its image summand.
  auto leakage = [&](const std::vector<std::size_t>& blocks, const std::vector<std::size_t>& images) {
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const Effect e = random_effect(src.restrict(blocks), derive_seed(cfg.seed ^ 0x1EA, static_cast<std::uint64_t>(t)));
      const AlgebraElement full = detail::map_effect(m, embed(src, blocks, e), cfg).element();
      const AlgebraElement outside = full - embed(m.target, images, extract(full, images));
      worst = std::max(worst, outside.norm());
    }
    return worst;
  };

  bool commutative_ok = true;
  std::string commutative_reason;
  const std::vector<std::size_t> comm = commutative_blocks(src);
  if (!comm.empty()) {
    const std::vector<std::size_t> images = sector(comm);
    note("commutative_leakage", leakage(comm, images));
    try {
      const CommutativeRecovery rec = commutative_recover(restrict_oracle(m, comm, images), cfg);
      CommutativePart part{comm, images, {}, rec.exponents, rec.residual};
      for (std::size_t j = 0; j < images.size(); ++j) {
        part.perm.push_back(comm[rec.perm[j]]);
        if (rep.correspondence[comm[rec.perm[j]]] != images[j])
          return fail("commutative permutation disagrees with the central-projection correspondence");
      }
      note("commutative_recovery", rec.residual);
      rep.commutative_part = std::move(part);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RecoveryFailed) throw;
      commutative_ok = false;
      commutative_reason = e.what();
    }
  }

  const std::vector<std::size_t> nc = noncommutative_blocks(src);
  if (!nc.empty()) {
    const std::vector<std::size_t> images = sector(nc);
    note("noncommutative_leakage", leakage(nc, images));
    const SequentialMapOracle local = restrict_oracle(m, nc, images);
    try {
      const LinearExtension ext = extend_to_linear(local, cfg);
      rep.extension = ext.diagnostics();
      note("extension_additivity", ext.diagnostics().additivity_residual);
      note("extension_agreement", ext.diagnostics().agreement_residual);
      note("extension_jordan", ext.diagnostics().jordan_residual);
      note("extension_unitality", ext.diagnostics().unitality_residual);
      if (ext.diagnostics().order_violations > 0) return fail("extension violates order on sampled pairs");
      JordanSplit split = split_jordan(ext, cfg);
      note("jordan_split", split.residual);
      for (std::size_t a = 0; a < nc.size(); ++a) {
        const std::size_t i = nc[a];
        if (images[split.correspondence[a]] != rep.correspondence[i])
          return fail("Jordan split correspondence disagrees with the central-projection correspondence");
        rep.kinds[i] = split.kinds[a];
        rep.unitaries[i] = split.unitaries[a];
      }
      rep.jordan_part = std::move(split);
    } catch (const NotEIsomorphismError& e) {
      rep.extension = e.diagnostics();
      return fail(e.what());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotJordan && e.code() != ErrorCode::AmbiguousKind) throw;
      return fail(e.what());
    }
  }

  for (double lambda : kScalarProbes) {
    const Effect image = detail::map_effect(m, scalar_element(src, lambda), cfg);
    if (distance(image, scalar_element(m.target, lambda)) <= kFixedScalarTol) {
      rep.fixed_scalar = lambda;
      break;
    }
  }
  bool unit_exponents = true;
  if (rep.commutative_part)
    for (double p : rep.commutative_part->exponents) unit_exponents = unit_exponents && std::abs(p - 1.0) <= kUnitExponentTol;
  rep.extends_to_star_maps = commutative_ok && unit_exponents;
  if (rep.fixed_scalar && !comm.empty() && commutative_ok && !unit_exponents)
    return fail("phi fixes a nontrivial scalar but the commutative exponents differ from 1");

  if (!commutative_ok) {
    rep.verdict = rep.max_residual <= kCertifiedResidual ? Verdict::Partial : Verdict::Failed;
    rep.reason = commutative_reason;
    return rep;
  }

  // Certify: the map rebuilt from the recovered data must reproduce phi.
  const SequentialMapOracle rebuilt = build_map(recovered_descriptor(rep), 1e-8);
  double reassembly = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Effect e = random_effect(src, derive_seed(cfg.seed ^ 0xC3, static_cast<std::uint64_t>(t)));
    reassembly = std::max(reassembly, distance(apply_map(rebuilt, e, cfg), detail::map_effect(m, e, cfg)));
  }
  note("reassembly", reassembly);

  if (!rep.lemmas.all_pass()) {
    for (const auto& l : rep.lemmas.entries)
      if (!l.pass) return fail("lemma " + l.name + " failed with residual " + std::to_string(l.max_residual));
  }
  if (rep.max_residual > kCertifiedResidual) {
    std::ostringstream os;
    os << "worst residual " << rep.max_residual << " exceeds " << kCertifiedResidual;
    return fail(os.str());
  }
  rep.verdict = Verdict::Decomposed;
  return rep;
}

}  // namespace seqiso
