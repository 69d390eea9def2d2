#pragma once

// Seeded random sequential isomorphisms with known ground truth.

#include "seqiso/morphisms.hpp"

namespace seqiso {

enum class ConjugationKind { Unitary, Transpose };

/// Single-block *-isomorphism or *-antiisomorphism with a Haar unitary.
inline MapDescriptor block_map(ConjugationKind kind, int n, std::uint64_t seed) {
  std::vector<ComplexMatrix> us{random_unitary(n, seed)};
  if (kind == ConjugationKind::Unitary) return {UnitaryConjugation{{0}, std::move(us)}};
  return {TransposeConjugation{{0}, std::move(us)}};
}

/// Blockwise Jordan *-automorphism of `spec`: every block of size >= 2 gets
/// a random kind and unitary and may be moved to another block of the same
/// size; size-1 blocks are permuted among themselves.
inline MapDescriptor random_jordan_descriptor(const AlgebraSpec& spec, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::map<int, std::vector<std::size_t>> by_size;
  for (std::size_t i = 0; i < spec.block_count(); ++i) by_size[spec.block_size(i)].push_back(i);
  std::vector<std::size_t> target(spec.block_count());
  for (auto& [n, blocks] : by_size) {
    std::vector<std::size_t> shuffled = blocks;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    for (std::size_t a = 0; a < blocks.size(); ++a) target[blocks[a]] = shuffled[a];
  }
  std::bernoulli_distribution coin(0.5);
  DirectSum ds;
  for (std::size_t i = 0; i < spec.block_count(); ++i) {
    const auto kind = coin(gen) ? ConjugationKind::Unitary : ConjugationKind::Transpose;
    ds.parts.push_back({{i}, {target[i]},
                        std::make_shared<const MapDescriptor>(block_map(kind, spec.block_size(i), gen()))});
  }
  return {std::move(ds)};
}

/// Power map on the size-1 blocks (moved by a random permutation) plus a
/// random Jordan automorphism on the rest. Exponents are log-uniform on
/// [1/4, 4].
inline MapDescriptor random_sequential_descriptor(const AlgebraSpec& spec, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const std::vector<std::size_t> comm = commutative_blocks(spec);
  const std::vector<std::size_t> nc = noncommutative_blocks(spec);
  DirectSum ds;
  if (!comm.empty()) {
    std::uniform_real_distribution<double> log_exp(std::log(0.25), std::log(4.0));
    std::vector<double> exps;
    for (std::size_t i = 0; i < comm.size(); ++i) exps.push_back(std::exp(log_exp(gen)));
    std::vector<std::size_t> sigma = identity_perm(comm.size());
    std::shuffle(sigma.begin(), sigma.end(), gen);
    auto move = make_descriptor(
        UnitaryConjugation{sigma, std::vector<ComplexMatrix>(comm.size(), ComplexMatrix::Identity(1, 1))});
    ds.parts.push_back({comm, comm, make_descriptor(Composition{move, make_descriptor(PowerMap{exps})})});
  }
  if (!nc.empty()) {
    const MapDescriptor inner = random_jordan_descriptor(spec.restrict(nc), gen());
    for (const auto& part : std::get<DirectSum>(inner.node).parts)
      ds.parts.push_back({{nc[part.source_blocks[0]]}, {nc[part.target_blocks[0]]}, part.map});
  }
  return {std::move(ds)};
}

/// Up to `max_blocks` blocks with sizes in 1..max_size.
inline AlgebraSpec random_spec(std::uint64_t seed, int max_blocks = 4, int max_size = 3) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> count(1, max_blocks), size(1, max_size);
  std::vector<int> blocks(static_cast<std::size_t>(count(gen)));
  for (auto& b : blocks) b = size(gen);
  return AlgebraSpec(std::move(blocks));
}

/// The canonical mixed case on [1,1,2,3]: PowerMap(0.5, 2) on the
/// commutative pair, transpose conjugation on M_2, unitary conjugation on M_3.
inline MapDescriptor canonical_descriptor(const ComplexMatrix& u2, const ComplexMatrix& u3) {
  DirectSum ds;
  ds.parts.push_back({{0, 1}, {0, 1}, make_descriptor(PowerMap{{0.5, 2.0}})});
  ds.parts.push_back({{2}, {2}, make_descriptor(TransposeConjugation{{0}, {u2}})});
  ds.parts.push_back({{3}, {3}, make_descriptor(UnitaryConjugation{{0}, {u3}})});
  return {std::move(ds)};
}

}  // namespace seqiso
