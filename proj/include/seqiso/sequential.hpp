#pragma once

// The sequential product A o B = A^{1/2} B A^{1/2} and residual-returning
// predicates for commutativity, order and orthogonality.

#include "seqiso/algebra.hpp"

namespace seqiso {

/// Blockwise A^{1/2} B A^{1/2}.
inline Effect seq_product(const Effect& a, const Effect& b) {
  require_same_spec(a.spec(), b.spec());
  std::vector<ComplexMatrix> parts;
  parts.reserve(a.element().block_count());
  for (std::size_t i = 0; i < a.element().block_count(); ++i) {
    const ComplexMatrix root = psd_sqrt(a.element().part(i));
    parts.push_back(hermitian_part(root * b.element().part(i) * root));
  }
  return Effect::trusted({a.spec(), std::move(parts)});
}

struct CommutationWitness {
  double seq_residual = 0.0;   // ||A o B - B o A||_F
  double comm_residual = 0.0;  // ||AB - BA||_F
};

inline CommutationWitness commutation_witness(const Effect& a, const Effect& b) {
  require_same_spec(a.spec(), b.spec());
  CommutationWitness w;
  w.seq_residual = distance(seq_product(a, b), seq_product(b, a));
  w.comm_residual = distance(a.element() * b.element(), b.element() * a.element());
  return w;
}

struct ProjectionRelations {
  bool leq = false;
  bool orthogonal = false;
  double leq_residual = 0.0;         // ||Q o P - P||_F
  double orthogonal_residual = 0.0;  // ||P o Q||_F
};

/// P <= Q iff Q o P = P; PQ = 0 iff P o Q = 0.
inline ProjectionRelations proj_relations(const AlgebraElement& p, const AlgebraElement& q,
                                          const ToleranceConfig& cfg = {}) {
  require_same_spec(p.spec(), q.spec());
  const Projection pp = Projection::checked(p, cfg);
  const Projection qq = Projection::checked(q, cfg);
  ProjectionRelations r;
  r.leq_residual = distance(seq_product(qq, pp), pp);
  r.orthogonal_residual = seq_product(pp, qq).element().norm();
  r.leq = r.leq_residual <= cfg.eq_tol;
  r.orthogonal = r.orthogonal_residual <= cfg.eq_tol;
  return r;
}

}  // namespace seqiso
