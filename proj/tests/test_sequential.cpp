#include <gtest/gtest.h>

#include "seqiso/sequential.hpp"

using namespace seqiso;

namespace {

Effect effect2(double a, double b, double c, double d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return Effect::checked({AlgebraSpec({2}), {m}});
}

ErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvariantError;
}

}  // namespace

TEST(SeqProduct, HandComputedExample) {
  // sqrt(diag(1, 0.25)) = diag(1, 0.5), then diag(1,.5) B diag(1,.5)
  const Effect a = effect2(1, 0, 0, 0.25), b = effect2(0.5, 0.5, 0.5, 0.5);
  const Effect expected = effect2(0.5, 0.25, 0.25, 0.125);
  EXPECT_LE(distance(seq_product(a, b), expected), 1e-15);
}

TEST(SeqProduct, IdentityAndZero) {
  const AlgebraSpec s({1, 2, 3});
  const Effect one = scalar_element(s, 1.0), zero = scalar_element(s, 0.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Effect a = random_effect(s, seed);
    EXPECT_LE(distance(seq_product(one, a), a), 1e-14);
    EXPECT_LE(distance(seq_product(a, one), a), 1e-14);
    EXPECT_LE(seq_product(a, zero).element().norm(), 1e-15);
  }
}

TEST(SeqProduct, ProjectionIsIdempotent) {
  const AlgebraSpec s({2, 3});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Projection p = random_projection(s, seed);
    EXPECT_LE(distance(seq_product(p, p), p), 1e-9);
  }
}

TEST(SeqProduct, CommutativeSpecIsOrdinaryProduct) {
  const AlgebraSpec s({1, 1, 1, 1});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Effect a = random_effect(s, seed), b = random_effect(s, seed + 50);
    EXPECT_LE(distance(seq_product(a, b), a.element() * b.element()), 1e-15);
  }
}

TEST(SeqProduct, ResultIsEffect) {
  const AlgebraSpec s({3, 2});
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    EXPECT_NO_THROW(Effect::checked(seq_product(random_effect(s, seed), random_effect(s, seed + 1)).element()));
}

TEST(SeqProduct, SpecMismatch) {
  EXPECT_EQ(error_of([] { seq_product(scalar_element(AlgebraSpec({2}), 0.5), scalar_element(AlgebraSpec({1, 1}), 0.5)); }),
            ErrorCode::SpecMismatch);
}

TEST(Commutation, Examples) {
  const CommutationWitness diag = commutation_witness(effect2(0.3, 0, 0, 0.9), effect2(0.7, 0, 0, 0.1));
  EXPECT_LE(diag.seq_residual, 1e-12);
  EXPECT_LE(diag.comm_residual, 1e-12);

  const CommutationWitness nc = commutation_witness(effect2(1, 0, 0, 0.25), effect2(0.5, 0.5, 0.5, 0.5));
  EXPECT_GT(nc.seq_residual, 0.01);
  EXPECT_GT(nc.comm_residual, 0.01);
  // AB - BA = [[0, 0.375], [-0.375, 0]]
  EXPECT_NEAR(nc.comm_residual, 0.375 * std::sqrt(2.0), 1e-15);

  const AlgebraSpec s({3});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CommutationWitness w = commutation_witness(scalar_element(s, 0.3), random_effect(s, seed));
    EXPECT_LE(w.seq_residual, 1e-12);
    EXPECT_LE(w.comm_residual, 1e-12);
  }
}

TEST(ProjRelations, Examples) {
  const AlgebraSpec s({2});
  const Effect p = effect2(1, 0, 0, 0);
  const auto r1 = proj_relations(p, scalar_element(s, 1.0));
  EXPECT_TRUE(r1.leq);
  const auto r2 = proj_relations(p, effect2(0, 0, 0, 1));
  EXPECT_TRUE(r2.orthogonal);
  EXPECT_FALSE(r2.leq);
  const auto r3 = proj_relations(p, effect2(0.5, 0.5, 0.5, 0.5));
  EXPECT_FALSE(r3.leq);
  EXPECT_FALSE(r3.orthogonal);
  // Q o P = QPQ = [[.25,.25],[.25,.25]]
  EXPECT_NEAR(r3.leq_residual, std::sqrt(0.75 * 0.75 + 3 * 0.25 * 0.25), 1e-12);
}

TEST(ProjRelations, Errors) {
  const AlgebraSpec s({2});
  EXPECT_EQ(error_of([&] { proj_relations(scalar_element(s, 0.5), scalar_element(s, 1.0)); }), ErrorCode::NotProjection);
  EXPECT_EQ(error_of([&] { proj_relations(scalar_element(s, 1.0), scalar_element(AlgebraSpec({1}), 1.0)); }),
            ErrorCode::SpecMismatch);
}

TEST(ProjRelations, OrthogonalMatchesDirectProduct) {
  const AlgebraSpec s({1, 2, 3});
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Projection p = random_projection(s, seed);
    const Projection q = seed % 2 ? random_projection(s, seed + 1000)
                                  : Projection::trusted(AlgebraElement::identity(s) - p.element());
    const auto rel = proj_relations(p, q);
    EXPECT_EQ(rel.orthogonal, (p.element() * q.element()).norm() <= 1e-9) << seed;
    EXPECT_EQ(rel.leq, distance(q.element() * p.element(), p) <= 1e-9) << seed;
  }
}

TEST(Commutation, EquivalenceOnSampledPairs) {
  for (int n = 2; n <= 5; ++n) {
    const AlgebraSpec s({n});
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const Effect a = random_effect(s, seed);
      const Effect b = seed % 2 ? random_effect(s, seed + 500)
                                : Effect::trusted(a.element().map_parts([](const ComplexMatrix& m) { return psd_sqrt(m); }));
      const CommutationWitness w = commutation_witness(a, b);
      EXPECT_EQ(w.seq_residual <= 1e-9, w.comm_residual <= 1e-9);
    }
  }
}
