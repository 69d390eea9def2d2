#include <gtest/gtest.h>

#include "seqiso/algebra.hpp"

using namespace seqiso;

namespace {

template <class F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvariantError;
}

AlgebraElement single(const ComplexMatrix& m) { return {AlgebraSpec({static_cast<int>(m.rows())}), {m}}; }

ComplexMatrix mat2(double a, double b, double c, double d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST(Spec, Invariants) {
  const AlgebraSpec s({1, 2, 3});
  EXPECT_EQ(s.block_count(), 3u);
  EXPECT_EQ(s.linear_dimension(), 1 + 4 + 9);
  EXPECT_FALSE(s.is_commutative());
  EXPECT_TRUE(AlgebraSpec({1, 1}).is_commutative());
  EXPECT_EQ(error_of([] { AlgebraSpec(std::vector<int>{}); }), ErrorCode::InvalidSpec);
  EXPECT_EQ(error_of([] { AlgebraSpec({2, 0}); }), ErrorCode::InvalidSpec);
  EXPECT_EQ(error_of([] { AlgebraSpec({-1}); }), ErrorCode::InvalidSpec);
  const std::size_t idx[] = {2, 0};
  EXPECT_EQ(s.restrict(idx), AlgebraSpec({3, 1}));
}

TEST(Element, ShapeChecked) {
  const AlgebraSpec s({1, 2});
  EXPECT_EQ(error_of([&] { AlgebraElement(s, {ComplexMatrix::Zero(1, 1)}); }), ErrorCode::SpecMismatch);
  EXPECT_EQ(error_of([&] { AlgebraElement(s, {ComplexMatrix::Zero(1, 1), ComplexMatrix::Zero(3, 3)}); }),
            ErrorCode::SpecMismatch);
  EXPECT_EQ(error_of([&] { AlgebraElement::zero(s) + AlgebraElement::zero(AlgebraSpec({2, 1})); }), ErrorCode::SpecMismatch);
}

TEST(Element, ArithmeticIsBlockwise) {
  const AlgebraSpec s({1, 2});
  const AlgebraElement x = random_element(s, 1), y = random_element(s, 2);
  const AlgebraElement p = x * y;
  for (std::size_t i = 0; i < 2; ++i) EXPECT_LE((p.part(i) - x.part(i) * y.part(i)).norm(), 1e-15);
  EXPECT_LE(distance(real_part(x) + Complex(0, 1) * imag_part(x), x), 1e-14);
  EXPECT_LE(distance(real_part(x), real_part(x).adjoint()), 1e-15);
  EXPECT_LE(distance(imag_part(x), imag_part(x).adjoint()), 1e-15);
}

TEST(Element, ApproxEqualIsScaleAware) {
  const AlgebraSpec s({2});
  const AlgebraElement big = 1e6 * AlgebraElement::identity(s);
  const AlgebraElement nudged = big + 1e-4 * AlgebraElement::identity(s);
  EXPECT_TRUE(approx_equal(big, nudged, 1e-9));
  EXPECT_FALSE(approx_equal(AlgebraElement::zero(s), 1e-4 * AlgebraElement::identity(s), 1e-9));
}

TEST(Element, EmbedExtractRoundTrip) {
  const AlgebraSpec full({1, 2, 3});
  const std::vector<std::size_t> idx{2, 0};
  const AlgebraElement local = random_element(full.restrict(idx), 5);
  const AlgebraElement e = embed(full, idx, local);
  EXPECT_EQ(e.part(1).norm(), 0.0);
  EXPECT_EQ(distance(extract(e, idx), local), 0.0);
}

TEST(ScalarElement, Examples) {
  const AlgebraSpec s({2, 3});
  EXPECT_EQ(distance(scalar_element(s, 1.0), AlgebraElement::identity(s)), 0.0);
  EXPECT_EQ(scalar_element(s, 0.0).element().norm(), 0.0);
  const Effect h = scalar_element(AlgebraSpec({1, 2}), 0.5);
  EXPECT_EQ(h.element().part(0)(0, 0), Complex(0.5));
  EXPECT_EQ(h.element().part(1), 0.5 * ComplexMatrix::Identity(2, 2));
  EXPECT_EQ(error_of([&] { scalar_element(s, 1.5); }), ErrorCode::BadScalar);
  EXPECT_EQ(error_of([&] { scalar_element(s, -0.1); }), ErrorCode::BadScalar);
}

TEST(Classify, Examples) {
  const ElementFlags half = classify_element(single(mat2(0.5, 0, 0, 0.5)));
  EXPECT_TRUE(half.is_effect);
  EXPECT_FALSE(half.is_projection);
  EXPECT_TRUE(half.is_central);

  const ElementFlags rank1 = classify_element(single(mat2(0.5, 0.5, 0.5, 0.5)));
  EXPECT_TRUE(rank1.is_projection);
  EXPECT_TRUE(rank1.is_abelian_projection);
  EXPECT_FALSE(rank1.is_central);

  EXPECT_FALSE(classify_element(single(mat2(1.2, 0, 0, 0))).is_effect);
  EXPECT_FALSE(classify_element(single(mat2(0, 1, 0, 0))).is_effect);  // not Hermitian
  EXPECT_FALSE(classify_element(AlgebraElement::identity(AlgebraSpec({2}))).is_abelian_projection);
}

TEST(Classify, CentralMeansCommutesWithMatrixUnits) {
  const AlgebraSpec s({1, 2, 3});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    AlgebraElement x = random_element(s, seed);
    if (seed % 2 == 0)
      x = x.map_parts([](const ComplexMatrix& m) {
        return ComplexMatrix(m.trace() / double(m.rows()) * ComplexMatrix::Identity(m.rows(), m.cols()));
      });
    double worst = 0.0;
    for (std::size_t b = 0; b < s.block_count(); ++b) {
      const MatrixUnitSystem mu(s, b);
      for (int j = 0; j < mu.size(); ++j)
        for (int k = 0; k < mu.size(); ++k) worst = std::max(worst, distance(x * mu.unit(j, k), mu.unit(j, k) * x));
    }
    EXPECT_EQ(classify_element(x).is_central, worst <= 1e-9) << "seed " << seed;
    EXPECT_EQ(seed % 2 == 0, classify_element(x).is_central);
  }
}

// Abelian iff {P E P} over sampled effects E commute pairwise.
TEST(Classify, AbelianMatchesCompressedCommutativity) {
  const AlgebraSpec s({1, 2, 3});
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Projection p = random_projection(s, seed);
    std::vector<AlgebraElement> compressed;
    for (std::uint64_t t = 0; t < 20; ++t) compressed.push_back(p.element() * random_effect(s, 1000 + t).element() * p.element());
    double worst = 0.0;
    for (std::size_t a = 0; a < compressed.size(); ++a)
      for (std::size_t b = a + 1; b < compressed.size(); ++b)
        worst = std::max(worst, distance(compressed[a] * compressed[b], compressed[b] * compressed[a]));
    EXPECT_EQ(classify_element(p).is_abelian_projection, worst <= 1e-9) << "seed " << seed;
  }
}

TEST(EffectProjection, CheckedConstruction) {
  const AlgebraSpec s({2});
  EXPECT_EQ(error_of([&] { Effect::checked(single(mat2(1.2, 0, 0, 0))); }), ErrorCode::NotEffect);
  EXPECT_EQ(error_of([&] { Effect::checked(single(mat2(-0.01, 0, 0, 0))); }), ErrorCode::NotEffect);
  EXPECT_NO_THROW(Effect::checked(single(mat2(1 + 5e-11, 0, 0, -5e-11))));
  EXPECT_EQ(error_of([&] { Projection::checked(single(mat2(0.5, 0, 0, 1))); }), ErrorCode::NotProjection);
  EXPECT_NO_THROW(Projection::checked(single(mat2(0.5, 0.5, 0.5, 0.5))));
}

TEST(Center, Projections) {
  const auto two = center_projections(AlgebraSpec({2, 3}));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].element().part(0), ComplexMatrix::Identity(2, 2));
  EXPECT_EQ(two[0].element().part(1).norm(), 0.0);
  EXPECT_EQ(two[1].element().part(1), ComplexMatrix::Identity(3, 3));
  EXPECT_EQ(center_projections(AlgebraSpec({1}))[0].element().part(0)(0, 0), Complex(1.0));

  const AlgebraSpec s({1, 1, 2});
  const auto ps = center_projections(s);
  AlgebraElement sum = AlgebraElement::zero(s);
  for (std::size_t a = 0; a < ps.size(); ++a) {
    sum += ps[a].element();
    for (std::size_t b = a + 1; b < ps.size(); ++b) EXPECT_EQ((ps[a].element() * ps[b].element()).norm(), 0.0);
    EXPECT_EQ(distance(central_carrier(ps[a]), ps[a]), 0.0);
  }
  EXPECT_EQ(distance(sum, AlgebraElement::identity(s)), 0.0);
}

TEST(Center, CentralCarrier) {
  const AlgebraSpec s({2, 3});
  const Projection r1 = rank_one_projection(s, 0, Eigen::Vector2cd(1.0, Complex(0, 1)));
  const Projection c = central_carrier(r1);
  EXPECT_EQ(c.element().part(0), ComplexMatrix::Identity(2, 2));
  EXPECT_EQ(c.element().part(1).norm(), 0.0);
  EXPECT_EQ(central_carrier(AlgebraElement::zero(s)).element().norm(), 0.0);
  const Projection r2 = rank_one_projection(s, 0, Eigen::Vector2cd(1.0, -2.0));
  EXPECT_EQ(distance(central_carrier(r1), central_carrier(r2)), 0.0);
  EXPECT_EQ(error_of([&] { central_carrier(0.5 * AlgebraElement::identity(s)); }), ErrorCode::NotProjection);
}

TEST(MatrixUnits, Relations) {
  const AlgebraSpec two({2});
  const MatrixUnitSystem mu(two, 0);
  EXPECT_EQ(distance(mu.unit(0, 1) * mu.unit(1, 0), mu.unit(0, 0)), 0.0);
  EXPECT_EQ(distance(mu.unit(0, 0) + mu.unit(1, 1), AlgebraElement::identity(two)), 0.0);

  const AlgebraSpec s({2, 3});
  const MatrixUnitSystem m3 = matrix_units(s, 1);
  int count = 0;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      ++count;
      EXPECT_EQ(m3.unit(j, k).part(0).norm(), 0.0);
      EXPECT_EQ(distance(m3.unit(j, k).adjoint(), m3.unit(k, j)), 0.0);
      for (int l = 0; l < 3; ++l)
        for (int q = 0; q < 3; ++q) {
          const AlgebraElement expected = k == l ? m3.unit(j, q) : AlgebraElement::zero(s);
          EXPECT_EQ(distance(m3.unit(j, k) * m3.unit(l, q), expected), 0.0);
        }
    }
  EXPECT_EQ(count, 9);
  EXPECT_EQ(error_of([&] { matrix_units(s, 2); }), ErrorCode::BadIndex);
  EXPECT_EQ(error_of([&] { m3.unit(3, 0); }), ErrorCode::BadIndex);
}

TEST(Trace, PerBlock) {
  EXPECT_EQ(trace_per_block(AlgebraElement::identity(AlgebraSpec({3})))(0), Complex(1.0));
  EXPECT_EQ(trace_per_block(single(mat2(1, 0, 0, 0)))(0), Complex(0.5));
  const AlgebraSpec s({1, 2, 3});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const AlgebraElement x = random_element(s, seed), y = random_element(s, seed + 100);
    EXPECT_LE((trace_per_block(x * y) - trace_per_block(y * x)).norm(), 1e-10);
  }
}

TEST(TypePartition, Examples) {
  const AlgebraSpec s({1, 1, 2, 2, 3});
  const auto tp = type_partition(s);
  ASSERT_EQ(tp.size(), 3u);
  const std::map<int, std::vector<std::size_t>> expected{{1, {0, 1}}, {2, {2, 3}}, {3, {4}}};
  AlgebraElement sum = AlgebraElement::zero(s);
  for (const auto& [n, p] : tp) {
    for (std::size_t i = 0; i < s.block_count(); ++i) {
      const auto& want = expected.at(n);
      const bool inside = std::find(want.begin(), want.end(), i) != want.end();
      EXPECT_EQ(p.element().part(i).norm() > 0, inside);
    }
    sum += p.element();
  }
  EXPECT_EQ(distance(sum, AlgebraElement::identity(s)), 0.0);
  const auto single_block = type_partition(AlgebraSpec({4}));
  EXPECT_EQ(distance(single_block.at(4), AlgebraElement::identity(AlgebraSpec({4}))), 0.0);
}

TEST(Generators, ProduceValidValues) {
  const AlgebraSpec s({1, 2, 3});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_NO_THROW(Effect::checked(random_effect(s, seed).element()));
    EXPECT_NO_THROW(Projection::checked(random_projection(s, seed).element()));
    const AlgebraElement h = random_hermitian_unit_ball(s, seed);
    for (const auto& p : h.parts()) EXPECT_LE(operator_norm(p), 1.0 + 1e-12);
  }
  EXPECT_EQ(distance(random_effect(s, 4), random_effect(s, 4)), 0.0);
}

// Only the zero element has every rank-one compression vanish.
TEST(Compression, DetectsEveryNonzeroElement) {
  const AlgebraSpec s({1, 2, 3});
  EXPECT_EQ(max_rank_one_compression(AlgebraElement::zero(s), 1), 0.0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    AlgebraElement a = random_element(s, seed);
    a = (seed % 3 == 0 ? 1e-6 : 1.0) * a;
    if (seed % 2) a.set_part(2, ComplexMatrix::Zero(3, 3));
    const double c = max_rank_one_compression(a, seed);
    EXPECT_GT(c, 1e-10) << "seed " << seed;
  }
  // Off-diagonal-only parts vanish on basis probes; random probes catch them.
  AlgebraElement off = AlgebraElement::zero(AlgebraSpec({2}));
  off.set_part(0, mat2(0, 1, -1, 0));
  EXPECT_GT(max_rank_one_compression(off, 3), 1e-8);
  EXPECT_EQ(max_rank_one_compression(off, 3, 0), 0.0);
}

TEST(Tolerance, Validation) {
  ToleranceConfig cfg;
  EXPECT_NO_THROW(validate(cfg));
  cfg.eq_tol = 0.0;
  EXPECT_EQ(error_of([&] { validate(cfg); }), ErrorCode::InvariantError);
  cfg = {};
  cfg.trials = 0;
  EXPECT_EQ(error_of([&] { validate(cfg); }), ErrorCode::InvariantError);
}
