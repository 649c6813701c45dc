#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qpragma/subspace.hpp"

using namespace qpragma;
using oracle::vec;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Subspace span(int d, std::initializer_list<Vector> vs) { return orthonormalize(d, vs); }

Vector e(int d, int i) { return Vector::Unit(d, i); }

void expect_invariants(const Subspace& v) {
  const Matrix& b = v.basis();
  const Matrix& p = v.projector();
  if (v.dim() > 0) {
    EXPECT_LE(oracle::max_abs(b.adjoint() * b - Matrix::Identity(v.dim(), v.dim())), 1e-9);
  }
  EXPECT_LE(oracle::max_abs(p * p - p), 1e-9);
  EXPECT_LE(oracle::max_abs(p - p.adjoint()), 1e-9);
  EXPECT_GE(v.dim(), 0);
  EXPECT_LE(v.dim(), v.ambient_dim());
}

}  // namespace

TEST(Orthonormalize, DependentPairCollapses) {
  const Subspace v = span(2, {vec({1.0, 0.0}), vec({2.0, 0.0})});
  EXPECT_EQ(v.dim(), 1);
  EXPECT_TRUE(equals(v, span(2, {e(2, 0)})));
  expect_invariants(v);
}

TEST(Orthonormalize, EmptyListIsZero) {
  const Subspace v = orthonormalize(3, std::span<const Vector>{});
  EXPECT_EQ(v.dim(), 0);
  EXPECT_TRUE(v.is_zero());
  EXPECT_EQ(v.ambient_dim(), 3);
}

TEST(Orthonormalize, SkewPairSpansPlane) {
  const std::vector<Vector> vs = {vec({kInvSqrt2, kInvSqrt2}), vec({1.0, 0.0})};
  // Gram determinant 1 * 1 - |1/sqrt2|^2 = 1/2.
  EXPECT_NEAR(oracle::gram_determinant(vs), 0.5, 1e-12);
  EXPECT_EQ(oracle::gram_rank(vs), 2);
  const Subspace v = orthonormalize(2, vs);
  EXPECT_EQ(v.dim(), 2);
  EXPECT_TRUE(v.is_full());
}

TEST(Orthonormalize, Errors) {
  EXPECT_THROW(span(2, {vec({1.0, 0.0, 0.0})}), DimensionError);
  EXPECT_THROW(span(2, {vec({std::nan(""), 0.0})}), DomainError);
  EXPECT_THROW(span(2, {vec({INFINITY, 0.0})}), DomainError);
}

TEST(Orthonormalize, DeterministicForFixedOrder) {
  std::mt19937_64 rng(5);
  std::vector<Vector> vs;
  for (int i = 0; i < 3; ++i) vs.push_back(gaussian_vector(5, rng));
  const Subspace a = orthonormalize(5, vs);
  const Subspace b = orthonormalize(5, vs);
  EXPECT_EQ(oracle::max_abs(a.basis() - b.basis()), 0.0);
}

TEST(Complement, CoordinateAxes) {
  EXPECT_TRUE(equals(complement(span(2, {e(2, 0)})), span(2, {e(2, 1)})));
}

TEST(Complement, FullGoesToZero) {
  EXPECT_TRUE(complement(Subspace::full(4)).is_zero());
  EXPECT_TRUE(complement(Subspace::zero(4)).is_full());
}

TEST(Complement, DiagonalRay) {
  const Subspace v = span(2, {vec({kInvSqrt2, kInvSqrt2})});
  const Subspace c = complement(v);
  EXPECT_EQ(c.dim(), 1);
  EXPECT_LE(oracle::max_abs(v.projector() + c.projector() - Matrix::Identity(2, 2)), 1e-12);
  EXPECT_TRUE(equals(c, span(2, {vec({kInvSqrt2, -kInvSqrt2})})));
}

TEST(Complement, DimensionAddsUp) {
  for (int d = 1; d <= 6; ++d) {
    for (int k = 0; k <= d; ++k) {
      const Subspace v = random_subspace(d, k, static_cast<std::uint64_t>(10 * d + k));
      const Subspace c = complement(v);
      EXPECT_EQ(c.dim(), d - k);
      expect_invariants(c);
      EXPECT_LE(oracle::max_abs(v.projector() + c.projector() - Matrix::Identity(d, d)), 1e-12);
    }
  }
}

TEST(Meet, OrthogonalAtoms) {
  EXPECT_TRUE(meet(span(2, {e(2, 0)}), span(2, {e(2, 1)})).is_zero());
}

TEST(Meet, Idempotent) {
  const Subspace v = random_subspace(4, 2, std::uint64_t{3});
  EXPECT_TRUE(equals(meet(v, v), v));
}

TEST(Meet, CoordinatePlanes) {
  const Subspace v = span(3, {e(3, 0), e(3, 1)});
  const Subspace w = span(3, {e(3, 1), e(3, 2)});
  const Matrix expected = oracle::nullspace_intersection(v.basis(), w.basis());
  const Subspace got = meet(v, w);
  EXPECT_EQ(got.dim(), 1);
  EXPECT_LE(oracle::max_abs(got.projector() - expected), 1e-9);
  EXPECT_TRUE(equals(got, span(3, {e(3, 1)})));
}

TEST(Meet, AgreesWithNullspaceOracleOnRandomPairs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 5);
    // Force a nontrivial intersection half of the time.
    const Subspace common = random_subspace(d, 1, rng);
    Subspace v = random_subspace(d, static_cast<int>(rng() % static_cast<std::uint64_t>(d + 1)), rng);
    Subspace w = random_subspace(d, static_cast<int>(rng() % static_cast<std::uint64_t>(d + 1)), rng);
    if (trial % 2 == 0) {
      v = join(v, common);
      w = join(w, common);
    }
    const Matrix expected = oracle::nullspace_intersection(v.basis(), w.basis());
    EXPECT_LE(oracle::max_abs(meet(v, w).projector() - expected), 1e-8) << "trial " << trial;
  }
}

TEST(Meet, AmbientMismatch) {
  EXPECT_THROW(meet(Subspace::full(2), Subspace::full(3)), DimensionError);
  EXPECT_THROW(join(Subspace::full(2), Subspace::full(3)), DimensionError);
  EXPECT_THROW(includes(Subspace::full(2), Subspace::full(3)), DimensionError);
}

TEST(Join, CoordinateAxes) {
  EXPECT_TRUE(equals(join(span(3, {e(3, 0)}), span(3, {e(3, 1)})), span(3, {e(3, 0), e(3, 1)})));
}

TEST(Join, ZeroIsIdentity) {
  const Subspace v = random_subspace(5, 3, std::uint64_t{8});
  EXPECT_TRUE(equals(join(v, Subspace::zero(5)), v));
}

TEST(Join, SkewRaysFillPlane) {
  const Subspace v = span(2, {vec({1.0, 0.0})});
  const Subspace w = span(2, {vec({kInvSqrt2, kInvSqrt2})});
  EXPECT_EQ(oracle::gram_rank({v.basis().col(0), w.basis().col(0)}), 2);
  EXPECT_TRUE(join(v, w).is_full());
}

TEST(Includes, BottomBelowEverything) {
  EXPECT_TRUE(includes(random_subspace(3, 1, std::uint64_t{2}), Subspace::zero(3)));
}

TEST(Includes, SkewRayNotIncluded) {
  const Subspace v = span(2, {e(2, 0)});
  const Vector diag = vec({kInvSqrt2, kInvSqrt2});
  EXPECT_NEAR(v.residual(diag), kInvSqrt2, 1e-15);
  EXPECT_FALSE(includes(v, span(2, {diag})));
}

TEST(Includes, AxisInPlane) {
  EXPECT_TRUE(includes(span(3, {e(3, 0), e(3, 1)}), span(3, {e(3, 0)})));
  EXPECT_FALSE(includes(span(3, {e(3, 0)}), span(3, {e(3, 0), e(3, 1)})));
}

TEST(Equals, PhaseEquivalentBases) {
  EXPECT_TRUE(equals(span(2, {vec({1.0, 0.0})}), span(2, {vec({Scalar(0, 1), 0.0})})));
  EXPECT_FALSE(equals(span(2, {e(2, 0)}), span(2, {e(2, 1)})));
}

TEST(Equals, DoubleComplementOverSeeds) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int d = 1 + static_cast<int>(seed % 6);
    const int k = static_cast<int>(seed % static_cast<std::uint64_t>(d + 1));
    const Subspace v = random_subspace(d, k, seed);
    EXPECT_TRUE(equals(complement(complement(v)), v)) << "seed " << seed;
  }
}

TEST(RandomSubspace, DeterministicAndSized) {
  const Subspace a = random_subspace(6, 3, std::uint64_t{99});
  const Subspace b = random_subspace(6, 3, std::uint64_t{99});
  EXPECT_EQ(a.dim(), 3);
  EXPECT_EQ(oracle::max_abs(a.projector() - b.projector()), 0.0);
  EXPECT_THROW(random_subspace(2, 3, std::uint64_t{0}), DimensionError);
  expect_invariants(a);
}

TEST(CanonicalCompare, OrdersByDimensionThenEntries) {
  const Subspace x = span(2, {e(2, 0)});
  const Subspace y = span(2, {e(2, 1)});
  EXPECT_LT(canonical_compare(Subspace::zero(2), x), 0);
  EXPECT_LT(canonical_compare(x, Subspace::full(2)), 0);
  EXPECT_EQ(canonical_compare(x, span(2, {vec({Scalar(0, 1), 0.0})})), 0);
  EXPECT_EQ(canonical_compare(x, y), -canonical_compare(y, x));
}

// Lattice-law property tests over random subspaces.

class LatticeLaws : public ::testing::TestWithParam<int> {};

TEST_P(LatticeLaws, HoldOnRandomTriples) {
  const int d = GetParam();
  std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(d));
  auto any = [&] { return random_subspace(d, static_cast<int>(rng() % static_cast<std::uint64_t>(d + 1)), rng); };
  for (int trial = 0; trial < 60; ++trial) {
    const Subspace v = any(), w = any(), u = any();
    // Commutativity, associativity, absorption.
    EXPECT_TRUE(equals(meet(v, w), meet(w, v)));
    EXPECT_TRUE(equals(join(v, w), join(w, v)));
    EXPECT_TRUE(equals(meet(meet(v, w), u), meet(v, meet(w, u))));
    EXPECT_TRUE(equals(join(join(v, w), u), join(v, join(w, u))));
    EXPECT_TRUE(equals(meet(v, join(v, w)), v));
    EXPECT_TRUE(equals(join(v, meet(v, w)), v));
    // De Morgan.
    EXPECT_TRUE(equals(complement(join(v, w)), meet(complement(v), complement(w))));
    // Orthomodular law for a nested pair.
    const Subspace inner = random_subspace_of(w, static_cast<int>(rng() % static_cast<std::uint64_t>(w.dim() + 1)), rng);
    ASSERT_TRUE(includes(w, inner));
    EXPECT_TRUE(equals(w, join(inner, meet(w, complement(inner)))));
    // Atomicity: a basis column spans an atom below v.
    if (!v.is_zero()) {
      const Subspace atom = orthonormalize(d, {Vector(v.basis().col(0))});
      EXPECT_EQ(atom.dim(), 1);
      EXPECT_TRUE(includes(v, atom));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Dims, LatticeLaws, ::testing::Values(2, 3, 4, 6));

TEST(LatticeLaws, DistributivityFailsInPlane) {
  const Subspace v = span(2, {e(2, 0)});
  const Subspace w = span(2, {e(2, 1)});
  const Subspace u = span(2, {vec({kInvSqrt2, kInvSqrt2})});
  const Subspace lhs = meet(u, join(v, w));
  const Subspace rhs = join(meet(u, v), meet(u, w));
  EXPECT_EQ(lhs.dim(), 1);
  EXPECT_EQ(rhs.dim(), 0);
  EXPECT_FALSE(equals(lhs, rhs));
}
