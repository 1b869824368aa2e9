#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qlab/linalg.hpp"
#include "test_support.hpp"

namespace qlab {
namespace {

using testing::max_abs_diff;

TEST(BasicOps, PauliXSquaresToIdentity) {
  EXPECT_EQ(pauli::x() * pauli::x(), ComplexMatrix::identity(2));
}

TEST(BasicOps, PauliZIsTraceless) { EXPECT_EQ(trace(pauli::z()), complex(0.0)); }

TEST(BasicOps, AdjointConjugatesAndTransposes) {
  const ComplexMatrix a{{0.0, I}, {0.0, 0.0}};
  const ComplexMatrix expected{{0.0, 0.0}, {-I, 0.0}};
  EXPECT_EQ(adjoint(a), expected);
}

TEST(BasicOps, ScalarSumAndNorm) {
  const auto m = pauli::x() + complex(2.0) * pauli::z();
  const ComplexMatrix expected{{2.0, 1.0}, {1.0, -2.0}};
  EXPECT_EQ(m, expected);
  EXPECT_DOUBLE_EQ(frobenius_norm(m), std::sqrt(10.0));
}

TEST(BasicOps, ShapeMismatchThrows) {
  EXPECT_THROW(pauli::x() * ComplexMatrix(3, 3), DimensionError);
  EXPECT_THROW(pauli::x() + ComplexMatrix(2, 3), DimensionError);
  EXPECT_THROW(trace(ComplexMatrix(2, 3)), DimensionError);
  EXPECT_THROW(ComplexMatrix(2, 2, {1.0, 2.0, 3.0}), DimensionError);
}

TEST(BasicOps, RejectsNonFiniteEntries) {
  EXPECT_THROW(ComplexMatrix(1, 1, {complex(std::nan(""), 0.0)}), PreconditionError);
  EXPECT_THROW(ComplexMatrix(1, 1, {complex(0.0, INFINITY)}), PreconditionError);
}

TEST(EigHermitian, DiagonalInput) {
  const auto e = eig_hermitian(pauli::z());
  EXPECT_DOUBLE_EQ(e.eigenvalues[0], -1.0);
  EXPECT_DOUBLE_EQ(e.eigenvalues[1], 1.0);
  EXPECT_EQ(e.eigenvectors, (ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}));
}

TEST(EigHermitian, PauliXGivesHadamardVectors) {
  const auto e = eig_hermitian(pauli::x());
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(e.eigenvalues[0], -1.0, 1e-15);
  EXPECT_NEAR(e.eigenvalues[1], 1.0, 1e-15);
  const ComplexMatrix expected{{r, r}, {-r, r}};
  EXPECT_LT(max_abs_diff(e.eigenvectors, expected), 1e-15);
}

TEST(EigHermitian, CharacteristicPolynomialRoots) {
  const auto e = eig_hermitian(ComplexMatrix{{2.0, 1.0}, {1.0, 2.0}});
  EXPECT_NEAR(e.eigenvalues[0], 1.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues[1], 3.0, 1e-14);
}

TEST(EigHermitian, RejectsNonHermitian) {
  EXPECT_THROW(eig_hermitian(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}), PreconditionError);
  EXPECT_THROW(eig_hermitian(ComplexMatrix(2, 3)), DimensionError);
}

TEST(EigHermitian, RecordsSymmetrizationResidual) {
  ComplexMatrix h{{1.0, 0.5}, {0.5, 2.0}};
  h(0, 1) += 1e-12;
  const auto e = eig_hermitian(h);
  EXPECT_NEAR(e.symmetrization_residual, std::sqrt(2.0) * 1e-12, 1e-16);
}

TEST(EigHermitian, ComplexTwoByTwoMatchesClosedForm) {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto h = testing::random_hermitian(2, rng, 3.0);
    const auto oracle = testing::eigenvalues_2x2(h);
    const auto e = eig_hermitian(h);
    EXPECT_NEAR(e.eigenvalues[0], oracle[0], 1e-13);
    EXPECT_NEAR(e.eigenvalues[1], oracle[1], 1e-13);
  }
}

TEST(EigHermitian, PropertiesOnRandomMatrices) {
  SplitMix64 rng(2024);
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 16u, 32u, 64u}) {
    const auto h = testing::random_hermitian(n, rng, 2.0);
    const auto e = eig_hermitian(h);
    ASSERT_EQ(e.eigenvalues.size(), n);
    for (std::size_t k = 1; k < n; ++k) EXPECT_LE(e.eigenvalues[k - 1], e.eigenvalues[k]);
    const auto& v = e.eigenvectors;
    EXPECT_LT(frobenius_norm(adjoint(v) * v - ComplexMatrix::identity(n)), 1e-12) << n;
    EXPECT_LT(frobenius_norm(e.reconstruct() - h), 1e-10) << n;
    // Phase convention: first significant component real and positive.
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i)
        if (std::abs(v(i, k)) > 1e-8) {
          EXPECT_GT(v(i, k).real(), 0.0);
          EXPECT_EQ(v(i, k).imag(), 0.0);
          break;
        }
    }
  }
}

TEST(EigHermitian, DegenerateClusterProjectorIsExact) {
  // diag(1, 1, 3) rotated by a random unitary; compare the degenerate projector.
  SplitMix64 rng(99);
  const auto u = testing::random_unitary(3, rng);
  const auto h = u * ComplexMatrix::diagonal({1.0, 1.0, 3.0}) * adjoint(u);
  const auto e = eig_hermitian(h);
  EXPECT_NEAR(e.eigenvalues[0], 1.0, 1e-13);
  EXPECT_NEAR(e.eigenvalues[1], 1.0, 1e-13);
  EXPECT_NEAR(e.eigenvalues[2], 3.0, 1e-13);
  ComplexMatrix projector(3, 3);
  for (std::size_t k = 0; k < 2; ++k) {
    ComplexMatrix col(3, 1);
    for (std::size_t i = 0; i < 3; ++i) col(i, 0) = e.eigenvectors(i, k);
    projector = projector + outer_product(col, col);
  }
  ComplexMatrix oracle(3, 3);
  for (std::size_t k = 0; k < 2; ++k) {
    ComplexMatrix col(3, 1);
    for (std::size_t i = 0; i < 3; ++i) col(i, 0) = u(i, k);
    oracle = oracle + outer_product(col, col);
  }
  EXPECT_LT(frobenius_norm(projector - oracle), 1e-12);
}

TEST(EigHermitian, SpectrumInvariantUnderBasisChange) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = testing::random_hermitian(6, rng);
    const auto c = testing::random_unitary(6, rng);
    const auto a = eig_hermitian(h).eigenvalues;
    const auto b = eig_hermitian(c * h * adjoint(c)).eigenvalues;
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-10);
  }
}

TEST(EigHermitian, ZeroMatrix) {
  const auto e = eig_hermitian(ComplexMatrix(3, 3));
  for (double l : e.eigenvalues) EXPECT_EQ(l, 0.0);
  EXPECT_EQ(e.eigenvectors, ComplexMatrix::identity(3));
}

TEST(ExpHermitian, HalfPiRotation) {
  const auto u = exp_hermitian_scaled(pauli::x(), complex(0.0, -std::numbers::pi / 2));
  EXPECT_LT(max_abs_diff(u, complex(0.0, -1.0) * pauli::x()), 1e-15);
}

TEST(ExpHermitian, ZeroScaleIsIdentity) {
  SplitMix64 rng(11);
  const auto h = testing::random_hermitian(4, rng);
  EXPECT_LT(max_abs_diff(exp_hermitian_scaled(h, 0.0), ComplexMatrix::identity(4)), 1e-14);
}

TEST(ExpHermitian, DiagonalExponential) {
  const auto m = exp_hermitian_scaled(ComplexMatrix::diagonal({0.0, 1.0}), -1.0);
  EXPECT_EQ(m(0, 0), complex(1.0));
  EXPECT_DOUBLE_EQ(m(1, 1).real(), std::exp(-1.0));
  EXPECT_EQ(m(0, 1), complex(0.0));
}

TEST(ExpHermitian, ForwardBackwardIsIdentityAndUnitary) {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = testing::random_hermitian(5, rng, 4.0);
    const double t = 10.0 * rng.uniform01();
    const auto fwd = exp_hermitian_scaled(h, complex(0.0, -t));
    const auto back = exp_hermitian_scaled(h, complex(0.0, t));
    EXPECT_LT(frobenius_norm(fwd * back - ComplexMatrix::identity(5)), 1e-10);
    EXPECT_LT(frobenius_norm(fwd * adjoint(fwd) - ComplexMatrix::identity(5)), 1e-10);
  }
}

TEST(ExpHermitian, RealNegativeScaleIsPositiveDefinite) {
  SplitMix64 rng(17);
  const auto h = testing::random_hermitian(4, rng);
  const auto m = exp_hermitian_scaled(h, -2.0);
  EXPECT_TRUE(is_hermitian(m));
  for (double l : eig_hermitian(m).eigenvalues) EXPECT_GT(l, 0.0);
}

TEST(TensorProduct, IdentityTimesPauliX) {
  const auto k = tensor_product(ComplexMatrix::identity(2), pauli::x());
  const ComplexMatrix expected{{0.0, 1.0, 0.0, 0.0},
                               {1.0, 0.0, 0.0, 0.0},
                               {0.0, 0.0, 0.0, 1.0},
                               {0.0, 0.0, 1.0, 0.0}};
  EXPECT_EQ(k, expected);
}

TEST(TensorProduct, BasisOrdering) {
  const auto v = tensor_product(ComplexMatrix::basis_vector(2, 0), ComplexMatrix::basis_vector(2, 1));
  EXPECT_EQ(v, ComplexMatrix::column({0.0, 1.0, 0.0, 0.0}));
}

TEST(TensorProduct, PauliZTensorPauliZ) {
  EXPECT_EQ(tensor_product(pauli::z(), pauli::z()), ComplexMatrix::diagonal({1.0, -1.0, -1.0, 1.0}));
}

TEST(TensorProduct, AssociativeOnIntegerMatrices) {
  SplitMix64 rng(3);
  auto int_matrix = [&](std::size_t r, std::size_t c) {
    ComplexMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        m(i, j) = complex(static_cast<double>(rng.next() % 7) - 3.0,
                          static_cast<double>(rng.next() % 5) - 2.0);
    return m;
  };
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = int_matrix(2, 3), b = int_matrix(3, 1), c = int_matrix(2, 2);
    EXPECT_EQ(tensor_product(tensor_product(a, b), c), tensor_product(a, tensor_product(b, c)));
  }
}

TEST(PartialTrace, ProductStateFactorizes) {
  SplitMix64 rng(21);
  const auto rs = testing::random_density(3, rng);
  const auto re = testing::random_density(4, rng);
  EXPECT_LT(max_abs_diff(partial_trace_env(tensor_product(rs, re), 3, 4), rs), 1e-15);
}

TEST(PartialTrace, BellStateGivesMaximallyMixed) {
  const double r = 1.0 / std::sqrt(2.0);
  const auto bell = ComplexMatrix::column({r, 0.0, 0.0, r});
  const auto reduced = partial_trace_env(outer_product(bell, bell), 2, 2);
  EXPECT_LT(max_abs_diff(reduced, complex(0.5) * ComplexMatrix::identity(2)), 1e-15);
}

TEST(PartialTrace, ProductBasisProjector) {
  const auto v = ComplexMatrix::basis_vector(4, 0);
  EXPECT_EQ(partial_trace_env(outer_product(v, v), 2, 2), ComplexMatrix::diagonal({1.0, 0.0}));
}

TEST(PartialTrace, PreservesTraceAndChecksDimensions) {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = testing::random_matrix(6, 6, rng);
    EXPECT_LT(std::abs(trace(partial_trace_env(m, 2, 3)) - trace(m)), 1e-12);
    EXPECT_LT(std::abs(trace(partial_trace_env(m, 3, 2)) - trace(m)), 1e-12);
  }
  EXPECT_THROW(partial_trace_env(ComplexMatrix(6, 6), 2, 2), DimensionError);
  EXPECT_THROW(partial_trace_env(ComplexMatrix(4, 2), 2, 2), DimensionError);
}

}  // namespace
}  // namespace qlab
