#include <gtest/gtest.h>

#include "apspgemm/oracle.hpp"
#include "test_support.hpp"

using namespace apspgemm;
using testing_support::dense_mul;
using testing_support::from_rows;
using testing_support::random_matrix;
using testing_support::to_dense;
using testing_support::Values;

TEST(Reference, IdentityLeft) {
    std::mt19937_64 rng(31);
    const auto m = random_matrix(rng, 10, 7, 0.3, Values::Float);
    EXPECT_EQ(spgemm_reference(CooMatrix::identity(10), m), m);
}

TEST(Reference, HandProduct) {
    const auto a = from_rows({{1, 2}, {0, 3}});
    EXPECT_EQ(spgemm_reference(a, a), from_rows({{1, 8}, {0, 9}}));
}

TEST(Reference, EmptyOperand) {
    std::mt19937_64 rng(32);
    const auto m = random_matrix(rng, 5, 5, 0.5, Values::Float);
    EXPECT_EQ(spgemm_reference(m, CooMatrix::from_triplets(5, 3, {})).nnz(), 0u);
}

TEST(Reference, CancellationDropped) {
    const auto a = from_rows({{1, 1}});
    const auto b = from_rows({{2}, {-2}});
    EXPECT_EQ(spgemm_reference(a, b).nnz(), 0u);
}

TEST(Reference, DimensionMismatch) {
    EXPECT_THROW(spgemm_reference(CooMatrix::identity(2), CooMatrix::identity(3)), DimensionError);
    EXPECT_THROW(spgemm_dense_check(CooMatrix::identity(2), CooMatrix::identity(3)), DimensionError);
}

TEST(DenseCheck, Identity) {
    EXPECT_EQ(spgemm_dense_check(CooMatrix::identity(3), CooMatrix::identity(3)), CooMatrix::identity(3));
}

TEST(DenseCheck, ZeroMatrix) {
    std::mt19937_64 rng(33);
    const auto m = random_matrix(rng, 6, 6, 0.5, Values::Float);
    EXPECT_EQ(spgemm_dense_check(CooMatrix::from_triplets(6, 6, {}), m).nnz(), 0u);
}

TEST(DenseCheck, TooLarge) {
    EXPECT_THROW(spgemm_dense_check(CooMatrix::identity(65), CooMatrix::identity(65)), std::length_error);
}

TEST(CrossOracle, BinaryAndIntegerBitExact) {
    std::mt19937_64 rng(34);
    for (int t = 0; t < 300; ++t) {
        const Index n = 1 + rng() % 64, k = 1 + rng() % 64, m = 1 + rng() % 64;
        const Values kind = t % 2 ? Values::Binary : Values::SmallInt;
        const auto a = random_matrix(rng, n, k, 0.2, kind);
        const auto b = random_matrix(rng, k, m, 0.2, kind);
        const auto ref = spgemm_reference(a, b);
        EXPECT_EQ(spgemm_dense_check(a, b), ref);
        // Third route: the plain triple loop from the test helpers.
        EXPECT_EQ(ref, from_rows(dense_mul(to_dense(a), to_dense(b), k, m)).with_kind(ref.value_kind()));
    }
}

TEST(CrossOracle, FloatWithinTolerance) {
    std::mt19937_64 rng(35);
    for (int t = 0; t < 200; ++t) {
        const auto a = random_matrix(rng, 30, 30, 0.2, Values::Float);
        const auto b = random_matrix(rng, 30, 30, 0.2, Values::Float);
        EXPECT_TRUE(compare_matrices(spgemm_dense_check(a, b), spgemm_reference(a, b), 1e-5).ok());
    }
}

TEST(Reference, AssociativeOnIntegers) {
    std::mt19937_64 rng(36);
    for (int t = 0; t < 100; ++t) {
        const auto a = random_matrix(rng, 12, 10, 0.25, Values::SmallInt);
        const auto b = random_matrix(rng, 10, 14, 0.25, Values::SmallInt);
        const auto c = random_matrix(rng, 14, 9, 0.25, Values::SmallInt);
        const auto left = spgemm_reference(spgemm_reference(a, b), c);
        const auto right = spgemm_reference(a, spgemm_reference(b, c));
        EXPECT_TRUE(compare_matrices(left, right, 0.0).ok());
    }
}

TEST(CompareMatrices, ReportsDifferences) {
    const auto x = from_rows({{1, 2}, {0, 3}});
    const auto y = from_rows({{1, 2.5}, {4, 0}});
    const auto d = compare_matrices(x, y);
    EXPECT_FALSE(d.ok());
    EXPECT_EQ(d.mismatched, 1u);
    EXPECT_EQ(d.missing, 1u);
    EXPECT_EQ(d.extra, 1u);
    EXPECT_FALSE(d.first_problem.empty());
    EXPECT_TRUE(compare_matrices(x, x).ok());
    EXPECT_FALSE(compare_matrices(x, CooMatrix::identity(3)).same_shape);
}
