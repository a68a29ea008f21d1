#include <gtest/gtest.h>

#include "apspgemm/cost_model.hpp"
#include "test_support.hpp"

using namespace apspgemm;
using testing_support::random_matrix;
using testing_support::Values;

TEST(AnalyticAp, Atmosmodj) {
    const auto b = analytic_ap_cycles(8'814'880, 7, CostProfile{});
    EXPECT_DOUBLE_EQ(b.matching, 17'629'760);
    // nnzrow = 1,259,268.57..
    EXPECT_NEAR(b.multiplication, 8'814'880.0 / 7 * 8800, 1.0);
    EXPECT_NEAR(b.multiplication / 1e9, 11.08, 0.01);
    EXPECT_NEAR(b.accumulation / 1e9, 1.037, 0.001);
    EXPECT_DOUBLE_EQ(b.total, b.matching + b.multiplication + b.accumulation);
}

TEST(AnalyticAp, Webbase) {
    const auto b = analytic_ap_cycles(3'105'536, 3.1, CostProfile{});
    EXPECT_NEAR(b.total / 1e9, 9.52, 0.01);
}

TEST(AnalyticAp, ZeroNnzAndBadRowDensity) {
    const auto b = analytic_ap_cycles(0, 7, CostProfile{});
    EXPECT_EQ(b.total, 0.0);
    EXPECT_THROW(analytic_ap_cycles(10, 0, CostProfile{}), std::invalid_argument);
    EXPECT_THROW(analytic_ap_cycles(10, -1, CostProfile{}), std::invalid_argument);
}

TEST(AnalyticAp, HomogeneousInNnz) {
    const auto one = analytic_ap_cycles(1000, 5, CostProfile{});
    const auto ten = analytic_ap_cycles(10000, 5, CostProfile{});
    EXPECT_DOUBLE_EQ(ten.matching, 10 * one.matching);
    EXPECT_DOUBLE_EQ(ten.multiplication, 10 * one.multiplication);
    EXPECT_DOUBLE_EQ(ten.accumulation, 10 * one.accumulation);
}

TEST(AnalyticAp, BinaryChangesOnlyMultiplyAndWordlength) {
    const auto f = analytic_ap_cycles(7000, 7, CostProfile{}, ValueKind::Float32);
    const auto b = analytic_ap_cycles(7000, 7, CostProfile{}, ValueKind::Binary);
    EXPECT_DOUBLE_EQ(f.matching, b.matching);
    EXPECT_DOUBLE_EQ(b.multiplication, 1000 * 8);
    EXPECT_DOUBLE_EQ(b.accumulation, 7000 * 2 + 1000 * 600);
    EXPECT_DOUBLE_EQ(f.accumulation, 7000 * 32 + 1000 * 600);
}

TEST(Energy, ZeroCoefficientsZeroEnergy) {
    OpCounters c{10, 90, 5, 95, 4};
    const auto r = energy(c, EnergyCoefficients{0, 0, 0, 0, 0}, 1e9, 100, 8);
    EXPECT_EQ(r.total, 0.0);
    EXPECT_FALSE(r.flops_per_watt.has_value());
    ASSERT_TRUE(r.avg_power_w.has_value());
    EXPECT_EQ(*r.avg_power_w, 0.0);
}

TEST(Energy, HandDotProduct) {
    OpCounters c{10, 90, 5, 95, 4};
    const auto r = energy(c, EnergyCoefficients{1, 0.1, 2, 0.2, 5}, 1e9, 100, 8);
    EXPECT_NEAR(r.total, 68e-12, 1e-24);
    EXPECT_NEAR(r.match + r.mismatch + r.write + r.miswrite + r.reduction, r.total, 1e-24);
    EXPECT_NEAR(r.seconds, 1e-7, 1e-20);
    EXPECT_NEAR(*r.avg_power_w, 68e-12 / 1e-7, 1e-12);
    EXPECT_NEAR(*r.flops_per_watt, 8 / 68e-12, 1e3);
}

TEST(Energy, LinearInCounters) {
    const OpCounters c{123, 4567, 89, 1011, 12};
    OpCounters d = c;
    d += c;
    const EnergyCoefficients k{0.3, 0.02, 0.7, 0.01, 1.1};
    EXPECT_NEAR(energy(d, k, 1e9, 10, 1).total, 2 * energy(c, k, 1e9, 10, 1).total, 1e-24);
    OpCounters only_write{};
    only_write.write = 1000;
    OpCounters sum = c;
    sum += only_write;
    EXPECT_NEAR(energy(sum, k, 1e9, 10, 1).total, energy(c, k, 1e9, 10, 1).total + 1000 * 0.7e-12, 1e-24);
}

TEST(Energy, PowerUndefinedOverZeroCycles) {
    OpCounters c{1, 0, 0, 0, 0};
    EXPECT_THROW(energy(c, EnergyCoefficients{}, 1e9, 0, 0), PowerUndefinedError);
    EXPECT_NO_THROW(energy(OpCounters{}, EnergyCoefficients{}, 1e9, 0, 0));
}

TEST(Energy, NegativeCoefficientRejected) {
    EXPECT_THROW(energy(OpCounters{}, EnergyCoefficients{-1, 0, 0, 0, 0}, 1e9, 1, 0), std::invalid_argument);
}

TEST(SimVsAnalytic, MatchingExactMultiplyExactWhenEveryRowAligns) {
    std::mt19937_64 rng(21);
    const auto a = random_matrix(rng, 64, 64, 0.2, Values::Float);
    const auto r = spgemm_ap(a, a, CostProfile{});
    const auto rep = compare_sim_vs_analytic(r, compute_stats(a), CostProfile{});
    ASSERT_EQ(rep.phases.size(), 4u);
    EXPECT_EQ(rep.phases[0].phase, "matching");
    EXPECT_EQ(rep.phases[0].relative, 0.0);
    EXPECT_NEAR(rep.phases[1].relative, 0.0, 1e-12);
}

TEST(SimVsAnalytic, AccumulationWithinQuarterOnSparseRandom) {
    std::mt19937_64 rng(22);
    int checked = 0;
    for (int t = 0; t < 50; ++t) {
        const auto a = random_matrix(rng, 64, 64, 0.03, Values::Float);
        if (a.nnz() == 0) continue;
        const auto r = spgemm_ap(a, a, CostProfile{});
        const auto rep = compare_sim_vs_analytic(r, compute_stats(a), CostProfile{});
        EXPECT_LE(rep.phases[2].relative, 0.25) << "instance " << t;
        ++checked;
    }
    EXPECT_GT(checked, 40);
}

TEST(SimVsAnalytic, FlagsBeyondThreshold) {
    // Diagonal A: each row meets a single B element, passes == nnz so the
    // model holds; a B that makes rows miss inflates the analytic multiply.
    const auto a = CooMatrix::identity(8);
    const auto b = CooMatrix::from_triplets(8, 8, {{0, 0, 1}});
    const auto r = spgemm_ap(a, b, CostProfile{});
    const auto rep = compare_sim_vs_analytic(r, compute_stats(a), CostProfile{}, 0.25);
    EXPECT_TRUE(rep.phases[1].flagged);
    EXPECT_TRUE(rep.any_flagged());
}
