#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "apspgemm/bench.hpp"
#include "apspgemm/synth.hpp"
#include "test_support.hpp"

using namespace apspgemm;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    auto d = fs::temp_directory_path() / ("apspgemm_" + name + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string mtx(const CooMatrix& m) {
    std::ostringstream os;
    write_matrix_market(os, m);
    return os.str();
}

}  // namespace

TEST(RunMatrix, IdentityVerifies) {
    RunOptions o;
    o.verify = true;
    const auto reps = run_matrix("id4", CooMatrix::identity(4), CooMatrix::identity(4), CostProfile{}, o);
    ASSERT_EQ(reps.size(), 1u);
    ASSERT_TRUE(reps[0].verified.has_value());
    EXPECT_TRUE(*reps[0].verified);
    EXPECT_EQ(reps[0].c_nnz, 4u);
    EXPECT_EQ(reps[0].c_hash, matrix_hash(CooMatrix::identity(4)));
}

TEST(RunMatrix, AllAlgorithmsSameHash) {
    std::mt19937_64 rng(41);
    const auto a = testing_support::random_matrix(rng, 40, 40, 0.1, testing_support::Values::Float);
    RunOptions o;
    o.algorithms = {Algorithm::Ap, Algorithm::ApAcc, Algorithm::ApMult, Algorithm::ApMultAcc};
    const auto reps = run_matrix("r", a, a, CostProfile{}, o);
    ASSERT_EQ(reps.size(), 4u);
    for (const auto& r : reps) {
        EXPECT_EQ(r.c_hash, reps[0].c_hash);
        EXPECT_EQ(r.flops, reps[0].flops);
    }
    EXPECT_NE(reps[0].ledger.total, reps[1].ledger.total);
}

TEST(RunMatrix, AnalyticOnlySkipsSimulation) {
    RunOptions o;
    o.analytic_only = true;
    o.verify = true;
    const auto a = synthesize({200, 0, 5.0, ValueKind::Float32, 3});
    const auto r = run_matrix("s", a, a, CostProfile{}, o).at(0);
    EXPECT_FALSE(r.simulated);
    EXPECT_EQ(r.ledger.total, 0u);
    EXPECT_FALSE(r.verified.has_value());
    EXPECT_DOUBLE_EQ(r.analytic.matching, 2.0 * a.nnz());
}

TEST(RunMatrix, DimensionMismatch) {
    EXPECT_THROW(run_matrix("x", CooMatrix::identity(2), CooMatrix::identity(3), CostProfile{}, RunOptions{}),
                 DimensionError);
}

TEST(Report, JsonCarriesEveryField) {
    const auto a = synthesize({50, 0, 3.0, ValueKind::Float32, 2});
    const auto r = run_matrix("m", a, a, CostProfile{}, RunOptions{}).at(0);
    const auto j = to_json(r);
    for (const char* key : {"schema_version", "matrix_id", "algorithm", "stats", "ledger", "counters", "flops",
                            "flops_per_second", "analytic", "energy", "content_hash", "wall_seconds"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j["schema_version"], report_schema_version);
    EXPECT_TRUE(j["energy"]["coefficients_pj"]["placeholder"].get<bool>());
    EXPECT_FALSE(to_json(r, false).contains("wall_seconds"));
}

TEST(Report, ContentHashIgnoresWallClock) {
    const auto a = synthesize({80, 0, 4.0, ValueKind::Binary, 5});
    auto x = run_matrix("m", a, a, CostProfile{}, RunOptions{}).at(0);
    auto y = run_matrix("m", a, a, CostProfile{}, RunOptions{}).at(0);
    x.wall_seconds = 1.0;
    y.wall_seconds = 2.0;
    EXPECT_EQ(content_hash(x), content_hash(y));
    y.ledger.total += 1;
    EXPECT_NE(content_hash(x), content_hash(y));
}

TEST(Report, CsvRowMatchesHeader) {
    const auto a = synthesize({30, 0, 2.0, ValueKind::Float32, 1});
    RunOptions o;
    o.verify = true;
    const auto r = run_matrix("m", a, a, CostProfile{}, o).at(0);
    auto commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
    EXPECT_EQ(commas(to_csv_row(r)), commas(csv_header()));
}

TEST(Synth, CountsAndStats) {
    const auto m = synthesize({1000, 0, 7.0, ValueKind::Float32, 1});
    EXPECT_EQ(m.nnz(), 7000u);
    const auto s = compute_stats(m);
    EXPECT_DOUBLE_EQ(s.nnz_per_row_avg, 7.0);
    EXPECT_EQ(s.nnz_row_count, 1000u);
    for (const auto& e : m.entries()) {
        EXPECT_GE(e.value, -1.0f);
        EXPECT_LE(e.value, 1.0f);
    }
}

TEST(Synth, FractionalRowDensity) {
    const auto m = synthesize({1000, 0, 3.1, ValueKind::Float32, 4});
    EXPECT_EQ(m.nnz(), 3100u);
    const auto off = m.row_offsets();
    for (Index r = 0; r < 1000; ++r) {
        const auto len = off[r + 1] - off[r];
        EXPECT_TRUE(len == 3 || len == 4);
    }
}

TEST(Synth, SameSeedSameBytes) {
    const SynthParams p{300, 0, 6.0, ValueKind::Float32, 99};
    EXPECT_EQ(mtx(synthesize(p)), mtx(synthesize(p)));
    SynthParams q = p;
    q.seed = 100;
    EXPECT_NE(mtx(synthesize(p)), mtx(synthesize(q)));
}

TEST(Synth, BinaryKindSharesPattern) {
    const auto b = synthesize({200, 0, 5.0, ValueKind::Binary, 7});
    const auto f = synthesize({200, 0, 5.0, ValueKind::Float32, 7});
    EXPECT_EQ(effective_wordlength(b), 2u);
    EXPECT_EQ(b.value_kind(), ValueKind::Binary);
    ASSERT_EQ(b.nnz(), f.nnz());
    for (std::size_t i = 0; i < b.nnz(); ++i) {
        EXPECT_EQ(b.entries()[i].row, f.entries()[i].row);
        EXPECT_EQ(b.entries()[i].col, f.entries()[i].col);
    }
}

TEST(Synth, Infeasible) {
    EXPECT_THROW(synthesize({10, 0, 11.0, ValueKind::Float32, 1}), std::invalid_argument);
    EXPECT_THROW(synthesize({10, 5, -1.0, ValueKind::Float32, 1}), std::invalid_argument);
    EXPECT_NO_THROW(synthesize({10, 0, 10.0, ValueKind::Float32, 1}));
}

TEST(FitLine, ExactLine) {
    const auto f = fit_line({1, 2, 3, 4}, {5, 7, 9, 11});
    EXPECT_NEAR(f.slope, 2.0, 1e-12);
    EXPECT_NEAR(f.intercept, 3.0, 1e-12);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
    EXPECT_THROW(fit_line({1}, {1}), std::invalid_argument);
    EXPECT_THROW(fit_line({2, 2, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST(Sweep, LinearInNnz) {
    const auto rep = run_sweep({500, 0, 5.0, ValueKind::Float32, 1}, {1, 2, 4, 8}, CostProfile{});
    ASSERT_EQ(rep.points.size(), 4u);
    EXPECT_GT(rep.fit.r_squared, 0.99);
    EXPECT_GT(rep.fit.slope, 0.0);
}

TEST(Sweep, NeedsThreePoints) {
    EXPECT_THROW(run_sweep({100, 0, 3.0, ValueKind::Float32, 1}, {1}, CostProfile{}), std::invalid_argument);
    EXPECT_THROW(run_sweep({100, 0, 3.0, ValueKind::Float32, 1}, {1, 2}, CostProfile{}), std::invalid_argument);
}

TEST(Sweep, BinaryFloatMultiplyRatioEveryPoint) {
    const auto f = run_sweep({300, 0, 4.0, ValueKind::Float32, 2}, {1, 2, 3}, CostProfile{});
    const auto b = run_sweep({300, 0, 4.0, ValueKind::Binary, 2}, {1, 2, 3}, CostProfile{});
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(b.points[i].ledger.multiplication * 8800, f.points[i].ledger.multiplication * 8);
        EXPECT_GT(b.points[i].ledger.multiplication, 0u);
    }
}

TEST(CorpusStats, ThreeFilesOneBinaryOneBroken) {
    const auto dir = scratch_dir("corpus");
    std::ofstream(dir / "a_binary.mtx") << mtx(CooMatrix::identity(3, ValueKind::Binary));
    std::ofstream(dir / "b_float.mtx") << mtx(synthesize({20, 0, 3.0, ValueKind::Float32, 1}));
    std::ofstream(dir / "c_broken.mtx") << "%%MatrixMarket matrix coordinate real general\n2 2 5\n1 1 1\n";
    const auto cs = corpus_stats(dir.string());
    ASSERT_EQ(cs.rows.size(), 2u);
    EXPECT_EQ(cs.rows[0].path, "a_binary.mtx");
    ASSERT_EQ(cs.warnings.size(), 1u);
    EXPECT_NE(cs.warnings[0].find("c_broken.mtx"), std::string::npos);
    ASSERT_TRUE(cs.histograms);
    EXPECT_EQ(cs.histograms->wordlength.counts[0], 1u);
    EXPECT_EQ(cs.histograms->non_binary, 1u);
    ASSERT_TRUE(cs.histograms->vocab_eligible_fraction);
    fs::remove_all(dir);
}
