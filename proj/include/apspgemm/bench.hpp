#ifndef APSPGEMM_BENCH_HPP
#define APSPGEMM_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>
#include "apspgemm/algorithms.hpp"
#include "apspgemm/cost_model.hpp"
#include "apspgemm/sparse_io.hpp"
#include "apspgemm/synth.hpp"

namespace apspgemm {

inline constexpr int report_schema_version = 1;

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ull);
std::uint64_t matrix_hash(const CooMatrix& m);

struct RunReport {
    std::string matrix_id;
    std::string algorithm;
    MatrixStats stats;  // of the left operand
    bool simulated = true;
    CycleLedger ledger;
    OpCounters counters;
    std::uint64_t singleton_count = 0;
    std::uint64_t flops = 0;
    double flops_per_second = 0;
    bool vocabulary_used = false;
    std::size_t c_nnz = 0;
    std::uint64_t c_hash = 0;
    AnalyticBreakdown analytic;
    EnergyReport energy;
    std::optional<bool> verified;
    double frequency_hz = 0;
    double wall_seconds = 0;
};

struct RunOptions {
    std::vector<Algorithm> algorithms{Algorithm::Ap};
    SpgemmOptions spgemm;
    bool verify = false;
    bool analytic_only = false;
    /// Relative per-entry tolerance for --verify on non-binary products.
    double verify_tolerance = 1e-5;
};

/// One report per algorithm for C = A * B.
std::vector<RunReport> run_matrix(const std::string& id, const CooMatrix& a, const CooMatrix& b,
                                  const CostProfile& profile, const RunOptions& opts);

/// Report as an ordered JSON object; the wall clock is left out when
/// `with_wall_clock` is false. `content_hash` covers everything except it.
nlohmann::ordered_json to_json(const RunReport& r, bool with_wall_clock = true);
std::string content_hash(const RunReport& r);

std::string csv_header();
std::string to_csv_row(const RunReport& r);

// ---------------------------------------------------------------------------

struct StatsRow {
    std::string path;
    MatrixStats stats;
};

struct CorpusStats {
    std::vector<StatsRow> rows;
    std::vector<std::string> warnings;  // one per unreadable file
    std::optional<HistogramBundle> histograms;
};

/// Statistics for every regular file in `dir`, in name order. Files that fail
/// to parse become warnings.
CorpusStats corpus_stats(const std::string& dir, double vocab_threshold = 8800.0);

nlohmann::ordered_json to_json(const MatrixStats& s);
nlohmann::ordered_json to_json(const HistogramBundle& b);

// ---------------------------------------------------------------------------

struct SweepPoint {
    double multiplier = 0;
    std::size_t n_rows = 0;
    std::size_t nnz = 0;
    CycleLedger ledger;
};

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
};

struct SweepReport {
    SynthParams base;
    std::vector<SweepPoint> points;
    LinearFit fit;  // total cycles against nnz
};

/// Least squares y = slope * x + intercept. Needs at least two distinct x.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Squares synthetic matrices of n_rows * multiplier rows (square, fixed
/// nnz_per_row) with spgemm_ap. Requires at least three multipliers.
SweepReport run_sweep(const SynthParams& base, const std::vector<double>& multipliers, const CostProfile& profile,
                      const SpgemmOptions& opts = {});

nlohmann::ordered_json to_json(const SweepReport& s);

}  // namespace apspgemm

#endif  // APSPGEMM_BENCH_HPP
