#ifndef APSPGEMM_COST_MODEL_HPP
#define APSPGEMM_COST_MODEL_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "apspgemm/algorithms.hpp"
#include "apspgemm/ap_core.hpp"
#include "apspgemm/sparse_io.hpp"

namespace apspgemm {

/// Closed-form cycle estimate of the fully associative algorithm.
struct AnalyticBreakdown {
    double matching = 0;
    double multiplication = 0;
    double accumulation = 0;
    double total = 0;
    double nnzrow = 0;  // nnz / nnz_per_row
};

/**
 * matching       = (t_compare + t_tagged_write) * nnz        (2 nnz by default)
 * multiplication = nnzrow * T_mult
 * accumulation   = nnz * m + nnzrow * T_red
 * with nnzrow = nnz / nnz_per_row, and T_mult, m taken for `kind`.
 * `t_mult_override` replaces T_mult (vocabulary lookup cost).
 */
AnalyticBreakdown analytic_ap_cycles(double nnz, double nnz_per_row, const CostProfile& profile,
                                     ValueKind kind = ValueKind::Float32,
                                     std::optional<double> t_mult_override = std::nullopt);

class PowerUndefinedError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct EnergyReport {
    // joules
    double match = 0;
    double mismatch = 0;
    double write = 0;
    double miswrite = 0;
    double reduction = 0;
    double total = 0;
    double seconds = 0;
    /// Empty when no cycles elapsed.
    std::optional<double> avg_power_w;
    /// FLOP/s per watt, i.e. FLOP per joule. Empty when no energy was spent.
    std::optional<double> flops_per_watt;
    EnergyCoefficients coefficients;
};

/// Dot product of event counts with per-event energies. Throws
/// PowerUndefinedError when energy is nonzero but `total_cycles` is zero.
EnergyReport energy(const OpCounters& counters, const EnergyCoefficients& coeffs, double frequency_hz,
                    Cycles total_cycles, std::uint64_t flops);

struct PhaseDeviation {
    std::string phase;
    double simulated = 0;
    double analytic = 0;
    double relative = 0;  // |sim - analytic| / analytic, 0 when both are 0
    bool flagged = false;
};

struct DeviationReport {
    std::vector<PhaseDeviation> phases;  // matching, multiplication, accumulation, total
    double threshold = 0;
    bool any_flagged() const;
};

/// Compares a spgemm_ap ledger against the closed form evaluated on A's
/// statistics, with nnz_per_row taken over A's non-empty rows.
DeviationReport compare_sim_vs_analytic(const SpgemmResult& result, const MatrixStats& a_stats,
                                        const CostProfile& profile, double threshold = 0.25);

}  // namespace apspgemm

#endif  // APSPGEMM_COST_MODEL_HPP
