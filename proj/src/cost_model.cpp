#include "apspgemm/cost_model.hpp"

#include <cmath>

namespace apspgemm {

AnalyticBreakdown analytic_ap_cycles(double nnz, double nnz_per_row, const CostProfile& profile, ValueKind kind,
                                     std::optional<double> t_mult_override) {
    if (!(nnz_per_row > 0.0)) {
        throw std::invalid_argument("nnz_per_row must be > 0");
    }
    if (!(nnz >= 0.0)) {
        throw std::invalid_argument("nnz must be >= 0");
    }
    const double t_mult = t_mult_override ? *t_mult_override : static_cast<double>(profile.t_mult(kind));
    const double m = profile.wordlength(kind);

    AnalyticBreakdown b;
    b.nnzrow = nnz / nnz_per_row;
    b.matching = static_cast<double>(profile.t_compare + profile.t_tagged_write) * nnz;
    b.multiplication = b.nnzrow * t_mult;
    b.accumulation = nnz * m + b.nnzrow * static_cast<double>(profile.t_red);
    b.total = b.matching + b.multiplication + b.accumulation;
    return b;
}

EnergyReport energy(const OpCounters& counters, const EnergyCoefficients& coeffs, double frequency_hz,
                    Cycles total_cycles, std::uint64_t flops) {
    const double pj[] = {coeffs.match_pj, coeffs.mismatch_pj, coeffs.write_pj, coeffs.miswrite_pj,
                         coeffs.reduction_pj};
    for (double c : pj) {
        if (!(c >= 0.0)) throw std::invalid_argument("energy coefficients must be non-negative");
    }
    if (!(frequency_hz > 0.0)) {
        throw std::invalid_argument("frequency must be positive");
    }
    constexpr double pico = 1e-12;
    EnergyReport r;
    r.coefficients = coeffs;
    r.match = static_cast<double>(counters.match) * coeffs.match_pj * pico;
    r.mismatch = static_cast<double>(counters.mismatch) * coeffs.mismatch_pj * pico;
    r.write = static_cast<double>(counters.write) * coeffs.write_pj * pico;
    r.miswrite = static_cast<double>(counters.miswrite) * coeffs.miswrite_pj * pico;
    r.reduction = static_cast<double>(counters.reduction) * coeffs.reduction_pj * pico;
    r.total = r.match + r.mismatch + r.write + r.miswrite + r.reduction;

    if (total_cycles == 0) {
        if (r.total > 0.0) {
            throw PowerUndefinedError("energy spent over zero cycles: average power undefined");
        }
        return r;
    }
    r.seconds = static_cast<double>(total_cycles) / frequency_hz;
    r.avg_power_w = r.total / r.seconds;
    if (r.total > 0.0) {
        r.flops_per_watt = static_cast<double>(flops) / r.total;
    }
    return r;
}

bool DeviationReport::any_flagged() const {
    for (const auto& p : phases) {
        if (p.flagged) return true;
    }
    return false;
}

DeviationReport compare_sim_vs_analytic(const SpgemmResult& result, const MatrixStats& a_stats,
                                        const CostProfile& profile, double threshold) {
    DeviationReport rep;
    rep.threshold = threshold;

    AnalyticBreakdown ab;
    if (a_stats.nnz > 0) {
        std::optional<double> t_mult;
        if (result.mult_invocation_cost > 0) t_mult = static_cast<double>(result.mult_invocation_cost);
        ab = analytic_ap_cycles(static_cast<double>(a_stats.nnz), a_stats.nnz_per_nonzero_row(), profile,
                                result.operand_kind, t_mult);
    }

    auto add = [&](const char* name, double sim, double ana) {
        PhaseDeviation d;
        d.phase = name;
        d.simulated = sim;
        d.analytic = ana;
        if (ana != 0.0) {
            d.relative = std::fabs(sim - ana) / ana;
        } else {
            d.relative = sim == 0.0 ? 0.0 : INFINITY;
        }
        d.flagged = d.relative > threshold;
        rep.phases.push_back(d);
    };
    const auto& l = result.ledger;
    add("matching", static_cast<double>(l.step_matching()), ab.matching);
    add("multiplication", static_cast<double>(l.step_multiplication()), ab.multiplication);
    add("accumulation", static_cast<double>(l.step_accumulation()), ab.accumulation);
    add("total", static_cast<double>(l.total), ab.total);
    return rep;
}

}  // namespace apspgemm
