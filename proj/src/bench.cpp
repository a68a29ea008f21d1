#include "apspgemm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <sstream>

#include "apspgemm/oracle.hpp"

namespace apspgemm {

using nlohmann::ordered_json;

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t matrix_hash(const CooMatrix& m) {
    const std::uint32_t dims[2] = {m.n_rows(), m.n_cols()};
    std::uint64_t h = fnv1a(dims, sizeof dims);
    for (const auto& e : m.entries()) {
        std::uint32_t word[3] = {e.row, e.col, 0};
        static_assert(sizeof(Value) == sizeof(std::uint32_t));
        std::memcpy(&word[2], &e.value, sizeof(Value));
        h = fnv1a(word, sizeof word, h);
    }
    return h;
}

namespace {

std::string hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

ordered_json ledger_json(const CycleLedger& l) {
    return ordered_json{{"matching", l.matching},
                        {"multiplication", l.multiplication},
                        {"accumulation", l.accumulation},
                        {"cpu", l.cpu},
                        {"total", l.total},
                        {"cpu_matching", l.cpu_matching},
                        {"cpu_multiplication", l.cpu_multiplication},
                        {"cpu_accumulation", l.cpu_accumulation},
                        {"cpu_fill", l.cpu_fill},
                        {"accumulation_passes", l.accumulation_passes},
                        {"step_matching", l.step_matching()},
                        {"step_multiplication", l.step_multiplication()},
                        {"step_accumulation", l.step_accumulation()}};
}

ordered_json counters_json(const OpCounters& c) {
    return ordered_json{{"match", c.match},
                        {"mismatch", c.mismatch},
                        {"write", c.write},
                        {"miswrite", c.miswrite},
                        {"reduction", c.reduction}};
}

ordered_json optional_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

}  // namespace

std::vector<RunReport> run_matrix(const std::string& id, const CooMatrix& a, const CooMatrix& b,
                                  const CostProfile& profile, const RunOptions& opts) {
    profile.validate();
    if (a.n_cols() != b.n_rows()) {
        throw DimensionError("inner dimensions differ: A has " + std::to_string(a.n_cols()) + " columns, B has " +
                             std::to_string(b.n_rows()) + " rows");
    }
    const MatrixStats stats = compute_stats(a);
    const bool binary = a.value_kind() == ValueKind::Binary && b.value_kind() == ValueKind::Binary;
    const ValueKind kind = binary ? ValueKind::Binary : ValueKind::Float32;

    std::optional<CooMatrix> reference;
    if (opts.verify && !opts.analytic_only) reference = spgemm_reference(a, b);

    std::vector<RunReport> out;
    for (const auto algo : opts.algorithms) {
        RunReport r;
        r.matrix_id = id;
        r.algorithm = std::string(to_string(algo));
        r.stats = stats;
        r.frequency_hz = profile.cpu_frequency_hz;

        std::optional<double> t_mult;
        const auto start = std::chrono::steady_clock::now();
        if (opts.analytic_only) {
            r.simulated = false;
            if ((algo == Algorithm::Ap || algo == Algorithm::ApAcc) && opts.spgemm.vocab != VocabMode::Off) {
                const auto plan = vocabulary_plan(a, b, profile);
                if (opts.spgemm.vocab == VocabMode::On || plan.use_vocab) {
                    t_mult = 2.0 * static_cast<double>(plan.unique_values) * static_cast<double>(plan.unique_values);
                    r.vocabulary_used = true;
                }
            }
        } else {
            const SpgemmResult res = run_algorithm(algo, a, b, profile, opts.spgemm);
            r.ledger = res.ledger;
            r.counters = res.counters;
            r.singleton_count = res.singleton_count;
            r.flops = res.flops;
            r.vocabulary_used = res.vocabulary_used;
            r.c_nnz = res.c.nnz();
            r.c_hash = matrix_hash(res.c);
            if (res.mult_invocation_cost > 0) t_mult = static_cast<double>(res.mult_invocation_cost);
            if (reference) {
                const double tol = binary ? 0.0 : opts.verify_tolerance;
                r.verified = compare_matrices(res.c, *reference, tol).ok();
            }
        }
        r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        if (stats.nnz > 0) {
            r.analytic = analytic_ap_cycles(static_cast<double>(stats.nnz), stats.nnz_per_nonzero_row(), profile,
                                            kind, t_mult);
        }
        r.energy = energy(r.counters, profile.energy, profile.cpu_frequency_hz, r.ledger.total, r.flops);
        r.flops_per_second =
            r.ledger.total == 0 ? 0.0
                                : static_cast<double>(r.flops) * profile.cpu_frequency_hz / static_cast<double>(r.ledger.total);
        out.push_back(std::move(r));
    }
    return out;
}

ordered_json to_json(const MatrixStats& s) {
    return ordered_json{{"n_rows", s.n_rows},
                        {"n_cols", s.n_cols},
                        {"nnz", s.nnz},
                        {"nnz_per_row_avg", s.nnz_per_row_avg},
                        {"nnz_row_count", s.nnz_row_count},
                        {"wordlength_m", s.wordlength_m},
                        {"unique_value_count_n", s.unique_value_count_n},
                        {"vocab_cost", s.vocab_cost},
                        {"value_kind", std::string(to_string(s.value_kind))}};
}

ordered_json to_json(const RunReport& r, bool with_wall_clock) {
    ordered_json j;
    j["schema_version"] = report_schema_version;
    j["matrix_id"] = r.matrix_id;
    j["algorithm"] = r.algorithm;
    j["simulated"] = r.simulated;
    j["stats"] = to_json(r.stats);
    j["ledger"] = ledger_json(r.ledger);
    j["counters"] = counters_json(r.counters);
    j["singleton_count"] = r.singleton_count;
    j["flops"] = r.flops;
    j["frequency_hz"] = r.frequency_hz;
    j["flops_per_second"] = r.flops_per_second;
    j["vocabulary_used"] = r.vocabulary_used;
    j["c_nnz"] = r.c_nnz;
    j["c_hash"] = hex(r.c_hash);
    j["analytic"] = ordered_json{{"matching", r.analytic.matching},
                                 {"multiplication", r.analytic.multiplication},
                                 {"accumulation", r.analytic.accumulation},
                                 {"total", r.analytic.total},
                                 {"nnzrow", r.analytic.nnzrow}};
    const auto& e = r.energy;
    j["energy"] = ordered_json{{"match_j", e.match},
                               {"mismatch_j", e.mismatch},
                               {"write_j", e.write},
                               {"miswrite_j", e.miswrite},
                               {"reduction_j", e.reduction},
                               {"total_j", e.total},
                               {"avg_power_w", optional_json(e.avg_power_w)},
                               {"flops_per_watt", optional_json(e.flops_per_watt)},
                               {"coefficients_pj",
                                ordered_json{{"match", e.coefficients.match_pj},
                                             {"mismatch", e.coefficients.mismatch_pj},
                                             {"write", e.coefficients.write_pj},
                                             {"miswrite", e.coefficients.miswrite_pj},
                                             {"reduction", e.coefficients.reduction_pj},
                                             {"placeholder", true}}}};
    j["verified"] = r.verified ? ordered_json(*r.verified) : ordered_json(nullptr);
    if (with_wall_clock) {
        j["content_hash"] = content_hash(r);
        j["wall_seconds"] = r.wall_seconds;
    }
    return j;
}

std::string content_hash(const RunReport& r) {
    const std::string body = to_json(r, false).dump();
    return hex(fnv1a(body.data(), body.size()));
}

std::string csv_header() {
    return "matrix_id,algorithm,n_rows,n_cols,nnz,nnz_per_row_avg,nnz_row_count,wordlength_m,unique_values,"
           "vocab_cost,matching,multiplication,accumulation,cpu,total,step_matching,step_multiplication,"
           "step_accumulation,cpu_fill,accumulation_passes,match,mismatch,write,miswrite,reduction,singletons,flops,"
           "flops_per_second,analytic_matching,analytic_multiplication,analytic_accumulation,analytic_total,"
           "energy_j,flops_per_watt,c_nnz,c_hash,verified,wall_seconds";
}

std::string to_csv_row(const RunReport& r) {
    std::ostringstream o;
    o.precision(17);
    const auto& s = r.stats;
    const auto& l = r.ledger;
    const auto& c = r.counters;
    o << r.matrix_id << ',' << r.algorithm << ',' << s.n_rows << ',' << s.n_cols << ',' << s.nnz << ','
      << s.nnz_per_row_avg << ',' << s.nnz_row_count << ',' << s.wordlength_m << ',' << s.unique_value_count_n << ','
      << s.vocab_cost << ',' << l.matching << ',' << l.multiplication << ',' << l.accumulation << ',' << l.cpu << ','
      << l.total << ',' << l.step_matching() << ',' << l.step_multiplication() << ',' << l.step_accumulation() << ','
      << l.cpu_fill << ',' << l.accumulation_passes << ',' << c.match << ',' << c.mismatch << ',' << c.write << ','
      << c.miswrite << ',' << c.reduction << ',' << r.singleton_count << ',' << r.flops << ',' << r.flops_per_second
      << ',' << r.analytic.matching << ',' << r.analytic.multiplication << ',' << r.analytic.accumulation << ','
      << r.analytic.total << ',' << r.energy.total << ',';
    if (r.energy.flops_per_watt) o << *r.energy.flops_per_watt;
    o << ',' << r.c_nnz << ',' << hex(r.c_hash) << ',';
    if (r.verified) o << (*r.verified ? "true" : "false");
    o << ',' << r.wall_seconds;
    return o.str();
}

// ---------------------------------------------------------------------------

CorpusStats corpus_stats(const std::string& dir, double vocab_threshold) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    CorpusStats out;
    std::vector<MatrixStats> all;
    for (const auto& f : files) {
        try {
            const auto m = read_matrix_market(f.string());
            out.rows.push_back({f.filename().string(), compute_stats(m)});
            all.push_back(out.rows.back().stats);
        } catch (const std::exception& e) {
            out.warnings.push_back(f.filename().string() + ": " + e.what());
        }
    }
    if (!all.empty()) out.histograms = corpus_histograms(all, vocab_threshold);
    return out;
}

ordered_json to_json(const HistogramBundle& b) {
    auto hist = [](const Histogram& h) {
        return ordered_json{{"edges", h.edges}, {"counts", h.counts}, {"below", h.below}, {"above", h.above}};
    };
    return ordered_json{{"wordlength", hist(b.wordlength)},
                        {"nnz_per_row_over_dimension", hist(b.density)},
                        {"vocab_cost", hist(b.vocab_cost)},
                        {"matrices", b.matrices},
                        {"non_binary", b.non_binary},
                        {"vocab_eligible", b.vocab_eligible},
                        {"vocab_eligible_fraction", optional_json(b.vocab_eligible_fraction)}};
}

// ---------------------------------------------------------------------------

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("fit_line needs at least two paired samples");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("fit_line needs at least two distinct x values");
    }
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ss_res += r * r;
    }
    f.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
    return f;
}

SweepReport run_sweep(const SynthParams& base, const std::vector<double>& multipliers, const CostProfile& profile,
                      const SpgemmOptions& opts) {
    if (multipliers.size() < 3) {
        throw std::invalid_argument("sweep needs at least three multipliers");
    }
    SweepReport rep;
    rep.base = base;
    std::vector<double> xs, ys;
    for (const double mult : multipliers) {
        if (!(mult > 0.0)) throw std::invalid_argument("sweep multipliers must be positive");
        SynthParams p = base;
        p.n_rows = static_cast<Index>(std::llround(static_cast<double>(base.n_rows) * mult));
        p.n_cols = p.n_rows;
        const CooMatrix a = synthesize(p);
        const SpgemmResult res = spgemm_ap(a, a, profile, opts);
        rep.points.push_back({mult, p.n_rows, a.nnz(), res.ledger});
        xs.push_back(static_cast<double>(a.nnz()));
        ys.push_back(static_cast<double>(res.ledger.total));
    }
    rep.fit = fit_line(xs, ys);
    return rep;
}

ordered_json to_json(const SweepReport& s) {
    ordered_json pts = ordered_json::array();
    for (const auto& p : s.points) {
        pts.push_back(ordered_json{{"multiplier", p.multiplier},
                                   {"n_rows", p.n_rows},
                                   {"nnz", p.nnz},
                                   {"ledger", ledger_json(p.ledger)}});
    }
    return ordered_json{{"schema_version", report_schema_version},
                        {"base",
                         ordered_json{{"n_rows", s.base.n_rows},
                                      {"nnz_per_row", s.base.nnz_per_row},
                                      {"value_kind", std::string(to_string(s.base.kind))},
                                      {"seed", s.base.seed}}},
                        {"points", pts},
                        {"fit",
                         ordered_json{{"slope", s.fit.slope},
                                      {"intercept", s.fit.intercept},
                                      {"r_squared", s.fit.r_squared}}}};
}

}  // namespace apspgemm
