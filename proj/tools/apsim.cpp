// apsim: associative-processor SpGEMM simulator front end.
//
//   apsim run A.mtx [B.mtx ...] --algo all --verify
//   apsim stats corpus/
//   apsim synth --rows 1000 --nnz-per-row 7 --seed 1 --out m.mtx
//   apsim sweep --rows 2000 --nnz-per-row 5 --multipliers 1,2,4,8

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "apspgemm/bench.hpp"
#include "apspgemm/profile_config.hpp"
#include "apspgemm/synth.hpp"

using namespace apspgemm;

namespace {

enum Exit : int {
    kOk = 0,
    kUsage = 1,
    kParse = 2,
    kVerify = 3,
    kProfile = 4,
    kUnreadable = 5,
    kDimension = 6,
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw std::runtime_error("cannot open " + path + " for writing");
        }
    }
    std::ostream& os() { return file_ ? static_cast<std::ostream&>(*file_) : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<Algorithm> parse_algorithms(const std::vector<std::string>& names) {
    std::vector<Algorithm> out;
    for (const auto& n : names) {
        if (n == "all") {
            for (auto a : {Algorithm::Ap, Algorithm::ApAcc, Algorithm::ApMult, Algorithm::ApMultAcc, Algorithm::Cpu}) {
                out.push_back(a);
            }
        } else if (auto a = parse_algorithm(n)) {
            out.push_back(*a);
        } else {
            throw CLI::ValidationError("--algo", "unknown algorithm '" + n + "'");
        }
    }
    return out;
}

VocabMode parse_vocab(const std::string& s) {
    if (s == "auto") return VocabMode::Auto;
    if (s == "on") return VocabMode::On;
    return VocabMode::Off;
}

ValueKind parse_kind(const std::string& s) { return s == "binary" ? ValueKind::Binary : ValueKind::Float32; }

std::vector<double> parse_multipliers(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        out.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument("bad multiplier '" + tok + "'");
    }
    return out;
}

CooMatrix load(const std::string& path) {
    if (!std::filesystem::is_regular_file(path)) {
        throw ParseError(ParseError::Kind::Io, 0, "cannot read " + path);
    }
    return read_matrix_market(path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Associative processor SpGEMM simulator"};
    app.require_subcommand(1);

    std::string profile_path;
    std::string out_path;

    // run
    auto* run = app.add_subcommand("run", "Simulate C = A * B (B defaults to A) for each matrix");
    std::vector<std::string> matrices;
    std::string rhs_path;
    std::vector<std::string> algos{"ap"};
    std::string vocab = "off";
    std::string format = "jsonl";
    bool verify = false;
    bool analytic_only = false;
    bool no_wall_clock = false;
    run->add_option("matrices", matrices, "Matrix Market inputs")->required();
    run->add_option("--rhs", rhs_path, "Right operand for every input (default: the input itself)");
    run->add_option("--algo", algos, "ap, ap-acc, ap-mult, ap-mult-acc, cpu or all")->delimiter(',');
    run->add_option("--profile", profile_path, "Cost profile file");
    run->add_flag("--verify", verify, "Check C against the reference product");
    run->add_option("--vocab", vocab, "Vocabulary lookup multiply")->check(CLI::IsMember({"auto", "on", "off"}));
    run->add_flag("--analytic-only", analytic_only, "Skip simulation; closed-form estimate only");
    run->add_option("--out", out_path, "Output path (default stdout)");
    run->add_option("--format", format, "Report format")->check(CLI::IsMember({"jsonl", "csv"}));
    run->add_flag("--no-wall-clock", no_wall_clock, "Omit wall_seconds from JSON reports");

    // stats
    auto* stats = app.add_subcommand("stats", "Per-matrix statistics and corpus histograms");
    std::string corpus_dir;
    double vocab_threshold = 8800.0;
    stats->add_option("dir", corpus_dir, "Directory of Matrix Market files")->required()->check(CLI::ExistingDirectory);
    stats->add_option("--vocab-threshold", vocab_threshold, "Multiply cost a vocabulary has to beat");
    stats->add_option("--out", out_path, "Output path (default stdout)");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a random sparse matrix");
    SynthParams sp;
    std::string kind = "float";
    synth->add_option("--rows", sp.n_rows, "Row count")->required();
    synth->add_option("--cols", sp.n_cols, "Column count (default: square)");
    synth->add_option("--nnz-per-row", sp.nnz_per_row, "Average nonzeros per row")->required();
    synth->add_option("--kind", kind, "Value kind")->check(CLI::IsMember({"float", "binary"}));
    synth->add_option("--seed", sp.seed, "RNG seed");
    synth->add_option("--out", out_path, "Output path (default stdout)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Scale a synthetic matrix and fit cycles against nnz");
    SynthParams base;
    base.n_rows = 2000;
    base.nnz_per_row = 5.0;
    std::string sweep_kind = "float";
    std::string multipliers = "1,2,4,8";
    std::string sweep_vocab = "off";
    sweep->add_option("--rows", base.n_rows, "Base row count");
    sweep->add_option("--nnz-per-row", base.nnz_per_row, "Fixed nonzeros per row");
    sweep->add_option("--kind", sweep_kind, "Value kind")->check(CLI::IsMember({"float", "binary"}));
    sweep->add_option("--seed", base.seed, "RNG seed");
    sweep->add_option("--multipliers", multipliers, "Comma separated size multipliers (at least 3)");
    sweep->add_option("--profile", profile_path, "Cost profile file");
    sweep->add_option("--vocab", sweep_vocab, "Vocabulary lookup multiply")->check(CLI::IsMember({"auto", "on", "off"}));
    sweep->add_option("--out", out_path, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    CostProfile profile;
    if (!profile_path.empty()) {
        try {
            profile = load_profile(profile_path);
        } catch (const std::exception& e) {
            std::cerr << "apsim: profile: " << e.what() << '\n';
            return kProfile;
        }
    }

    try {
        if (*run) {
            RunOptions opts;
            opts.algorithms = parse_algorithms(algos);
            opts.spgemm.vocab = parse_vocab(vocab);
            opts.verify = verify;
            opts.analytic_only = analytic_only;

            std::optional<CooMatrix> rhs;
            if (!rhs_path.empty()) rhs = load(rhs_path);

            Output out(out_path);
            if (format == "csv") out.os() << csv_header() << '\n';
            bool mismatch = false;
            for (const auto& path : matrices) {
                const CooMatrix a = load(path);
                const std::string id = std::filesystem::path(path).stem().string();
                for (const auto& r : run_matrix(id, a, rhs ? *rhs : a, profile, opts)) {
                    if (format == "csv") {
                        out.os() << to_csv_row(r) << '\n';
                    } else {
                        out.os() << to_json(r, !no_wall_clock).dump() << '\n';
                    }
                    if (r.verified && !*r.verified) {
                        std::cerr << "apsim: " << id << " / " << r.algorithm << ": result differs from reference\n";
                        mismatch = true;
                    }
                }
            }
            return mismatch ? kVerify : kOk;
        }

        if (*stats) {
            const CorpusStats cs = corpus_stats(corpus_dir, vocab_threshold);
            nlohmann::ordered_json j;
            j["schema_version"] = report_schema_version;
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (const auto& row : cs.rows) {
                nlohmann::ordered_json r;
                r["path"] = row.path;
                r["stats"] = to_json(row.stats);
                rows.push_back(std::move(r));
            }
            j["matrices"] = std::move(rows);
            j["warnings"] = cs.warnings;
            j["histograms"] = cs.histograms ? to_json(*cs.histograms) : nlohmann::ordered_json(nullptr);
            for (const auto& w : cs.warnings) std::cerr << "apsim: skipped " << w << '\n';
            Output out(out_path);
            out.os() << j.dump(2) << '\n';
            return kOk;
        }

        if (*synth) {
            sp.kind = parse_kind(kind);
            CooMatrix m;
            try {
                m = synthesize(sp);
            } catch (const std::invalid_argument& e) {
                std::cerr << "apsim: synth: " << e.what() << '\n';
                return kUsage;
            }
            Output out(out_path);
            write_matrix_market(out.os(), m);
            return kOk;
        }

        if (*sweep) {
            base.kind = parse_kind(sweep_kind);
            SpgemmOptions so;
            so.vocab = parse_vocab(sweep_vocab);
            SweepReport rep;
            try {
                rep = run_sweep(base, parse_multipliers(multipliers), profile, so);
            } catch (const std::invalid_argument& e) {
                std::cerr << "apsim: sweep: " << e.what() << '\n';
                return kUsage;
            }
            Output out(out_path);
            out.os() << to_json(rep).dump(2) << '\n';
            return kOk;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "apsim: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "apsim: " << e.what() << '\n';
        return e.kind() == ParseError::Kind::Io ? kUnreadable : kParse;
    } catch (const DimensionError& e) {
        std::cerr << "apsim: " << e.what() << '\n';
        return kDimension;
    } catch (const ProfileError& e) {
        std::cerr << "apsim: profile: " << e.what() << '\n';
        return kProfile;
    } catch (const std::exception& e) {
        std::cerr << "apsim: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
