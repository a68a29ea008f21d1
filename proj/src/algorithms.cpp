#include "apspgemm/algorithms.hpp"

#include <algorithm>

namespace apspgemm {

std::string_view to_string(Algorithm a) {
    switch (a) {
    case Algorithm::Ap: return "ap";
    case Algorithm::ApAcc: return "ap-acc";
    case Algorithm::ApMult: return "ap-mult";
    case Algorithm::ApMultAcc: return "ap-mult-acc";
    case Algorithm::Cpu: return "cpu";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    for (auto a : {Algorithm::Ap, Algorithm::ApAcc, Algorithm::ApMult, Algorithm::ApMultAcc, Algorithm::Cpu}) {
        if (to_string(a) == name) return a;
    }
    return std::nullopt;
}

namespace {

bool binary_operands(const CooMatrix& a, const CooMatrix& b) {
    return a.value_kind() == ValueKind::Binary && b.value_kind() == ValueKind::Binary;
}

void sort_row_tail(std::vector<Entry>& c, std::size_t row_begin) {
    std::sort(c.begin() + static_cast<std::ptrdiff_t>(row_begin), c.end(),
              [](const Entry& x, const Entry& y) { return x.col < y.col; });
}

struct Variant {
    bool serial_mult;
    bool serial_acc;
};

// Shared body of the four AP algorithms. Rows of A are processed strictly
// serially; within a row the first loop aligns A_{j,i} with B's row i and the
// second loop forms C_{j,k} one output column at a time.
SpgemmResult run_ap_family(const CooMatrix& a, const CooMatrix& b, const CostProfile& profile,
                           const SpgemmOptions& opts, Variant variant) {
    profile.validate();
    ApArray arr = load_coo(a, b, opts.capacity, opts.indexed);

    const bool binary = binary_operands(a, b);
    const ValueKind kind = binary ? ValueKind::Binary : ValueKind::Float32;
    const Cycles m = profile.wordlength(kind);

    std::optional<Vocabulary> vocab;
    Cycles mult_cost = profile.t_mult(kind);
    if (!variant.serial_mult && opts.vocab != VocabMode::Off) {
        const bool use = opts.vocab == VocabMode::On || vocabulary_plan(a, b, profile).use_vocab;
        if (use) {
            vocab.emplace(a, b);
            mult_cost = vocab->cost();
        }
    }

    const Charge compare{Phase::Matching, profile.t_compare};
    const Charge align_write{Phase::Matching, profile.t_tagged_write};
    const Charge fill{Phase::CpuFill, profile.pipeline_fill};
    const Charge mult_pass{Phase::CpuMultiplication, profile.cpu_mult_pass};
    const Charge acc_pass{Phase::CpuAccumulation, profile.cpu_acc_pass};
    const Charge read_k{Phase::Accumulation, m};
    const Charge hidden{};

    std::vector<Entry> c;
    std::uint64_t singletons = 0;
    const auto [a_first, a_last] = arr.region_range(Region::ASpace);

    std::size_t pos = a_first;
    while (pos < a_last) {
        const Index j = arr.words()[pos].row_index;

        // Pair matching over the nonzeros of row j.
        std::size_t cursor = ApArray::npos;
        while (auto aw = arr.read_next(ReadQuery::RowOf, cursor, hidden, Region::ASpace, j)) {
            cursor = *aw;
            const Index i = arr.words()[*aw].col_index;
            const Value a_ji = arr.words()[*aw].value;
            const std::size_t tagged = arr.compare_tag(Region::BSpace, KeyField::RowIndex, i, TagFilter::None, compare);
            singletons += tagged;
            if (!variant.serial_mult) {
                arr.write_tagged(WriteField::AlignedA, a_ji, align_write);
            } else if (tagged > 0) {
                arr.charge(fill);
                std::size_t bcur = ApArray::npos;
                while (auto bw = arr.read_next(ReadQuery::Tagged, bcur)) {
                    bcur = *bw;
                    arr.write_pair_at(*bw, a_ji, a_ji * arr.words()[*bw].value, mult_pass);
                }
            }
        }
        pos = cursor + 1;

        if (arr.aligned_words().empty()) {
            continue;
        }

        if (!variant.serial_mult) {
            const Charge mult{Phase::Multiplication, mult_cost};
            if (vocab) {
                arr.associative_mult(*vocab, mult);
            } else {
                arr.associative_mult(binary, mult);
            }
        }

        // Accumulation: one pass per distinct output column k of row j.
        const std::size_t row_begin = c.size();
        std::size_t kcur = ApArray::npos;
        while (auto pw = arr.read_next(ReadQuery::UnusedSingleton, kcur, read_k)) {
            kcur = *pw;
            const Index k = arr.words()[*pw].col_index;
            arr.compare_tag(Region::BSpace, KeyField::ColIndex, k, TagFilter::UnusedSingleton, hidden);
            arr.write_tagged(WriteField::Used, 0.0f, hidden);
            ++arr.ledger().accumulation_passes;

            Value sum = 0.0f;
            if (!variant.serial_acc) {
                sum = arr.reduce_sum_tagged();
            } else {
                arr.charge(fill);
                bool first = true;
                for (auto w : arr.tagged()) {
                    const Value p = *arr.words()[w].product();
                    sum = first ? p : sum + p;
                    first = false;
                    arr.charge(acc_pass);
                }
            }
            if (sum != 0.0f) {
                c.push_back({j, k, sum});
            }
        }
        sort_row_tail(c, row_begin);

        if (!variant.serial_acc) {
            // The pipelined tree drains once at the end of the row.
            arr.charge({Phase::Accumulation, profile.t_red});
        }
        arr.reset_alignment({Phase::Accumulation, profile.t_row_reset});
    }

    SpgemmResult r;
    const ValueKind c_kind = product_kind(a, b, c);
    r.c = CooMatrix::from_sorted(a.n_rows(), b.n_cols(), std::move(c), c_kind);
    r.ledger = arr.ledger();
    r.counters = arr.counters();
    r.singleton_count = singletons;
    r.flops = 2 * singletons;
    r.compare_invocations = arr.compare_invocations();
    r.write_invocations = arr.write_invocations();
    r.array_size = arr.size();
    r.vocabulary_used = vocab.has_value();
    r.mult_invocation_cost = variant.serial_mult ? 0 : mult_cost;
    r.operand_kind = kind;
    return r;
}

}  // namespace

VocabularyPlan vocabulary_plan(const CooMatrix& a, const CooMatrix& b, const CostProfile& profile) {
    VocabularyPlan plan;
    plan.unique_values = combined_unique_values(a, b);
    const auto n = static_cast<Cycles>(plan.unique_values);
    const Cycles vocab_cost = 2 * n * n;
    const bool binary = binary_operands(a, b);
    plan.use_vocab = !binary && vocab_cost < profile.t_mult_float;
    plan.per_invocation_cost = plan.use_vocab ? vocab_cost : profile.t_mult(binary ? ValueKind::Binary : ValueKind::Float32);
    return plan;
}

SpgemmResult spgemm_ap(const CooMatrix& a, const CooMatrix& b, const CostProfile& profile, const SpgemmOptions& opts) {
    return run_ap_family(a, b, profile, opts, {false, false});
}

SpgemmResult spgemm_ap_acc(const CooMatrix& a, const CooMatrix& b, const CostProfile& profile,
                           const SpgemmOptions& opts) {
    return run_ap_family(a, b, profile, opts, {false, true});
}

SpgemmResult spgemm_ap_mult(const CooMatrix& a, const CooMatrix& b, const CostProfile& profile,
                            const SpgemmOptions& opts) {
    return run_ap_family(a, b, profile, opts, {true, false});
}

SpgemmResult spgemm_ap_mult_acc(const CooMatrix& a, const CooMatrix& b, const CostProfile& profile,
                                const SpgemmOptions& opts) {
    return run_ap_family(a, b, profile, opts, {true, true});
}

SpgemmResult spgemm_cpu_baseline(const CooMatrix& a, const CooMatrix& b, const CostProfile& profile) {
    profile.validate();
    if (a.n_cols() != b.n_rows()) {
        throw DimensionError("inner dimensions differ: A has " + std::to_string(a.n_cols()) + " columns, B has " +
                             std::to_string(b.n_rows()) + " rows");
    }
    const auto b_ptr = b.row_offsets();
    const auto b_entries = b.entries();

    std::vector<Value> acc(b.n_cols(), 0.0f);
    std::vector<std::uint8_t> live(b.n_cols(), 0);
    std::vector<Index> touched;
    std::vector<Entry> c;

    std::uint64_t lookups = 0;
    std::uint64_t matched = 0;
    const auto a_entries = a.entries();
    for (std::size_t p = 0; p < a_entries.size();) {
        const Index j = a_entries[p].row;
        for (; p < a_entries.size() && a_entries[p].row == j; ++p) {
            const auto& ae = a_entries[p];
            ++lookups;
            for (std::size_t q = b_ptr[ae.col]; q < b_ptr[ae.col + 1]; ++q) {
                const auto& be = b_entries[q];
                const Value prod = ae.value * be.value;
                ++matched;
                if (!live[be.col]) {
                    live[be.col] = 1;
                    acc[be.col] = prod;
                    touched.push_back(be.col);
                } else {
                    acc[be.col] += prod;
                }
            }
        }
        std::sort(touched.begin(), touched.end());
        for (auto k : touched) {
            if (acc[k] != 0.0f) c.push_back({j, k, acc[k]});
            live[k] = 0;
        }
        touched.clear();
    }

    SpgemmResult r;
    const ValueKind c_kind = product_kind(a, b, c);
    r.c = CooMatrix::from_sorted(a.n_rows(), b.n_cols(), std::move(c), c_kind);
    r.ledger.charge(Phase::CpuMatching, lookups * profile.cpu_lookup + matched * profile.cpu_mem);
    r.ledger.charge(Phase::CpuMultiplication, matched * profile.cpu_alu_op);
    r.ledger.charge(Phase::CpuAccumulation, matched * profile.cpu_alu_op);
    r.singleton_count = matched;
    r.flops = 2 * matched;
    r.array_size = 0;
    r.operand_kind = binary_operands(a, b) ? ValueKind::Binary : ValueKind::Float32;
    return r;
}

SpgemmResult run_algorithm(Algorithm algo, const CooMatrix& a, const CooMatrix& b, const CostProfile& profile,
                           const SpgemmOptions& opts) {
    switch (algo) {
    case Algorithm::Ap: return spgemm_ap(a, b, profile, opts);
    case Algorithm::ApAcc: return spgemm_ap_acc(a, b, profile, opts);
    case Algorithm::ApMult: return spgemm_ap_mult(a, b, profile, opts);
    case Algorithm::ApMultAcc: return spgemm_ap_mult_acc(a, b, profile, opts);
    case Algorithm::Cpu: return spgemm_cpu_baseline(a, b, profile);
    }
    throw std::invalid_argument("unknown algorithm");
}

}  // namespace apspgemm
