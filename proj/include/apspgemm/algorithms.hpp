#ifndef APSPGEMM_ALGORITHMS_HPP
#define APSPGEMM_ALGORITHMS_HPP

#include <cstdint>
#include <optional>
#include <string_view>

#include "apspgemm/ap_core.hpp"
#include "apspgemm/sparse_io.hpp"

namespace apspgemm {

enum class Algorithm : std::uint8_t { Ap, ApAcc, ApMult, ApMultAcc, Cpu };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

enum class VocabMode : std::uint8_t { Auto, On, Off };

struct SpgemmResult {
    CooMatrix c;
    CycleLedger ledger;
    OpCounters counters;
    std::uint64_t singleton_count = 0;
    std::uint64_t flops = 0;  // one multiply and one add per singleton
    /// Compare / tagged-write commands issued, for conservation checks.
    std::uint64_t compare_invocations = 0;
    std::uint64_t write_invocations = 0;
    std::size_t array_size = 0;
    bool vocabulary_used = false;
    /// Cycles charged per associative multiply invocation (0 when none is issued).
    Cycles mult_invocation_cost = 0;
    /// Operand class the AP cost constants were taken for.
    ValueKind operand_kind = ValueKind::Float32;
};

struct SpgemmOptions {
    VocabMode vocab = VocabMode::Off;
    /// Word limit of the simulated array; unlimited when empty.
    std::optional<std::size_t> capacity;
    /// false runs every primitive as a plain scan over the array.
    bool indexed = true;
};

struct VocabularyPlan {
    bool use_vocab = false;
    std::size_t unique_values = 0;
    Cycles per_invocation_cost = 0;  // 2 n^2 when used, else the associative multiply cost
};

/// Vocabulary lookup pays off when 2 n^2 undercuts the float multiply and the
/// operands are not binary.
VocabularyPlan vocabulary_plan(const CooMatrix& a, const CooMatrix& b, const CostProfile& profile);

/// Fully associative: tag-and-write matching, one parallel multiply per row,
/// tree reduction per output column.
SpgemmResult spgemm_ap(const CooMatrix& a, const CooMatrix& b, const CostProfile& profile,
                       const SpgemmOptions& opts = {});

/// Associative matching and multiply; the host accumulates tagged singletons.
SpgemmResult spgemm_ap_acc(const CooMatrix& a, const CooMatrix& b, const CostProfile& profile,
                           const SpgemmOptions& opts = {});

/// Host multiplies each matched pair and writes the product back; tree reduction.
SpgemmResult spgemm_ap_mult(const CooMatrix& a, const CooMatrix& b, const CostProfile& profile,
                            const SpgemmOptions& opts = {});

/// AP does matching only; the host multiplies and accumulates.
SpgemmResult spgemm_ap_mult_acc(const CooMatrix& a, const CooMatrix& b, const CostProfile& profile,
                                const SpgemmOptions& opts = {});

/// Row-by-row serial SpGEMM on the host alone.
SpgemmResult spgemm_cpu_baseline(const CooMatrix& a, const CooMatrix& b, const CostProfile& profile);

SpgemmResult run_algorithm(Algorithm algo, const CooMatrix& a, const CooMatrix& b, const CostProfile& profile,
                           const SpgemmOptions& opts = {});

}  // namespace apspgemm

#endif  // APSPGEMM_ALGORITHMS_HPP
