#ifndef APSPGEMM_AP_CORE_HPP
#define APSPGEMM_AP_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "apspgemm/sparse_io.hpp"

namespace apspgemm {

using Cycles = std::uint64_t;

struct EnergyCoefficients {
    // picojoules per event
    double match_pj = 0.01;
    double mismatch_pj = 0.001;
    double write_pj = 0.05;
    double miswrite_pj = 0.001;
    double reduction_pj = 0.5;
};

/// Cycle costs of the AP primitives and of the host CPU loops.
struct CostProfile {
    Cycles t_mult_float = 8800;
    Cycles t_mult_binary = 8;
    Cycles t_red = 600;
    unsigned wordlength_float = 32;
    unsigned wordlength_binary = 2;
    Cycles t_compare = 1;
    Cycles t_tagged_write = 1;
    /// Fill latency of the 4-stage host pipeline, charged once per serial loop entry.
    Cycles pipeline_fill = 4;
    /// Parallel clear of the per-row alignment fields.
    Cycles t_row_reset = 1;
    /// Pipelined host loop passes: read-multiply-write back, read-accumulate.
    Cycles cpu_mult_pass = 2;
    Cycles cpu_acc_pass = 1;
    /// Serial CPU baseline: cycles to locate B's row, extra memory cycles per
    /// matched element, and one single-stage FP multiply or add.
    Cycles cpu_lookup = 4;
    Cycles cpu_mem = 2;
    Cycles cpu_alu_op = 1;
    EnergyCoefficients energy;
    double cpu_frequency_hz = 1e9;

    Cycles t_mult(ValueKind kind) const { return kind == ValueKind::Binary ? t_mult_binary : t_mult_float; }
    unsigned wordlength(ValueKind kind) const {
        return kind == ValueKind::Binary ? wordlength_binary : wordlength_float;
    }

    /// Throws std::invalid_argument naming the first offending field.
    void validate() const;
};

struct OpCounters {
    std::uint64_t match = 0;
    std::uint64_t mismatch = 0;
    std::uint64_t write = 0;
    std::uint64_t miswrite = 0;
    std::uint64_t reduction = 0;

    OpCounters& operator+=(const OpCounters& o);
    friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

/// Where a cycle charge lands. Cpu* phases are the serial host loops;
/// Overlapped work is hidden behind another operation and costs nothing.
enum class Phase : std::uint8_t {
    Matching,
    Multiplication,
    Accumulation,
    CpuMatching,
    CpuMultiplication,
    CpuAccumulation,
    CpuFill,
    Overlapped,
};

struct CycleLedger {
    Cycles matching = 0;
    Cycles multiplication = 0;
    Cycles accumulation = 0;
    Cycles cpu = 0;
    Cycles total = 0;

    // Split of `cpu` by the processing step it serves.
    Cycles cpu_matching = 0;
    Cycles cpu_multiplication = 0;
    Cycles cpu_accumulation = 0;
    Cycles cpu_fill = 0;

    /// Exact number of accumulation-loop passes (distinct (row, k) groups).
    std::uint64_t accumulation_passes = 0;

    void charge(Phase phase, Cycles cycles);

    // Per processing step, AP and host cycles combined (fill reported apart).
    Cycles step_matching() const { return matching + cpu_matching; }
    Cycles step_multiplication() const { return multiplication + cpu_multiplication; }
    Cycles step_accumulation() const { return accumulation + cpu_accumulation; }

    friend bool operator==(const CycleLedger&, const CycleLedger&) = default;
};

enum class Region : std::uint8_t { ASpace, BSpace, CSpace };
enum class KeyField : std::uint8_t { RowIndex, ColIndex };
enum class WriteField : std::uint8_t { AlignedA, Product, Used };

/// Compare qualifiers beyond the key match.
enum class TagFilter : std::uint8_t {
    None,
    Singleton,        // word carries a product
    UnusedSingleton,  // word carries a product and is not marked used
};

/// One associative processing unit: a matrix element plus the alignment fields.
struct ApWord {
    Index row_index = 0;
    Index col_index = 0;
    Value value = 0;
    Region region = Region::BSpace;

    std::optional<Value> aligned_a() const { return has_aligned_ ? std::optional<Value>(aligned_) : std::nullopt; }
    std::optional<Value> product() const { return has_product_ ? std::optional<Value>(product_) : std::nullopt; }
    bool used() const { return used_; }

private:
    friend class ApArray;
    Value aligned_ = 0;
    Value product_ = 0;
    bool has_aligned_ = false;
    bool has_product_ = false;
    bool used_ = false;
};

class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Cycles a primitive charges and the phase they land in.
struct Charge {
    Phase phase = Phase::Overlapped;
    Cycles cycles = 0;
};

/// Number of distinct element values across both operands.
std::size_t combined_unique_values(const CooMatrix& a, const CooMatrix& b);

/// Products of all pairs of unique element values.
class Vocabulary {
public:
    /// Builds the table over the union of values of both operands. Throws
    /// std::length_error past max_size unique values.
    Vocabulary(const CooMatrix& a, const CooMatrix& b);

    std::size_t size() const { return values_.size(); }
    /// 2 n^2 cycles per lookup pass over all pairs.
    Cycles cost() const { return 2ull * values_.size() * values_.size(); }
    Value lookup(Value a, Value b) const;

    static constexpr std::size_t max_size = 2048;

private:
    std::size_t position(Value v) const;
    std::vector<Value> values_;
    std::vector<Value> table_;
};

/// Selection for read_next.
enum class ReadQuery : std::uint8_t {
    RowOf,            // words of `region` whose row_index == key
    Tagged,           // currently tagged words
    UnusedSingleton,  // product present and not used
};

/**
 * The associative processing array.
 *
 * Words are laid out A space first, then B space, each in COO order. Every
 * primitive has the functional semantics of a full-array operation and
 * updates the event counters as if all words participated. Lookups that
 * would be a linear scan are served from indexes over the sorted layout and
 * over the words aligned for the current row; constructing the array with
 * `indexed = false` disables them for cross-checking.
 */
class ApArray {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t size() const { return words_.size(); }
    std::span<const ApWord> words() const { return words_; }
    /// Tag flag per word.
    std::span<const std::uint8_t> tags() const { return tags_; }
    /// Tagged word positions in storage order.
    std::span<const std::size_t> tagged() const { return tagged_; }
    /// Words carrying aligned_a, in storage order.
    std::span<const std::size_t> aligned_words() const { return aligned_; }

    const OpCounters& counters() const { return counters_; }
    const CycleLedger& ledger() const { return ledger_; }
    CycleLedger& ledger() { return ledger_; }

    std::uint64_t compare_invocations() const { return compare_calls_; }
    std::uint64_t write_invocations() const { return write_calls_; }

    /// [first, last) storage positions of a region.
    std::pair<std::size_t, std::size_t> region_range(Region r) const;

    /// Sets tags on `region` words whose `field` equals key and that pass `filter`.
    std::size_t compare_tag(Region region, KeyField field, Index key, TagFilter filter, Charge charge = {});

    /// Writes every tagged word. `value` is ignored for Used.
    void write_tagged(WriteField field, Value value, Charge charge = {});

    /// Single-word write of an aligned pair and its product (host write-back).
    /// Counted like a tagged write with exactly one tagged word.
    void write_pair_at(std::size_t word, Value aligned_a, Value product, Charge charge = {});

    /// First word strictly after `cursor` (npos = from the start) satisfying
    /// the query. `charge` applies only when a word is returned.
    std::optional<std::size_t> read_next(ReadQuery query, std::size_t cursor, Charge charge = {},
                                         Region region = Region::ASpace, Index key = 0);

    /// Multiplies every aligned pair that has no product yet. Returns the
    /// number of products formed; charges `cost` once if that is nonzero.
    std::size_t associative_mult(bool binary, Charge charge);

    /// Vocabulary variant: products come from a precomputed table.
    std::size_t associative_mult(const Vocabulary& vocab, Charge charge);

    /// Sum of tagged products in storage order; counts one reduction event per
    /// tagged word. The pipelined tree charges no cycles here.
    Value reduce_sum_tagged();

    /// Clears aligned_a / product / used on the aligned words. Counted as one
    /// tagged write over those words.
    void reset_alignment(Charge charge = {});

    void charge(Charge c) { ledger_.charge(c.phase, c.cycles); }

private:
    friend ApArray load_coo(const CooMatrix&, const CooMatrix&, std::optional<std::size_t>, bool);

    void clear_tags();
    void tag(std::size_t w);
    bool passes(const ApWord& w, TagFilter filter) const;
    void rebuild_col_index();
    void count_compare(std::size_t tagged);
    void count_write(std::size_t written);
    void note_aligned(std::size_t w);

    std::vector<ApWord> words_;
    std::vector<std::uint8_t> tags_;
    std::vector<std::size_t> tagged_;
    std::vector<std::size_t> aligned_;

    OpCounters counters_;
    CycleLedger ledger_;
    std::uint64_t compare_calls_ = 0;
    std::uint64_t write_calls_ = 0;

    bool indexed_ = true;
    std::size_t a_begin_ = 0, a_end_ = 0, b_begin_ = 0, b_end_ = 0;
    std::vector<std::size_t> a_row_ptr_;  // offsets relative to a_begin_
    std::vector<std::size_t> b_row_ptr_;
    Index b_cols_ = 0;

    // Column buckets over aligned words (singly linked, storage order).
    bool col_index_valid_ = false;
    std::vector<std::size_t> col_head_;
    std::vector<std::size_t> col_next_;   // parallel to aligned_
    std::vector<Index> touched_cols_;
};

/// Loads A into A space and B into B space. Throws DimensionError when
/// A.n_cols != B.n_rows and CapacityError when the words exceed `capacity`.
ApArray load_coo(const CooMatrix& a, const CooMatrix& b, std::optional<std::size_t> capacity = std::nullopt,
                 bool indexed = true);

}  // namespace apspgemm

#endif  // APSPGEMM_AP_CORE_HPP
