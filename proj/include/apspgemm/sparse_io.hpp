#ifndef APSPGEMM_SPARSE_IO_HPP
#define APSPGEMM_SPARSE_IO_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace apspgemm {

using Index = std::uint32_t;
/// Matrix elements are held in IEEE single precision throughout the simulator.
using Value = float;

enum class ValueKind : std::uint8_t { Binary, Float32 };

std::string_view to_string(ValueKind kind);

struct Entry {
    Index row;
    Index col;
    Value value;

    friend bool operator==(const Entry&, const Entry&) = default;
};

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Coordinate-format sparse matrix.
 *
 * Entries are kept sorted by (row, col) with no duplicates and no stored
 * zeros. A Binary matrix holds only +1 / -1 values.
 */
class CooMatrix {
public:
    CooMatrix() = default;

    /// Normalizes arbitrary triplets: sorts, sums duplicates, drops zeros.
    /// When `kind` is omitted it is inferred (Binary iff every value is +/-1).
    static CooMatrix from_triplets(Index n_rows, Index n_cols, std::vector<Entry> triplets,
                                   std::optional<ValueKind> kind = std::nullopt);

    /// Takes entries that are already normalized; validates instead of sorting.
    static CooMatrix from_sorted(Index n_rows, Index n_cols, std::vector<Entry> entries,
                                 std::optional<ValueKind> kind = std::nullopt);

    static CooMatrix identity(Index n, ValueKind kind = ValueKind::Float32);

    Index n_rows() const { return n_rows_; }
    Index n_cols() const { return n_cols_; }
    std::size_t nnz() const { return entries_.size(); }
    ValueKind value_kind() const { return kind_; }
    std::span<const Entry> entries() const { return entries_; }

    /// CSR-style offsets into entries(); size n_rows() + 1.
    std::vector<std::size_t> row_offsets() const;

    /// Same pattern and values, different kind tag. Fails if Binary is
    /// requested for a matrix holding anything other than +/-1.
    CooMatrix with_kind(ValueKind kind) const;

    friend bool operator==(const CooMatrix&, const CooMatrix&) = default;

private:
    CooMatrix(Index n_rows, Index n_cols, std::vector<Entry> entries, ValueKind kind)
        : n_rows_(n_rows), n_cols_(n_cols), entries_(std::move(entries)), kind_(kind) {}

    Index n_rows_ = 0;
    Index n_cols_ = 0;
    std::vector<Entry> entries_;
    ValueKind kind_ = ValueKind::Float32;
};

bool all_plus_minus_one(std::span<const Entry> entries);

/// Kind of a product A * B with entries `c`: Binary only when both operands
/// are Binary and every sum is still +/-1.
ValueKind product_kind(const CooMatrix& a, const CooMatrix& b, std::span<const Entry> c);

// ---------------------------------------------------------------------------
// Matrix Market

class ParseError : public std::runtime_error {
public:
    enum class Kind { Banner, Header, IndexOutOfBounds, BadToken, EntryCount, Io };

    ParseError(Kind kind, std::size_t line, const std::string& what);

    Kind kind() const { return kind_; }
    /// 1-based line number; 0 when the error is not tied to a line.
    std::size_t line() const { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

CooMatrix parse_matrix_market(std::istream& in);
CooMatrix parse_matrix_market(std::string_view text);
CooMatrix read_matrix_market(const std::string& path);

/// Writes `coordinate general`: `integer` for Binary matrices, `real` otherwise.
/// Values are printed with enough digits to round-trip a float exactly.
void write_matrix_market(std::ostream& out, const CooMatrix& m);
void write_matrix_market(const std::string& path, const CooMatrix& m);

// ---------------------------------------------------------------------------
// Statistics

struct MatrixStats {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::size_t nnz = 0;
    double nnz_per_row_avg = 0.0;  // nnz / n_rows
    std::size_t nnz_row_count = 0; // rows holding at least one nonzero
    unsigned wordlength_m = 0;
    std::size_t unique_value_count_n = 0;
    std::uint64_t vocab_cost = 0;  // 2 n^2
    ValueKind value_kind = ValueKind::Float32;

    /// Average over non-empty rows; nnz / this is exactly nnz_row_count.
    double nnz_per_nonzero_row() const {
        return nnz_row_count == 0 ? 0.0 : static_cast<double>(nnz) / static_cast<double>(nnz_row_count);
    }
};

/// 2 for +/-1 matrices; k+1 for integers that fit in k <= 31 magnitude bits;
/// 32 for everything else.
unsigned effective_wordlength(const CooMatrix& m);
unsigned effective_wordlength(std::span<const Entry> entries);

MatrixStats compute_stats(const CooMatrix& m);

struct Histogram {
    std::vector<double> edges;         // bin i covers [edges[i], edges[i+1])
    std::vector<std::size_t> counts;   // edges.size() - 1 bins
    std::size_t below = 0;             // samples left of edges.front()
    std::size_t above = 0;             // samples at or right of edges.back()

    void add(double x);
    std::size_t total() const;
};

Histogram make_histogram(std::vector<double> edges);

struct HistogramEdges {
    std::vector<double> wordlength{1, 3, 9, 17, 25, 33};
    std::vector<double> density{1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0000001};
    std::vector<double> vocab_cost{1, 10, 100, 1e3, 8800, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9, 1e10, 1e11, 1e12, 1e13};
};

struct HistogramBundle {
    Histogram wordlength;
    Histogram density;      // nnz_per_row_avg / n_cols
    Histogram vocab_cost;
    std::size_t matrices = 0;
    std::size_t non_binary = 0;
    std::size_t vocab_eligible = 0;
    /// vocab_eligible / non_binary; empty when every matrix is binary.
    std::optional<double> vocab_eligible_fraction;
};

/// Fails on an empty list. `vocab_threshold` is the associative multiply cost
/// a vocabulary lookup has to beat.
HistogramBundle corpus_histograms(std::span<const MatrixStats> stats,
                                  double vocab_threshold = 8800.0,
                                  const HistogramEdges& edges = {});

}  // namespace apspgemm

#endif  // APSPGEMM_SPARSE_IO_HPP
