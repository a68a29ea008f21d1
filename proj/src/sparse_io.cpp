#include "apspgemm/sparse_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace apspgemm {

std::string_view to_string(ValueKind kind) {
    return kind == ValueKind::Binary ? "binary" : "float32";
}

bool all_plus_minus_one(std::span<const Entry> entries) {
    return std::all_of(entries.begin(), entries.end(),
                       [](const Entry& e) { return e.value == 1.0f || e.value == -1.0f; });
}

namespace {

ValueKind resolve_kind(std::span<const Entry> entries, std::optional<ValueKind> requested) {
    const bool binary_values = !entries.empty() && all_plus_minus_one(entries);
    if (!requested) {
        return binary_values ? ValueKind::Binary : ValueKind::Float32;
    }
    if (*requested == ValueKind::Binary && !entries.empty() && !binary_values) {
        throw std::invalid_argument("binary matrix may only hold +1/-1 values");
    }
    return *requested;
}

bool entry_less(const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
}

}  // namespace

CooMatrix CooMatrix::from_triplets(Index n_rows, Index n_cols, std::vector<Entry> triplets,
                                   std::optional<ValueKind> kind) {
    for (const auto& e : triplets) {
        if (e.row >= n_rows || e.col >= n_cols) {
            throw std::out_of_range("triplet (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                                    ") outside " + std::to_string(n_rows) + "x" + std::to_string(n_cols));
        }
    }
    std::stable_sort(triplets.begin(), triplets.end(), entry_less);

    std::vector<Entry> out;
    out.reserve(triplets.size());
    for (std::size_t i = 0; i < triplets.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < triplets.size() && triplets[j].row == triplets[i].row && triplets[j].col == triplets[i].col) {
            sum += triplets[j].value;
            ++j;
        }
        const auto v = static_cast<Value>(sum);
        if (v != 0.0f) {
            out.push_back({triplets[i].row, triplets[i].col, v});
        }
        i = j;
    }
    const ValueKind k = resolve_kind(out, kind);
    return CooMatrix(n_rows, n_cols, std::move(out), k);
}

CooMatrix CooMatrix::from_sorted(Index n_rows, Index n_cols, std::vector<Entry> entries,
                                 std::optional<ValueKind> kind) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (e.row >= n_rows || e.col >= n_cols) {
            throw std::out_of_range("entry outside matrix bounds");
        }
        if (e.value == 0.0f) {
            throw std::invalid_argument("explicit zero in sorted entries");
        }
        if (i > 0 && !entry_less(entries[i - 1], e)) {
            throw std::invalid_argument("entries not strictly sorted by (row, col)");
        }
    }
    const ValueKind k = resolve_kind(entries, kind);
    return CooMatrix(n_rows, n_cols, std::move(entries), k);
}

ValueKind product_kind(const CooMatrix& a, const CooMatrix& b, std::span<const Entry> c) {
    const bool binary = a.value_kind() == ValueKind::Binary && b.value_kind() == ValueKind::Binary;
    return binary && all_plus_minus_one(c) ? ValueKind::Binary : ValueKind::Float32;
}

CooMatrix CooMatrix::identity(Index n, ValueKind kind) {
    std::vector<Entry> e;
    e.reserve(n);
    for (Index i = 0; i < n; ++i) {
        e.push_back({i, i, 1.0f});
    }
    return CooMatrix(n, n, std::move(e), kind);
}

std::vector<std::size_t> CooMatrix::row_offsets() const {
    std::vector<std::size_t> ptr(static_cast<std::size_t>(n_rows_) + 1, 0);
    for (const auto& e : entries_) {
        ++ptr[e.row + 1];
    }
    for (std::size_t r = 0; r < n_rows_; ++r) {
        ptr[r + 1] += ptr[r];
    }
    return ptr;
}

CooMatrix CooMatrix::with_kind(ValueKind kind) const {
    return CooMatrix(n_rows_, n_cols_, entries_, resolve_kind(entries_, kind));
}

// ---------------------------------------------------------------------------
// Matrix Market

namespace {

std::string kind_name(ParseError::Kind k) {
    switch (k) {
    case ParseError::Kind::Banner: return "malformed banner";
    case ParseError::Kind::Header: return "malformed size line";
    case ParseError::Kind::IndexOutOfBounds: return "index out of bounds";
    case ParseError::Kind::BadToken: return "non-numeric token";
    case ParseError::Kind::EntryCount: return "entry count mismatch";
    case ParseError::Kind::Io: return "i/o error";
    }
    return "parse error";
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

template <typename T>
T parse_number(std::string_view tok, std::size_t line, ParseError::Kind on_error = ParseError::Kind::BadToken) {
    T value{};
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && tok.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError(on_error, line, "'" + std::string(tok) + "'");
    }
    return value;
}

enum class Field { Real, Integer, Pattern };

}  // namespace

ParseError::ParseError(Kind kind, std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + kind_name(kind) +
                         (what.empty() ? "" : ": " + what)),
      kind_(kind), line_(line) {}

CooMatrix parse_matrix_market(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) {
        throw ParseError(ParseError::Kind::Banner, 1, "empty input");
    }
    ++line_no;
    const auto banner = split_ws(line);
    if (banner.size() != 5 || banner[0] != "%%MatrixMarket" || lower(banner[1]) != "matrix" ||
        lower(banner[2]) != "coordinate") {
        throw ParseError(ParseError::Kind::Banner, line_no, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'");
    }
    Field field;
    const auto f = lower(banner[3]);
    if (f == "real") field = Field::Real;
    else if (f == "integer") field = Field::Integer;
    else if (f == "pattern") field = Field::Pattern;
    else throw ParseError(ParseError::Kind::Banner, line_no, "unsupported field '" + f + "'");

    const auto sym = lower(banner[4]);
    bool symmetric;
    if (sym == "general") symmetric = false;
    else if (sym == "symmetric") symmetric = true;
    else throw ParseError(ParseError::Kind::Banner, line_no, "unsupported symmetry '" + sym + "'");

    // Size line: first non-comment, non-blank line.
    std::vector<std::string_view> toks;
    for (;;) {
        if (!std::getline(in, line)) {
            throw ParseError(ParseError::Kind::Header, line_no + 1, "missing size line");
        }
        ++line_no;
        if (!line.empty() && line[0] == '%') continue;
        toks = split_ws(line);
        if (!toks.empty()) break;
    }
    if (toks.size() != 3) {
        throw ParseError(ParseError::Kind::Header, line_no, "expected 'rows cols nnz'");
    }
    const auto rows = parse_number<std::uint64_t>(toks[0], line_no, ParseError::Kind::Header);
    const auto cols = parse_number<std::uint64_t>(toks[1], line_no, ParseError::Kind::Header);
    const auto declared = parse_number<std::uint64_t>(toks[2], line_no, ParseError::Kind::Header);
    if (rows > std::numeric_limits<Index>::max() || cols > std::numeric_limits<Index>::max()) {
        throw ParseError(ParseError::Kind::Header, line_no, "dimension exceeds 32-bit index range");
    }
    if (symmetric && rows != cols) {
        throw ParseError(ParseError::Kind::Header, line_no, "symmetric matrix must be square");
    }

    const std::size_t want = field == Field::Pattern ? 2 : 3;
    std::vector<Entry> triplets;
    triplets.reserve(symmetric ? 2 * declared : declared);
    std::uint64_t seen = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '%') continue;
        toks = split_ws(line);
        if (toks.empty()) continue;
        if (seen == declared) {
            throw ParseError(ParseError::Kind::EntryCount, line_no,
                             "more than the declared " + std::to_string(declared) + " entries");
        }
        if (toks.size() != want) {
            throw ParseError(ParseError::Kind::BadToken, line_no,
                             "expected " + std::to_string(want) + " tokens, got " + std::to_string(toks.size()));
        }
        const auto r = parse_number<std::uint64_t>(toks[0], line_no, ParseError::Kind::Header);
        const auto c = parse_number<std::uint64_t>(toks[1], line_no, ParseError::Kind::Header);
        if (r == 0 || c == 0 || r > rows || c > cols) {
            throw ParseError(ParseError::Kind::IndexOutOfBounds, line_no,
                             "(" + std::to_string(r) + ", " + std::to_string(c) + ") not in " +
                                 std::to_string(rows) + "x" + std::to_string(cols));
        }
        Value v = 1.0f;
        if (field == Field::Real) {
            v = parse_number<float>(toks[2], line_no);
        } else if (field == Field::Integer) {
            v = static_cast<Value>(parse_number<std::int64_t>(toks[2], line_no));
        }
        const auto ri = static_cast<Index>(r - 1);
        const auto ci = static_cast<Index>(c - 1);
        triplets.push_back({ri, ci, v});
        if (symmetric && ri != ci) {
            triplets.push_back({ci, ri, v});
        }
        ++seen;
    }
    if (in.bad()) {
        throw ParseError(ParseError::Kind::Io, line_no, "read failure");
    }
    if (seen != declared) {
        throw ParseError(ParseError::Kind::EntryCount, line_no,
                         "declared " + std::to_string(declared) + " entries, found " + std::to_string(seen));
    }

    if (field == Field::Pattern) {
        // Pattern duplicates collapse to a single +1 so the matrix stays binary.
        std::stable_sort(triplets.begin(), triplets.end(), entry_less);
        triplets.erase(std::unique(triplets.begin(), triplets.end(),
                                   [](const Entry& a, const Entry& b) { return a.row == b.row && a.col == b.col; }),
                       triplets.end());
        return CooMatrix::from_sorted(static_cast<Index>(rows), static_cast<Index>(cols), std::move(triplets),
                                      ValueKind::Binary);
    }
    return CooMatrix::from_triplets(static_cast<Index>(rows), static_cast<Index>(cols), std::move(triplets));
}

CooMatrix parse_matrix_market(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_matrix_market(in);
}

CooMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(ParseError::Kind::Io, 0, "cannot open '" + path + "'");
    }
    return parse_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const CooMatrix& m) {
    const bool binary = m.value_kind() == ValueKind::Binary;
    out << "%%MatrixMarket matrix coordinate " << (binary ? "integer" : "real") << " general\n";
    out << m.n_rows() << ' ' << m.n_cols() << ' ' << m.nnz() << '\n';
    char buf[64];
    for (const auto& e : m.entries()) {
        out << (e.row + 1) << ' ' << (e.col + 1) << ' ';
        if (binary) {
            out << (e.value > 0 ? "1" : "-1");
        } else {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), e.value);
            out.write(buf, ptr - buf);
        }
        out << '\n';
    }
}

void write_matrix_market(const std::string& path, const CooMatrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    write_matrix_market(out, m);
    if (!out) {
        throw std::runtime_error("write failed for '" + path + "'");
    }
}

// ---------------------------------------------------------------------------
// Statistics

unsigned effective_wordlength(std::span<const Entry> entries) {
    if (entries.empty()) {
        return 0;
    }
    if (all_plus_minus_one(entries)) {
        return 2;
    }
    std::uint64_t max_mag = 0;
    for (const auto& e : entries) {
        const double v = e.value;
        if (!std::isfinite(v) || v != std::trunc(v) || std::fabs(v) >= 2147483648.0) {
            return 32;
        }
        max_mag = std::max(max_mag, static_cast<std::uint64_t>(std::fabs(v)));
    }
    const auto k = static_cast<unsigned>(std::bit_width(max_mag));
    return k + 1;
}

unsigned effective_wordlength(const CooMatrix& m) { return effective_wordlength(m.entries()); }

MatrixStats compute_stats(const CooMatrix& m) {
    MatrixStats s;
    s.n_rows = m.n_rows();
    s.n_cols = m.n_cols();
    s.value_kind = m.value_kind();
    s.nnz = m.nnz();
    if (s.nnz == 0) {
        return s;
    }
    s.nnz_per_row_avg = static_cast<double>(s.nnz) / static_cast<double>(s.n_rows);

    Index prev_row = m.entries().front().row;
    s.nnz_row_count = 1;
    std::vector<Value> values;
    values.reserve(s.nnz);
    for (const auto& e : m.entries()) {
        if (e.row != prev_row) {
            ++s.nnz_row_count;
            prev_row = e.row;
        }
        values.push_back(e.value);
    }
    std::sort(values.begin(), values.end());
    s.unique_value_count_n = static_cast<std::size_t>(std::unique(values.begin(), values.end()) - values.begin());
    s.vocab_cost = 2ull * s.unique_value_count_n * s.unique_value_count_n;
    s.wordlength_m = effective_wordlength(m);
    return s;
}

void Histogram::add(double x) {
    if (edges.empty() || x < edges.front()) {
        ++below;
        return;
    }
    if (x >= edges.back()) {
        ++above;
        return;
    }
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    ++counts[static_cast<std::size_t>(it - edges.begin()) - 1];
}

std::size_t Histogram::total() const {
    std::size_t t = below + above;
    for (auto c : counts) t += c;
    return t;
}

Histogram make_histogram(std::vector<double> edges) {
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()) ||
        std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
        throw std::invalid_argument("histogram edges must be strictly increasing with at least two values");
    }
    Histogram h;
    h.counts.assign(edges.size() - 1, 0);
    h.edges = std::move(edges);
    return h;
}

HistogramBundle corpus_histograms(std::span<const MatrixStats> stats, double vocab_threshold,
                                  const HistogramEdges& edges) {
    if (stats.empty()) {
        throw std::invalid_argument("corpus_histograms: empty stats list");
    }
    HistogramBundle b;
    b.wordlength = make_histogram(edges.wordlength);
    b.density = make_histogram(edges.density);
    b.vocab_cost = make_histogram(edges.vocab_cost);
    for (const auto& s : stats) {
        ++b.matrices;
        b.wordlength.add(s.wordlength_m);
        b.density.add(s.n_cols == 0 ? 0.0 : s.nnz_per_row_avg / static_cast<double>(s.n_cols));
        b.vocab_cost.add(static_cast<double>(s.vocab_cost));
        if (s.wordlength_m != 2) {
            ++b.non_binary;
            if (static_cast<double>(s.vocab_cost) < vocab_threshold) {
                ++b.vocab_eligible;
            }
        }
    }
    if (b.non_binary > 0) {
        b.vocab_eligible_fraction = static_cast<double>(b.vocab_eligible) / static_cast<double>(b.non_binary);
    }
    return b;
}

}  // namespace apspgemm
