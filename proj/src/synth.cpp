#include "apspgemm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace apspgemm {

namespace {

// Uniform integer in [0, bound]; modulo bias is negligible for 64-bit draws.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % (bound + 1); }

}  // namespace

CooMatrix synthesize(const SynthParams& p) {
    const Index n_cols = p.n_cols == 0 ? p.n_rows : p.n_cols;
    if (p.n_rows == 0 || n_cols == 0) {
        throw std::invalid_argument("synthesize: empty shape");
    }
    if (!(p.nnz_per_row > 0.0) || p.nnz_per_row > static_cast<double>(n_cols)) {
        throw std::invalid_argument("synthesize: nnz_per_row must lie in (0, n_cols]");
    }
    const auto total = static_cast<std::uint64_t>(std::llround(static_cast<double>(p.n_rows) * p.nnz_per_row));
    const auto base = static_cast<std::uint64_t>(std::floor(p.nnz_per_row));
    const std::uint64_t extra = total - base * p.n_rows;
    if (extra > p.n_rows || (extra > 0 && base + 1 > n_cols)) {
        throw std::invalid_argument("synthesize: infeasible nnz_per_row");
    }

    std::mt19937_64 pattern(p.seed);
    std::mt19937_64 values(p.seed ^ 0x9E3779B97F4A7C15ull);

    // Rows that receive one extra nonzero.
    std::vector<std::uint8_t> bumped(p.n_rows, 0);
    if (extra > 0) {
        std::vector<Index> order(p.n_rows);
        std::iota(order.begin(), order.end(), Index{0});
        for (std::uint64_t t = 0; t < extra; ++t) {
            const auto r = t + draw(pattern, p.n_rows - 1 - t);
            std::swap(order[t], order[r]);
            bumped[order[t]] = 1;
        }
    }

    std::vector<Entry> entries;
    entries.reserve(total);
    std::vector<std::uint8_t> taken(n_cols, 0);
    std::vector<Index> cols;
    for (Index row = 0; row < p.n_rows; ++row) {
        const std::uint64_t k = base + bumped[row];
        cols.clear();
        // Floyd's sampling of k distinct columns.
        for (std::uint64_t j = n_cols - k; j < n_cols; ++j) {
            const auto t = static_cast<Index>(draw(pattern, j));
            const Index pick = taken[t] ? static_cast<Index>(j) : t;
            taken[pick] = 1;
            cols.push_back(pick);
        }
        std::sort(cols.begin(), cols.end());
        for (auto c : cols) {
            taken[c] = 0;
            Value v;
            if (p.kind == ValueKind::Binary) {
                v = (values() & 1u) ? 1.0f : -1.0f;
            } else {
                do {
                    const auto u = static_cast<float>(values() >> 40) * 0x1p-24f;
                    v = 2.0f * u - 1.0f;
                } while (v == 0.0f);
            }
            entries.push_back({row, c, v});
        }
    }
    return CooMatrix::from_sorted(p.n_rows, n_cols, std::move(entries), p.kind);
}

}  // namespace apspgemm
