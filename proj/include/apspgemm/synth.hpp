#ifndef APSPGEMM_SYNTH_HPP
#define APSPGEMM_SYNTH_HPP

#include <cstdint>

#include "apspgemm/sparse_io.hpp"

namespace apspgemm {

struct SynthParams {
    Index n_rows = 1000;
    Index n_cols = 0;  // 0: square
    /// May be fractional: rows get floor or ceil so that
    /// nnz = round(n_rows * nnz_per_row).
    double nnz_per_row = 7.0;
    ValueKind kind = ValueKind::Float32;
    std::uint64_t seed = 1;
};

/// Uniform random column placement without replacement in every row. The
/// sparsity pattern depends only on (shape, nnz_per_row, seed), so binary and
/// float matrices generated with the same seed share it. Float values are
/// uniform in [-1, 1) excluding 0; binary values are +/-1.
/// Throws std::invalid_argument for infeasible parameters.
CooMatrix synthesize(const SynthParams& p);

}  // namespace apspgemm

#endif  // APSPGEMM_SYNTH_HPP
