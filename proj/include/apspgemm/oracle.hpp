#ifndef APSPGEMM_ORACLE_HPP
#define APSPGEMM_ORACLE_HPP

#include <cstddef>
#include <string>

#include "apspgemm/sparse_io.hpp"

namespace apspgemm {

/// Row-wise product with an ordered per-row accumulator. Contributions to
/// C(j, k) are summed in ascending i; exact-zero sums are dropped.
CooMatrix spgemm_reference(const CooMatrix& a, const CooMatrix& b);

/// Dense triple loop; limited to operands of at most dense_limit x dense_limit.
CooMatrix spgemm_dense_check(const CooMatrix& a, const CooMatrix& b);

inline constexpr std::size_t dense_limit = 64;

struct MatrixDiff {
    bool same_shape = true;
    std::size_t missing = 0;     // in expected, absent from actual
    std::size_t extra = 0;       // in actual, absent from expected
    std::size_t mismatched = 0;  // present in both, outside tolerance
    double max_relative = 0.0;
    std::string first_problem;

    bool ok() const { return same_shape && missing == 0 && extra == 0 && mismatched == 0; }
};

/// Entry-wise comparison. rel_tol = 0 demands bit-identical values. With a
/// tolerance, an entry present on only one side passes when its magnitude is
/// within rel_tol of the largest magnitude in its row (cancellation residue).
MatrixDiff compare_matrices(const CooMatrix& actual, const CooMatrix& expected, double rel_tol = 0.0);

}  // namespace apspgemm

#endif  // APSPGEMM_ORACLE_HPP
