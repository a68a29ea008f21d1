#include "apspgemm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "apspgemm/ap_core.hpp"

namespace apspgemm {

namespace {

void check_inner(const CooMatrix& a, const CooMatrix& b) {
    if (a.n_cols() != b.n_rows()) {
        throw DimensionError("inner dimensions differ: " + std::to_string(a.n_cols()) + " vs " +
                             std::to_string(b.n_rows()));
    }
}

}  // namespace

CooMatrix spgemm_reference(const CooMatrix& a, const CooMatrix& b) {
    check_inner(a, b);
    // B rows by index, built independently of CooMatrix::row_offsets.
    std::map<Index, std::vector<Entry>> b_rows;
    for (const auto& e : b.entries()) b_rows[e.row].push_back(e);

    std::vector<Entry> out;
    std::map<Index, Value> row_acc;
    auto flush = [&](Index j) {
        for (const auto& [k, v] : row_acc) {
            if (v != 0.0f) out.push_back({j, k, v});
        }
        row_acc.clear();
    };

    const auto ae = a.entries();
    for (std::size_t p = 0; p < ae.size(); ++p) {
        const auto it = b_rows.find(ae[p].col);
        if (it != b_rows.end()) {
            for (const auto& be : it->second) {
                const Value prod = ae[p].value * be.value;
                auto [slot, inserted] = row_acc.try_emplace(be.col, prod);
                if (!inserted) slot->second += prod;
            }
        }
        if (p + 1 == ae.size() || ae[p + 1].row != ae[p].row) flush(ae[p].row);
    }
    const ValueKind c_kind = product_kind(a, b, out);
    return CooMatrix::from_sorted(a.n_rows(), b.n_cols(), std::move(out), c_kind);
}

CooMatrix spgemm_dense_check(const CooMatrix& a, const CooMatrix& b) {
    check_inner(a, b);
    if (a.n_rows() > dense_limit || a.n_cols() > dense_limit || b.n_cols() > dense_limit) {
        throw std::length_error("dense check limited to " + std::to_string(dense_limit) + "x" +
                                std::to_string(dense_limit) + " operands");
    }
    const std::size_t n = a.n_rows(), inner = a.n_cols(), m = b.n_cols();
    std::vector<Value> da(n * inner, 0.0f), db(inner * m, 0.0f);
    for (const auto& e : a.entries()) da[e.row * inner + e.col] = e.value;
    for (const auto& e : b.entries()) db[e.row * m + e.col] = e.value;

    std::vector<Entry> out;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            Value s = 0.0f;
            bool any = false;
            for (std::size_t i = 0; i < inner; ++i) {
                const Value x = da[j * inner + i], y = db[i * m + k];
                if (x == 0.0f || y == 0.0f) continue;
                s = any ? s + x * y : x * y;
                any = true;
            }
            if (any && s != 0.0f) out.push_back({static_cast<Index>(j), static_cast<Index>(k), s});
        }
    }
    const ValueKind c_kind = product_kind(a, b, out);
    return CooMatrix::from_sorted(a.n_rows(), b.n_cols(), std::move(out), c_kind);
}

MatrixDiff compare_matrices(const CooMatrix& actual, const CooMatrix& expected, double rel_tol) {
    MatrixDiff d;
    if (actual.n_rows() != expected.n_rows() || actual.n_cols() != expected.n_cols()) {
        d.same_shape = false;
        d.first_problem = "shape differs";
        return d;
    }
    std::unordered_map<Index, double> row_scale;
    for (const auto* m : {&actual, &expected}) {
        for (const auto& e : m->entries()) {
            auto& s = row_scale[e.row];
            s = std::max(s, static_cast<double>(std::fabs(e.value)));
        }
    }
    auto note = [&](const std::string& what) {
        if (d.first_problem.empty()) d.first_problem = what;
    };
    auto where = [](const Entry& e) { return "(" + std::to_string(e.row) + ", " + std::to_string(e.col) + ")"; };
    auto lone_ok = [&](const Entry& e) {
        return rel_tol > 0.0 && std::fabs(e.value) <= rel_tol * row_scale[e.row];
    };

    const auto x = actual.entries();
    const auto y = expected.entries();
    std::size_t i = 0, j = 0;
    auto less = [](const Entry& p, const Entry& q) { return p.row != q.row ? p.row < q.row : p.col < q.col; };
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && less(x[i], y[j]))) {
            if (!lone_ok(x[i])) {
                ++d.extra;
                note("extra entry at " + where(x[i]));
            }
            ++i;
        } else if (i == x.size() || less(y[j], x[i])) {
            if (!lone_ok(y[j])) {
                ++d.missing;
                note("missing entry at " + where(y[j]));
            }
            ++j;
        } else {
            const double u = x[i].value, v = y[j].value;
            const double denom = std::max(std::fabs(u), std::fabs(v));
            const double rel = denom == 0.0 ? 0.0 : std::fabs(u - v) / denom;
            d.max_relative = std::max(d.max_relative, rel);
            if (rel_tol == 0.0 ? (x[i].value != y[j].value) : rel > rel_tol) {
                ++d.mismatched;
                note("value differs at " + where(x[i]));
            }
            ++i;
            ++j;
        }
    }
    return d;
}

}  // namespace apspgemm
