#include "apspgemm/ap_core.hpp"

#include <algorithm>
#include <string>

namespace apspgemm {

void CostProfile::validate() const {
    auto need_positive = [](Cycles v, const char* name) {
        if (v < 1) throw std::invalid_argument(std::string(name) + " must be >= 1 cycle");
    };
    need_positive(t_mult_float, "t_mult_float");
    need_positive(t_mult_binary, "t_mult_binary");
    need_positive(t_red, "t_red");
    need_positive(wordlength_float, "wordlength_float");
    need_positive(wordlength_binary, "wordlength_binary");
    need_positive(t_compare, "t_compare");
    need_positive(t_tagged_write, "t_tagged_write");
    need_positive(pipeline_fill, "pipeline_fill");
    need_positive(t_row_reset, "t_row_reset");
    need_positive(cpu_lookup, "cpu_lookup");
    need_positive(cpu_mem, "cpu_mem");
    need_positive(cpu_mult_pass, "cpu_mult_pass");
    need_positive(cpu_acc_pass, "cpu_acc_pass");
    need_positive(cpu_alu_op, "cpu_alu_op");
    const double coeffs[] = {energy.match_pj, energy.mismatch_pj, energy.write_pj, energy.miswrite_pj,
                             energy.reduction_pj};
    for (double c : coeffs) {
        if (!(c >= 0.0)) throw std::invalid_argument("energy coefficients must be >= 0");
    }
    if (!(cpu_frequency_hz > 0.0)) throw std::invalid_argument("cpu_frequency_hz must be > 0");
}

OpCounters& OpCounters::operator+=(const OpCounters& o) {
    match += o.match;
    mismatch += o.mismatch;
    write += o.write;
    miswrite += o.miswrite;
    reduction += o.reduction;
    return *this;
}

void CycleLedger::charge(Phase phase, Cycles cycles) {
    if (cycles == 0 || phase == Phase::Overlapped) {
        return;
    }
    switch (phase) {
    case Phase::Matching: matching += cycles; break;
    case Phase::Multiplication: multiplication += cycles; break;
    case Phase::Accumulation: accumulation += cycles; break;
    case Phase::CpuMatching: cpu += cycles; cpu_matching += cycles; break;
    case Phase::CpuMultiplication: cpu += cycles; cpu_multiplication += cycles; break;
    case Phase::CpuAccumulation: cpu += cycles; cpu_accumulation += cycles; break;
    case Phase::CpuFill: cpu += cycles; cpu_fill += cycles; break;
    case Phase::Overlapped: break;
    }
    total += cycles;
}

// ---------------------------------------------------------------------------

std::size_t combined_unique_values(const CooMatrix& a, const CooMatrix& b) {
    std::vector<Value> v;
    v.reserve(a.nnz() + b.nnz());
    for (const auto& e : a.entries()) v.push_back(e.value);
    for (const auto& e : b.entries()) v.push_back(e.value);
    std::sort(v.begin(), v.end());
    return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

Vocabulary::Vocabulary(const CooMatrix& a, const CooMatrix& b) {
    values_.reserve(a.nnz() + b.nnz());
    for (const auto& e : a.entries()) values_.push_back(e.value);
    for (const auto& e : b.entries()) values_.push_back(e.value);
    std::sort(values_.begin(), values_.end());
    values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
    if (values_.size() > max_size) {
        throw std::length_error("vocabulary of " + std::to_string(values_.size()) + " unique values exceeds " +
                                std::to_string(max_size));
    }
    const std::size_t n = values_.size();
    table_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            table_[i * n + j] = values_[i] * values_[j];
        }
    }
}

std::size_t Vocabulary::position(Value v) const {
    const auto it = std::lower_bound(values_.begin(), values_.end(), v);
    if (it == values_.end() || *it != v) {
        throw std::out_of_range("value not in vocabulary");
    }
    return static_cast<std::size_t>(it - values_.begin());
}

Value Vocabulary::lookup(Value a, Value b) const {
    return table_[position(a) * values_.size() + position(b)];
}

// ---------------------------------------------------------------------------

ApArray load_coo(const CooMatrix& a, const CooMatrix& b, std::optional<std::size_t> capacity, bool indexed) {
    if (a.n_cols() != b.n_rows()) {
        throw DimensionError("inner dimensions differ: A is " + std::to_string(a.n_rows()) + "x" +
                             std::to_string(a.n_cols()) + ", B is " + std::to_string(b.n_rows()) + "x" +
                             std::to_string(b.n_cols()));
    }
    const std::size_t total = a.nnz() + b.nnz();
    if (capacity && total > *capacity) {
        throw CapacityError("array needs " + std::to_string(total) + " words, capacity is " +
                            std::to_string(*capacity));
    }

    ApArray arr;
    arr.indexed_ = indexed;
    arr.words_.reserve(total);
    for (const auto& e : a.entries()) {
        ApWord w;
        w.row_index = e.row;
        w.col_index = e.col;
        w.value = e.value;
        w.region = Region::ASpace;
        arr.words_.push_back(w);
    }
    for (const auto& e : b.entries()) {
        ApWord w;
        w.row_index = e.row;
        w.col_index = e.col;
        w.value = e.value;
        w.region = Region::BSpace;
        arr.words_.push_back(w);
    }
    arr.tags_.assign(total, 0);
    arr.a_begin_ = 0;
    arr.a_end_ = a.nnz();
    arr.b_begin_ = a.nnz();
    arr.b_end_ = total;
    arr.a_row_ptr_ = a.row_offsets();
    arr.b_row_ptr_ = b.row_offsets();
    arr.b_cols_ = b.n_cols();
    arr.col_head_.assign(b.n_cols(), ApArray::npos);
    return arr;
}

std::pair<std::size_t, std::size_t> ApArray::region_range(Region r) const {
    switch (r) {
    case Region::ASpace: return {a_begin_, a_end_};
    case Region::BSpace: return {b_begin_, b_end_};
    case Region::CSpace: break;
    }
    return {b_end_, b_end_};
}

void ApArray::clear_tags() {
    for (auto w : tagged_) tags_[w] = 0;
    tagged_.clear();
}

void ApArray::tag(std::size_t w) {
    tags_[w] = 1;
    tagged_.push_back(w);
}

bool ApArray::passes(const ApWord& w, TagFilter filter) const {
    switch (filter) {
    case TagFilter::None: return true;
    case TagFilter::Singleton: return w.has_product_;
    case TagFilter::UnusedSingleton: return w.has_product_ && !w.used_;
    }
    return false;
}

void ApArray::count_compare(std::size_t tagged) {
    ++compare_calls_;
    counters_.match += tagged;
    counters_.mismatch += words_.size() - tagged;
}

void ApArray::count_write(std::size_t written) {
    ++write_calls_;
    counters_.write += written;
    counters_.miswrite += words_.size() - written;
}

void ApArray::note_aligned(std::size_t w) {
    if (aligned_.empty() || aligned_.back() < w) {
        aligned_.push_back(w);
    } else {
        aligned_.insert(std::lower_bound(aligned_.begin(), aligned_.end(), w), w);
    }
    col_index_valid_ = false;
}

void ApArray::rebuild_col_index() {
    for (auto c : touched_cols_) col_head_[c] = npos;
    touched_cols_.clear();
    col_next_.assign(aligned_.size(), npos);
    for (std::size_t p = aligned_.size(); p-- > 0;) {
        const auto& w = words_[aligned_[p]];
        if (w.region != Region::BSpace) continue;
        auto& head = col_head_[w.col_index];
        if (head == npos) touched_cols_.push_back(w.col_index);
        col_next_[p] = head;
        head = p;
    }
    col_index_valid_ = true;
}

std::size_t ApArray::compare_tag(Region region, KeyField field, Index key, TagFilter filter, Charge charge) {
    clear_tags();
    const auto [first, last] = region_range(region);

    auto scan = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const auto& w = words_[i];
            const Index v = field == KeyField::RowIndex ? w.row_index : w.col_index;
            if (v == key && passes(w, filter)) tag(i);
        }
    };

    if (!indexed_) {
        scan(first, last);
    } else if (field == KeyField::RowIndex && region != Region::CSpace) {
        const auto& ptr = region == Region::ASpace ? a_row_ptr_ : b_row_ptr_;
        if (static_cast<std::size_t>(key) + 1 < ptr.size()) {
            scan(first + ptr[key], first + ptr[key + 1]);
        }
    } else if (field == KeyField::ColIndex && region == Region::BSpace && filter != TagFilter::None) {
        if (!col_index_valid_) rebuild_col_index();
        if (key < b_cols_) {
            for (std::size_t p = col_head_[key]; p != npos; p = col_next_[p]) {
                const auto w = aligned_[p];
                if (passes(words_[w], filter)) tag(w);
            }
        }
    } else {
        scan(first, last);
    }

    count_compare(tagged_.size());
    ledger_.charge(charge.phase, charge.cycles);
    return tagged_.size();
}

void ApArray::write_tagged(WriteField field, Value value, Charge charge) {
    for (auto i : tagged_) {
        auto& w = words_[i];
        switch (field) {
        case WriteField::AlignedA:
            if (w.has_aligned_) {
                throw std::logic_error("aligned_a overwritten at word " + std::to_string(i) +
                                       " before the alignment was reset");
            }
            w.aligned_ = value;
            w.has_aligned_ = true;
            note_aligned(i);
            break;
        case WriteField::Product:
            if (!w.has_aligned_) throw std::logic_error("product written without aligned_a");
            w.product_ = value;
            w.has_product_ = true;
            break;
        case WriteField::Used:
            if (!w.has_product_) throw std::logic_error("used set on a word without a product");
            w.used_ = true;
            break;
        }
    }
    count_write(tagged_.size());
    ledger_.charge(charge.phase, charge.cycles);
}

void ApArray::write_pair_at(std::size_t word, Value aligned_a, Value product, Charge charge) {
    auto& w = words_.at(word);
    if (w.has_aligned_) {
        throw std::logic_error("aligned_a overwritten at word " + std::to_string(word));
    }
    w.aligned_ = aligned_a;
    w.product_ = product;
    w.has_aligned_ = true;
    w.has_product_ = true;
    note_aligned(word);
    count_write(1);
    ledger_.charge(charge.phase, charge.cycles);
}

std::optional<std::size_t> ApArray::read_next(ReadQuery query, std::size_t cursor, Charge charge, Region region,
                                              Index key) {
    const std::size_t start = cursor == npos ? 0 : cursor + 1;
    std::optional<std::size_t> found;

    switch (query) {
    case ReadQuery::RowOf: {
        auto [first, last] = region_range(region);
        if (indexed_ && region != Region::CSpace) {
            const auto& ptr = region == Region::ASpace ? a_row_ptr_ : b_row_ptr_;
            if (static_cast<std::size_t>(key) + 1 >= ptr.size()) break;
            last = first + ptr[key + 1];
            first = first + ptr[key];
        }
        for (std::size_t i = std::max(first, start); i < last; ++i) {
            if (words_[i].row_index == key) {
                found = i;
                break;
            }
        }
        break;
    }
    case ReadQuery::Tagged: {
        const auto it = std::lower_bound(tagged_.begin(), tagged_.end(), start);
        if (it != tagged_.end()) found = *it;
        break;
    }
    case ReadQuery::UnusedSingleton: {
        if (indexed_) {
            for (auto it = std::lower_bound(aligned_.begin(), aligned_.end(), start); it != aligned_.end(); ++it) {
                const auto& w = words_[*it];
                if (w.has_product_ && !w.used_) {
                    found = *it;
                    break;
                }
            }
        } else {
            for (std::size_t i = start; i < words_.size(); ++i) {
                if (words_[i].has_product_ && !words_[i].used_) {
                    found = i;
                    break;
                }
            }
        }
        break;
    }
    }

    if (found) ledger_.charge(charge.phase, charge.cycles);
    return found;
}

std::size_t ApArray::associative_mult(bool binary, Charge charge) {
    std::size_t formed = 0;
    for (auto i : aligned_) {
        auto& w = words_[i];
        if (w.has_product_) continue;
        if (binary) {
            // Sign logic on +/-1 operands.
            w.product_ = ((w.aligned_ < 0) != (w.value < 0)) ? -1.0f : 1.0f;
        } else {
            w.product_ = w.aligned_ * w.value;
        }
        w.has_product_ = true;
        ++formed;
    }
    if (formed > 0) ledger_.charge(charge.phase, charge.cycles);
    return formed;
}

std::size_t ApArray::associative_mult(const Vocabulary& vocab, Charge charge) {
    std::size_t formed = 0;
    for (auto i : aligned_) {
        auto& w = words_[i];
        if (w.has_product_) continue;
        w.product_ = vocab.lookup(w.aligned_, w.value);
        w.has_product_ = true;
        ++formed;
    }
    if (formed > 0) ledger_.charge(charge.phase, charge.cycles);
    return formed;
}

Value ApArray::reduce_sum_tagged() {
    if (tagged_.empty()) return 0.0f;
    Value sum = 0.0f;
    bool first = true;
    for (auto i : tagged_) {
        const auto& w = words_[i];
        if (!w.has_product_) throw std::logic_error("reduction over a word without a product");
        sum = first ? w.product_ : sum + w.product_;
        first = false;
    }
    counters_.reduction += tagged_.size();
    return sum;
}

void ApArray::reset_alignment(Charge charge) {
    clear_tags();
    for (auto i : aligned_) {
        auto& w = words_[i];
        w.has_aligned_ = false;
        w.has_product_ = false;
        w.used_ = false;
    }
    count_write(aligned_.size());
    aligned_.clear();
    for (auto c : touched_cols_) col_head_[c] = npos;
    touched_cols_.clear();
    col_index_valid_ = false;
    ledger_.charge(charge.phase, charge.cycles);
}

}  // namespace apspgemm
