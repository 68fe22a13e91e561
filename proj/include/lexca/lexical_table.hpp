#pragma once

// Sparse document x term count matrix and its derived tables. Rows follow
// corpus order, columns are the lexicographically sorted vocabulary; the
// table never contains an all-zero column by construction, while all-zero
// rows can appear after sparse filtering and are kept (callers that cannot
// handle zero-mass rows must drop them explicitly).

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lexca/corpus.hpp"
#include "lexca/error.hpp"

namespace lexca {

class LexicalTable {
public:
    LexicalTable() { row_offsets_.push_back(0); }

    // CSR-style construction; rows() == doc_ids.size() is enforced by the
    // builders below.
    std::size_t rows() const { return doc_ids_.size(); }
    std::size_t cols() const { return vocabulary_.size(); }
    std::int64_t grand_total() const { return grand_total_; }

    const std::vector<std::string>& doc_ids() const { return doc_ids_; }
    const std::vector<std::string>& vocabulary() const { return vocabulary_; }

    std::int64_t at(std::size_t row, std::size_t col) const {
        auto begin = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row]);
        auto end = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row + 1]);
        auto it = std::lower_bound(begin, end, static_cast<std::uint32_t>(col));
        if (it == end || *it != col) return 0;
        return values_[static_cast<std::size_t>(it - col_indices_.begin())];
    }

    std::int64_t row_sum(std::size_t row) const {
        std::int64_t s = 0;
        for (std::size_t k = row_offsets_[row]; k < row_offsets_[row + 1]; ++k) s += values_[k];
        return s;
    }

    std::vector<std::int64_t> column_sums() const {
        std::vector<std::int64_t> sums(cols(), 0);
        for (std::size_t k = 0; k < values_.size(); ++k) sums[col_indices_[k]] += values_[k];
        return sums;
    }

    std::vector<std::int64_t> document_frequencies() const {
        std::vector<std::int64_t> df(cols(), 0);
        for (std::uint32_t c : col_indices_) ++df[c];
        return df;
    }

    template <typename Fn>  // Fn(row, col, value)
    void for_each_entry(Fn&& fn) const {
        for (std::size_t row = 0; row + 1 < row_offsets_.size(); ++row) {
            for (std::size_t k = row_offsets_[row]; k < row_offsets_[row + 1]; ++k) {
                fn(row, static_cast<std::size_t>(col_indices_[k]), values_[k]);
            }
        }
    }

    // rows_entries[i] holds (col, count) pairs, strictly increasing cols.
    static LexicalTable from_entries(std::vector<std::string> doc_ids,
                                     std::vector<std::string> vocabulary,
                                     const std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>>& rows_entries) {
        if (doc_ids.size() != rows_entries.size()) {
            throw ArgumentError("lexical table: row count mismatch");
        }
        LexicalTable t;
        t.doc_ids_ = std::move(doc_ids);
        t.vocabulary_ = std::move(vocabulary);
        t.row_offsets_.clear();
        t.row_offsets_.push_back(0);
        for (const auto& row : rows_entries) {
            std::uint32_t prev_col = 0;
            bool first = true;
            for (const auto& [col, count] : row) {
                if (count <= 0) throw ArgumentError("lexical table: nonpositive count");
                if (col >= t.vocabulary_.size()) throw ArgumentError("lexical table: column out of range");
                if (!first && col <= prev_col) throw ArgumentError("lexical table: unsorted row entries");
                prev_col = col;
                first = false;
                t.col_indices_.push_back(col);
                t.values_.push_back(count);
                t.grand_total_ += count;
            }
            t.row_offsets_.push_back(t.col_indices_.size());
        }
        return t;
    }

private:
    std::vector<std::string> doc_ids_;
    std::vector<std::string> vocabulary_;
    std::vector<std::size_t> row_offsets_;
    std::vector<std::uint32_t> col_indices_;
    std::vector<std::int64_t> values_;
    std::int64_t grand_total_ = 0;
};

inline LexicalTable build_lexical_table(const Corpus& corpus) {
    std::map<std::string, std::uint32_t> term_index;  // sorted -> lexicographic columns
    for (const auto& td : corpus.tokenized) {
        for (const auto& term : td.terms) term_index.emplace(term, 0);
    }
    std::vector<std::string> vocabulary;
    vocabulary.reserve(term_index.size());
    for (auto& [term, index] : term_index) {
        index = static_cast<std::uint32_t>(vocabulary.size());
        vocabulary.push_back(term);
    }

    std::vector<std::string> doc_ids;
    doc_ids.reserve(corpus.size());
    std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> rows;
    rows.reserve(corpus.size());
    for (const auto& td : corpus.tokenized) {
        doc_ids.push_back(td.id);
        std::map<std::uint32_t, std::int64_t> counts;
        for (const auto& term : td.terms) ++counts[term_index.at(term)];
        rows.emplace_back(counts.begin(), counts.end());
    }
    return LexicalTable::from_entries(std::move(doc_ids), std::move(vocabulary), rows);
}

namespace detail {

// Exact comparison zeros/docs <= s, with s an arbitrary double. Doubles are
// dyadic rationals, so the comparison has a well-defined exact answer; this
// avoids boundary flips at document-frequency thresholds.
inline bool sparsity_within(std::int64_t zeros, std::int64_t docs, double s) {
    namespace mp = boost::multiprecision;
    mp::cpp_rational lhs(zeros, docs);
    mp::cpp_rational rhs(s);  // exact conversion
    return lhs <= rhs;
}

}  // namespace detail

struct SparseFilterResult {
    LexicalTable table;
    std::vector<std::string> zero_row_doc_ids;  // documents left with no retained terms
    double sparse_param = 0.0;
};

// Keeps a term iff its fraction of zero-count documents is <= sparse_param.
inline SparseFilterResult remove_sparse_terms(const LexicalTable& table, double sparse_param) {
    if (!(sparse_param > 0.0 && sparse_param < 1.0)) {
        throw ArgumentError("sparse_param must lie in (0, 1)");
    }
    if (table.rows() == 0 || table.cols() == 0) {
        throw PreconditionError("remove_sparse_terms: empty table");
    }

    const auto n_docs = static_cast<std::int64_t>(table.rows());
    const auto df = table.document_frequencies();

    std::vector<std::uint32_t> new_index(table.cols(), UINT32_MAX);
    std::vector<std::string> kept_vocab;
    for (std::size_t j = 0; j < table.cols(); ++j) {
        if (detail::sparsity_within(n_docs - df[j], n_docs, sparse_param)) {
            new_index[j] = static_cast<std::uint32_t>(kept_vocab.size());
            kept_vocab.push_back(table.vocabulary()[j]);
        }
    }

    std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> rows(table.rows());
    table.for_each_entry([&](std::size_t i, std::size_t j, std::int64_t v) {
        if (new_index[j] != UINT32_MAX) rows[i].emplace_back(new_index[j], v);
    });

    SparseFilterResult result;
    result.sparse_param = sparse_param;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].empty()) result.zero_row_doc_ids.push_back(table.doc_ids()[i]);
    }
    result.table = LexicalTable::from_entries(table.doc_ids(), std::move(kept_vocab), rows);
    return result;
}

struct AggregatedTable {
    std::vector<std::string> vocabulary;  // rows
    std::vector<std::string> categories;  // columns; ascending years when chronological
    std::vector<std::int64_t> counts;     // dense, row-major vocabulary x categories
    std::vector<std::int64_t> row_totals;
    std::vector<std::int64_t> column_totals;
    std::int64_t grand_total = 0;
    std::string category_key;
    bool chronological = false;

    std::size_t rows() const { return vocabulary.size(); }
    std::size_t cols() const { return categories.size(); }
    std::int64_t at(std::size_t i, std::size_t j) const { return counts[i * cols() + j]; }
    std::int64_t& at(std::size_t i, std::size_t j) { return counts[i * cols() + j]; }

    void recompute_totals() {
        row_totals.assign(rows(), 0);
        column_totals.assign(cols(), 0);
        grand_total = 0;
        for (std::size_t i = 0; i < rows(); ++i) {
            for (std::size_t j = 0; j < cols(); ++j) {
                std::int64_t v = at(i, j);
                row_totals[i] += v;
                column_totals[j] += v;
                grand_total += v;
            }
        }
    }
};

namespace detail {

inline std::string category_value(const RawDocument& doc, const std::string& key) {
    if (key == "year") return std::to_string(doc.year);
    if (key == "country") return doc.country;
    if (key == "author") return doc.first_author;
    if (key == "university") return doc.university;
    throw ArgumentError("unknown metadata key \"" + key + "\"");
}

}  // namespace detail

// Sums document rows sharing a metadata value. Year columns are ordered
// numerically ascending, other keys lexicographically.
inline AggregatedTable aggregate_by_category(const LexicalTable& table, const Corpus& corpus,
                                             const std::string& key) {
    if (key != "year" && key != "country" && key != "author" && key != "university") {
        throw ArgumentError("unknown metadata key \"" + key + "\"");
    }
    std::unordered_map<std::string, const RawDocument*> by_id;
    for (const auto& doc : corpus.documents) by_id.emplace(doc.id, &doc);

    std::vector<std::string> doc_value(table.rows());
    std::map<std::string, std::size_t> category_index;
    for (std::size_t i = 0; i < table.rows(); ++i) {
        auto it = by_id.find(table.doc_ids()[i]);
        if (it == by_id.end()) {
            throw PreconditionError("document \"" + table.doc_ids()[i] + "\" not found in corpus");
        }
        std::string value = detail::category_value(*it->second, key);
        if (trim_view(value).empty()) {
            throw PreconditionError("document \"" + table.doc_ids()[i] + "\" has no value for \"" +
                                    key + "\"");
        }
        doc_value[i] = value;
        category_index.emplace(std::move(value), 0);
    }

    AggregatedTable agg;
    agg.category_key = key;
    agg.chronological = (key == "year");
    agg.vocabulary = table.vocabulary();
    for (auto& [value, index] : category_index) {
        index = agg.categories.size();
        agg.categories.push_back(value);
    }
    if (agg.chronological) {
        // std::map gives lexicographic order; years need numeric order.
        std::sort(agg.categories.begin(), agg.categories.end(),
                  [](const std::string& a, const std::string& b) {
                      return std::stoll(a) < std::stoll(b);
                  });
        for (std::size_t j = 0; j < agg.categories.size(); ++j) category_index[agg.categories[j]] = j;
    }

    agg.counts.assign(agg.rows() * agg.cols(), 0);
    table.for_each_entry([&](std::size_t i, std::size_t j, std::int64_t v) {
        agg.at(j, category_index.at(doc_value[i])) += v;
    });
    agg.recompute_totals();
    return agg;
}

struct GlossaryEntry {
    std::string term;
    std::int64_t frequency = 0;
    int rank = 0;  // 1-based position in the frequency-descending order
};

// k most frequent terms; ties broken lexicographically.
inline std::vector<GlossaryEntry> top_terms(const LexicalTable& table, std::size_t k) {
    if (k < 1) throw ArgumentError("top_terms: k must be >= 1");
    auto sums = table.column_sums();
    std::vector<std::size_t> order(table.cols());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (sums[a] != sums[b]) return sums[a] > sums[b];
        return table.vocabulary()[a] < table.vocabulary()[b];
    });
    std::vector<GlossaryEntry> glossary;
    const std::size_t n = std::min(k, order.size());
    glossary.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        glossary.push_back({table.vocabulary()[order[r]], sums[order[r]], static_cast<int>(r + 1)});
    }
    return glossary;
}

}  // namespace lexca
