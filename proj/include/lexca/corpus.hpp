#pragma once

// Document ingestion model: raw documents with categorical metadata are
// tokenized into lowercase words, then reduced to terms by stopword removal
// and dictionary stemming. "Word" and "term" are kept distinct throughout:
// a term is a word that survived the stoplist and was mapped to its root.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lexca/error.hpp"
#include "lexca/version.hpp"

namespace lexca {

struct RawDocument {
    std::string id;
    std::string title;
    std::string first_author;
    std::string country;
    std::string university;
    int year = 0;
    std::string text;
};

struct YearRange {
    int min_year = 1900;
    int max_year = 2100;
};

class StopwordList {
public:
    StopwordList() = default;

    // Words are lowercased on entry; internal whitespace is rejected.
    static StopwordList from_words(const std::vector<std::string>& words, std::string source_id) {
        StopwordList list;
        list.source_id_ = std::move(source_id);
        for (const auto& w : words) {
            std::string lw = to_lower_ascii(w);
            if (lw.empty()) throw ArgumentError("stopword entry is empty");
            if (lw.find_first_of(" \t\r\n") != std::string::npos) {
                throw ArgumentError("stopword entry contains whitespace: \"" + w + "\"");
            }
            list.entries_.insert(std::move(lw));
        }
        return list;
    }

    bool contains(const std::string& word) const { return entries_.count(word) != 0; }
    std::size_t size() const { return entries_.size(); }
    const std::unordered_set<std::string>& entries() const { return entries_; }
    const std::string& source_id() const { return source_id_; }

    static std::string to_lower_ascii(std::string_view s) {
        std::string out(s);
        for (char& c : out) {
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        }
        return out;
    }

private:
    std::unordered_set<std::string> entries_;
    std::string source_id_;
};

// Surface form -> root form lookup. Roots must be fixed points so that
// applying the dictionary twice changes nothing.
class StemDictionary {
public:
    StemDictionary() = default;

    static StemDictionary identity(std::string source_id = "identity") {
        StemDictionary d;
        d.source_id_ = std::move(source_id);
        return d;
    }

    static StemDictionary from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs,
                                     std::string source_id) {
        StemDictionary d;
        d.source_id_ = std::move(source_id);
        for (const auto& [surface_raw, root_raw] : pairs) {
            std::string surface = StopwordList::to_lower_ascii(surface_raw);
            std::string root = StopwordList::to_lower_ascii(root_raw);
            if (surface.empty() || root.empty()) {
                throw ArgumentError("stem dictionary entry with empty surface or root");
            }
            auto [it, inserted] = d.mapping_.emplace(surface, root);
            if (!inserted && it->second != root) {
                throw ArgumentError("conflicting stem entries for \"" + surface + "\": \"" +
                                    it->second + "\" vs \"" + root + "\"");
            }
        }
        // Roots that appear as keys must map to themselves.
        for (const auto& [surface, root] : d.mapping_) {
            auto it = d.mapping_.find(root);
            if (it != d.mapping_.end() && it->second != root) {
                throw ArgumentError("stem dictionary is not idempotent: \"" + surface + "\" -> \"" +
                                    root + "\" -> \"" + it->second + "\"");
            }
        }
        return d;
    }

    const std::string& apply(const std::string& word) const {
        auto it = mapping_.find(word);
        return it == mapping_.end() ? word : it->second;
    }

    std::size_t size() const { return mapping_.size(); }
    const std::unordered_map<std::string, std::string>& mapping() const { return mapping_; }
    const std::string& source_id() const { return source_id_; }

private:
    std::unordered_map<std::string, std::string> mapping_;
    std::string source_id_;
};

struct TokenizedDocument {
    std::string id;
    std::vector<std::string> words;  // after tokenization, before filtering
    std::vector<std::string> terms;  // after stoplist and stemming
};

struct CorpusProvenance {
    std::string stoplist_id;
    std::string stem_dictionary_id;
    std::string tokenizer_version{k_tokenizer_version};
};

struct Corpus {
    std::vector<RawDocument> documents;
    std::vector<TokenizedDocument> tokenized;  // index-aligned with documents
    CorpusProvenance provenance;

    std::size_t size() const { return documents.size(); }
};

namespace detail {

inline bool is_word_byte(unsigned char c) {
    // Bytes >= 0x80 (UTF-8 continuation or lead) are kept inside tokens;
    // no case folding or diacritic stripping is applied to them.
    return std::isalnum(c) != 0 || c >= 0x80;
}

inline char lower_ascii(unsigned char c) {
    if (c >= 'A' && c <= 'Z') return static_cast<char>(c - 'A' + 'a');
    return static_cast<char>(c);
}

}  // namespace detail

// Splits on non-alphanumeric boundaries, lowercases, drops pure-digit
// tokens. A single '-' or '\'' between word characters stays inside the
// token, so "state-of-the-art" is one word.
inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    bool all_digits = true;

    auto flush = [&] {
        if (!current.empty() && !all_digits) tokens.push_back(current);
        current.clear();
        all_digits = true;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (detail::is_word_byte(c)) {
            current.push_back(detail::lower_ascii(c));
            if (std::isdigit(c) == 0) all_digits = false;
        } else if ((c == '-' || c == '\'') && !current.empty() && i + 1 < text.size() &&
                   detail::is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
            current.push_back(static_cast<char>(c));
            all_digits = false;
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

// Stoplist filter followed by dictionary lookup; order preserved.
inline std::vector<std::string> preprocess(const std::vector<std::string>& words,
                                           const StopwordList& stoplist,
                                           const StemDictionary& stems) {
    std::vector<std::string> terms;
    terms.reserve(words.size());
    for (const auto& w : words) {
        if (stoplist.contains(w)) continue;
        terms.push_back(stems.apply(w));
    }
    return terms;
}

inline std::string_view trim_view(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Validates document invariants, tokenizes and records provenance.
inline Corpus build_corpus(std::vector<RawDocument> documents, const StopwordList& stoplist,
                           const StemDictionary& stems, const YearRange& years = {}) {
    std::unordered_set<std::string> seen_ids;
    Corpus corpus;
    corpus.provenance.stoplist_id = stoplist.source_id();
    corpus.provenance.stem_dictionary_id = stems.source_id();
    corpus.tokenized.reserve(documents.size());
    for (const auto& doc : documents) {
        if (!seen_ids.insert(doc.id).second) {
            throw InputFormatError("duplicate document id \"" + doc.id + "\"");
        }
        if (doc.year < years.min_year || doc.year > years.max_year) {
            throw InputFormatError("document \"" + doc.id + "\": year " +
                                   std::to_string(doc.year) + " outside [" +
                                   std::to_string(years.min_year) + ", " +
                                   std::to_string(years.max_year) + "]");
        }
        if (trim_view(doc.text).empty()) {
            throw InputFormatError("document \"" + doc.id + "\": empty text");
        }
        TokenizedDocument td;
        td.id = doc.id;
        td.words = tokenize(doc.text);
        td.terms = preprocess(td.words, stoplist, stems);
        corpus.tokenized.push_back(std::move(td));
    }
    corpus.documents = std::move(documents);
    return corpus;
}

struct StatsReport {
    std::int64_t n_documents = 0;
    std::int64_t n_terms_total = 0;
    std::optional<double> n_terms_mean;
    std::int64_t n_unique_terms_total = 0;        // corpus-wide vocabulary size
    std::optional<double> n_unique_terms_mean;    // mean distinct terms per document
    std::optional<double> pct_unique_total;
    std::optional<double> pct_unique_mean;        // mean over documents with at least one term
    std::int64_t n_words_total = 0;
    std::optional<double> n_words_mean;
    std::optional<double> avg_word_length;        // code points per word, whole corpus
    std::map<std::string, std::map<std::string, std::int64_t>> category_counts;
};

namespace detail {

// UTF-8 aware length: counts non-continuation bytes.
inline std::int64_t codepoint_count(std::string_view s) {
    std::int64_t n = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

}  // namespace detail

inline StatsReport descriptive_stats(const Corpus& corpus) {
    StatsReport report;
    const std::size_t n_docs = corpus.size();
    report.n_documents = static_cast<std::int64_t>(n_docs);

    std::set<std::string> vocabulary;
    std::int64_t unique_sum = 0;
    std::int64_t char_total = 0;
    double pct_unique_sum = 0.0;
    std::size_t n_docs_with_terms = 0;

    for (const auto& td : corpus.tokenized) {
        report.n_words_total += static_cast<std::int64_t>(td.words.size());
        report.n_terms_total += static_cast<std::int64_t>(td.terms.size());
        for (const auto& w : td.words) char_total += detail::codepoint_count(w);
        std::set<std::string> doc_vocab(td.terms.begin(), td.terms.end());
        unique_sum += static_cast<std::int64_t>(doc_vocab.size());
        if (!td.terms.empty()) {
            pct_unique_sum += 100.0 * static_cast<double>(doc_vocab.size()) /
                              static_cast<double>(td.terms.size());
            ++n_docs_with_terms;
        }
        vocabulary.merge(doc_vocab);
    }
    report.n_unique_terms_total = static_cast<std::int64_t>(vocabulary.size());

    if (n_docs > 0) {
        report.n_terms_mean = static_cast<double>(report.n_terms_total) / static_cast<double>(n_docs);
        report.n_words_mean = static_cast<double>(report.n_words_total) / static_cast<double>(n_docs);
        report.n_unique_terms_mean = static_cast<double>(unique_sum) / static_cast<double>(n_docs);
    }
    if (report.n_terms_total > 0) {
        report.pct_unique_total = 100.0 * static_cast<double>(report.n_unique_terms_total) /
                                  static_cast<double>(report.n_terms_total);
    }
    if (n_docs_with_terms > 0) {
        report.pct_unique_mean = pct_unique_sum / static_cast<double>(n_docs_with_terms);
    }
    if (report.n_words_total > 0) {
        report.avg_word_length =
            static_cast<double>(char_total) / static_cast<double>(report.n_words_total);
    }

    auto& by_year = report.category_counts["year"];
    auto& by_country = report.category_counts["country"];
    auto& by_author = report.category_counts["author"];
    auto& by_university = report.category_counts["university"];
    for (const auto& doc : corpus.documents) {
        ++by_year[std::to_string(doc.year)];
        ++by_country[doc.country];
        ++by_author[doc.first_author];
        ++by_university[doc.university];
    }
    return report;
}

}  // namespace lexca
