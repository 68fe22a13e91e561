#pragma once

// JSON and delimited-text export/import for every artifact the pipeline
// writes. JSON goes through nlohmann::json (sorted keys, shortest-round-trip
// doubles), so identical inputs serialize byte-identically. Delimited text
// uses the RFC-4180 writer from csv.hpp. Doubles in CSV are %.17g, enough to
// round-trip.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "lexca/charwords.hpp"
#include "lexca/correspondence.hpp"
#include "lexca/corpus.hpp"
#include "lexca/csv.hpp"
#include "lexca/error.hpp"
#include "lexca/lexical_table.hpp"
#include "lexca/permtest.hpp"

namespace lexca {

using json = nlohmann::ordered_json;

namespace detail {

inline std::string fmt_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::vector<double>> matrix_to_rows(const Eigen::MatrixXd& m) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        rows[static_cast<std::size_t>(i)].assign(m.row(i).begin(), m.row(i).end());
    }
    return rows;
}

inline Eigen::MatrixXd matrix_from_rows(const json& j, const char* what) {
    if (!j.is_array()) throw InputFormatError(std::string(what) + ": expected an array");
    const auto n_rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index n_cols = 0;
    if (n_rows > 0) n_cols = static_cast<Eigen::Index>(j.at(0).size());
    Eigen::MatrixXd m(n_rows, n_cols);
    for (Eigen::Index i = 0; i < n_rows; ++i) {
        const auto& row = j.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != n_cols) {
            throw InputFormatError(std::string(what) + ": ragged rows");
        }
        for (Eigen::Index k = 0; k < n_cols; ++k) {
            m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
        }
    }
    return m;
}

inline Eigen::VectorXd vector_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw InputFormatError(std::string(what) + ": expected an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
    }
    return v;
}

}  // namespace detail

// ---- descriptive statistics ----

inline json stats_to_json(const StatsReport& s) {
    json j;
    j["n_documents"] = s.n_documents;
    j["terms"] = {{"total", s.n_terms_total}};
    if (s.n_terms_mean) j["terms"]["mean"] = *s.n_terms_mean;
    j["unique_terms"] = {{"total", s.n_unique_terms_total}};
    if (s.n_unique_terms_mean) j["unique_terms"]["mean"] = *s.n_unique_terms_mean;
    j["pct_unique"] = json::object();
    if (s.pct_unique_total) j["pct_unique"]["total"] = *s.pct_unique_total;
    if (s.pct_unique_mean) j["pct_unique"]["mean"] = *s.pct_unique_mean;
    j["words"] = {{"total", s.n_words_total}};
    if (s.n_words_mean) j["words"]["mean"] = *s.n_words_mean;
    if (s.avg_word_length) j["avg_word_length"] = *s.avg_word_length;
    json cats = json::object();
    for (const auto& [key, counts] : s.category_counts) {
        json c = json::object();
        for (const auto& [value, n] : counts) c[value] = n;
        cats[key] = std::move(c);
    }
    j["category_counts"] = std::move(cats);
    return j;
}

// ---- glossary ----

inline std::string glossary_to_csv(const std::vector<GlossaryEntry>& glossary) {
    std::ostringstream os;
    os << "rank,term,frequency\n";
    for (const auto& g : glossary) {
        std::vector<std::string> row{std::to_string(g.rank), g.term,
                                     std::to_string(g.frequency)};
        write_delimited_row(os, row, ',');
    }
    return os.str();
}

// ---- lexical table: sparse triplets + JSON sidecar ----

inline std::string table_to_triplets_csv(const LexicalTable& table) {
    std::ostringstream os;
    os << "doc_id,term,count\n";
    table.for_each_entry([&](std::size_t i, std::size_t j, std::int64_t v) {
        std::vector<std::string> row{table.doc_ids()[i], table.vocabulary()[j],
                                     std::to_string(v)};
        write_delimited_row(os, row, ',');
    });
    return os.str();
}

inline json table_sidecar_json(const LexicalTable& table, const CorpusProvenance& prov) {
    json j;
    j["doc_ids"] = table.doc_ids();
    j["vocabulary"] = table.vocabulary();
    j["grand_total"] = table.grand_total();
    j["provenance"] = {{"stoplist_id", prov.stoplist_id},
                       {"stem_dictionary_id", prov.stem_dictionary_id},
                       {"tokenizer_version", prov.tokenizer_version}};
    return j;
}

inline LexicalTable table_from_artifacts(const std::string& triplets_csv, const json& sidecar) {
    std::vector<std::string> doc_ids = sidecar.at("doc_ids").get<std::vector<std::string>>();
    std::vector<std::string> vocabulary =
        sidecar.at("vocabulary").get<std::vector<std::string>>();
    std::map<std::string, std::size_t> row_of, col_of;
    for (std::size_t i = 0; i < doc_ids.size(); ++i) row_of.emplace(doc_ids[i], i);
    for (std::size_t j = 0; j < vocabulary.size(); ++j) col_of.emplace(vocabulary[j], j);

    auto records = parse_delimited(triplets_csv, ',');
    if (records.empty() || records.front().size() != 3) {
        throw InputFormatError("table triplets: missing doc_id,term,count header");
    }
    std::vector<std::map<std::uint32_t, std::int64_t>> cells(doc_ids.size());
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != 3) {
            throw InputFormatError("table triplets: record " + std::to_string(r) +
                                   " has " + std::to_string(rec.size()) + " fields, expected 3");
        }
        auto row_it = row_of.find(rec[0]);
        if (row_it == row_of.end()) {
            throw InputFormatError("table triplets: unknown doc_id \"" + rec[0] + "\"");
        }
        auto col_it = col_of.find(rec[1]);
        if (col_it == col_of.end()) {
            throw InputFormatError("table triplets: unknown term \"" + rec[1] + "\"");
        }
        std::int64_t count = 0;
        try {
            count = std::stoll(rec[2]);
        } catch (const std::exception&) {
            throw InputFormatError("table triplets: bad count \"" + rec[2] + "\"");
        }
        cells[row_it->second][static_cast<std::uint32_t>(col_it->second)] += count;
    }
    std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> rows(doc_ids.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        rows[i].assign(cells[i].begin(), cells[i].end());
    }
    return LexicalTable::from_entries(std::move(doc_ids), std::move(vocabulary), rows);
}

// ---- corpus ----

inline json corpus_to_json(const Corpus& corpus) {
    json j;
    j["provenance"] = {{"stoplist_id", corpus.provenance.stoplist_id},
                       {"stem_dictionary_id", corpus.provenance.stem_dictionary_id},
                       {"tokenizer_version", corpus.provenance.tokenizer_version}};
    json docs = json::array();
    for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
        const RawDocument& raw = corpus.documents[d];
        const TokenizedDocument& tok = corpus.tokenized[d];
        json doc;
        doc["id"] = raw.id;
        doc["title"] = raw.title;
        doc["author"] = raw.first_author;
        doc["country"] = raw.country;
        doc["university"] = raw.university;
        doc["year"] = raw.year;
        doc["words"] = tok.words;
        doc["terms"] = tok.terms;
        docs.push_back(std::move(doc));
    }
    j["documents"] = std::move(docs);
    return j;
}

inline Corpus corpus_from_json(const json& j) {
    Corpus corpus;
    const json& prov = j.at("provenance");
    corpus.provenance.stoplist_id = prov.at("stoplist_id").get<std::string>();
    corpus.provenance.stem_dictionary_id = prov.at("stem_dictionary_id").get<std::string>();
    corpus.provenance.tokenizer_version = prov.at("tokenizer_version").get<std::string>();
    for (const json& doc : j.at("documents")) {
        RawDocument raw;
        raw.id = doc.at("id").get<std::string>();
        raw.title = doc.at("title").get<std::string>();
        raw.first_author = doc.at("author").get<std::string>();
        raw.country = doc.at("country").get<std::string>();
        raw.university = doc.at("university").get<std::string>();
        raw.year = doc.at("year").get<int>();
        TokenizedDocument tok;
        tok.id = raw.id;
        tok.words = doc.at("words").get<std::vector<std::string>>();
        tok.terms = doc.at("terms").get<std::vector<std::string>>();
        corpus.documents.push_back(std::move(raw));
        corpus.tokenized.push_back(std::move(tok));
    }
    return corpus;
}

// ---- CA model ----

inline json ca_model_to_json(const CAModel& m) {
    json j;
    j["source"] = m.source;
    j["n_dims_kept"] = m.n_dims_kept;
    j["total_inertia"] = m.total_inertia;
    j["row_labels"] = m.row_labels;
    j["col_labels"] = m.col_labels;
    j["row_masses"] = std::vector<double>(m.row_masses.begin(), m.row_masses.end());
    j["col_masses"] = std::vector<double>(m.col_masses.begin(), m.col_masses.end());
    j["singular_values"] =
        std::vector<double>(m.singular_values.begin(), m.singular_values.end());
    j["eigenvalues"] = std::vector<double>(m.eigenvalues.begin(), m.eigenvalues.end());
    j["row_coords"] = detail::matrix_to_rows(m.row_coords);
    j["col_coords"] = detail::matrix_to_rows(m.col_coords);
    j["row_contrib"] = detail::matrix_to_rows(m.row_contrib);
    j["col_contrib"] = detail::matrix_to_rows(m.col_contrib);
    j["row_cos2"] = detail::matrix_to_rows(m.row_cos2);
    j["col_cos2"] = detail::matrix_to_rows(m.col_cos2);
    return j;
}

inline CAModel ca_model_from_json(const json& j) {
    CAModel m;
    m.source = j.at("source").get<std::string>();
    m.n_dims_kept = j.at("n_dims_kept").get<int>();
    m.total_inertia = j.at("total_inertia").get<double>();
    m.row_labels = j.at("row_labels").get<std::vector<std::string>>();
    m.col_labels = j.at("col_labels").get<std::vector<std::string>>();
    m.row_masses = detail::vector_from_json(j.at("row_masses"), "row_masses");
    m.col_masses = detail::vector_from_json(j.at("col_masses"), "col_masses");
    m.singular_values = detail::vector_from_json(j.at("singular_values"), "singular_values");
    m.eigenvalues = detail::vector_from_json(j.at("eigenvalues"), "eigenvalues");
    m.row_coords = detail::matrix_from_rows(j.at("row_coords"), "row_coords");
    m.col_coords = detail::matrix_from_rows(j.at("col_coords"), "col_coords");
    m.row_contrib = detail::matrix_from_rows(j.at("row_contrib"), "row_contrib");
    m.col_contrib = detail::matrix_from_rows(j.at("col_contrib"), "col_contrib");
    m.row_cos2 = detail::matrix_from_rows(j.at("row_cos2"), "row_cos2");
    m.col_cos2 = detail::matrix_from_rows(j.at("col_cos2"), "col_cos2");
    return m;
}

// label,dim1,dim2,... one row per item.
inline std::string coords_to_csv(const std::vector<std::string>& labels,
                                 const Eigen::MatrixXd& coords) {
    std::ostringstream os;
    os << "label";
    for (Eigen::Index k = 0; k < coords.cols(); ++k) os << ",dim" << (k + 1);
    os << "\n";
    for (Eigen::Index i = 0; i < coords.rows(); ++i) {
        std::vector<std::string> row;
        row.push_back(i < static_cast<Eigen::Index>(labels.size())
                          ? labels[static_cast<std::size_t>(i)]
                          : std::to_string(i));
        for (Eigen::Index k = 0; k < coords.cols(); ++k) {
            row.push_back(detail::fmt_g17(coords(i, k)));
        }
        write_delimited_row(os, row, ',');
    }
    return os.str();
}

// ---- metasets ----

inline json metaset_to_json(const MetaSet& s) {
    json j;
    j["axis"] = s.axis + 1;  // displayed 1-based, matching "Dim k" labels
    j["sign"] = s.sign == AxisSign::Positive ? "positive" : "negative";
    j["kind"] = s.kind == PointKind::Row ? "metadoc" : "metakey";
    j["threshold_multiplier"] = s.threshold_multiplier;
    j["cutoff"] = s.cutoff;
    json members = json::array();
    for (const auto& m : s.members) {
        members.push_back(
            {{"id", m.id}, {"contribution", m.contribution}, {"coordinate", m.coordinate}});
    }
    j["members"] = std::move(members);
    return j;
}

// ---- characteristic and chronological words ----

inline constexpr const char* k_charwords_csv_header =
    "term,part_or_window,direction,n_ij,n_i,n_j,n,p_value";

namespace detail {

inline void charword_row(std::ostream& os, const std::string& term, const std::string& part,
                         const TermPartTest& t) {
    std::vector<std::string> row{term,
                                 part,
                                 to_string(t.direction),
                                 std::to_string(t.count),
                                 std::to_string(t.term_total),
                                 std::to_string(t.part_total),
                                 std::to_string(t.grand_total),
                                 fmt_g17(t.p_value)};
    write_delimited_row(os, row, ',');
}

inline json charword_json(const std::string& term, const std::string& part,
                          const TermPartTest& t) {
    return {{"term", term},
            {"part_or_window", part},
            {"direction", to_string(t.direction)},
            {"n_ij", t.count},
            {"n_i", t.term_total},
            {"n_j", t.part_total},
            {"n", t.grand_total},
            {"p_value", t.p_value}};
}

}  // namespace detail

inline std::string charwords_to_csv(const CharacteristicWordsResult& r) {
    std::ostringstream os;
    os << k_charwords_csv_header << "\n";
    for (const auto& part : r.by_part) {
        for (const auto& w : part) detail::charword_row(os, w.term, w.part, w.test);
    }
    return os.str();
}

inline json charwords_to_json(const CharacteristicWordsResult& r) {
    json j;
    j["alpha"] = r.alpha;
    j["parts"] = r.parts;
    j["n_tests"] = r.n_tests;
    json words = json::array();
    for (const auto& part : r.by_part) {
        for (const auto& w : part) words.push_back(detail::charword_json(w.term, w.part, w.test));
    }
    j["words"] = std::move(words);
    return j;
}

inline std::string chrono_to_csv(const ChronologicalWordsResult& r) {
    std::ostringstream os;
    os << k_charwords_csv_header << "\n";
    for (const auto& w : r.words) detail::charword_row(os, w.term, w.window_label, w.test);
    return os.str();
}

inline json chrono_to_json(const ChronologicalWordsResult& r) {
    json j;
    j["alpha"] = r.alpha;
    j["max_window"] = r.max_window;
    j["parts"] = r.parts;
    j["n_tests"] = r.n_tests;
    json words = json::array();
    for (const auto& w : r.words) {
        json e = detail::charword_json(w.term, w.window_label, w.test);
        e["window_start"] = r.parts[w.window_start];
        e["window_width"] = w.window_width;
        words.push_back(std::move(e));
    }
    j["words"] = std::move(words);
    return j;
}

// ---- permutation test ----

inline json permtest_to_json(const PermTestResult& r, int histogram_bins = 30) {
    json j;
    j["observed_lambda1"] = r.observed_lambda1;
    j["p_value"] = r.p_value;
    j["n_replicates"] = r.n_replicates;
    j["seed"] = r.seed;
    j["alternative"] = r.alternative;
    j["category_key"] = r.category_key;
    j["n_retried_attempts"] = r.n_retried_attempts;
    Histogram h = histogram(r.replicate_lambda1, histogram_bins);
    j["replicate_histogram"] = {{"bin_edges", h.bin_edges}, {"counts", h.counts}};
    return j;
}

}  // namespace lexca
