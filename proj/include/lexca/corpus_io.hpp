#pragma once

// Corpus file formats. Delimited text (comma or tab) with a header row of
// exactly id,title,author,country,university,year,text, or one JSON object
// per line with the same keys. Word lists are one entry per line; stem
// dictionaries are "surface<TAB>root" lines.

#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexca/corpus.hpp"
#include "lexca/csv.hpp"
#include "lexca/error.hpp"

namespace lexca {

enum class CorpusFormat { Csv, Tsv, Jsonl };

inline CorpusFormat corpus_format_from_string(const std::string& s) {
    if (s == "csv") return CorpusFormat::Csv;
    if (s == "tsv") return CorpusFormat::Tsv;
    if (s == "jsonl") return CorpusFormat::Jsonl;
    throw ArgumentError("unknown corpus format \"" + s + "\" (expected csv, tsv or jsonl)");
}

inline std::string to_string(CorpusFormat f) {
    switch (f) {
        case CorpusFormat::Csv: return "csv";
        case CorpusFormat::Tsv: return "tsv";
        case CorpusFormat::Jsonl: return "jsonl";
    }
    return "csv";
}

struct IngestOptions {
    CorpusFormat format = CorpusFormat::Csv;
    YearRange years{};
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("error reading " + path.string());
    return std::move(buf).str();
}

inline int parse_year(const std::string& s, std::size_t record_number) {
    std::string_view t = trim_view(s);
    if (t.empty() || t.size() > 9) {
        throw InputFormatError("record " + std::to_string(record_number) + ": unparseable year \"" +
                               s + "\"");
    }
    int value = 0;
    for (char c : t) {
        if (c < '0' || c > '9') {
            throw InputFormatError("record " + std::to_string(record_number) +
                                   ": unparseable year \"" + s + "\"");
        }
        value = value * 10 + (c - '0');
    }
    return value;
}

inline const char* k_corpus_columns[7] = {"id",         "title", "author", "country",
                                          "university", "year",  "text"};

inline std::vector<RawDocument> documents_from_delimited(const std::string& content, char delim) {
    auto records = parse_delimited(content, delim);
    if (records.empty()) throw InputFormatError("missing header row");

    const auto& header = records.front();
    std::array<int, 7> column = {-1, -1, -1, -1, -1, -1, -1};
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string name{trim_view(header[i])};
        bool known = false;
        for (int c = 0; c < 7; ++c) {
            if (name == k_corpus_columns[c]) {
                if (column[c] != -1) throw InputFormatError("duplicate column \"" + name + "\"");
                column[c] = static_cast<int>(i);
                known = true;
            }
        }
        if (!known) throw InputFormatError("unexpected column \"" + name + "\"");
    }
    for (int c = 0; c < 7; ++c) {
        if (column[c] == -1) {
            throw InputFormatError(std::string("missing column \"") + k_corpus_columns[c] + "\"");
        }
    }

    std::vector<RawDocument> docs;
    docs.reserve(records.size() - 1);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != header.size()) {
            throw InputFormatError("record " + std::to_string(r) + ": expected " +
                                   std::to_string(header.size()) + " fields, got " +
                                   std::to_string(rec.size()));
        }
        RawDocument doc;
        doc.id = rec[column[0]];
        doc.title = rec[column[1]];
        doc.first_author = rec[column[2]];
        doc.country = rec[column[3]];
        doc.university = rec[column[4]];
        doc.year = parse_year(rec[column[5]], r);
        doc.text = rec[column[6]];
        if (trim_view(doc.id).empty()) {
            throw InputFormatError("record " + std::to_string(r) + ": missing id");
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

inline std::vector<RawDocument> documents_from_jsonl(const std::string& content) {
    std::vector<RawDocument> docs;
    std::istringstream in(content);
    std::string line;
    std::size_t line_number = 0;
    std::size_t record_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim_view(line).empty()) continue;
        ++record_number;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw InputFormatError("line " + std::to_string(line_number) + ": " + e.what());
        }
        if (!obj.is_object()) {
            throw InputFormatError("line " + std::to_string(line_number) + ": expected an object");
        }
        auto get_string = [&](const char* key) -> std::string {
            if (!obj.contains(key)) {
                throw InputFormatError("record " + std::to_string(record_number) +
                                       ": missing field \"" + key + "\"");
            }
            if (!obj[key].is_string()) {
                throw InputFormatError("record " + std::to_string(record_number) + ": field \"" +
                                       key + "\" must be a string");
            }
            return obj[key].get<std::string>();
        };
        RawDocument doc;
        doc.id = get_string("id");
        doc.title = get_string("title");
        doc.first_author = get_string("author");
        doc.country = get_string("country");
        doc.university = get_string("university");
        if (!obj.contains("year")) {
            throw InputFormatError("record " + std::to_string(record_number) +
                                   ": missing field \"year\"");
        }
        if (obj["year"].is_number_integer()) {
            doc.year = obj["year"].get<int>();
        } else if (obj["year"].is_string()) {
            doc.year = parse_year(obj["year"].get<std::string>(), record_number);
        } else {
            throw InputFormatError("record " + std::to_string(record_number) +
                                   ": unparseable year");
        }
        doc.text = get_string("text");
        if (trim_view(doc.id).empty()) {
            throw InputFormatError("record " + std::to_string(record_number) + ": missing id");
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

}  // namespace detail

inline std::vector<RawDocument> read_documents(const std::filesystem::path& path,
                                               const IngestOptions& options = {}) {
    std::string content = detail::read_file(path);
    switch (options.format) {
        case CorpusFormat::Csv: return detail::documents_from_delimited(content, ',');
        case CorpusFormat::Tsv: return detail::documents_from_delimited(content, '\t');
        case CorpusFormat::Jsonl: return detail::documents_from_jsonl(content);
    }
    throw ArgumentError("unknown corpus format");
}

inline Corpus ingest_corpus(const std::filesystem::path& path, const IngestOptions& options,
                            const StopwordList& stoplist, const StemDictionary& stems) {
    return build_corpus(read_documents(path, options), stoplist, stems, options.years);
}

// One lowercase entry per line; blank lines ignored.
inline StopwordList load_stopwords(const std::filesystem::path& path) {
    std::string content = detail::read_file(path);
    std::istringstream in(content);
    std::string line;
    std::vector<std::string> words;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        std::string entry{trim_view(line)};
        if (entry.empty()) continue;
        if (entry.find_first_of(" \t") != std::string::npos) {
            throw InputFormatError(path.string() + ":" + std::to_string(line_number) +
                                   ": stopword entry contains whitespace");
        }
        words.push_back(std::move(entry));
    }
    return StopwordList::from_words(words, path.filename().string());
}

// "surface<TAB>root" per line; duplicate surfaces must agree, roots must be
// fixed points.
inline StemDictionary load_stem_dictionary(const std::filesystem::path& path) {
    std::string content = detail::read_file(path);
    std::istringstream in(content);
    std::string line;
    std::vector<std::pair<std::string, std::string>> pairs;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim_view(line).empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw InputFormatError(path.string() + ":" + std::to_string(line_number) +
                                   ": expected \"surface<TAB>root\"");
        }
        std::string surface{trim_view(line.substr(0, tab))};
        std::string root{trim_view(line.substr(tab + 1))};
        if (surface.empty() || root.empty()) {
            throw InputFormatError(path.string() + ":" + std::to_string(line_number) +
                                   ": empty surface or root");
        }
        pairs.emplace_back(std::move(surface), std::move(root));
    }
    try {
        return StemDictionary::from_pairs(pairs, path.filename().string());
    } catch (const ArgumentError& e) {
        throw InputFormatError(path.string() + ": " + e.what());
    }
}

}  // namespace lexca
