#pragma once

// RFC-4180-style delimited text. The delimiter is configurable (comma or
// tab); quoted fields may contain the delimiter, doubled quotes and line
// breaks. Parse errors carry 1-based line numbers.

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexca/error.hpp"

namespace lexca {

// Parses a whole buffer into records. A trailing newline does not produce
// an empty final record.
inline std::vector<std::vector<std::string>> parse_delimited(std::string_view text, char delim) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    std::size_t line = 1;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool at_field_start = true;
    bool any_content = false;  // current record saw at least one field byte or delimiter

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        at_field_start = true;
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
        any_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"') {
            if (!at_field_start) {
                throw InputFormatError("line " + std::to_string(line) +
                                       ": quote character inside unquoted field");
            }
            in_quotes = true;
            field_was_quoted = true;
            at_field_start = false;
            any_content = true;
            continue;
        }
        if (c == delim) {
            end_field();
            any_content = true;
            continue;
        }
        if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            ++i;
            c = '\n';
        }
        if (c == '\n') {
            ++line;
            if (any_content || !field.empty() || !record.empty()) end_record();
            continue;
        }
        if (field_was_quoted) {
            throw InputFormatError("line " + std::to_string(line) +
                                   ": content after closing quote");
        }
        field.push_back(c);
        at_field_start = false;
        any_content = true;
    }
    if (in_quotes) {
        throw InputFormatError("line " + std::to_string(line) + ": unterminated quoted field");
    }
    if (any_content || !field.empty() || !record.empty()) end_record();
    return records;
}

inline bool field_needs_quoting(std::string_view f, char delim) {
    for (char c : f) {
        if (c == delim || c == '"' || c == '\n' || c == '\r') return true;
    }
    return false;
}

inline std::string escape_field(std::string_view f, char delim) {
    if (!field_needs_quoting(f, delim)) return std::string(f);
    std::string out;
    out.reserve(f.size() + 2);
    out.push_back('"');
    for (char c : f) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline void write_delimited_row(std::ostream& os, std::span<const std::string> fields, char delim) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) os << delim;
        os << escape_field(fields[i], delim);
    }
    os << '\n';
}

}  // namespace lexca
