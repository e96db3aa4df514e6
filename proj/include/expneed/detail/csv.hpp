#ifndef EXPNEED_DETAIL_CSV_HPP
#define EXPNEED_DETAIL_CSV_HPP

#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "expneed/error.hpp"

namespace expneed::detail {

using CsvRow = std::vector<std::string>;

// RFC 4180 reader: quoted fields may hold commas, doubled quotes and line
// breaks; CRLF and LF record terminators are both accepted. A UTF-8 BOM at the
// start of input is skipped.
inline std::vector<CsvRow> parse_csv(std::string_view input) {
    if (input.starts_with("\xEF\xBB\xBF")) input.remove_prefix(3);

    std::vector<CsvRow> rows;
    CsvRow row;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    std::size_t record = 1;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        // A bare empty line is not a record.
        if (!(row.size() == 1 && row.front().empty())) rows.push_back(std::move(row));
        row.clear();
        ++record;
    };

    for (std::size_t i = 0; i < input.size(); ++i) {
        const char ch = input[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < input.size() && input[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                if (!field.empty() || field_was_quoted)
                    throw ValidationError("stray quote inside unquoted field", record);
                in_quotes = true;
                field_was_quoted = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < input.size() && input[i + 1] == '\n') ++i;
                end_record();
                break;
            case '\n':
                end_record();
                break;
            default:
                if (field_was_quoted)
                    throw ValidationError("characters after closing quote", record);
                field.push_back(ch);
        }
    }
    if (in_quotes) throw ValidationError("unterminated quoted field", record);
    if (!field.empty() || !row.empty() || field_was_quoted) end_record();
    return rows;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<CsvRow> read_csv_file(const std::string& path) {
    return parse_csv(read_file(path));
}

inline void write_csv_field(std::ostream& out, std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        out << field;
        return;
    }
    out << '"';
    for (char ch : field) {
        if (ch == '"') out << '"';
        out << ch;
    }
    out << '"';
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        write_csv_field(out, fields[i]);
    }
    out << "\r\n";
}

/// Checks a header row against the expected column names, in order.
inline void expect_header(const std::vector<CsvRow>& rows, const std::vector<std::string>& columns) {
    if (rows.empty()) throw ValidationError("missing header row");
    const CsvRow& header = rows.front();
    if (header != columns) {
        std::ostringstream expected;
        for (std::size_t i = 0; i < columns.size(); ++i) expected << (i ? "," : "") << columns[i];
        throw ValidationError("header must be `" + expected.str() + "`");
    }
}

}  // namespace expneed::detail

#endif
