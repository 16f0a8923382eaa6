#pragma once

// RFC 4180 CSV: comma-separated, optional double-quoted fields with doubled
// quotes as escapes, CRLF or LF row ends, quoted fields may span lines.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ekg/errors.hpp"

namespace ekg {

// Parses a whole document into rows of cells. Every data row must have the
// same arity as the first row; rowIndex in errors is 0 for the header.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool in_quotes = false;
    bool cell_was_quoted = false;
    bool at_cell_start = true;
    std::size_t i = 0;
    const std::size_t n = text.size();

    auto row_index = [&]() { return rows.size(); };
    auto end_cell = [&]() {
        row.push_back(cell);
        cell.clear();
        at_cell_start = true;
        cell_was_quoted = false;
    };
    auto end_row = [&]() {
        end_cell();
        if (!rows.empty() && row.size() != rows.front().size())
            throw MalformedCsv(row_index(), "expected " + std::to_string(rows.front().size()) +
                                                " cells, found " + std::to_string(row.size()));
        rows.push_back(std::move(row));
        row.clear();
    };

    while (i < n) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    cell += '"';
                    i += 2;
                } else {
                    in_quotes = false;
                    ++i;
                }
            } else {
                cell += c;
                ++i;
            }
            continue;
        }
        if (c == '"') {
            if (!at_cell_start)
                throw MalformedCsv(row_index(), "quote inside unquoted cell");
            in_quotes = true;
            cell_was_quoted = true;
            at_cell_start = false;
            ++i;
        } else if (c == ',') {
            end_cell();
            ++i;
        } else if (c == '\r' && i + 1 < n && text[i + 1] == '\n') {
            end_row();
            i += 2;
        } else if (c == '\n') {
            end_row();
            ++i;
        } else {
            if (cell_was_quoted)
                throw MalformedCsv(row_index(), "content after closing quote");
            cell += c;
            at_cell_start = false;
            ++i;
        }
    }
    if (in_quotes) throw MalformedCsv(row_index(), "unterminated quoted cell");
    // Final row without trailing newline.
    if (!cell.empty() || !row.empty() || (!at_cell_start)) end_row();
    return rows;
}

inline std::vector<std::vector<std::string>> parse_csv_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_csv(buf.str());
}

inline std::string csv_escape(const std::string& cell) {
    bool needs_quotes = cell.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

inline std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(cells[i]);
    }
    out += '\n';
    return out;
}

}  // namespace ekg
