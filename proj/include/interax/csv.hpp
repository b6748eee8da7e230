#ifndef INTERAX_CSV_HPP
#define INTERAX_CSV_HPP

#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "common.hpp"

namespace interax {
namespace csv {

// Comma-separated with double-quote escaping ("" inside a quoted field).
// Unquoted cells are trimmed of surrounding whitespace; quoted cells are
// taken verbatim.  Rows are LF or CRLF terminated.

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::vector<std::string>> parse(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    bool cell_was_quoted = false;
    bool at_line_start = true;

    auto push_cell = [&] {
        row.push_back(cell_was_quoted ? cell : trim(cell));
        cell.clear();
        cell_was_quoted = false;
    };
    auto push_row = [&] {
        push_cell();
        rows.push_back(std::move(row));
        row.clear();
        at_line_start = true;
    };

    char c;
    while (in.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    cell.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                cell.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                cell_was_quoted = true;
                at_line_start = false;
                break;
            case ',':
                push_cell();
                at_line_start = false;
                break;
            case '\n':
                if (at_line_start && row.empty() && cell.empty()) break;  // blank line
                push_row();
                break;
            case '\r':
                break;
            default:
                cell.push_back(c);
                at_line_start = false;
        }
    }
    if (quoted) {
        throw data_error("csv: unterminated quoted field");
    }
    if (!cell.empty() || !row.empty() || !at_line_start) {
        push_row();
    }
    return rows;
}

inline std::vector<std::vector<std::string>> parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw data_error("cannot open " + path);
    }
    return parse(in);
}

inline bool needs_quoting(const std::string& s) {
    if (s.empty()) return false;
    if (s.front() == ' ' || s.back() == ' ') return true;
    for (char c : s) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') return true;
    }
    return false;
}

inline void write_cell(std::ostream& out, const std::string& s) {
    if (!needs_quoting(s)) {
        out << s;
        return;
    }
    out << '"';
    for (char c : s) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

inline void write(std::ostream& out, const std::vector<std::string>& header,
                  const std::vector<std::vector<std::string>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        write_cell(out, header[i]);
    }
    out << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out << ',';
            write_cell(out, r[i]);
        }
        out << '\n';
    }
}

}  // namespace csv
}  // namespace interax

#endif
