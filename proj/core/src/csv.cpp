#include "epo/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace epo {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw std::invalid_argument("Table: row width does not match the header");
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

std::string render_csv(const Table& table) {
    std::ostringstream out;
    for (const auto& c : table.comments) out << "# " << c << "\n";
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
        if (j) out << ',';
        out << table.columns[j];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("render_csv: ragged row");
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << ',';
            if (row[j].numeric)
                out << format_number(row[j].number);
            else
                out << row[j].text;
        }
        out << '\n';
    }
    return out.str();
}

void emit_csv(const Table& table, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("emit_csv: cannot open " + path);
    f << render_csv(table);
    if (!f) throw std::runtime_error("emit_csv: write failed for " + path);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    out.push_back(field);
    return out;
}

Cell parse_cell(const std::string& s) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec == std::errc() && res.ptr == end && !s.empty()) return Cell(v);
    return Cell(s);
}

} // namespace

Table parse_csv_text(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string c = line.substr(1);
            if (!c.empty() && c[0] == ' ') c.erase(0, 1);
            t.comments.push_back(c);
            continue;
        }
        const auto fields = split_line(line);
        if (!have_header) {
            t.columns = fields;
            have_header = true;
            continue;
        }
        std::vector<Cell> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_cell(f));
        t.add_row(std::move(row));
    }
    return t;
}

Table parse_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("parse_csv: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_csv_text(ss.str());
}

} // namespace epo
