#pragma once

#include <string>
#include <vector>

namespace epo {

struct Cell {
    bool numeric = true;
    double number = 0.0;
    std::string text;

    Cell() = default;
    Cell(double v) : numeric(true), number(v) {}
    Cell(std::string s) : numeric(false), text(std::move(s)) {}
    Cell(const char* s) : numeric(false), text(s) {}
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> comments;  // emitted as leading '#' lines

    void add_row(std::vector<Cell> row);
};

// Locale-independent, 17 significant digits; round-trips exactly.
std::string format_number(double v);

// UTF-8, comma separated, '.' decimal point, newline-terminated final row.
void emit_csv(const Table& table, const std::string& path);
std::string render_csv(const Table& table);

Table parse_csv(const std::string& path);
Table parse_csv_text(const std::string& text);

} // namespace epo
