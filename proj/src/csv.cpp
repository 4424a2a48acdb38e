#include "lrdfda/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace lrdfda {

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
}

void CsvWriter::header(const std::vector<std::string>& cols) { raw_row(cols); }

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw std::runtime_error("CsvWriter: write failed for " + path_);
}

std::string csv_cell(double x) { return format_double(x); }
std::string csv_cell(int x) { return std::to_string(x); }
std::string csv_cell(std::int64_t x) { return std::to_string(x); }
std::string csv_cell(const std::string& s) { return s; }

} // namespace lrdfda
