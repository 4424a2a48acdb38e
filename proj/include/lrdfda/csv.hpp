#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace lrdfda {

// UTF-8, comma-separated, one header row, floats at 17 significant digits.
// Field order and formatting are fixed so re-runs are byte-identical.
std::string format_double(double x);

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void header(const std::vector<std::string>& cols);
    void raw_row(const std::vector<std::string>& cells);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ofstream out_;
};

std::string csv_cell(double x);
std::string csv_cell(int x);
std::string csv_cell(std::int64_t x);
std::string csv_cell(const std::string& s);

} // namespace lrdfda
