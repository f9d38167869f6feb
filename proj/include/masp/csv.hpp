#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "masp/errors.hpp"

namespace masp {

/// Fixed "%.6g" float formatting; identical inputs must produce
/// byte-identical CSV.
inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary), path_(path) {
        if (!out_) throw io_error("cannot write " + path);
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
        if (!out_) throw io_error("short write to " + path_);
    }

    void numeric_row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(csv_num(v));
        row(cells);
    }

private:
    std::ofstream out_;
    std::string path_;
};

} // namespace masp
