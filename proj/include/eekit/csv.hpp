// CSV output with locale-independent, fixed-precision number formatting so
// repeated runs produce byte-identical files.
#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace eekit {

// Fixed scientific form, 16 significant digits: precise enough to rebuild
// the double and stable across runs.
inline std::string format_number(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.15e", v);
    return std::string(buf);
}

inline std::string format_compact(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open for writing: " + path.string());
        write_cells(header);
    }

    void row(const std::vector<std::string>& cells) { write_cells(cells); }

    class RowBuilder {
    public:
        explicit RowBuilder(CsvWriter& w) : w_(w) {}
        RowBuilder& num(double v) { cells_.push_back(format_number(v)); return *this; }
        RowBuilder& integer(std::int64_t v) { cells_.push_back(std::to_string(v)); return *this; }
        RowBuilder& text(std::string s) { cells_.push_back(std::move(s)); return *this; }
        ~RowBuilder() { w_.write_cells(cells_); }
        RowBuilder(const RowBuilder&) = delete;
        RowBuilder& operator=(const RowBuilder&) = delete;

    private:
        CsvWriter& w_;
        std::vector<std::string> cells_;
    };

    RowBuilder row() { return RowBuilder(*this); }

private:
    void write_cells(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::ofstream out_;
};

} // namespace eekit
