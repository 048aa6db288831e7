#include "degenpde_cli/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace degenpde::cli {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    for (std::string_view h : header) field(h);
    end_row();
}

CsvWriter& CsvWriter::field(std::string_view text) {
    if (!first_) out_ << ',';
    out_ << text;
    first_ = false;
    return *this;
}

CsvWriter& CsvWriter::field(double x) { return field(format_number(x)); }

CsvWriter& CsvWriter::field(long long x) { return field(std::to_string(x)); }

void CsvWriter::end_row() {
    out_ << '\n';
    first_ = true;
}

void CsvWriter::close() {
    out_.close();
    if (out_.fail()) throw std::runtime_error("error writing " + path_.string());
}

}  // namespace degenpde::cli
