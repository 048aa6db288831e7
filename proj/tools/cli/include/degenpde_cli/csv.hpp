#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>

namespace degenpde::cli {

/// Shortest round-trip-safe text for x: 17 significant digits, '.' separator.
std::string format_number(double x);

/// Writes rows with LF line endings. Throws std::runtime_error on i/o failure.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);

    CsvWriter& field(std::string_view text);
    CsvWriter& field(double x);
    CsvWriter& field(long long x);
    void end_row();
    void close();

private:
    std::filesystem::path path_;
    std::ofstream out_;
    bool first_ = true;
};

}  // namespace degenpde::cli
