#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace coevo::pipeline {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a header column; throws InvalidInput if absent.
    std::size_t column(std::string_view name) const;
};

// Shortest round-trip-stable rendering used in every emitted file ("%.10g").
std::string format_number(double value);

// RFC 4180 quoting, applied only when a field needs it.
std::string csv_field(std::string_view field);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::string_view text);

}  // namespace coevo::pipeline
