#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace balens {

// Raw comma-separated table: RFC 4180 quoting, first record is the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> records;
};

CsvTable read_csv_file(const std::string& path);
CsvTable parse_csv(std::string_view content);

std::string csv_escape(std::string_view field);
void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& records);

}  // namespace balens
