#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace cavitytrio::cli {

/// 17 significant digits, scientific notation: identical configs must give
/// byte-identical files.
std::string format_double(double value);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);

    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
    std::size_t columns_;
};

void write_json_file(const std::string& path, const nlohmann::ordered_json& document);

}  // namespace cavitytrio::cli
