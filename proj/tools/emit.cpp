#include "emit.hpp"

#include <cstdio>

#include "cavitytrio/errors.hpp"

namespace cavitytrio::cli {

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.16e", value);
    return buffer;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), columns_(columns.size()) {
    if (!out_) fail(Errc::InvalidArgument, "cannot open output file: " + path);
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    }
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        out_ << format_double(values[i]) << (i + 1 < values.size() ? "," : "\n");
    }
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
    }
}

void write_json_file(const std::string& path, const nlohmann::ordered_json& document) {
    std::ofstream out(path);
    if (!out) fail(Errc::InvalidArgument, "cannot open output file: " + path);
    out << document.dump(2) << "\n";
}

}  // namespace cavitytrio::cli
