#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace casimir_bec::io {

/// Numeric cell text: 10 significant digits, "%.10g".
std::string format_number(double value);

/// CSV emitter: `# ` comment lines, one header row, `\n` line endings.
/// Column names carry their unit, e.g. `gap_Hz`.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& comments,
              const std::vector<std::string>& header);

    void row(const std::vector<std::string>& cells);
    void row(const std::vector<double>& values);

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
};

struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const; ///< throws std::out_of_range
    double number(std::size_t row, const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::istream& in);

} // namespace casimir_bec::io
