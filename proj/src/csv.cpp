#include "casimir_bec/csv.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace casimir_bec::io {

std::string format_number(double value)
{
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.10g", value);
    return buffer;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& comments,
                     const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::out | std::ios::trunc | std::ios::binary), columns_(header.size())
{
    if (!out_)
        throw std::runtime_error("cannot write " + path.string());
    for (const auto& c : comments)
        out_ << "# " << c << '\n';
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    if (cells.size() != columns_)
        throw std::logic_error("CsvWriter: row width does not match header of " + path_.string());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values)
{
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values)
        cells.push_back(format_number(v));
    row(cells);
}

std::size_t CsvTable::column(const std::string& name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    throw std::out_of_range("no column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& name) const
{
    const std::string& cell = rows.at(row).at(column(name));
    std::size_t used = 0;
    double v = std::stod(cell, &used);
    if (used != cell.size())
        throw std::invalid_argument("not a number: '" + cell + "'");
    return v;
}

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

} // namespace

CsvTable parse_csv(std::istream& in)
{
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#') {
            table.comments.push_back(line.size() > 2 ? line.substr(2) : std::string());
            continue;
        }
        auto cells = split(line);
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size())
            throw std::runtime_error("row " + std::to_string(table.rows.size() + 1) + " has " +
                                     std::to_string(cells.size()) + " cells, header has " +
                                     std::to_string(table.header.size()));
        table.rows.push_back(std::move(cells));
    }
    if (!have_header)
        throw std::runtime_error("missing header row");
    return table;
}

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    return parse_csv(in);
}

} // namespace casimir_bec::io
