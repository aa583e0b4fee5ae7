#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace qwalk::cli {

/// One CSV file: `#` metadata lines, a header row and numeric rows.
struct Table {
  std::string name;  // file stem, no directory part
  std::vector<std::string> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const Table& t);

/// gnuplot script plotting every column against the first from `<name>.csv`.
std::string to_gnuplot(const std::vector<Table>& tables, const std::string& title);

/// Standalone SVG line plot of the same data.
std::string to_svg(const std::vector<Table>& tables, const std::string& title);

/// Writes `name` inside `dir` (created if missing). Rejects names that would leave `dir`.
void write_file(const std::filesystem::path& dir, const std::string& name, const std::string& contents);

}  // namespace qwalk::cli
