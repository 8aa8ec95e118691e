#pragma once

#include <string>
#include <vector>

namespace surflab {

/// Shortest round-trip-safe text with 17 significant digits, locale-free.
std::string fmt17(double v);

/// Minimal CSV table: a header row plus rows of preformatted cells.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells);
  /// Convenience for purely numeric rows.
  void add_numbers(const std::vector<double>& values);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes text to a file, creating parent directories. Throws on I/O failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace surflab
