#pragma once

#include <string>
#include <vector>

namespace spdc {

/// 12 significant digits.
std::string format_number(double v);

/// Comma-separated table with a '#'-prefixed comment block. LF line endings.
class CsvTable {
 public:
  void comment(const std::string& text);  // multi-line text gets one '#' per line
  void header(std::vector<std::string> columns);
  void row(const std::vector<std::string>& cells);
  void row(const std::vector<double>& values);
  std::string str() const;

 private:
  std::string comments_;
  std::vector<std::string> columns_;
  std::string body_;
};

/// Writes `content` to a temporary sibling of `path`, then renames it over
/// `path`, so readers never see a partial file. Throws std::runtime_error.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace spdc
