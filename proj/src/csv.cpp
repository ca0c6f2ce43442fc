#include "spdc/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace spdc {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void CsvTable::comment(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) comments_ += line.empty() ? "#\n" : "# " + line + "\n";
}

void CsvTable::header(std::vector<std::string> columns) { columns_ = std::move(columns); }

void CsvTable::row(const std::vector<std::string>& cells) {
  if (!columns_.empty() && cells.size() != columns_.size()) {
    throw std::logic_error("CSV row width does not match the header");
  }
  for (std::size_t k = 0; k < cells.size(); ++k) body_ += (k ? "," : "") + cells[k];
  body_ += "\n";
}

void CsvTable::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

std::string CsvTable::str() const {
  std::string out = comments_;
  for (std::size_t k = 0; k < columns_.size(); ++k) out += (k ? "," : "") + columns_[k];
  if (!columns_.empty()) out += "\n";
  return out + body_;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot rename output into '" + path + "'");
  }
}

}  // namespace spdc
