#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace windlab {

/// Shortest round-trip decimal text; "nan", "inf", "-inf" otherwise.
std::string format_number(double v);
std::string format_number(long long v);

/// CSV table whose first column is always config_hash.
class CsvTable {
 public:
  CsvTable(std::string hash, std::vector<std::string> columns);

  /// Starts a row; cells follow via add().
  CsvTable& row();
  CsvTable& add(double v);
  CsvTable& add(long long v);
  CsvTable& add(int v) { return add(static_cast<long long>(v)); }
  CsvTable& add(std::uint64_t v);
  CsvTable& add(const std::string& v);
  CsvTable& add(const char* v) { return add(std::string(v)); }

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t rows() const noexcept { return cells_.size(); }
  std::string text() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::string hash_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> cells_;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines);

}  // namespace windlab
