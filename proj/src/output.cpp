#include "windlab/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "windlab/errors.hpp"

namespace windlab {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

std::string format_number(long long v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

CsvTable::CsvTable(std::string hash, std::vector<std::string> columns) : hash_(std::move(hash)) {
  columns_.push_back("config_hash");
  for (auto& c : columns) columns_.push_back(std::move(c));
}

CsvTable& CsvTable::row() {
  cells_.emplace_back();
  cells_.back().push_back(hash_);
  return *this;
}

CsvTable& CsvTable::add(double v) { return add(format_number(v)); }
CsvTable& CsvTable::add(long long v) { return add(format_number(v)); }

CsvTable& CsvTable::add(std::uint64_t v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return add(std::string(buf, ptr));
}

CsvTable& CsvTable::add(const std::string& v) {
  if (cells_.empty()) throw std::logic_error("CsvTable::add before row()");
  if (cells_.back().size() >= columns_.size()) throw std::logic_error("CsvTable row has too many cells");
  if (v.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : v) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    cells_.back().push_back(quoted + "\"");
  } else {
    cells_.back().push_back(v);
  }
  return *this;
}

std::string CsvTable::text() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(columns_);
  for (const auto& r : cells_) {
    if (r.size() != columns_.size()) throw std::logic_error("CsvTable row has missing cells");
    line(r);
  }
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text();
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& l : lines) out << l << '\n';
}

}  // namespace windlab
