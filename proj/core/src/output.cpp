#include "fairq/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>
#include <unistd.h>

namespace fairq {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  // Shortest representation first; fall back to 12 significant digits when
  // the shortest form is longer.
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string shortest(buf, res.ptr);
  res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  std::string capped(buf, res.ptr);
  return shortest.size() <= capped.size() ? shortest : capped;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) text_ += ',';
    text_ += header_[i];
  }
  text_ += '\n';
}

void CsvWriter::separator() {
  if (column_++) text_ += ',';
}

CsvWriter& CsvWriter::cell(double v) {
  separator();
  text_ += format_number(v);
  return *this;
}

CsvWriter& CsvWriter::cell(std::uint64_t v) {
  separator();
  text_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view v) {
  separator();
  text_ += v;
  return *this;
}

void CsvWriter::end_row() {
  if (column_ != header_.size()) {
    throw std::logic_error("csv row has " + std::to_string(column_) + " cells, header has " +
                           std::to_string(header_.size()));
  }
  text_ += '\n';
  column_ = 0;
  ++rows_;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw OutputError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw OutputError("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw OutputError("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

}  // namespace fairq
