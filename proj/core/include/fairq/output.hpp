#pragma once

#include <filesystem>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fairq {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest round-trip form capped at 12 significant digits; "nan" for NaN.
std::string format_number(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  const std::vector<std::string>& header() const noexcept { return header_; }

  CsvWriter& cell(double v);
  CsvWriter& cell(std::uint64_t v);
  CsvWriter& cell(int v) { return cell(static_cast<std::uint64_t>(v)); }
  CsvWriter& cell(std::string_view v);
  // Terminates the current row; throws std::logic_error on a column-count
  // mismatch.
  void end_row();

  std::size_t rows() const noexcept { return rows_; }
  const std::string& text() const noexcept { return text_; }

 private:
  void separator();

  std::vector<std::string> header_;
  std::string text_;
  std::size_t rows_ = 0;
  std::size_t column_ = 0;
};

// Writes `content` to a temporary sibling and renames it over `path`, so the
// final path only ever holds complete files.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace fairq
