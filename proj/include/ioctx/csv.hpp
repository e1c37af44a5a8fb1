#pragma once

// Minimal reader for the comma-separated files exchanged between pipeline
// stages. Fields are never quoted; blank lines are skipped.

#include <cstddef>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ioctx::csv {

std::vector<std::string> split(std::string_view line);

class Reader {
 public:
  explicit Reader(std::istream& in);

  const std::vector<std::string>& header() const { return header_; }
  // Throws InvalidInput unless the header equals `expected` exactly.
  void expect_header(const std::vector<std::string>& expected) const;
  // Index of a header column, or -1.
  int column(std::string_view name) const;

  // Reads the next data row; false at end of input. Rows with a wrong
  // field count throw InvalidInput naming the row.
  bool next(std::vector<std::string>& fields);
  // 1-based data row number of the last row returned by next().
  std::size_t row() const { return row_; }

  double number(const std::vector<std::string>& fields, std::size_t col) const;
  long long integer(const std::vector<std::string>& fields, std::size_t col) const;

 private:
  std::istream& in_;
  std::vector<std::string> header_;
  std::size_t row_ = 0;
};

// Opens a file for reading; throws InvalidInput naming the path on failure.
std::ifstream open_input(const std::string& path);
std::ofstream open_output(const std::string& path);

// Shortest round-trip representation of a double.
std::string format_number(double v);

}  // namespace ioctx::csv
