#include "ioctx/csv.hpp"

#include "ioctx/error.hpp"

#include <charconv>
#include <cmath>
#include <istream>

#include <fmt/format.h>

namespace ioctx::csv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

bool blank(std::string_view s) { return trim(s).empty(); }

}  // namespace

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    const auto field = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    out.emplace_back(trim(field));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Reader::Reader(std::istream& in) : in_(in) {
  std::string line;
  while (std::getline(in_, line)) {
    if (blank(line)) continue;
    header_ = split(line);
    return;
  }
  throw InvalidInput("csv: missing header line");
}

void Reader::expect_header(const std::vector<std::string>& expected) const {
  if (header_ != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    throw InvalidInput(fmt::format("csv: expected header `{}`", want));
  }
}

int Reader::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

bool Reader::next(std::vector<std::string>& fields) {
  std::string line;
  while (std::getline(in_, line)) {
    if (blank(line)) continue;
    ++row_;
    fields = split(line);
    if (fields.size() != header_.size()) {
      throw InvalidInput(fmt::format("csv: row {} has {} fields, expected {}", row_, fields.size(), header_.size()));
    }
    return true;
  }
  return false;
}

double Reader::number(const std::vector<std::string>& fields, std::size_t col) const {
  const std::string& s = fields.at(col);
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw InvalidInput(fmt::format("csv: row {} column `{}`: `{}` is not a finite number", row_, header_.at(col), s));
  }
  return v;
}

long long Reader::integer(const std::vector<std::string>& fields, std::size_t col) const {
  const std::string& s = fields.at(col);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidInput(fmt::format("csv: row {} column `{}`: `{}` is not an integer", row_, header_.at(col), s));
  }
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(fmt::format("cannot open `{}` for reading", path));
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput(fmt::format("cannot open `{}` for writing", path));
  return out;
}

std::string format_number(double v) { return fmt::format("{}", v); }

}  // namespace ioctx::csv
