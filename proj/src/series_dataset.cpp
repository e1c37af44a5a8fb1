#include "ioctx/series_dataset.hpp"

#include "ioctx/error.hpp"

#include <fmt/format.h>

namespace ioctx {

std::size_t SeriesDataset::fixed_length() const {
  if (series.empty()) throw InvalidInput("series dataset is empty");
  const std::size_t len = series.front().size();
  for (const auto& s : series) {
    if (s.size() != len) throw InvalidInput("series dataset contains series of different lengths");
  }
  return len;
}

void SeriesDataset::validate() const {
  if (series.size() != y.size()) throw InvalidInput("series and labels differ in count");
  if (!subjects.empty() && subjects.size() != y.size()) throw InvalidInput("subject ids and labels differ in count");
  if (length_mode == LengthMode::fixed && !series.empty()) fixed_length();
}

SeriesDataset SeriesDataset::subset(std::span<const std::size_t> indices) const {
  SeriesDataset out;
  out.length_mode = length_mode;
  for (auto i : indices) {
    if (i >= series.size()) throw InvalidInput(fmt::format("series index {} out of range", i));
    out.series.push_back(series[i]);
    out.y.push_back(y[i]);
    if (!subjects.empty()) out.subjects.push_back(subjects[i]);
  }
  return out;
}

}  // namespace ioctx
