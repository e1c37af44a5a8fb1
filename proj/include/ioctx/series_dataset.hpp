#pragma once

#include "ioctx/signal.hpp"
#include "ioctx/types.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ioctx {

enum class LengthMode { fixed, variable };

struct SeriesDataset {
  std::vector<UnivariateSeries> series;
  std::vector<Context> y;
  std::vector<std::string> subjects;
  LengthMode length_mode = LengthMode::fixed;

  std::size_t size() const { return series.size(); }
  // Length shared by every series; throws InvalidInput if they differ.
  std::size_t fixed_length() const;
  // Shape consistency, plus equal lengths in fixed mode.
  void validate() const;
  SeriesDataset subset(std::span<const std::size_t> indices) const;
};

}  // namespace ioctx
