#pragma once

#include "ioctx/evaluation.hpp"

#include <string>
#include <vector>

namespace ioctx {

// "77.4 ± 0.1": mean and std in percent, one decimal.
std::string format_mean_std(const MetricStats& s);

// Aligned text table with one row per report: label, accuracy, precision,
// recall, F1. The label is the campaign id.
std::string render_table(const std::vector<MetricsReport>& reports, const std::string& title = {});

// Per-fold breakdown of a single report.
std::string render_folds(const MetricsReport& report);

MetricsReport read_report(const std::string& path);
void write_report(const std::string& path, const MetricsReport& report);

}  // namespace ioctx
