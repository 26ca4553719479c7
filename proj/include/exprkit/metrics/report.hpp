// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "exprkit/metrics/confusion.hpp"

namespace exprkit {

// Serialized evaluation result: enough to reproduce a comparison-table row.
struct EvalReport {
  std::string backbone;
  std::string pretrained;
  std::int64_t n_frames = 0;
  std::string config_hash;
  std::string weights_id;
  std::array<double, kNumClasses> per_class_f1{};
  double macro_f1 = 0.0;
  std::array<std::array<std::int64_t, kNumClasses>, kNumClasses> confusion{};
};

std::string eval_report_json(const EvalReport& report);
EvalReport parse_eval_report(const std::string& json_text);
EvalReport load_eval_report(const std::filesystem::path& path);

struct ReportRow {
  std::string backbone;
  std::string pretrained;
  double f1 = 0.0;
};

// Published comparison rows kept as stored report data.
const std::vector<ReportRow>& baseline_rows();

// Aligned plain-text table: Backbone | Pre-trained | F1-score, two decimals,
// row order preserved.
std::string make_report(const std::vector<ReportRow>& rows);
std::string make_report_csv(const std::vector<ReportRow>& rows);

} // namespace exprkit
