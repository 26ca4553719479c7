// SPDX-License-Identifier: Apache-2.0
#include "exprkit/metrics/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "exprkit/error.hpp"

namespace exprkit {

std::string eval_report_json(const EvalReport& r) {
  nlohmann::json j;
  j["backbone"] = r.backbone;
  j["pretrained"] = r.pretrained;
  j["n_frames"] = r.n_frames;
  j["config_hash"] = r.config_hash;
  j["weights_id"] = r.weights_id;
  j["per_class_f1"] = r.per_class_f1;
  j["macro_f1"] = r.macro_f1;
  j["confusion"] = r.confusion;
  return j.dump(2) + "\n";
}

EvalReport parse_eval_report(const std::string& json_text) {
  EvalReport r;
  try {
    const nlohmann::json j = nlohmann::json::parse(json_text);
    r.backbone = j.at("backbone").get<std::string>();
    r.pretrained = j.at("pretrained").get<std::string>();
    r.n_frames = j.at("n_frames").get<std::int64_t>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.weights_id = j.at("weights_id").get<std::string>();
    r.per_class_f1 = j.at("per_class_f1").get<std::array<double, kNumClasses>>();
    r.macro_f1 = j.at("macro_f1").get<double>();
    r.confusion =
        j.at("confusion").get<std::array<std::array<std::int64_t, kNumClasses>, kNumClasses>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("eval report: ") + e.what());
  }
  return r;
}

EvalReport load_eval_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open report: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_eval_report(ss.str());
}

const std::vector<ReportRow>& baseline_rows() {
  static const std::vector<ReportRow> rows = {
      {"IR-50", "Sup. MS1M", 30.78},   {"APViT", "Sup. MS1M", 35.48},
      {"APViT", "Sup. RAF-DB", 35.63}, {"Res-18", "ContraWarping", 33.69},
      {"Res-50", "ContraWarping", 37.57},
  };
  return rows;
}

namespace {
std::string fmt_f1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}
} // namespace

std::string make_report(const std::vector<ReportRow>& rows) {
  const std::array<std::string, 3> header = {"Backbone", "Pre-trained", "F1-score"};
  std::size_t w0 = header[0].size(), w1 = header[1].size();
  for (const ReportRow& r : rows) {
    w0 = std::max(w0, r.backbone.size());
    w1 = std::max(w1, r.pretrained.size());
  }
  auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size(), ' '); };
  std::string out = pad(header[0], w0) + "  " + pad(header[1], w1) + "  " + header[2] + "\n";
  for (const ReportRow& r : rows)
    out += pad(r.backbone, w0) + "  " + pad(r.pretrained, w1) + "  " + fmt_f1(r.f1) + "\n";
  return out;
}

std::string make_report_csv(const std::vector<ReportRow>& rows) {
  std::string out = "Backbone,Pre-trained,F1-score\n";
  for (const ReportRow& r : rows)
    out += r.backbone + "," + r.pretrained + "," + fmt_f1(r.f1) + "\n";
  return out;
}

} // namespace exprkit
