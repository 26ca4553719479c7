// SPDX-License-Identifier: Apache-2.0
//
// exprkit command line: synth | pretrain | train | evaluate | report
//
// Exit codes: 0 success, 2 config/validation error, 3 I/O error, 4 numerics.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "exprkit/dataset/loader.hpp"
#include "exprkit/dataset/synth.hpp"
#include "exprkit/error.hpp"
#include "exprkit/manifest.hpp"
#include "exprkit/metrics/evaluate.hpp"
#include "exprkit/metrics/report.hpp"
#include "exprkit/model/checkpoint.hpp"
#include "exprkit/pretrain/contrastive.hpp"
#include "exprkit/train/trainer.hpp"
#include "exprkit/version.hpp"

namespace {

using namespace exprkit;
namespace fs = std::filesystem;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

fs::path resolve_data_root(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("EXPR_DATA_ROOT"); env && *env) return env;
  throw ConfigError("no data root: pass --data-root or set EXPR_DATA_ROOT");
}

std::unique_ptr<ModelAssembly<float>> model_from_config(const RunConfig& cfg) {
  BackboneSpec spec = backbone_by_name(cfg.model.backbone);
  spec.input_resolution = cfg.model.input_resolution;
  return std::make_unique<ModelAssembly<float>>(spec, cfg.model.head, cfg.train.seed,
                                                cfg.normalization());
}

std::unique_ptr<ModelAssembly<float>> model_from_checkpoint(const Checkpoint& ckpt) {
  BackboneSpec spec = backbone_by_name(ckpt.backbone_name);
  spec.input_resolution = ckpt.input_resolution;
  Normalization norm;
  norm.mean = ckpt.norm_mean;
  norm.std = ckpt.norm_std;
  auto model = std::make_unique<ModelAssembly<float>>(spec, ckpt.head, /*init_seed=*/0, norm);
  const MatchReport report = import_weights(*model, ckpt.arrays);
  if (!report.all_matched())
    throw ConfigError("checkpoint arrays do not match the rebuilt model (" +
                      std::to_string(report.missing.size()) + " missing, " +
                      std::to_string(report.unexpected.size()) + " unexpected, " +
                      std::to_string(report.shape_mismatch.size()) + " shape mismatches)");
  return model;
}

void verify_checkpoint_config(const Checkpoint& ckpt) {
  const RunConfig cfg = parse_config_text(ckpt.config_text);
  if (config_hash(cfg) != ckpt.config_hash)
    throw ConfigError("checkpoint config hash mismatch: stored " + ckpt.config_hash +
                      ", recomputed " + config_hash(cfg));
}

void print_match_report(const MatchReport& report) {
  std::cout << "weights: matched " << report.matched.size() << ", missing "
            << report.missing.size() << ", unexpected " << report.unexpected.size()
            << ", shape_mismatch " << report.shape_mismatch.size() << "\n";
  if (!report.shape_mismatch.empty()) {
    std::cerr << "warning: shape mismatch for:";
    for (const auto& name : report.shape_mismatch) std::cerr << " " << name;
    std::cerr << "\n";
  }
}

struct CommonTrainArgs {
  std::string config_path;
  std::string data_root;
  std::string out_dir;
  // precedence: CLI flag > config file > built-in defaults
  std::optional<std::int64_t> seed;
  std::optional<int> total_iters;
  std::optional<int> batch_size;
  std::optional<double> base_lr;
  std::optional<int> freeze_k;
  std::optional<std::string> backbone;
  std::optional<int> input_resolution;
  std::optional<std::string> split;
};

RunConfig load_run_config(const CommonTrainArgs& args) {
  RunConfig cfg;
  if (!args.config_path.empty()) cfg = load_config_file(args.config_path);
  if (args.seed) cfg.train.seed = static_cast<std::uint64_t>(*args.seed);
  if (args.total_iters) cfg.train.total_iters = *args.total_iters;
  if (args.batch_size) cfg.train.batch_size = *args.batch_size;
  if (args.base_lr) cfg.train.base_lr = *args.base_lr;
  if (args.freeze_k) cfg.train.freeze_k = *args.freeze_k;
  if (args.backbone) cfg.model.backbone = *args.backbone;
  if (args.input_resolution) cfg.model.input_resolution = *args.input_resolution;
  if (args.split) cfg.data.split = *args.split;
  cfg.validate();
  return cfg;
}

void add_common_train_flags(CLI::App* cmd, CommonTrainArgs& args) {
  cmd->add_option("--config", args.config_path, "sectioned config file");
  cmd->add_option("--data-root", args.data_root, "dataset root (or EXPR_DATA_ROOT)");
  cmd->add_option("--out", args.out_dir, "output directory")->required();
  cmd->add_option("--seed", args.seed, "override [train] seed");
  cmd->add_option("--total-iters", args.total_iters, "override [train] total_iters");
  cmd->add_option("--batch-size", args.batch_size, "override [train] batch_size");
  cmd->add_option("--base-lr", args.base_lr, "override [train] base_lr");
  cmd->add_option("--freeze-k", args.freeze_k, "override [train] freeze_k");
  cmd->add_option("--backbone", args.backbone, "override [model] backbone");
  cmd->add_option("--input-resolution", args.input_resolution,
                  "override [model] input_resolution");
  cmd->add_option("--split", args.split, "override [data] split");
}

int cmd_synth(const std::string& out, int videos, int frames, int image_size,
              const std::string& split, std::int64_t seed) {
  const auto start = Clock::now();
  const SynthSummary summary = synthesize_dataset(out, split, videos, frames, image_size,
                                                  static_cast<std::uint64_t>(seed));
  std::cout << "synthesized " << summary.n_videos << " videos x " << summary.frames_per_video
            << " frames under " << out << "\n";
  RunManifest manifest;
  manifest.command = "synth";
  manifest.seed = static_cast<std::uint64_t>(seed);
  manifest.outputs = {summary.annotations_dir.string(), summary.image_root.string()};
  manifest.toolkit_version = kToolkitVersion;
  manifest.wall_clock_seconds = seconds_since(start);
  write_manifest(out, manifest);
  return 0;
}

int cmd_train(const CommonTrainArgs& args, const std::string& weights_path) {
  const auto start = Clock::now();
  const RunConfig cfg = load_run_config(args);
  const fs::path root = resolve_data_root(args.data_root);

  auto model = model_from_config(cfg);
  std::string origin = "random";
  if (!weights_path.empty()) {
    const Checkpoint ckpt = load_checkpoint(weights_path);
    const MatchReport report = import_weights(*model, ckpt.arrays);
    print_match_report(report);
    origin = ckpt.pretext == "contrastive-warp" ? "contrastive-warp"
                                                : "imported:" + fs::path(weights_path).stem().string();
  }

  const FrameDataset train_data = FrameDataset::load(root, cfg.data.split);
  if (!train_data.skip_report().empty())
    std::cerr << skip_report_jsonl(train_data.skip_report());
  std::optional<FrameDataset> eval_data;
  if (!cfg.data.eval_split.empty())
    eval_data = FrameDataset::load(root, cfg.data.eval_split);

  const TrainOutput result = train_model(*model, train_data, eval_data ? &*eval_data : nullptr,
                                         cfg, args.out_dir, origin);
  for (const TrainLogRecord& record : result.records)
    std::cout << log_record_json(record) << "\n";
  std::cout << "final checkpoint: " << result.final_checkpoint.string() << "\n";

  RunManifest manifest;
  manifest.command = "train";
  manifest.config_hash = config_hash(cfg);
  manifest.seed = cfg.train.seed;
  manifest.inputs = {root.string()};
  if (!weights_path.empty()) manifest.inputs.push_back(weights_path);
  manifest.outputs = {result.final_checkpoint.string(), result.log_path.string()};
  if (!result.best_checkpoint.empty()) manifest.outputs.push_back(result.best_checkpoint.string());
  manifest.toolkit_version = kToolkitVersion;
  manifest.wall_clock_seconds = seconds_since(start);
  write_manifest(args.out_dir, manifest);
  return 0;
}

int cmd_pretrain(const CommonTrainArgs& args) {
  const auto start = Clock::now();
  const RunConfig cfg = load_run_config(args);
  const fs::path root = resolve_data_root(args.data_root);
  const FrameDataset data = FrameDataset::load(root, cfg.data.split);
  const PretrainOutput result = pretrain_run(data, cfg, args.out_dir);
  for (const TrainLogRecord& record : result.records)
    std::cout << log_record_json(record) << "\n";
  std::cout << "pretraining checkpoint: " << result.checkpoint.string() << "\n";

  RunManifest manifest;
  manifest.command = "pretrain";
  manifest.config_hash = config_hash(cfg);
  manifest.seed = cfg.train.seed;
  manifest.inputs = {root.string()};
  manifest.outputs = {result.checkpoint.string(), result.log_path.string()};
  manifest.toolkit_version = kToolkitVersion;
  manifest.wall_clock_seconds = seconds_since(start);
  write_manifest(args.out_dir, manifest);
  return 0;
}

int cmd_evaluate(const std::string& checkpoint_path, const std::string& data_root,
                 const std::string& split, const std::string& out_dir, int batch_size) {
  const auto start = Clock::now();
  const Checkpoint ckpt = load_checkpoint(checkpoint_path);
  verify_checkpoint_config(ckpt);
  auto model = model_from_checkpoint(ckpt);

  const fs::path root = resolve_data_root(data_root);
  const FrameDataset data = FrameDataset::load(root, split);
  if (!data.skip_report().empty()) std::cerr << skip_report_jsonl(data.skip_report());
  const EvalOutcome outcome = evaluate_dataset(*model, data, batch_size);

  EvalReport report;
  report.backbone = ckpt.backbone_name;
  report.pretrained = ckpt.weights_origin;
  report.n_frames = outcome.n_frames;
  report.config_hash = ckpt.config_hash;
  report.weights_id = weights_digest(ckpt.arrays);
  report.per_class_f1 = outcome.f1.per_class;
  report.macro_f1 = outcome.f1.macro;
  report.confusion = outcome.cm.m;

  std::cout << make_report({{report.backbone, report.pretrained, report.macro_f1}});

  RunManifest manifest;
  manifest.command = "evaluate";
  manifest.config_hash = ckpt.config_hash;
  manifest.inputs = {checkpoint_path, root.string()};
  manifest.toolkit_version = kToolkitVersion;
  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IOError("cannot create " + out_dir);
    const fs::path report_path = fs::path(out_dir) / "eval_report.json";
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw IOError("cannot write " + report_path.string());
    out << eval_report_json(report);
    manifest.outputs = {report_path.string()};
    manifest.wall_clock_seconds = seconds_since(start);
    write_manifest(out_dir, manifest);
  } else {
    std::cout << eval_report_json(report);
  }
  return 0;
}

int cmd_report(const std::vector<std::string>& files, bool include_baselines, bool csv,
               const std::string& out_dir) {
  const auto start = Clock::now();
  std::vector<ReportRow> rows;
  if (include_baselines)
    rows.insert(rows.end(), baseline_rows().begin(), baseline_rows().end());
  for (const std::string& file : files) {
    const EvalReport r = load_eval_report(file);
    rows.push_back({r.backbone, r.pretrained, r.macro_f1});
  }
  const std::string table = make_report(rows);
  std::cout << table;
  if (csv) std::cout << make_report_csv(rows);

  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IOError("cannot create " + out_dir);
    std::ofstream t(fs::path(out_dir) / "table.txt", std::ios::binary);
    t << table;
    std::ofstream c(fs::path(out_dir) / "table.csv", std::ios::binary);
    c << make_report_csv(rows);
    RunManifest manifest;
    manifest.command = "report";
    manifest.inputs = files;
    manifest.outputs = {(fs::path(out_dir) / "table.txt").string(),
                        (fs::path(out_dir) / "table.csv").string()};
    manifest.toolkit_version = kToolkitVersion;
    manifest.wall_clock_seconds = seconds_since(start);
    write_manifest(out_dir, manifest);
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"frame-wise expression classification toolkit"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic desk-scale dataset");
  std::string synth_out, synth_split = "train";
  int synth_videos = 8, synth_frames = 10, synth_image_size = 128;
  std::int64_t synth_seed = 1;
  synth->add_option("--out", synth_out, "output root")->required();
  synth->add_option("--videos", synth_videos, "number of videos");
  synth->add_option("--frames", synth_frames, "frames per video");
  synth->add_option("--image-size", synth_image_size, "square frame size in pixels");
  synth->add_option("--split", synth_split, "annotation split name");
  synth->add_option("--seed", synth_seed, "generator seed");

  // pretrain
  auto* pretrain = app.add_subcommand("pretrain", "contrastive-warp pretraining");
  CommonTrainArgs pretrain_args;
  add_common_train_flags(pretrain, pretrain_args);

  // train
  auto* train = app.add_subcommand("train", "fine-tune a classifier");
  CommonTrainArgs train_args;
  std::string train_weights;
  add_common_train_flags(train, train_args);
  train->add_option("--weights", train_weights, "checkpoint with initial (backbone) weights");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "frame-wise evaluation of a checkpoint");
  std::string eval_ckpt, eval_root, eval_split = "val", eval_out;
  int eval_batch = 32;
  evaluate->add_option("--checkpoint", eval_ckpt, "checkpoint file")->required();
  evaluate->add_option("--data-root", eval_root, "dataset root (or EXPR_DATA_ROOT)");
  evaluate->add_option("--split", eval_split, "annotation split");
  evaluate->add_option("--out", eval_out, "output directory for the report");
  evaluate->add_option("--batch-size", eval_batch, "evaluation batch size");

  // report
  auto* report = app.add_subcommand("report", "comparison table from eval reports");
  std::vector<std::string> report_files;
  bool report_baselines = false, report_csv = false;
  std::string report_out;
  report->add_option("files", report_files, "EvalReport JSON files");
  report->add_flag("--baselines", report_baselines, "include the stored published rows");
  report->add_flag("--csv", report_csv, "also print CSV");
  report->add_option("--out", report_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (synth->parsed())
      return cmd_synth(synth_out, synth_videos, synth_frames, synth_image_size, synth_split,
                       synth_seed);
    if (pretrain->parsed()) return cmd_pretrain(pretrain_args);
    if (train->parsed()) return cmd_train(train_args, train_weights);
    if (evaluate->parsed())
      return cmd_evaluate(eval_ckpt, eval_root, eval_split, eval_out, eval_batch);
    if (report->parsed()) return cmd_report(report_files, report_baselines, report_csv, report_out);
  } catch (const exprkit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
