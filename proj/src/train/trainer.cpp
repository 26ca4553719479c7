// SPDX-License-Identifier: Apache-2.0
#include "exprkit/train/trainer.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "exprkit/dataset/augment.hpp"
#include "exprkit/dataset/sampling.hpp"
#include "exprkit/error.hpp"
#include "exprkit/metrics/evaluate.hpp"
#include "exprkit/train/loss.hpp"
#include "exprkit/train/schedule.hpp"
#include "exprkit/train/sgd.hpp"

namespace exprkit {

std::string log_record_json(const TrainLogRecord& record) {
  nlohmann::json j;
  j["iter"] = record.iter;
  j["lr"] = record.lr;
  j["loss"] = record.loss;
  if (record.macro_f1) j["macro_f1"] = *record.macro_f1;
  return j.dump();
}

Checkpoint make_checkpoint(ModelAssembly<float>& model, const RunConfig& config,
                           std::uint64_t iteration, const std::string& pretext,
                           const std::string& weights_origin) {
  Checkpoint ckpt;
  ckpt.config_hash = config_hash(config);
  ckpt.config_text = canonical_config_text(config);
  ckpt.iteration = iteration;
  ckpt.pretext = pretext;
  ckpt.weights_origin = weights_origin;
  ckpt.backbone_name = model.backbone_spec().name;
  ckpt.input_resolution = model.backbone_spec().input_resolution;
  ckpt.head = model.head_config();
  ckpt.norm_mean = model.normalization().mean;
  ckpt.norm_std = model.normalization().std;
  ckpt.arrays = export_arrays(model);
  return ckpt;
}

TrainOutput train_model(ModelAssembly<float>& model, const FrameDataset& train_data,
                        const FrameDataset* eval_data, const RunConfig& config,
                        const std::filesystem::path& out_dir,
                        const std::string& weights_origin) {
  config.validate();
  if (train_data.empty()) throw DataError("training split has no valid frames");
  if (config.resolved_crop_size() != model.backbone_spec().input_resolution)
    throw ConfigError("crop_size " + std::to_string(config.resolved_crop_size()) +
                      " must equal model input_resolution " +
                      std::to_string(model.backbone_spec().input_resolution));

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IOError("cannot create " + out_dir.string());

  model.freeze_stages(config.train.freeze_k);
  const AugmentConfig aug_cfg = config.augment_config();
  const Normalization norm = model.normalization();
  const RngStream root(config.train.seed);

  // epoch pool: re-subsampled and re-shuffled whenever exhausted
  std::vector<FrameSample> pool;
  std::size_t pos = 0;
  std::int64_t epoch = -1;
  auto refill = [&]() {
    ++epoch;
    RngStream sub_rng = root.derive("subsample", static_cast<std::uint64_t>(epoch));
    pool = temporal_subsample(train_data.samples(), config.data.temporal_stride, sub_rng);
    RngStream shuffle_rng = root.derive("shuffle", static_cast<std::uint64_t>(epoch));
    for (std::size_t i = pool.size(); i > 1; --i)
      std::swap(pool[i - 1], pool[shuffle_rng.uniform_u64(i)]);
    pos = 0;
  };

  TrainOutput out;
  out.log_path = out_dir / "train_log.jsonl";
  std::ofstream log(out.log_path, std::ios::binary);
  if (!log) throw IOError("cannot write " + out.log_path.string());

  SgdState<float> state;
  std::vector<ImageF> images;
  std::vector<int> labels;
  double best_f1 = -1.0;
  const int total = config.train.total_iters;

  for (int t = 0; t < total; ++t) {
    images.clear();
    labels.clear();
    for (int b = 0; b < config.train.batch_size; ++b) {
      if (pos == pool.size()) refill();
      const FrameSample& sample = pool[pos++];
      RngStream aug_rng =
          root.derive("augment", static_cast<std::uint64_t>(epoch), fnv1a64(sample.video_id),
                      static_cast<std::uint64_t>(sample.frame_index));
      images.push_back(to_float01(augment(train_data.image(sample), aug_cfg, aug_rng)));
      labels.push_back(sample.label);
    }

    const double lr = cosine_lr(t, total, config.train.base_lr);
    const Tensor<float> batch = to_batch<float>(images, norm);
    const Tensor<float> logits = model.forward(batch, /*training=*/true);
    Tensor<float> dlogits;
    const double loss = cross_entropy(logits, labels, &dlogits);
    if (!std::isfinite(loss)) throw NumericsError("non-finite loss at iteration " + std::to_string(t));
    model.zero_grads();
    model.backward(dlogits);
    sgd_step(model.params(), lr, config.train.momentum, config.train.weight_decay, state);

    const bool last = t + 1 == total;
    const bool scheduled = config.train.eval_every > 0 && (t + 1) % config.train.eval_every == 0;
    if (last || scheduled) {
      TrainLogRecord record{t + 1, lr, loss, std::nullopt};
      if (eval_data && !eval_data->empty()) {
        const EvalOutcome eo = evaluate_dataset(model, *eval_data, config.eval.batch_size);
        record.macro_f1 = eo.f1.macro;
        if (eo.f1.macro > best_f1) {
          best_f1 = eo.f1.macro;
          out.best_checkpoint = out_dir / "best.ckpt";
          save_checkpoint(out.best_checkpoint,
                          make_checkpoint(model, config, static_cast<std::uint64_t>(t + 1), "",
                                          weights_origin));
        }
      }
      log << log_record_json(record) << "\n";
      out.records.push_back(std::move(record));
    }
  }
  log.close();

  out.final_checkpoint = out_dir / "final.ckpt";
  save_checkpoint(out.final_checkpoint,
                  make_checkpoint(model, config, static_cast<std::uint64_t>(total), "",
                                  weights_origin));
  out.final_loss = out.records.empty() ? 0.0 : out.records.back().loss;
  return out;
}

} // namespace exprkit
