// SPDX-License-Identifier: Apache-2.0
#include "exprkit/pretrain/contrastive.hpp"

#include <algorithm>
#include <fstream>

#include "exprkit/dataset/augment.hpp"
#include "exprkit/error.hpp"
#include "exprkit/pretrain/warp.hpp"
#include "exprkit/train/schedule.hpp"
#include "exprkit/train/sgd.hpp"

namespace exprkit {

WarpPolarity parse_polarity(const std::string& s) {
  if (s == "negative") return WarpPolarity::negative;
  if (s == "positive") return WarpPolarity::positive;
  throw ConfigError("warp_polarity must be 'negative' or 'positive', got '" + s + "'");
}

namespace {

// brightness/contrast jitter for the global positive view
ImageF photometric_jitter(ImageF img, RngStream& rng) {
  const float scale = static_cast<float>(rng.uniform_range(0.8, 1.2));
  const float shift = static_cast<float>(rng.uniform_range(-0.1, 0.1));
  for (float& v : img.data) v = std::clamp(v * scale + shift, 0.f, 1.f);
  return img;
}

} // namespace

PretrainOutput pretrain_run(const FrameDataset& data, const RunConfig& config,
                            const std::filesystem::path& out_dir) {
  config.validate();
  if (data.empty()) throw DataError("pretraining split has no valid frames");

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IOError("cannot create " + out_dir.string());

  BackboneSpec spec = backbone_by_name(config.model.backbone);
  spec.input_resolution = config.pretrain.view_size;
  ContrastiveEncoder<float> encoder(spec, /*proj_dim=*/128, config.train.seed);

  const WarpPolarity polarity = parse_polarity(config.pretrain.warp_polarity);
  const AugmentConfig view_aug{config.pretrain.view_size, 4, 0.5};
  const Normalization norm = config.normalization();
  const RngStream root(config.train.seed);
  const int batch = config.pretrain.batch_size;
  const int steps = config.pretrain.steps;

  PretrainOutput out;
  out.log_path = out_dir / "pretrain_log.jsonl";
  std::ofstream log(out.log_path, std::ios::binary);
  if (!log) throw IOError("cannot write " + out.log_path.string());

  SgdState<float> state;
  std::vector<ImageF> views(static_cast<std::size_t>(3 * batch));
  for (int step = 0; step < steps; ++step) {
    RngStream pick = root.derive("pretrain-pick", static_cast<std::uint64_t>(step));
    for (int b = 0; b < batch; ++b) {
      const FrameSample& sample =
          data.samples()[pick.uniform_u64(static_cast<std::uint64_t>(data.size()))];
      const ImageU8& src = data.image(sample);
      RngStream rng_a = root.derive("view-anchor", static_cast<std::uint64_t>(step),
                                    static_cast<std::uint64_t>(b));
      RngStream rng_p = root.derive("view-positive", static_cast<std::uint64_t>(step),
                                    static_cast<std::uint64_t>(b));
      RngStream rng_w = root.derive("view-warp", static_cast<std::uint64_t>(step),
                                    static_cast<std::uint64_t>(b));
      const ImageF anchor = to_float01(augment(src, view_aug, rng_a));
      views[static_cast<std::size_t>(b)] = anchor;
      views[static_cast<std::size_t>(batch + b)] =
          photometric_jitter(to_float01(augment(src, view_aug, rng_p)), rng_p);
      views[static_cast<std::size_t>(2 * batch + b)] =
          random_warp(anchor, config.pretrain.warp_magnitude, config.pretrain.warp_grid, rng_w);
    }

    const Tensor<float> images = to_batch<float>(views, norm);
    const Tensor<float> embed = encoder.embed(images, /*training=*/true);
    const InfoNceResult<float> res =
        infonce_with_grad(embed, config.pretrain.temperature, polarity);
    if (!std::isfinite(res.loss))
      throw NumericsError("non-finite contrastive loss at step " + std::to_string(step));
    encoder.zero_grads();
    encoder.backward(res.dembed);
    const double lr = cosine_lr(step, steps, config.pretrain.base_lr);
    sgd_step(encoder.params(), lr, config.pretrain.momentum, config.pretrain.weight_decay, state);

    if (step + 1 == steps || (step + 1) % 50 == 0) {
      TrainLogRecord record{step + 1, lr, res.loss, std::nullopt};
      log << log_record_json(record) << "\n";
      out.records.push_back(std::move(record));
    }
  }
  log.close();

  Checkpoint ckpt;
  ckpt.config_hash = config_hash(config);
  ckpt.config_text = canonical_config_text(config);
  ckpt.iteration = static_cast<std::uint64_t>(steps);
  ckpt.pretext = "contrastive-warp";
  ckpt.weights_origin = "contrastive-warp";
  ckpt.backbone_name = config.model.backbone;
  ckpt.input_resolution = config.model.input_resolution;
  ckpt.head = config.model.head;
  ckpt.norm_mean = norm.mean;
  ckpt.norm_std = norm.std;
  ckpt.arrays = encoder.export_backbone();
  out.checkpoint = out_dir / "pretrain.ckpt";
  save_checkpoint(out.checkpoint, ckpt);
  out.final_loss = out.records.empty() ? 0.0 : out.records.back().loss;
  return out;
}

} // namespace exprkit
