// SPDX-License-Identifier: Apache-2.0
#include "exprkit/model/backbone.hpp"

#include "exprkit/error.hpp"

namespace exprkit {

int BackboneSpec::cumulative_stride() const {
  int s = stem_stride * (stem_pool ? 2 : 1);
  for (const auto& st : stages) s *= st.stride;
  return s;
}

int BackboneSpec::feature_dim() const {
  int d = Conv2d<float>::out_dim(input_resolution, stem_kernel, stem_stride, stem_pad);
  if (stem_pool) d = Conv2d<float>::out_dim(d, 3, 2, 1);
  for (const auto& st : stages) {
    // stage downsampling happens in a 3x3/s or 1x1/s conv with matching pad
    if (st.stride > 1) d = (d - 1) / st.stride + 1;
  }
  return d;
}

void BackboneSpec::validate() const {
  if (input_resolution <= 0) throw ConfigError("backbone input_resolution must be > 0");
  if (stem_channels <= 0) throw ConfigError("backbone stem_channels must be > 0");
  for (const auto& st : stages) {
    if (st.blocks < 1) throw ConfigError("backbone stage needs >= 1 block");
    if (st.out_channels < 1) throw ConfigError("backbone stage channels must be >= 1");
    if (kind == BlockKind::bottleneck && st.out_channels % 4 != 0)
      throw ConfigError("bottleneck stage channels must be divisible by 4");
  }
  if (feature_dim() < 1) throw ConfigError("input_resolution too small for this backbone");
}

BackboneSpec resnet18_spec() {
  BackboneSpec spec;
  spec.name = "res18";
  spec.kind = BlockKind::basic;
  spec.stages = {StageSpec{2, 64, 1}, StageSpec{2, 128, 2}, StageSpec{2, 256, 2},
                 StageSpec{2, 512, 2}};
  return spec;
}

BackboneSpec resnet50_spec() {
  BackboneSpec spec;
  spec.name = "res50";
  spec.kind = BlockKind::bottleneck;
  spec.stages = {StageSpec{3, 256, 1}, StageSpec{4, 512, 2}, StageSpec{6, 1024, 2},
                 StageSpec{3, 2048, 2}};
  return spec;
}

const std::map<std::string, BackboneSpec>& backbone_registry() {
  static const std::map<std::string, BackboneSpec> registry = {
      {"res18", resnet18_spec()},
      {"res50", resnet50_spec()},
  };
  return registry;
}

BackboneSpec backbone_by_name(const std::string& name) {
  const auto& reg = backbone_registry();
  const auto it = reg.find(name);
  if (it == reg.end()) throw ConfigError("unknown backbone: '" + name + "'");
  return it->second;
}

} // namespace exprkit
