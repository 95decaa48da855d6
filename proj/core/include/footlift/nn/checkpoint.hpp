#pragma once

#include <optional>
#include <string>
#include <vector>

#include "footlift/nn/adamw.hpp"
#include "footlift/nn/graph.hpp"

namespace footlift::nn {

// Optimizer state captured next to the parameters so training can resume.
struct OptimizerState {
  std::vector<Tensor> m, v;
  long t = 0;
};

struct Checkpoint {
  ParamStore params;
  std::string metadata_json;  // caller-defined (model config, epoch, ...)
  std::optional<OptimizerState> optimizer;
};

// Versioned binary container: magic, little-endian JSON directory, raw
// float64 blobs. save(load(f)) reproduces f byte for byte.
void save_checkpoint(const std::string& path, const ParamStore& params,
                     const std::string& metadata_json,
                     const AdamW* optimizer = nullptr);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace footlift::nn
