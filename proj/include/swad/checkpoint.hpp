#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "swad/autoencoder.hpp"
#include "swad/feature_mask.hpp"

namespace swad {

struct Stage2State {
  FmModule fm;
  nn::LayerStack learn_net;
  FeatureMask mask;
};

// A trained model on disk: `checkpoint.json` (manifest) next to
// `checkpoint.bin` (parameters as little-endian doubles). Blob order is
// encoder layers, decoder layers, then, after stage 2, the mask net, the
// learning net and the L mask values; every layer stores weights before bias.
struct Checkpoint {
  AutoencoderModel model;
  std::optional<Stage2State> stage2;
  std::uint64_t seed = 0;
  std::string config_hash;
  nlohmann::json info = nlohmann::json::object();  // reports, split manifest

  int stage() const noexcept { return stage2 ? 2 : 1; }
};

void save_checkpoint(const std::filesystem::path& dir, const Checkpoint& ckpt);

// Verifies blob length and SHA-256 against the manifest; throws DataError on
// any mismatch.
Checkpoint load_checkpoint(const std::filesystem::path& dir);

}  // namespace swad
