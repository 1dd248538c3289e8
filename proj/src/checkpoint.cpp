#include "swad/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "swad/error.hpp"
#include "swad/hash.hpp"

namespace swad {
namespace {

constexpr const char* kFormat = "swad-checkpoint/1";

nlohmann::json layer_json(const std::string& name, const nn::DenseLayer& l) {
  return {{"name", name},
          {"in", l.in_dim()},
          {"out", l.out_dim()},
          {"activation", nn::to_string(l.activation)},
          {"leaky_slope", l.leaky_slope}};
}

void append(std::vector<double>& blob, const nn::LayerStack& stack) {
  for (const auto& l : stack) {
    blob.insert(blob.end(), l.weights.data().begin(), l.weights.data().end());
    blob.insert(blob.end(), l.bias.data().begin(), l.bias.data().end());
  }
}

class BlobReader {
 public:
  explicit BlobReader(std::vector<double> values) : values_(std::move(values)) {}

  Matrix take(std::size_t rows, std::size_t cols) {
    if (pos_ + rows * cols > values_.size()) throw DataError("checkpoint blob too short");
    std::vector<double> data(values_.begin() + static_cast<std::ptrdiff_t>(pos_),
                             values_.begin() + static_cast<std::ptrdiff_t>(pos_ + rows * cols));
    pos_ += rows * cols;
    return Matrix(rows, cols, std::move(data));
  }

  nn::LayerStack take_stack(const nlohmann::json& layers, const std::string& prefix) {
    nn::LayerStack stack;
    for (const auto& l : layers) {
      if (l.at("name").get<std::string>().rfind(prefix, 0) != 0) continue;
      const std::size_t in = l.at("in"), out = l.at("out");
      Matrix w = take(in, out);
      Matrix b = take(1, out);
      stack.push_back(nn::DenseLayer{std::move(w), std::move(b),
                                     nn::activation_from_string(l.at("activation")),
                                     l.at("leaky_slope").get<double>()});
    }
    return stack;
  }

  bool done() const { return pos_ == values_.size(); }

 private:
  std::vector<double> values_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const std::filesystem::path& dir, const Checkpoint& ckpt) {
  std::filesystem::create_directories(dir);
  const auto& m = ckpt.model;

  nlohmann::json layers = nlohmann::json::array();
  std::vector<double> blob;
  for (std::size_t i = 0; i < m.encoder.size(); ++i)
    layers.push_back(layer_json("encoder/" + std::to_string(i), m.encoder[i]));
  for (std::size_t i = 0; i < m.decoder.size(); ++i)
    layers.push_back(layer_json("decoder/" + std::to_string(i), m.decoder[i]));
  append(blob, m.encoder);
  append(blob, m.decoder);
  if (ckpt.stage2) {
    const auto& s2 = *ckpt.stage2;
    for (std::size_t i = 0; i < s2.fm.mask_net.size(); ++i)
      layers.push_back(layer_json("fm/" + std::to_string(i), s2.fm.mask_net[i]));
    for (std::size_t i = 0; i < s2.learn_net.size(); ++i)
      layers.push_back(layer_json("learn/" + std::to_string(i), s2.learn_net[i]));
    append(blob, s2.fm.mask_net);
    append(blob, s2.learn_net);
    blob.insert(blob.end(), s2.mask.values().begin(), s2.mask.values().end());
  }
  const auto bytes = to_le_bytes(blob);

  nlohmann::json manifest{
      {"format", kFormat},
      {"stage", ckpt.stage()},
      {"seed", ckpt.seed},
      {"config_hash", ckpt.config_hash},
      {"architecture",
       {{"input_dim", m.spec.input_dim},
        {"latent_dim", m.spec.latent_dim},
        {"hidden", m.spec.hidden},
        {"output_activation", nn::to_string(m.spec.output_activation)},
        {"leaky_slope", m.spec.leaky_slope}}},
      {"layers", layers},
      {"mask_values", ckpt.stage2 ? ckpt.stage2->mask.size() : 0},
      {"value_count", blob.size()},
      {"blob_sha256", sha256_hex(bytes)},
      {"info", ckpt.info},
  };
  std::ofstream bin(dir / "checkpoint.bin", std::ios::binary);
  bin.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  std::ofstream js(dir / "checkpoint.json", std::ios::binary);
  js << manifest.dump(2) << '\n';
  if (!bin || !js) throw DataError("failed writing checkpoint to " + dir.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& dir) {
  std::ifstream js(dir / "checkpoint.json");
  if (!js) throw DataError("no checkpoint manifest in " + dir.string());
  nlohmann::json manifest;
  try {
    js >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed checkpoint manifest in " + dir.string() + ": " + e.what());
  }

  std::ifstream bin(dir / "checkpoint.bin", std::ios::binary);
  if (!bin) throw DataError("no checkpoint blob in " + dir.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());

  try {
    if (manifest.at("format") != kFormat) throw DataError("unsupported checkpoint format");
    const std::size_t count = manifest.at("value_count");
    if (raw.size() != count * 8) {
      throw DataError("checkpoint blob has " + std::to_string(raw.size()) + " bytes, manifest says " +
                      std::to_string(count * 8));
    }
    const auto bytes = std::as_bytes(std::span(raw.data(), raw.size()));
    if (sha256_hex(bytes) != manifest.at("blob_sha256").get<std::string>()) {
      throw DataError("checkpoint blob hash does not match manifest in " + dir.string());
    }
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t bits;
      std::memcpy(&bits, raw.data() + i * 8, 8);
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
      values[i] = std::bit_cast<double>(bits);
    }

    Checkpoint ckpt;
    const auto& arch = manifest.at("architecture");
    ckpt.model.spec = AutoencoderSpec{arch.at("input_dim"), arch.at("latent_dim"), arch.at("hidden"),
                                      nn::activation_from_string(arch.at("output_activation")),
                                      arch.at("leaky_slope")};
    ckpt.seed = manifest.at("seed");
    ckpt.config_hash = manifest.at("config_hash");
    ckpt.info = manifest.value("info", nlohmann::json::object());

    BlobReader reader(std::move(values));
    const auto& layers = manifest.at("layers");
    ckpt.model.encoder = reader.take_stack(layers, "encoder/");
    ckpt.model.decoder = reader.take_stack(layers, "decoder/");
    if (manifest.at("stage") == 2) {
      Stage2State s2;
      s2.fm.mask_net = reader.take_stack(layers, "fm/");
      s2.learn_net = reader.take_stack(layers, "learn/");
      const std::size_t l = manifest.at("mask_values");
      const Matrix mask_row = reader.take(1, l);
      s2.mask = FeatureMask(std::vector<double>(mask_row.data().begin(), mask_row.data().end()));
      ckpt.stage2 = std::move(s2);
    }
    if (!reader.done()) throw DataError("checkpoint blob has trailing values");
    return ckpt;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("incomplete checkpoint manifest in " + dir.string() + ": " + e.what());
  } catch (const ValueError& e) {
    throw DataError(std::string("invalid checkpoint contents: ") + e.what());
  }
}

}  // namespace swad
