#include "swad/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "swad/error.hpp"
#include "swad/hash.hpp"

namespace swad {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  T v{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError("invalid value '" + text + "' for " + key);
  }
  return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(parse_value<T>(key, item));
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::ostringstream s;
  s.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
  return s.str();
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream s;
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
  return s.str();
}

std::string join_paths(const std::vector<std::filesystem::path>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].generic_string();
  return s;
}

std::string fmt_double(double d) {
  std::ostringstream s;
  s.precision(17);
  s << d;
  return s.str();
}

}  // namespace

std::vector<std::size_t> RunConfig::effective_k_grid() const {
  if (!k_grid.empty()) return k_grid;
  const std::size_t l = model.latent_dim;
  std::vector<std::size_t> grid;
  for (std::size_t k : {l / 16, l / 8, l / 4, l / 2, 3 * l / 4, l})
    if (k >= 1 && (grid.empty() || grid.back() != k)) grid.push_back(k);
  return grid;
}

void RunConfig::validate() const {
  static const std::set<std::string> kinds{"mnist", "cifar10", "csv", "synthetic"};
  if (!kinds.count(dataset.kind)) throw ConfigError("dataset.kind '" + dataset.kind + "' unknown");
  if (!(dataset.val_fraction > 0.0 && dataset.val_fraction <= 0.5))
    throw ConfigError("dataset.val_fraction must lie in (0, 0.5]");
  if (!(dataset.test_fraction > 0.0 && dataset.test_fraction <= 0.5))
    throw ConfigError("dataset.test_fraction must lie in (0, 0.5]");
  if (dataset.kind == "mnist" && (dataset.train_images.empty() || dataset.train_labels.empty() ||
                                  dataset.test_images.empty() || dataset.test_labels.empty()))
    throw ConfigError("mnist datasets need train_images, train_labels, test_images, test_labels");
  if (dataset.kind == "cifar10" && (dataset.cifar_train.empty() || dataset.cifar_test.empty()))
    throw ConfigError("cifar10 datasets need cifar_train and cifar_test");
  if (dataset.kind == "csv" && dataset.csv.empty()) throw ConfigError("csv datasets need csv");
  if (dataset.kind == "synthetic" &&
      (dataset.synthetic_dim == 0 || dataset.synthetic_classes < 2 ||
       dataset.synthetic_train == 0 || dataset.synthetic_test == 0))
    throw ConfigError("synthetic dataset needs dim >= 1, classes >= 2, train/test > 0");
  if (model.latent_dim == 0 || model.hidden == 0)
    throw ConfigError("model.latent_dim and model.hidden must be >= 1");
  if (!(model.leaky_slope > 0.0 && model.leaky_slope < 1.0))
    throw ConfigError("model.leaky_slope must lie in (0, 1)");
  if (!(stage1.adam.learning_rate > 0.0)) throw ConfigError("training.learning_rate must be > 0");
  if (stage1.batch_size == 0 || stage2.batch_size == 0)
    throw ConfigError("batch sizes must be >= 1");
  if (seeds.empty()) throw ConfigError("training.seeds must not be empty");
  if (swad_k.has_value() != swad_tau.has_value())
    throw ConfigError("swad.k and swad.tau must be given together");
  if (swad_k && (*swad_k < 1 || *swad_k > model.latent_dim))
    throw ConfigError("swad.k must lie in [1, latent_dim]");
  if (swad_tau && !(*swad_tau > 0.0 && *swad_tau <= 1.0))
    throw ConfigError("swad.tau must lie in (0, 1]");
  const auto kg = effective_k_grid();
  if (kg.empty() || tau_grid.empty()) throw ConfigError("sweep grids must not be empty");
  for (std::size_t k : kg)
    if (k < 1 || k > model.latent_dim) throw ConfigError("sweep.k_grid entry outside [1, L]");
  for (double t : tau_grid)
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError("sweep.tau_grid entry outside (0, 1]");
  for (std::size_t h : fm_hidden)
    if (h == 0) throw ConfigError("model.fm_hidden entries must be >= 1");
  if (latent_grid.empty()) throw ConfigError("latdim.latent_grid must not be empty");
  for (std::size_t l : latent_grid)
    if (l == 0) throw ConfigError("latdim.latent_grid entries must be >= 1");
}

std::string RunConfig::canonical_text() const {
  std::ostringstream s;
  s << "dataset.kind = " << dataset.kind << '\n'
    << "dataset.train_images = " << dataset.train_images.generic_string() << '\n'
    << "dataset.train_labels = " << dataset.train_labels.generic_string() << '\n'
    << "dataset.test_images = " << dataset.test_images.generic_string() << '\n'
    << "dataset.test_labels = " << dataset.test_labels.generic_string() << '\n'
    << "dataset.cifar_train = " << join_paths(dataset.cifar_train) << '\n'
    << "dataset.cifar_test = " << join_paths(dataset.cifar_test) << '\n'
    << "dataset.csv = " << dataset.csv.generic_string() << '\n'
    << "dataset.label_column = " << dataset.label_column << '\n'
    << "dataset.test_fraction = " << fmt_double(dataset.test_fraction) << '\n'
    << "dataset.normal_class = " << dataset.normal_class << '\n'
    << "dataset.val_fraction = " << fmt_double(dataset.val_fraction) << '\n'
    << "dataset.synthetic = " << dataset.synthetic_train << '/' << dataset.synthetic_test << '/'
    << dataset.synthetic_dim << '/' << dataset.synthetic_classes << '/'
    << dataset.synthetic_seed << '\n'
    << "model.latent_dim = " << model.latent_dim << '\n'
    << "model.hidden = " << model.hidden << '\n'
    << "model.output_activation = " << nn::to_string(model.output_activation) << '\n'
    << "model.leaky_slope = " << fmt_double(model.leaky_slope) << '\n'
    << "model.fm_hidden = " << join(fm_hidden) << '\n'
    << "training.learning_rate = " << fmt_double(stage1.adam.learning_rate) << '\n'
    << "training.batch_size = " << stage1.batch_size << '\n'
    << "training.max_epochs = " << stage1.max_epochs << '\n'
    << "training.patience = " << stage1.patience << '\n'
    << "training.stage2_batch_size = " << stage2.batch_size << '\n'
    << "training.stage2_epochs = " << stage2.max_epochs << '\n'
    << "training.stage2_patience = " << stage2.patience << '\n'
    << "training.seeds = " << join(seeds) << '\n'
    << "swad.k = " << (swad_k ? std::to_string(*swad_k) : "") << '\n'
    << "swad.tau = " << (swad_tau ? fmt_double(*swad_tau) : "") << '\n'
    << "sweep.k_grid = " << join(effective_k_grid()) << '\n'
    << "sweep.tau_grid = " << join_doubles(tau_grid) << '\n'
    << "latdim.latent_grid = " << join(latent_grid) << '\n'
    << "latdim.classes = " << join(latdim_classes) << '\n';
  return s.str();
}

std::string RunConfig::hash() const {
  const std::string text = canonical_text();
  return sha256_hex(std::as_bytes(std::span(text.data(), text.size())));
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  bool stage2_batch_set = false;
  auto path = [&](const std::string& v) -> std::filesystem::path {
    std::filesystem::path p(v);
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };
  auto paths = [&](const std::string& v) {
    std::vector<std::filesystem::path> out;
    for (const auto& item : split_list(v)) out.push_back(path(item));
    return out;
  };

  using Setter = std::function<void(const std::string& key, const std::string& value)>;
  const std::map<std::string, Setter> setters{
      {"dataset.kind", [&](auto&, auto& v) { cfg.dataset.kind = v; }},
      {"dataset.train_images", [&](auto&, auto& v) { cfg.dataset.train_images = path(v); }},
      {"dataset.train_labels", [&](auto&, auto& v) { cfg.dataset.train_labels = path(v); }},
      {"dataset.test_images", [&](auto&, auto& v) { cfg.dataset.test_images = path(v); }},
      {"dataset.test_labels", [&](auto&, auto& v) { cfg.dataset.test_labels = path(v); }},
      {"dataset.cifar_train", [&](auto&, auto& v) { cfg.dataset.cifar_train = paths(v); }},
      {"dataset.cifar_test", [&](auto&, auto& v) { cfg.dataset.cifar_test = paths(v); }},
      {"dataset.csv", [&](auto&, auto& v) { cfg.dataset.csv = path(v); }},
      {"dataset.label_column", [&](auto&, auto& v) { cfg.dataset.label_column = v; }},
      {"dataset.test_fraction",
       [&](auto& k, auto& v) { cfg.dataset.test_fraction = parse_value<double>(k, v); }},
      {"dataset.normal_class",
       [&](auto& k, auto& v) { cfg.dataset.normal_class = parse_value<int>(k, v); }},
      {"dataset.val_fraction",
       [&](auto& k, auto& v) { cfg.dataset.val_fraction = parse_value<double>(k, v); }},
      {"dataset.synthetic_train",
       [&](auto& k, auto& v) { cfg.dataset.synthetic_train = parse_value<std::size_t>(k, v); }},
      {"dataset.synthetic_test",
       [&](auto& k, auto& v) { cfg.dataset.synthetic_test = parse_value<std::size_t>(k, v); }},
      {"dataset.synthetic_dim",
       [&](auto& k, auto& v) { cfg.dataset.synthetic_dim = parse_value<std::size_t>(k, v); }},
      {"dataset.synthetic_classes",
       [&](auto& k, auto& v) { cfg.dataset.synthetic_classes = parse_value<std::size_t>(k, v); }},
      {"dataset.synthetic_seed",
       [&](auto& k, auto& v) { cfg.dataset.synthetic_seed = parse_value<std::uint64_t>(k, v); }},
      {"model.latent_dim",
       [&](auto& k, auto& v) { cfg.model.latent_dim = parse_value<std::size_t>(k, v); }},
      {"model.hidden", [&](auto& k, auto& v) { cfg.model.hidden = parse_value<std::size_t>(k, v); }},
      {"model.output_activation",
       [&](auto& k, auto& v) {
         try {
           cfg.model.output_activation = nn::activation_from_string(v);
         } catch (const Error& e) {
           throw ConfigError(k + ": " + e.what());
         }
       }},
      {"model.leaky_slope",
       [&](auto& k, auto& v) { cfg.model.leaky_slope = parse_value<double>(k, v); }},
      {"training.learning_rate",
       [&](auto& k, auto& v) {
         cfg.stage1.adam.learning_rate = cfg.stage2.adam.learning_rate = parse_value<double>(k, v);
       }},
      {"training.batch_size",
       [&](auto& k, auto& v) { cfg.stage1.batch_size = parse_value<std::size_t>(k, v); }},
      {"training.max_epochs",
       [&](auto& k, auto& v) { cfg.stage1.max_epochs = parse_value<std::size_t>(k, v); }},
      {"training.patience",
       [&](auto& k, auto& v) { cfg.stage1.patience = parse_value<std::size_t>(k, v); }},
      {"training.stage2_batch_size",
       [&](auto& k, auto& v) {
         cfg.stage2.batch_size = parse_value<std::size_t>(k, v);
         stage2_batch_set = true;
       }},
      {"training.stage2_epochs",
       [&](auto& k, auto& v) { cfg.stage2.max_epochs = parse_value<std::size_t>(k, v); }},
      {"training.stage2_patience",
       [&](auto& k, auto& v) { cfg.stage2.patience = parse_value<std::size_t>(k, v); }},
      {"training.seeds", [&](auto& k, auto& v) { cfg.seeds = parse_list<std::uint64_t>(k, v); }},
      {"swad.k", [&](auto& k, auto& v) { cfg.swad_k = parse_value<std::size_t>(k, v); }},
      {"swad.tau", [&](auto& k, auto& v) { cfg.swad_tau = parse_value<double>(k, v); }},
      {"sweep.k_grid", [&](auto& k, auto& v) { cfg.k_grid = parse_list<std::size_t>(k, v); }},
      {"sweep.tau_grid", [&](auto& k, auto& v) { cfg.tau_grid = parse_list<double>(k, v); }},
      {"model.fm_hidden",
       [&](auto& k, auto& v) { cfg.fm_hidden = parse_list<std::size_t>(k, v); }},
      {"latdim.latent_grid",
       [&](auto& k, auto& v) { cfg.latent_grid = parse_list<std::size_t>(k, v); }},
      {"latdim.classes",
       [&](auto& k, auto& v) { cfg.latdim_classes = parse_list<int>(k, v); }},
      {"output.dir", [&](auto&, auto& v) { cfg.output_dir = path(v); }},
  };

  std::string section;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": bad section");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = section + "." + trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    it->second(key, value);
  }
  if (!stage2_batch_set) cfg.stage2.batch_size = cfg.stage1.batch_size;
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

}  // namespace swad
