#include "swad/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>

#include "swad/error.hpp"

namespace swad {

Datasets load_datasets(const DatasetSpec& spec) {
  if (spec.kind == "mnist") {
    return {load_idx(spec.train_images, spec.train_labels),
            load_idx(spec.test_images, spec.test_labels)};
  }
  if (spec.kind == "cifar10") {
    return {load_cifar10(spec.cifar_train), load_cifar10(spec.cifar_test)};
  }
  if (spec.kind == "csv") return {load_csv(spec.csv, spec.label_column), std::nullopt};
  if (spec.kind == "synthetic") {
    const Rng root(spec.synthetic_seed);
    const Rng classes = root.split("classes");
    Rng train_rng = root.split("train");
    Rng test_rng = root.split("test");
    return {make_synthetic(spec.synthetic_train, spec.synthetic_dim, spec.synthetic_classes,
                           classes, train_rng),
            make_synthetic(spec.synthetic_test, spec.synthetic_dim, spec.synthetic_classes,
                           classes, test_rng)};
  }
  throw ConfigError("unknown dataset kind '" + spec.kind + "'");
}

OneClassSplit build_split(const RunConfig& cfg, const Datasets& data, std::uint64_t seed) {
  const Rng rng = Rng(seed).split("data");
  if (data.test) {
    return make_one_class_split(data.train, *data.test, cfg.dataset.normal_class,
                                cfg.dataset.val_fraction, rng, NormalizationKind::kIdentity);
  }
  return make_one_class_split(data.train, cfg.dataset.normal_class, cfg.dataset.val_fraction,
                              cfg.dataset.test_fraction, rng, NormalizationKind::kMinMax);
}

namespace {

nlohmann::json report_json(const TrainReport& r) {
  nlohmann::json j{{"epochs_run", r.epochs_run},
                   {"best_epoch", r.best_epoch},
                   {"train_loss", r.train_loss},
                   {"validation_auc", r.validation_auc}};
  return j;
}

}  // namespace

SeedRun train_seed(const RunConfig& cfg, const Datasets& data, std::uint64_t seed) {
  SeedRun run;
  run.split = build_split(cfg, data, seed);
  const Rng root(seed);

  AutoencoderSpec spec = cfg.model;
  spec.input_dim = run.split.train_x.cols();
  AutoencoderModel model = build_autoencoder(spec, root.split("stage1/init"));
  run.stage1 = train_stage1(model, run.split.train_x, &run.split.validation, cfg.stage1,
                            root.split("stage1/train"));

  const Matrix z_train = encode(model, run.split.train_x);
  FmModule fm = build_fm_module(spec.latent_dim, root.split("stage2/fm"), cfg.fm_hidden,
                               spec.leaky_slope);
  nn::LayerStack learn_net = build_decoder_stack(spec, root.split("stage2/learn"));

  MaskMonitor monitor;
  const Matrix z_val = encode(model, run.split.validation.x);
  if (cfg.swad_k) {
    monitor = [&, k = *cfg.swad_k, tau = *cfg.swad_tau](const FeatureMask& mask) {
      const auto w = WeightingConfig::from_mask(mask, k, tau);
      return auc(score_latent(model, w, z_val, run.split.validation.x, run.split.validation.y));
    };
  }
  auto stage2 = train_stage2(fm, learn_net, z_train, run.split.train_x, cfg.stage2,
                             root.split("stage2/train"), monitor);
  run.stage2 = stage2.report;

  run.checkpoint.model = std::move(model);
  run.checkpoint.stage2 = Stage2State{std::move(fm), std::move(learn_net), std::move(stage2.mask)};
  run.checkpoint.seed = seed;
  run.checkpoint.config_hash = cfg.hash();
  run.checkpoint.info = {{"split", split_manifest(run.split)},
                         {"stage1", report_json(run.stage1)},
                         {"stage2", report_json(run.stage2)}};
  return run;
}

nlohmann::json EvalResult::to_json() const {
  return {{"k", k},
          {"tau", tau},
          {"val_auc", val_auc},
          {"test_auc", test_auc},
          {"vanilla_val_auc", vanilla_val_auc},
          {"vanilla_test_auc", vanilla_test_auc},
          {"epsilon_0", threshold.epsilon_0},
          {"test_confusion",
           {{"tp", test_confusion.true_positive},
            {"fp", test_confusion.false_positive},
            {"tn", test_confusion.true_negative},
            {"fn", test_confusion.false_negative},
            {"balanced_accuracy", test_confusion.balanced_accuracy()}}}};
}

EvalResult evaluate(const Checkpoint& ckpt, const OneClassSplit& split, std::size_t k, double tau) {
  const std::size_t l = ckpt.model.latent_dim();
  if (k < l && !ckpt.stage2) {
    throw ValueError("checkpoint has no stage-2 mask; only k = L = " + std::to_string(l) +
                     " can be evaluated");
  }
  const auto cfg = ckpt.stage2 ? WeightingConfig::from_mask(ckpt.stage2->mask, k, tau)
                               : [&] {
                                   auto c = WeightingConfig::all_features(l);
                                   c.tau = tau;
                                   c.validate(l);
                                   return c;
                                 }();
  const auto vanilla = WeightingConfig::all_features(l);
  const Matrix z_val = encode(ckpt.model, split.validation.x);
  const Matrix z_test = encode(ckpt.model, split.test.x);

  EvalResult r;
  r.k = k;
  r.tau = tau;
  r.val_scores = score_latent(ckpt.model, cfg, z_val, split.validation.x, split.validation.y);
  r.test_scores = score_latent(ckpt.model, cfg, z_test, split.test.x, split.test.y);
  r.val_auc = auc(r.val_scores);
  r.test_auc = auc(r.test_scores);
  r.vanilla_val_auc =
      auc(score_latent(ckpt.model, vanilla, z_val, split.validation.x, split.validation.y));
  r.vanilla_test_auc = auc(score_latent(ckpt.model, vanilla, z_test, split.test.x, split.test.y));
  r.threshold = fit_threshold(r.val_scores);
  r.test_confusion = confusion(r.test_scores.labels, detect(r.test_scores, r.threshold));
  return r;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

double SweepReport::vanilla_mean() const { return mean(vanilla_test_auc); }
double SweepReport::vanilla_std() const { return stddev(vanilla_test_auc); }

nlohmann::json SweepReport::to_json() const {
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& s : summary) {
    grid.push_back({{"k", s.k},
                    {"tau", s.tau},
                    {"mean_val_auc", s.mean_val_auc},
                    {"mean_test_auc", s.mean_test_auc},
                    {"std_test_auc", s.std_test_auc}});
  }
  const auto& b = summary.at(best);
  std::vector<double> best_per_seed;
  for (const auto& c : cells)
    if (c.k == b.k && c.tau == b.tau) best_per_seed.push_back(c.test_auc);
  const double ae = vanilla_mean();
  return {{"best",
           {{"k", b.k},
            {"tau", b.tau},
            {"mean_val_auc", b.mean_val_auc},
            {"mean_test_auc", b.mean_test_auc},
            {"std_test_auc", b.std_test_auc},
            {"per_seed_test_auc", best_per_seed}}},
          {"vanilla",
           {{"mean_test_auc", ae},
            {"std_test_auc", vanilla_std()},
            {"per_seed_test_auc", vanilla_test_auc},
            {"per_seed_val_auc", vanilla_val_auc}}},
          {"gain", ae > 0 ? (b.mean_test_auc - ae) / ae : 0.0},
          {"grid", grid}};
}

std::size_t threads_from_env() {
  const char* env = std::getenv("SWAD_THREADS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  return (end != env && *end == '\0' && n >= 1) ? static_cast<std::size_t>(n) : 1;
}

SweepReport sweep(const std::vector<SweepInput>& runs, const std::vector<std::size_t>& k_grid,
                  const std::vector<double>& tau_grid, std::size_t threads) {
  if (runs.empty()) throw ValueError("sweep: no checkpoints");
  if (k_grid.empty() || tau_grid.empty()) throw ValueError("sweep: empty k or tau grid");

  struct Encoded {
    Matrix z_val, z_test;
  };
  std::vector<Encoded> encoded;
  SweepReport report;
  for (const auto& run : runs) {
    const auto& model = run.checkpoint->model;
    const std::size_t l = model.latent_dim();
    for (std::size_t k : k_grid) {
      if (k < l && !run.checkpoint->stage2) {
        throw ValueError("sweep: checkpoint for seed " + std::to_string(run.checkpoint->seed) +
                         " has no stage-2 mask");
      }
    }
    Encoded e{encode(model, run.split->validation.x), encode(model, run.split->test.x)};
    const auto vanilla = WeightingConfig::all_features(l);
    report.vanilla_val_auc.push_back(auc(score_latent(
        model, vanilla, e.z_val, run.split->validation.x, run.split->validation.y)));
    report.vanilla_test_auc.push_back(
        auc(score_latent(model, vanilla, e.z_test, run.split->test.x, run.split->test.y)));
    encoded.push_back(std::move(e));
  }

  for (std::size_t k : k_grid)
    for (double tau : tau_grid)
      for (const auto& run : runs) report.cells.push_back({k, tau, run.checkpoint->seed, 0.0, 0.0});

  auto evaluate_cell = [&](std::size_t idx) {
    SweepCell& cell = report.cells[idx];
    const std::size_t r = idx % runs.size();
    const auto& ckpt = *runs[r].checkpoint;
    const auto& split = *runs[r].split;
    const auto w = ckpt.stage2 ? WeightingConfig::from_mask(ckpt.stage2->mask, cell.k, cell.tau)
                               : WeightingConfig::all_features(ckpt.model.latent_dim());
    cell.val_auc = auc(
        score_latent(ckpt.model, w, encoded[r].z_val, split.validation.x, split.validation.y));
    cell.test_auc =
        auc(score_latent(ckpt.model, w, encoded[r].z_test, split.test.x, split.test.y));
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, report.cells.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < report.cells.size(); ++i) evaluate_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < report.cells.size();) {
          try {
            evaluate_cell(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  for (std::size_t start = 0; start < report.cells.size(); start += runs.size()) {
    std::vector<double> val, test;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      val.push_back(report.cells[start + r].val_auc);
      test.push_back(report.cells[start + r].test_auc);
    }
    report.summary.push_back({report.cells[start].k, report.cells[start].tau, mean(val),
                              mean(test), stddev(test)});
  }
  for (std::size_t i = 1; i < report.summary.size(); ++i) {
    const auto& c = report.summary[i];
    const auto& b = report.summary[report.best];
    if (c.mean_val_auc > b.mean_val_auc ||
        (c.mean_val_auc == b.mean_val_auc &&
         (c.tau > b.tau || (c.tau == b.tau && c.k > b.k)))) {
      report.best = i;
    }
  }
  return report;
}

}  // namespace swad
