#include "swad/cli.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "swad/checkpoint.hpp"
#include "swad/config.hpp"
#include "swad/error.hpp"
#include "swad/pipeline.hpp"

namespace swad::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> k;
  std::optional<double> tau;
  std::optional<int> normal_class;
};

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << '\n';
  if (!out) throw DataError("cannot write " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw DataError("cannot write " + path.string());
}

std::vector<std::uint64_t> selected_seeds(const RunConfig& cfg, const Options& opt) {
  if (opt.seed) return {*opt.seed};
  return cfg.seeds;
}

fs::path seed_dir(const fs::path& out, std::uint64_t seed) {
  return out / ("seed_" + std::to_string(seed));
}

void train_all(const RunConfig& cfg, const std::vector<std::uint64_t>& seeds, const fs::path& out,
               std::ostream& log) {
  const Datasets data = load_datasets(cfg.dataset);
  for (std::uint64_t seed : seeds) {
    const SeedRun run = train_seed(cfg, data, seed);
    const fs::path dir = seed_dir(out, seed);
    save_checkpoint(dir, run.checkpoint);
    std::ostringstream mask;
    write_mask_text(mask, run.checkpoint.stage2->mask);
    write_text(dir / "mask.txt", mask.str());
    write_json(dir / "split.json", split_manifest(run.split));

    const auto& s1 = run.stage1;
    const auto& s2 = run.stage2;
    log << "seed " << seed << ": stage1 epochs=" << s1.epochs_run
        << " loss=" << num(s1.train_loss.empty() ? 0.0 : s1.train_loss.back())
        << " best_epoch=" << s1.best_epoch << " val_auc="
        << num(s1.validation_auc.empty() ? 0.0 : s1.validation_auc[s1.best_epoch])
        << " | stage2 epochs=" << s2.epochs_run
        << " loss=" << num(s2.train_loss.empty() ? 0.0 : s2.train_loss.back());
    if (!s2.validation_auc.empty()) log << " val_auc=" << num(s2.validation_auc[s2.best_epoch]);
    log << " -> " << dir.string() << '\n';
  }
}

// Checkpoint plus the split it was trained on, rebuilt from the config and
// checked against the recorded manifest.
struct LoadedRun {
  Checkpoint checkpoint;
  OneClassSplit split;
};

std::vector<LoadedRun> load_runs(const RunConfig& cfg, const std::vector<std::uint64_t>& seeds,
                                 const fs::path& out) {
  const Datasets data = load_datasets(cfg.dataset);
  std::vector<LoadedRun> runs;
  for (std::uint64_t seed : seeds) {
    LoadedRun r{load_checkpoint(seed_dir(out, seed)), build_split(cfg, data, seed)};
    const auto recorded = r.checkpoint.info.value("split", nlohmann::json::object());
    if (!recorded.empty() && recorded != split_manifest(r.split)) {
      throw ConfigError("data split for seed " + std::to_string(seed) +
                        " differs from the one recorded in its checkpoint");
    }
    runs.push_back(std::move(r));
  }
  return runs;
}

int cmd_train(const RunConfig& cfg, const Options& opt, const fs::path& out, std::ostream& log) {
  train_all(cfg, selected_seeds(cfg, opt), out, log);
  return kOk;
}

int cmd_eval(const RunConfig& cfg, const Options& opt, const fs::path& out, std::ostream& log) {
  const std::size_t k = opt.k.value_or(cfg.swad_k.value_or(cfg.model.latent_dim));
  const double tau = opt.tau.value_or(cfg.swad_tau.value_or(1.0));
  if (k < 1 || k > cfg.model.latent_dim) throw ConfigError("--k outside [1, latent_dim]");
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("--tau outside (0, 1]");
  for (auto& run : load_runs(cfg, selected_seeds(cfg, opt), out)) {
    if (k < run.checkpoint.model.latent_dim() && !run.checkpoint.stage2) {
      throw ConfigError("checkpoint for seed " + std::to_string(run.checkpoint.seed) +
                        " is stage-1 only; k < L needs a stage-2 checkpoint");
    }
    const EvalResult r = evaluate(run.checkpoint, run.split, k, tau);
    const fs::path dir =
        seed_dir(out, run.checkpoint.seed) / ("eval_k" + std::to_string(k) + "_tau" + num(tau));
    fs::create_directories(dir);
    write_json(dir / "report.json", r.to_json());
    write_scores_csv(dir / "test_scores.csv", r.test_scores);
    write_scores_csv(dir / "val_scores.csv", r.val_scores);
    const auto& c = r.test_confusion;
    log << "seed " << run.checkpoint.seed << ": k=" << k << " tau=" << num(tau)
        << " test_auc=" << num(r.test_auc) << " (vanilla " << num(r.vanilla_test_auc)
        << ") val_auc=" << num(r.val_auc) << " epsilon_0=" << num(r.threshold.epsilon_0)
        << " tp=" << c.true_positive << " fp=" << c.false_positive << " tn=" << c.true_negative
        << " fn=" << c.false_negative << '\n';
  }
  return kOk;
}

void write_surface(const fs::path& path, const SweepReport& report) {
  std::ostringstream s;
  s << std::setprecision(17) << "k,tau,seed,val_auc,test_auc\n";
  for (const auto& c : report.cells)
    s << c.k << ',' << c.tau << ',' << c.seed << ',' << c.val_auc << ',' << c.test_auc << '\n';
  write_text(path, s.str());
}

SweepReport sweep_runs(const RunConfig& cfg, std::vector<LoadedRun>& runs, const fs::path& dir) {
  std::vector<SweepInput> inputs;
  for (const auto& r : runs) inputs.push_back({&r.checkpoint, &r.split});
  SweepReport report = sweep(inputs, cfg.effective_k_grid(), cfg.tau_grid, threads_from_env());
  fs::create_directories(dir);
  write_surface(dir / "surface.csv", report);
  write_json(dir / "report.json", report.to_json());
  return report;
}

void log_sweep(const SweepReport& report, std::ostream& log) {
  const auto& b = report.summary[report.best];
  const double ae = report.vanilla_mean();
  log << "vanilla AE test_auc=" << num(ae) << " +- " << num(report.vanilla_std()) << '\n'
      << "best k=" << b.k << " tau=" << num(b.tau) << " mean_val_auc=" << num(b.mean_val_auc)
      << " test_auc=" << num(b.mean_test_auc) << " +- " << num(b.std_test_auc)
      << " gain=" << num(100.0 * (b.mean_test_auc - ae) / ae) << "%\n";
}

int cmd_sweep(const RunConfig& cfg, const Options& opt, const fs::path& out, std::ostream& log) {
  auto runs = load_runs(cfg, selected_seeds(cfg, opt), out);
  log_sweep(sweep_runs(cfg, runs, out / "sweep"), log);
  return kOk;
}

int cmd_latdim(const RunConfig& cfg, const Options& opt, const fs::path& out, std::ostream& log) {
  std::vector<int> classes = cfg.latdim_classes;
  if (opt.normal_class || classes.empty()) classes = {cfg.dataset.normal_class};
  const auto seeds = selected_seeds(cfg, opt);

  std::ostringstream table;
  table << std::setprecision(17) << "latent_dim,ae_mean_auc,swad_mean_auc,gain\n";
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t l : cfg.latent_grid) {
    std::vector<double> ae, swad_auc;
    nlohmann::json per_class = nlohmann::json::array();
    for (int c : classes) {
      RunConfig sub = cfg;
      sub.model.latent_dim = l;
      sub.k_grid.clear();
      sub.swad_k.reset();
      sub.swad_tau.reset();
      sub.dataset.normal_class = c;
      sub.validate();
      const fs::path dir = out / "latdim" / ("L" + std::to_string(l)) / ("class_" + std::to_string(c));
      log << "latent_dim " << l << ", normal class " << c << '\n';
      train_all(sub, seeds, dir, log);
      auto runs = load_runs(sub, seeds, dir);
      const SweepReport report = sweep_runs(sub, runs, dir / "sweep");
      log_sweep(report, log);
      ae.push_back(report.vanilla_mean());
      swad_auc.push_back(report.summary[report.best].mean_test_auc);
      per_class.push_back({{"class", c}, {"ae", ae.back()}, {"swad", swad_auc.back()}});
    }
    const double ae_m = mean(ae), sw_m = mean(swad_auc);
    table << l << ',' << ae_m << ',' << sw_m << ',' << (sw_m - ae_m) / ae_m << '\n';
    rows.push_back({{"latent_dim", l}, {"ae_mean_auc", ae_m}, {"swad_mean_auc", sw_m},
                    {"classes", per_class}});
  }
  fs::create_directories(out / "latdim");
  write_text(out / "latdim" / "table.csv", table.str());
  write_json(out / "latdim" / "table.json", rows);
  log << table.str();
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Selection-and-weighting autoencoder anomaly detection", "swad"};
  app.require_subcommand(1);
  Options opt;
  std::map<std::string, CLI::App*> commands;
  for (const auto& [name, help] :
       std::vector<std::pair<std::string, std::string>>{
           {"train", "train stage 1 and stage 2 for every seed"},
           {"eval", "score validation and test data at one (k, tau)"},
           {"sweep", "evaluate the (k, tau) grid over all seeds"},
           {"latdim", "full pipeline for every latent dimension in the grid"}}) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_path, "run configuration file")->required();
    sub->add_option("--seed", opt.seed, "run a single seed");
    sub->add_option("--out", opt.out_dir, "output directory (overrides output.dir)");
    sub->add_option("--k", opt.k, "number of selected latent features");
    sub->add_option("--tau", opt.tau, "weight of non-selected features");
    sub->add_option("--normal-class", opt.normal_class, "class treated as normal");
    commands[name] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kConfigError;
  }
  for (const auto& [name, sub] : commands)
    if (sub->parsed()) opt.command = name;

  try {
    RunConfig cfg = load_config(opt.config_path);
    if (opt.normal_class) cfg.dataset.normal_class = *opt.normal_class;
    if (opt.command == "train" && (opt.k || opt.tau)) {
      if (!(opt.k && opt.tau)) throw ConfigError("--k and --tau must be given together");
      cfg.swad_k = opt.k;
      cfg.swad_tau = opt.tau;
    }
    cfg.validate();
    const fs::path out_dir = opt.out_dir ? fs::path(*opt.out_dir) : cfg.output_dir;
    fs::create_directories(out_dir);

    if (opt.command == "train") return cmd_train(cfg, opt, out_dir, out);
    if (opt.command == "eval") return cmd_eval(cfg, opt, out_dir, out);
    if (opt.command == "sweep") return cmd_sweep(cfg, opt, out_dir, out);
    return cmd_latdim(cfg, opt, out_dir, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace swad::cli
