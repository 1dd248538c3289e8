#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "swad/checkpoint.hpp"
#include "swad/config.hpp"
#include "swad/data.hpp"
#include "swad/detector.hpp"

namespace swad {

// Raw data for a run; `test` is set when the source has a canonical test file.
struct Datasets {
  RawDataset train;
  std::optional<RawDataset> test;
};

Datasets load_datasets(const DatasetSpec& spec);

// Deterministic one-class split for `seed`.
OneClassSplit build_split(const RunConfig& cfg, const Datasets& data, std::uint64_t seed);

struct SeedRun {
  Checkpoint checkpoint;
  OneClassSplit split;
  TrainReport stage1;
  TrainReport stage2;
};

// Stage 1 then stage 2 for one seed. The seed drives the split, the weight
// initialization and the minibatch order.
SeedRun train_seed(const RunConfig& cfg, const Datasets& data, std::uint64_t seed);

struct EvalResult {
  std::size_t k = 0;
  double tau = 1.0;
  double val_auc = 0.0;
  double test_auc = 0.0;
  double vanilla_val_auc = 0.0;
  double vanilla_test_auc = 0.0;
  Threshold threshold;  // fitted on the validation scores
  Confusion test_confusion;
  ScoreSet val_scores;
  ScoreSet test_scores;

  nlohmann::json to_json() const;
};

// Scores validation and test data at (k, tau). k < L needs a stage-2 mask.
EvalResult evaluate(const Checkpoint& ckpt, const OneClassSplit& split, std::size_t k, double tau);

struct SweepCell {
  std::size_t k = 0;
  double tau = 1.0;
  std::uint64_t seed = 0;
  double val_auc = 0.0;
  double test_auc = 0.0;
};

struct SweepSummary {
  std::size_t k = 0;
  double tau = 1.0;
  double mean_val_auc = 0.0;
  double mean_test_auc = 0.0;
  double std_test_auc = 0.0;
};

struct SweepReport {
  std::vector<SweepCell> cells;        // grid order, seeds innermost
  std::vector<SweepSummary> summary;   // one per (k, tau)
  std::size_t best = 0;                // index into summary
  std::vector<double> vanilla_test_auc;  // per seed
  std::vector<double> vanilla_val_auc;

  double vanilla_mean() const;
  double vanilla_std() const;
  nlohmann::json to_json() const;
};

struct SweepInput {
  const Checkpoint* checkpoint;
  const OneClassSplit* split;
};

// Every (k, tau) cell for every run. The best cell maximizes the mean
// validation AUC; ties prefer larger tau, then larger k. Cells are spread
// over `threads` workers (results do not depend on the count).
SweepReport sweep(const std::vector<SweepInput>& runs, const std::vector<std::size_t>& k_grid,
                  const std::vector<double>& tau_grid, std::size_t threads = 1);

// Worker count from SWAD_THREADS; 1 when unset or invalid.
std::size_t threads_from_env();

double mean(const std::vector<double>& v);
// Population standard deviation.
double stddev(const std::vector<double>& v);

}  // namespace swad
