#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace swad {

// Per-sample anomaly scores (reconstruction errors), optionally labeled
// 0 = normal, 1 = abnormal.
struct ScoreSet {
  std::vector<double> errors;
  std::vector<int> labels;  // empty when unlabeled

  bool labeled() const noexcept { return !labels.empty(); }
  std::size_t size() const noexcept { return errors.size(); }
};

// Throws ValueError unless the labels are present, binary, sized to match,
// and both classes occur.
void require_two_classes(const ScoreSet& scores, const char* who);

// Mann-Whitney estimate of P(abnormal score > normal score) with ties counted
// one half, computed from average ranks in O(n log n).
double auc(const ScoreSet& scores);

enum class ThresholdObjective { kMaxBalancedAccuracy };

enum class ThresholdSource { kValidationFit, kUserSupplied };

struct Threshold {
  double epsilon_0 = 0.0;
  ThresholdSource source = ThresholdSource::kUserSupplied;
};

// Picks epsilon_0 among the midpoints between consecutive distinct sorted
// scores (plus the maximum score, i.e. "everything normal") maximizing the
// objective. Ties go to the smaller threshold.
Threshold fit_threshold(const ScoreSet& validation,
                        ThresholdObjective objective = ThresholdObjective::kMaxBalancedAccuracy);

// decision_i = 1 iff error_i > epsilon_0.
std::vector<int> detect(const ScoreSet& scores, const Threshold& threshold);

struct Confusion {
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t true_negative = 0;
  std::size_t false_negative = 0;

  double balanced_accuracy() const;
};

Confusion confusion(std::span<const int> labels, std::span<const int> decisions);

}  // namespace swad
