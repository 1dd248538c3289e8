#include "swad/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "swad/error.hpp"

namespace swad {

void require_two_classes(const ScoreSet& scores, const char* who) {
  if (scores.labels.size() != scores.errors.size()) {
    throw ValueError(std::string(who) + ": " + std::to_string(scores.labels.size()) +
                     " labels for " + std::to_string(scores.errors.size()) + " scores");
  }
  std::size_t positives = 0;
  for (int y : scores.labels) {
    if (y != 0 && y != 1) throw ValueError(std::string(who) + ": labels must be 0 or 1");
    positives += static_cast<std::size_t>(y);
  }
  if (positives == 0 || positives == scores.labels.size()) {
    throw ValueError(std::string(who) + ": need both normal and abnormal samples");
  }
  for (double e : scores.errors)
    if (!std::isfinite(e)) throw ValueError(std::string(who) + ": non-finite score");
}

double auc(const ScoreSet& scores) {
  require_two_classes(scores, "auc");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores.errors[a] < scores.errors[b]; });

  // Sum of doubled ranks of the abnormal samples; doubling keeps tie averages
  // integral so the statistic is exact.
  std::uint64_t doubled_rank_sum = 0;
  std::uint64_t n_abnormal = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores.errors[order[j]] == scores.errors[order[i]]) ++j;
    const std::uint64_t doubled_avg_rank = (i + 1) + j;  // ranks i+1 .. j
    for (std::size_t t = i; t < j; ++t) {
      if (scores.labels[order[t]] == 1) {
        doubled_rank_sum += doubled_avg_rank;
        ++n_abnormal;
      }
    }
    i = j;
  }
  const std::uint64_t n_normal = n - n_abnormal;
  const std::uint64_t doubled_u = doubled_rank_sum - n_abnormal * (n_abnormal + 1);
  return static_cast<double>(doubled_u) /
         (2.0 * static_cast<double>(n_abnormal) * static_cast<double>(n_normal));
}

double Confusion::balanced_accuracy() const {
  const double pos = static_cast<double>(true_positive + false_negative);
  const double neg = static_cast<double>(true_negative + false_positive);
  const double tpr = pos > 0 ? static_cast<double>(true_positive) / pos : 0.0;
  const double tnr = neg > 0 ? static_cast<double>(true_negative) / neg : 0.0;
  return 0.5 * (tpr + tnr);
}

Confusion confusion(std::span<const int> labels, std::span<const int> decisions) {
  if (labels.size() != decisions.size()) {
    throw ValueError("confusion: label and decision counts differ");
  }
  Confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool abnormal = labels[i] == 1;
    const bool flagged = decisions[i] == 1;
    if (abnormal && flagged) ++c.true_positive;
    else if (abnormal) ++c.false_negative;
    else if (flagged) ++c.false_positive;
    else ++c.true_negative;
  }
  return c;
}

Threshold fit_threshold(const ScoreSet& validation, ThresholdObjective objective) {
  require_two_classes(validation, "fit_threshold");
  (void)objective;  // balanced accuracy is the only objective so far

  std::vector<double> sorted = validation.errors;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<double> candidates;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    candidates.push_back(sorted[i] + 0.5 * (sorted[i + 1] - sorted[i]));
  candidates.push_back(sorted.back());

  Threshold best{candidates.front(), ThresholdSource::kValidationFit};
  double best_score = -1.0;
  for (double cut : candidates) {  // ascending, so strict > keeps the smaller cut
    const auto decisions = detect(validation, Threshold{cut, ThresholdSource::kValidationFit});
    const double score = confusion(validation.labels, decisions).balanced_accuracy();
    if (score > best_score) {
      best_score = score;
      best.epsilon_0 = cut;
    }
  }
  return best;
}

std::vector<int> detect(const ScoreSet& scores, const Threshold& threshold) {
  std::vector<int> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    out[i] = scores.errors[i] > threshold.epsilon_0 ? 1 : 0;
  return out;
}

}  // namespace swad
