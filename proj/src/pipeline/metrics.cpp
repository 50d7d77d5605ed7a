#include "tnmpcqep/pipeline/metrics.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "tnmpcqep/common/errors.hpp"

namespace tnmpcqep::pipeline {
namespace {

double ratio(std::size_t num, std::size_t den) { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2 * p * r / (p + r); }

}  // namespace

std::string to_string(ThresholdCriterion c) { return c == ThresholdCriterion::Youden ? "youden" : "f1"; }

ThresholdCriterion parse_threshold_criterion(const std::string& text) {
  if (text == "youden") return ThresholdCriterion::Youden;
  if (text == "f1") return ThresholdCriterion::F1;
  throw UsageError("unknown threshold criterion '" + text + "' (expected youden or f1)");
}

EvalReport evaluate(std::span<const double> scores, std::span<const int> labels, double tau) {
  if (scores.size() != labels.size()) throw UsageError("evaluate: score and label counts differ");
  EvalReport r;
  r.tau = tau;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= tau;
    if (labels[i] == 1) {
      predicted ? ++r.tp : ++r.fn;
    } else {
      predicted ? ++r.fp : ++r.tn;
    }
  }
  r.accuracy = ratio(r.tp + r.tn, r.total());
  r.precision = {ratio(r.tn, r.tn + r.fn), ratio(r.tp, r.tp + r.fp)};
  r.recall = {ratio(r.tn, r.tn + r.fp), ratio(r.tp, r.tp + r.fn)};
  r.f1 = {harmonic(r.precision[0], r.recall[0]), harmonic(r.precision[1], r.recall[1])};
  return r;
}

std::vector<double> threshold_candidates(std::span<const double> scores) {
  std::vector<double> s(scores.begin(), scores.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  std::vector<double> out;
  out.reserve(s.size() + 1);
  out.push_back(-std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i + 1 < s.size(); ++i) out.push_back(0.5 * (s[i] + s[i + 1]));
  out.push_back(std::numeric_limits<double>::infinity());
  return out;
}

ThresholdChoice select_threshold(std::span<const double> scores, std::span<const int> labels,
                                 ThresholdCriterion criterion) {
  if (scores.size() != labels.size()) throw UsageError("select_threshold: score and label counts differ");
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  if (positives == 0 || positives == labels.size()) throw DomainError("select_threshold: both classes must be present");
  const auto negatives = static_cast<std::int64_t>(labels.size() - positives);
  const auto pos = static_cast<std::int64_t>(positives);
  // Objectives are compared as exact fractions num / den so that equal values
  // computed from different confusion counts tie exactly.
  std::int64_t best_num = 0, best_den = 1;
  bool first = true;
  ThresholdChoice best;
  // Candidates ascend, so keeping only strict improvements favours the lower tau.
  for (double tau : threshold_candidates(scores)) {
    const EvalReport r = evaluate(scores, labels, tau);
    const auto tp = static_cast<std::int64_t>(r.tp), fp = static_cast<std::int64_t>(r.fp),
               fn = static_cast<std::int64_t>(r.fn);
    std::int64_t num = 0, den = 1;
    if (criterion == ThresholdCriterion::Youden) {
      num = tp * negatives - fp * pos;
      den = pos * negatives;
    } else if (tp > 0) {
      num = 2 * tp;
      den = 2 * tp + fp + fn;
    }
    if (first || num * best_den > best_num * den) {
      first = false;
      best_num = num;
      best_den = den;
      best = {tau, criterion == ThresholdCriterion::Youden ? r.recall[1] - (1.0 - r.recall[0]) : r.f1[1]};
    }
  }
  return best;
}

}  // namespace tnmpcqep::pipeline
