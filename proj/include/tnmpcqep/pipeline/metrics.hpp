#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tnmpcqep::pipeline {

enum class ThresholdCriterion { Youden, F1 };

std::string to_string(ThresholdCriterion c);
ThresholdCriterion parse_threshold_criterion(const std::string& text);

/// Prediction rule: class 1 iff score >= tau.
struct EvalReport {
  double accuracy = 0.0;
  std::array<double, 2> precision{};  // index = class
  std::array<double, 2> recall{};
  std::array<double, 2> f1{};
  double tau = 0.5;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;  // class 1 is positive

  std::size_t total() const { return tp + fp + fn + tn; }
};

EvalReport evaluate(std::span<const double> scores, std::span<const int> labels, double tau);

/// Midpoints of the sorted unique scores plus -inf and +inf.
std::vector<double> threshold_candidates(std::span<const double> scores);

struct ThresholdChoice {
  double tau = 0.5;
  double objective = 0.0;  // J = TPR - FPR, or F1 of class 1
};

/// Maximizes the criterion over the candidates; ties go to the lower tau.
/// Throws DomainError unless both classes occur.
ThresholdChoice select_threshold(std::span<const double> scores, std::span<const int> labels,
                                 ThresholdCriterion criterion = ThresholdCriterion::Youden);

}  // namespace tnmpcqep::pipeline
