#pragma once

#include <span>
#include <utility>
#include <vector>

#include "leveler/cascade.hpp"
#include "leveler/corpus.hpp"

namespace leveler {

struct ThresholdScore {
  double threshold = 0.0;
  double macro_f1 = 0.0;  // word level, percent
};

struct TuneResult {
  double best = 0.0;
  std::vector<ThresholdScore> scores;  // ascending by threshold
};

/// 0.50, 0.55, ..., 1.00
std::vector<double> default_threshold_grid();

/// Sets the template's single MLE layer to each candidate min_prob, scores
/// word-level macro F1 on `dev`, and returns the best threshold (ties go to
/// the lower one). Throws Error without exactly one MLE layer, with no
/// candidates, or on an empty dev set.
TuneResult tune_mle_threshold(const CascadeSpec& tmpl, const LabeledCorpus& dev,
                              std::span<const double> candidates);

}  // namespace leveler
