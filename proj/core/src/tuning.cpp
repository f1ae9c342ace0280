#include "leveler/tuning.hpp"

#include <algorithm>

#include "leveler/eval.hpp"

namespace leveler {

std::vector<double> default_threshold_grid() {
  std::vector<double> grid;
  for (int i = 10; i <= 20; ++i) grid.push_back(i / 20.0);
  return grid;
}

TuneResult tune_mle_threshold(const CascadeSpec& tmpl, const LabeledCorpus& dev,
                              std::span<const double> candidates) {
  std::size_t mle_at = tmpl.layers.size();
  for (std::size_t k = 0; k < tmpl.layers.size(); ++k) {
    if (std::holds_alternative<MleLayer>(tmpl.layers[k].tagger)) {
      if (mle_at != tmpl.layers.size()) throw Error("tune: cascade has more than one MLE layer");
      mle_at = k;
    }
  }
  if (mle_at == tmpl.layers.size()) throw Error("tune: cascade '" + tmpl.name + "' has no MLE layer");
  if (candidates.empty()) throw Error("tune: no candidate thresholds");
  if (dev.token_count() == 0) throw Error("tune: empty dev set");

  std::vector<double> grid(candidates.begin(), candidates.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  TuneResult result;
  double best_score = -1.0;
  for (double t : grid) {
    if (!(t >= 0.0 && t <= 1.0)) throw Error("tune: threshold outside [0, 1]");
    CascadeSpec spec = tmpl;
    std::get<MleLayer>(spec.layers[mle_at].tagger).min_prob = t;
    const auto traces = tag_corpus(spec, dev);
    const double score = evaluate(traces, dev, Granularity::word).macro_f1;
    result.scores.push_back({t, score});
    if (score > best_score) {
      best_score = score;
      result.best = t;
    }
  }
  return result;
}

}  // namespace leveler
