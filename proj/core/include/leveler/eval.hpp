#pragma once

// Confusion-matrix metrics over readability levels, per-layer decision
// accounting for cascades, and fragment/word error combinations.
//
// All metrics are kept unrounded as percentages in [0, 100]; rounding to
// one decimal happens only when formatting.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "leveler/cascade.hpp"
#include "leveler/corpus.hpp"
#include "leveler/level.hpp"

namespace leveler {

class ConfusionMatrix {
 public:
  void add(Level gold, Level pred, std::uint64_t n = 1) noexcept {
    cells_[level_index(gold)][level_index(pred)] += n;
  }
  std::uint64_t count(Level gold, Level pred) const noexcept {
    return cells_[level_index(gold)][level_index(pred)];
  }
  std::uint64_t total() const noexcept;
  std::uint64_t correct() const noexcept;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::array<std::array<std::uint64_t, kNumLevels>, kNumLevels> cells_{};
};

/// Throws Error on empty input or a length mismatch.
ConfusionMatrix confusion(std::span<const Level> gold, std::span<const Level> pred);

struct EvalReport {
  std::array<double, kNumLevels> f1{};  // per level, percent
  double macro_f1 = 0.0;                // mean of the three, percent
  double accuracy = 0.0;                // percent

  double f1_of(Level l) const noexcept { return f1[level_index(l)]; }
};

/// F1 of a level with zero precision and recall (including a level absent
/// from both gold and predictions) is 0 and still counts toward the macro
/// mean. Throws Error on an empty matrix.
EvalReport report(const ConfusionMatrix& m);

enum class Granularity { word, fragment };

/// Matches traces to gold fragments by position; throws Error when keys or
/// word counts differ, or a gold level is missing.
ConfusionMatrix confusion(std::span<const TagTrace> traces, const LabeledCorpus& gold,
                          Granularity granularity);
EvalReport evaluate(std::span<const TagTrace> traces, const LabeledCorpus& gold,
                    Granularity granularity);

struct LayerStats {
  std::uint64_t decisions = 0;
  std::uint64_t mistakes = 0;
  /// This layer's word mistakes that sit in a mislabeled fragment (one count
  /// per mistaken word).
  std::uint64_t fragment_errors = 0;
};

struct LayerDecomposition {
  std::vector<LayerStats> layers;
  std::uint64_t total_tokens = 0;

  double applied(std::size_t k) const noexcept;         // decisions / total tokens
  double word_error(std::size_t k) const noexcept;      // mistakes / decisions
  double fragment_error(std::size_t k) const noexcept;  // fragment_errors / mistakes
};

LayerDecomposition layer_decomposition(std::span<const TagTrace> traces, const LabeledCorpus& gold,
                                       std::size_t num_layers);

/// Fragment counts keyed by (fragment label correct?, word errors 0/1/2/3+).
struct ErrorCombinationTable {
  static constexpr std::size_t kBuckets = 4;
  std::array<std::array<std::uint64_t, kBuckets>, 2> counts{};  // [correct ? 0 : 1][bucket]

  std::uint64_t total() const noexcept;
  std::uint64_t count(bool correct, std::size_t bucket) const noexcept {
    return counts[correct ? 0 : 1][bucket];
  }
  double fraction(bool correct, std::size_t bucket) const noexcept;
};

ErrorCombinationTable error_combinations(std::span<const TagTrace> traces,
                                         const LabeledCorpus& gold);

// ---------------------------------------------------------------------------
// Report formatting

enum class ReportFormat { text, tsv };

/// One model evaluated at both granularities.
struct ReportRow {
  std::string model;
  EvalReport word;
  EvalReport fragment;
};

/// text: aligned table, one decimal. tsv: header plus full-precision values
/// (model and 10 numeric columns) that parse_report_rows reads back exactly.
std::string format_report_rows(std::span<const ReportRow> rows, ReportFormat fmt);
std::vector<ReportRow> parse_report_rows(std::istream& in);

std::string format_layer_decomposition(const LayerDecomposition& d,
                                       std::span<const std::string> layer_names, ReportFormat fmt);
std::string format_error_combinations(const ErrorCombinationTable& t, ReportFormat fmt);
std::string format_distribution(std::span<const std::pair<std::string, LevelDistribution>> rows,
                                ReportFormat fmt);

}  // namespace leveler
