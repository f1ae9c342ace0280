#pragma once

// Subcommands of the `leveler` tool. Each returns a process exit status and
// writes reports to `out`, diagnostics to `err`.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "leveler/cascade_config.hpp"
#include "leveler/eval.hpp"

namespace leveler::cli {

struct RunConfig {
  ModelPaths models;
  std::string cascade;        // built-in name, name from cascades_file, or inline expression
  std::string cascades_file;  // "name = expr" definitions
  std::uint64_t seed = 0;
  ReportFormat format = ReportFormat::text;
  bool normalize = false;
};

/// Reads "key = value" lines (keys: mle, lexicon, analyzer, dist_freq,
/// ex_freq, predictions, lexicon_pos, data_dir, cascade, cascades, seed,
/// format, normalize). Keys listed in `set_on_command_line` are left alone,
/// so flags take precedence over the file.
void apply_config_file(const std::string& path, RunConfig& cfg,
                       const std::vector<std::string>& set_on_command_line);

std::string describe(const RunConfig& cfg);

struct DeriveOptions {
  std::string parallel;  // single parallel file, or
  std::string original, level4, level3;  // three aligned labeled-format files
  std::string out;
  bool normalize = false;
};
int cmd_derive_labels(const DeriveOptions& opt, std::ostream& out, std::ostream& err);

struct BuildOptions {
  std::string kind;  // mle | dist-freq | ex-freq
  std::string train;
  std::string freq;
  std::size_t bins = kDefaultExFreqBins;
  std::optional<std::array<double, kNumLevels>> fractions;
  DistMass mass = DistMass::tokens;
  std::string out;
};
int cmd_build(const BuildOptions& opt, std::ostream& out, std::ostream& err);

struct TagOptions {
  RunConfig run;
  std::string corpus;
  std::string out;
  std::string trace;  // defaults to out + ".trace.tsv"
};
int cmd_tag(const TagOptions& opt, std::ostream& out, std::ostream& err);

struct EvaluateOptions {
  std::string pred;
  std::string gold;
  std::string trace;  // needed for --layers
  bool layers = false;
  bool error_combos = false;
  ReportFormat format = ReportFormat::text;
};
int cmd_evaluate(const EvaluateOptions& opt, std::ostream& out, std::ostream& err);

struct TuneOptions {
  RunConfig run;
  std::string dev;
  std::vector<double> grid;  // empty = default grid
};
int cmd_tune(const TuneOptions& opt, std::ostream& out, std::ostream& err);

struct CombosOptions {
  RunConfig run;
  std::string dev;
  std::optional<double> tuned_threshold;
};
int cmd_combos(const CombosOptions& opt, std::ostream& out, std::ostream& err);

struct StatsOptions {
  std::vector<std::string> corpora;
  ReportFormat format = ReportFormat::text;
  bool normalize = false;
};
int cmd_stats(const StatsOptions& opt, std::ostream& out, std::ostream& err);

/// Resolves the cascade named or written in cfg.cascade.
CascadeSpec resolve_cascade(const RunConfig& cfg, ModelLoader& loader);

std::vector<double> parse_number_list(const std::string& text);

}  // namespace leveler::cli
