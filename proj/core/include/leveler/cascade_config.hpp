#pragma once

// Textual cascade definitions and their resolution against model files.
//
//   tuned = mle(min_prob=0.85) -> lex -> external(preds=bert.tsv)
//
// Layers: mle(table, min_prob, min_count), lex(lexicon, analyzer, pos, eps),
// dist-freq(bins), ex-freq(bins), freq(bins), default(level) with the
// shorthands l3/l4/l5, external(preds, label) with the shorthand bert.
// "->" and "→" both separate layers. A layer without an explicit path uses
// the corresponding ModelPaths entry.

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "leveler/cascade.hpp"

namespace leveler {

struct LayerConfig {
  std::string kind;
  std::map<std::string, std::string> params;

  friend bool operator==(const LayerConfig&, const LayerConfig&) = default;
};

struct CascadeConfig {
  std::string name;
  std::vector<LayerConfig> layers;

  friend bool operator==(const CascadeConfig&, const CascadeConfig&) = default;
};

/// Parses "layer(k=v, ...) -> layer ...". Throws Error on syntax errors or
/// unknown layer kinds and parameters.
CascadeConfig parse_cascade_expr(std::string_view expr, std::string name = {});

/// Lines "name = expr"; blank lines and lines starting with '#' are skipped.
std::vector<CascadeConfig> parse_cascade_file(std::istream& in);

/// Built-in named cascades: default3, default4, default5.
const CascadeConfig* builtin_cascade(std::string_view name);

std::string to_string(const CascadeConfig& cfg);

struct ModelPaths {
  std::string mle;
  std::string lexicon;
  std::string analyzer;
  std::string dist_freq;
  std::string ex_freq;
  std::string predictions;
  bool lexicon_pos_sensitive = true;
  /// Fallback directory for relative paths that do not exist as given.
  std::string data_dir;
};

/// Loads model files on demand and caches them by path.
class ModelLoader {
 public:
  explicit ModelLoader(ModelPaths paths) : paths_(std::move(paths)) {}

  CascadeSpec resolve(const CascadeConfig& cfg);

  std::shared_ptr<const MleTable> mle(const std::string& path);
  std::shared_ptr<const Lexicon> lexicon(const std::string& path, bool pos_sensitive);
  std::shared_ptr<const AnalyzerTable> analyzer(const std::string& path);
  std::shared_ptr<const BinTable> bins(const std::string& path);
  std::shared_ptr<const PredictionMap> predictions(const std::string& path);

  /// Every model named in the paths; throws naming the first missing layer.
  ModelSet model_set();

  const ModelPaths& paths() const noexcept { return paths_; }

  /// Applies the data-directory fallback.
  std::string locate(const std::string& path) const;

 private:
  ModelPaths paths_;
  std::map<std::string, std::shared_ptr<const MleTable>> mle_;
  std::map<std::string, std::shared_ptr<const Lexicon>> lex_;
  std::map<std::string, std::shared_ptr<const AnalyzerTable>> analyzer_;
  std::map<std::string, std::shared_ptr<const BinTable>> bins_;
  std::map<std::string, std::shared_ptr<const PredictionMap>> preds_;
};

}  // namespace leveler
