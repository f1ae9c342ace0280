#pragma once

// Back-off cascades of word taggers. A word is labeled by the first layer
// that does not abstain; a fragment takes the highest of its word levels.

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "leveler/analyzer.hpp"
#include "leveler/corpus.hpp"
#include "leveler/level.hpp"
#include "leveler/taggers.hpp"

namespace leveler {

struct MleLayer {
  std::shared_ptr<const MleTable> table;
  double min_prob = 0.0;
  std::uint64_t min_count = 0;
};

struct LexLayer {
  std::shared_ptr<const Lexicon> lexicon;
  std::shared_ptr<const AnalyzerTable> analyzer;
  double top_eps = kTopAnalysisEpsilon;
};

struct FreqLayer {
  std::shared_ptr<const BinTable> bins;
};

struct DefaultLayer {
  Level level = Level::L3;
};

struct ExternalLayer {
  std::shared_ptr<const PredictionMap> predictions;
};

struct Layer {
  std::variant<MleLayer, LexLayer, FreqLayer, DefaultLayer, ExternalLayer> tagger;
  /// Display name; empty means the conventional one (see layer_label()).
  std::string label;
};

/// "MLE" (or "Tuned-MLE" when thresholded), "Lex", "Dist-Freq", "Ex-Freq",
/// "L3"/"L4"/"L5", "BERT", unless the layer carries its own label.
std::string layer_label(const Layer& layer);

/// Default and frequency layers never abstain.
bool is_total(const Layer& layer) noexcept;

/// Runs one layer on word `index` of `fragment`.
Decision run_layer(const Layer& layer, const Fragment& fragment, std::size_t index);

struct CascadeSpec {
  std::string name;
  std::vector<Layer> layers;

  /// Throws Error if there are no layers, a layer is missing its model, or
  /// the last layer is MLE or Lex. An external last layer is accepted; its
  /// predictions must then cover every word that reaches it, which tag_word
  /// enforces.
  void validate() const;

  /// Arrow-joined layer labels, e.g. "MLE → Lex → BERT".
  std::string arrow_name() const;
};

CascadeSpec make_cascade(std::vector<Layer> layers, std::string name = {});

struct WordDecision {
  Level level = Level::L3;
  std::size_t layer = 0;

  friend bool operator==(const WordDecision&, const WordDecision&) = default;
};

struct TagTrace {
  std::string doc_id;
  std::string frag_id;
  std::vector<WordDecision> words;
  Level fragment_level = Level::L3;

  friend bool operator==(const TagTrace&, const TagTrace&) = default;
};

/// First non-abstaining layer. Throws Error if every layer abstains.
WordDecision tag_word(const CascadeSpec& spec, const Fragment& fragment, std::size_t index);

/// Throws Error on an empty fragment or when external predictions reference
/// a word index past the end of the fragment.
TagTrace tag_fragment(const CascadeSpec& spec, const Fragment& fragment);

/// Validates the spec once, then tags every fragment in corpus order.
std::vector<TagTrace> tag_corpus(const CascadeSpec& spec, const LabeledCorpus& corpus);

/// The input corpus with token and fragment levels replaced by the traces'.
LabeledCorpus apply_traces(const LabeledCorpus& corpus, const std::vector<TagTrace>& traces);

/// Traces for an already-labeled corpus, every word attributed to layer 0.
std::vector<TagTrace> traces_from_corpus(const LabeledCorpus& predicted);

struct TraceFile {
  std::string cascade;
  std::vector<std::string> layers;
  std::vector<TagTrace> traces;

  friend bool operator==(const TraceFile&, const TraceFile&) = default;
};

/// Layout:
///   cascade TAB <name>
///   layers TAB <n>
///   layer TAB <k> TAB <label>          (n rows)
///   doc_id TAB frag_id TAB word_index TAB level TAB layer   (one row per word)
void write_traces(const TraceFile& file, std::ostream& out);
TraceFile read_traces(std::istream& in);

// ---------------------------------------------------------------------------
// The layered combinations evaluated together.

struct ModelSet {
  std::shared_ptr<const MleTable> mle;
  std::shared_ptr<const Lexicon> lexicon;
  std::shared_ptr<const AnalyzerTable> analyzer;
  std::shared_ptr<const BinTable> dist_freq;
  std::shared_ptr<const BinTable> ex_freq;
  std::shared_ptr<const PredictionMap> external;
  std::string external_label = "BERT";
};

/// {MLE, Lex, MLE → Lex, Lex → MLE} followed by each of {L3, L4, L5,
/// Dist-Freq, Ex-Freq, BERT}: 24 cascades, grouped by prefix in that order.
/// Throws Error naming the first layer whose model is missing.
std::vector<CascadeSpec> enumerate_combinations(const ModelSet& models);

/// The six total taggers on their own: Default level 3/4/5, Dist-Freq,
/// Ex-Freq, BERT.
std::vector<CascadeSpec> standalone_models(const ModelSet& models);

/// "Tuned-MLE → Lex → BERT" with the given MLE threshold.
CascadeSpec tuned_best_cascade(const ModelSet& models, double min_prob);

}  // namespace leveler
