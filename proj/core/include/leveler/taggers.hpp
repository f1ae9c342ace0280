#pragma once

// Word-level readability taggers. Each returns a Decision: a level, or
// nullopt to abstain and defer to a later layer of a cascade.
//
//   MLE        most frequent training level of the word, gated by a minimum
//              probability and count
//   Lexicon    lemma lookup through the analyzer's top analyses; lowest level
//   Dist-Freq  three rank bins mirroring a target level distribution
//   Ex-Freq    many equal-mass rank bins labeled by majority training level
//   Default    a constant level
//   External   imported predictions from a subword token classifier

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "leveler/analyzer.hpp"
#include "leveler/corpus.hpp"
#include "leveler/level.hpp"

namespace leveler {

using Decision = std::optional<Level>;

// ---------------------------------------------------------------------------
// MLE

struct MleEntry {
  std::array<std::uint64_t, kNumLevels> counts{};
  std::uint64_t total = 0;
  Level best = Level::L3;    // argmax; equal counts resolve to the lowest level
  double probability = 0.0;  // counts[best] / total
};

class MleTable {
 public:
  void add(const std::string& word, Level level, std::uint64_t n = 1);

  const MleEntry* find(const std::string& word) const;
  std::size_t size() const noexcept { return entries_.size(); }

  /// Fraction of word types observed with exactly one level.
  double single_level_fraction() const noexcept;
  /// Fraction of word types observed with all three levels.
  double all_levels_fraction() const noexcept;

  /// Entries ordered by word (bytewise), for deterministic output.
  std::vector<std::pair<std::string, MleEntry>> sorted_entries() const;

 private:
  std::unordered_map<std::string, MleEntry> entries_;
};

/// Throws Error if any token lacks a gold level.
MleTable build_mle(const LabeledCorpus& train);

Decision mle_tag(const MleTable& table, const std::string& word, double min_prob = 0.0,
                 std::uint64_t min_count = 0);

/// Row: word TAB count3 TAB count4 TAB count5, sorted by word.
void write_mle(const MleTable& table, std::ostream& out);
MleTable read_mle(std::istream& in);

// ---------------------------------------------------------------------------
// Lexicon

class Lexicon {
 public:
  /// With pos_sensitive, lookups try (lemma, pos) first and fall back to the
  /// lemma alone; otherwise only the lemma is used.
  explicit Lexicon(bool pos_sensitive = true) : pos_sensitive_(pos_sensitive) {}

  /// Throws Error on a conflicting duplicate (lemma, pos).
  void add(const std::string& lemma, const std::string& pos, Level level);

  std::optional<Level> lookup(const std::string& lemma, const std::string& pos) const;

  bool pos_sensitive() const noexcept { return pos_sensitive_; }
  std::size_t size() const noexcept { return by_key_.size(); }

 private:
  bool pos_sensitive_;
  std::unordered_map<std::string, Level> by_key_;    // lemma '\t' pos
  std::unordered_map<std::string, Level> by_lemma_;  // min over POS
};

/// Rows: lemma TAB pos TAB level (1..5, clamped to 3..5).
Lexicon load_lexicon(std::istream& in, bool pos_sensitive = true);
Lexicon load_lexicon_file(const std::string& path, bool pos_sensitive = true);

Decision lex_tag(const Lexicon& lex, const AnalyzerTable& analyzer, const std::string& word,
                 double top_eps = kTopAnalysisEpsilon);

// ---------------------------------------------------------------------------
// Frequency bins

struct FreqEntry {
  std::string type;
  std::uint64_t count = 0;

  friend bool operator==(const FreqEntry&, const FreqEntry&) = default;
};

/// Types ranked by count descending, ties by type ascending.
class FrequencyList {
 public:
  FrequencyList() = default;
  /// Sorts; throws Error on duplicate types, zero counts or empty types.
  explicit FrequencyList(std::vector<FreqEntry> entries);

  std::span<const FreqEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::uint64_t total_mass() const noexcept { return total_; }

 private:
  std::vector<FreqEntry> entries_;
  std::uint64_t total_ = 0;
};

/// Rows: type TAB count.
FrequencyList load_frequency_list(std::istream& in);
FrequencyList load_frequency_list_file(const std::string& path);

enum class BinScheme { dist, ex };
const char* to_string(BinScheme s) noexcept;

/// Half-open rank range [begin, end) of the frequency list.
struct Bin {
  std::size_t begin = 0;
  std::size_t end = 0;
  Level level = Level::L3;

  friend bool operator==(const Bin&, const Bin&) = default;
};

inline constexpr Level kUnseenFreqLevel = Level::L5;
inline constexpr std::size_t kDefaultExFreqBins = 10000;

class BinTable {
 public:
  /// `bins` must partition [0, ranked.size()) in order; throws Error otherwise.
  BinTable(BinScheme scheme, std::vector<FreqEntry> ranked, std::vector<Bin> bins,
           Level unseen_level = kUnseenFreqLevel);

  BinScheme scheme() const noexcept { return scheme_; }
  Level unseen_level() const noexcept { return unseen_; }
  std::span<const Bin> bins() const noexcept { return bins_; }
  std::span<const FreqEntry> ranked() const noexcept { return ranked_; }

  std::optional<std::size_t> rank_of(const std::string& type) const;
  /// Level of the bin holding the type, or the unseen level.
  Level level_of(const std::string& type) const;

 private:
  BinScheme scheme_;
  std::vector<FreqEntry> ranked_;
  std::vector<Bin> bins_;
  Level unseen_;
  std::unordered_map<std::string, std::size_t> rank_;
};

/// What "mass" means when cutting Dist-Freq bins.
enum class DistMass { tokens, types };

/// Walks the ranked list and gives L3 to the prefix whose cumulative mass
/// first reaches fraction(3) of the total, L4 up to fraction(3)+fraction(4),
/// L5 to the rest. The type that crosses a boundary stays in the earlier bin.
/// Fractions must be positive and sum to 1 (+-1e-9).
BinTable build_dist_freq(const FrequencyList& freq, const std::array<double, kNumLevels>& fractions,
                         DistMass mass = DistMass::tokens);

/// Cuts the ranked list into up to `num_bins` bins of equal cumulative mass
/// (a type lands in the bin holding the midpoint of its mass span; exact ties
/// go to the earlier bin) and labels each bin with the majority level of the
/// training tokens whose type it contains. Bins without training tokens take
/// the nearest labeled bin's level, ties toward the more frequent side.
BinTable build_ex_freq(const FrequencyList& freq, const LabeledCorpus& train,
                       std::size_t num_bins = kDefaultExFreqBins);

/// Never abstains.
Decision freq_tag(const BinTable& bins, const std::string& word);

void write_bins(const BinTable& bins, std::ostream& out);
BinTable read_bins(std::istream& in);

/// Token-level fractions of a labeled corpus, for Dist-Freq targets.
std::array<double, kNumLevels> token_fractions(const LabeledCorpus& corpus);

// ---------------------------------------------------------------------------
// Default and external

/// Never abstains.
Decision default_tag(Level level) noexcept;

struct FragmentKey {
  std::string doc_id;
  std::string frag_id;

  friend auto operator<=>(const FragmentKey&, const FragmentKey&) = default;
};

/// Word-level predictions keyed by (doc_id, frag_id, word_index).
class PredictionMap {
 public:
  /// Keeps the maximum level seen for the word.
  void add(const FragmentKey& key, std::size_t word_index, Level level);

  std::optional<Level> find(const FragmentKey& key, std::size_t word_index) const;
  /// Largest word index with a prediction in that fragment.
  std::optional<std::size_t> max_word_index(const FragmentKey& key) const;
  std::size_t word_count() const noexcept;

 private:
  std::map<FragmentKey, std::map<std::size_t, Level>> words_;
};

/// Rows: doc_id TAB frag_id TAB word_index TAB subword_index TAB level. A
/// word's level is the highest over its subwords. Throws ParseError on
/// malformed or duplicate (word, subword) rows.
PredictionMap import_subword_predictions(std::istream& in);
PredictionMap import_subword_predictions_file(const std::string& path);

Decision external_tag(const PredictionMap& preds, const FragmentKey& key,
                      std::size_t word_index);

}  // namespace leveler
