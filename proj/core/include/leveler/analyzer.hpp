#pragma once

// Precomputed morphological analyses: surface word -> ranked (lemma, POS,
// log-probability) candidates. The table is produced offline by whatever
// disambiguator is available; this module only loads and queries it.
//
// TSV row: surface TAB lemma TAB pos TAB logprob

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace leveler {

struct Analysis {
  std::string lemma;
  std::string pos;
  double logprob = 0.0;

  friend bool operator==(const Analysis&, const Analysis&) = default;
};

inline constexpr double kTopAnalysisEpsilon = 1e-9;

class AnalyzerTable {
 public:
  AnalyzerTable() = default;

  /// Analyses sorted by logprob descending (stable w.r.t. insertion order),
  /// or nullopt for an unknown word.
  std::optional<std::span<const Analysis>> analyze(const std::string& word) const;

  /// Analyses within `eps` of the best logprob. Empty for unknown words.
  std::vector<Analysis> top_analyses(const std::string& word,
                                     double eps = kTopAnalysisEpsilon) const;

  std::size_t size() const noexcept { return entries_.size(); }

  /// Throws Error on a duplicate (word, lemma, pos), empty lemma, or logprob > 0.
  void add(const std::string& word, Analysis a);

 private:
  std::unordered_map<std::string, std::vector<Analysis>> entries_;
};

/// Throws ParseError with the offending line number.
AnalyzerTable load_analyzer(std::istream& in);
AnalyzerTable load_analyzer_file(const std::string& path);

}  // namespace leveler
