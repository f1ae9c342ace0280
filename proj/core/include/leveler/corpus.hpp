#pragma once

// Leveled and parallel corpora: data model, line-record I/O, and level
// distribution statistics.
//
// Labeled corpus line:  doc_id TAB frag_id TAB tok[|lvl] tok[|lvl] ... [TAB frag_lvl]
// Parallel corpus line: doc_id TAB frag_id TAB original TAB level4 TAB level3
//
// Levels 1 and 2 are clamped to 3 while parsing; nothing downstream ever sees
// them.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "leveler/level.hpp"

namespace leveler {

struct Token {
  std::string surface;
  std::optional<Level> gold;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Fragment {
  std::string doc_id;
  std::string frag_id;
  std::vector<Token> tokens;
  std::optional<Level> gold;

  /// The fragment's own label if set, else the max over token labels when
  /// every token is labeled.
  std::optional<Level> effective_level() const;

  std::vector<std::string> surfaces() const;

  friend bool operator==(const Fragment&, const Fragment&) = default;
};

struct ParallelFragment {
  Fragment original;
  Fragment level4;
  Fragment level3;

  friend bool operator==(const ParallelFragment&, const ParallelFragment&) = default;
};

enum class Split { train, dev, test, unsplit };

std::string_view to_string(Split s) noexcept;
std::optional<Split> parse_split(std::string_view s) noexcept;

struct LabeledCorpus {
  Split split = Split::unsplit;
  std::vector<Fragment> fragments;

  std::size_t token_count() const noexcept;
  friend bool operator==(const LabeledCorpus&, const LabeledCorpus&) = default;
};

struct ParallelCorpus {
  Split split = Split::unsplit;
  std::vector<ParallelFragment> fragments;

  friend bool operator==(const ParallelCorpus&, const ParallelCorpus&) = default;
};

struct ParseOptions {
  Split split = Split::unsplit;
  /// Opt-in orthographic folding; see normalize_orthography().
  bool normalize = false;
};

/// Folds Alef variants to bare Alef, Alef Maqsura to Ya, Ta Marbuta to Ha.
std::string normalize_orthography(std::string_view word);

/// Throws ParseError (with the 1-based line number) on malformed lines,
/// invalid UTF-8, levels outside 1..5, empty fragments, duplicate
/// (doc_id, frag_id) keys, or a fragment label that disagrees with the max of
/// its fully-labeled tokens.
LabeledCorpus parse_labeled(std::istream& in, const ParseOptions& opts = {});
ParallelCorpus parse_parallel(std::istream& in, const ParseOptions& opts = {});

/// Inverse of the parsers. Throws Error on invalid content (empty fragment,
/// whitespace in a surface, unlabeled surface that would read back as
/// labeled) or when the stream goes bad.
void write_labeled(const LabeledCorpus& corpus, std::ostream& out);
void write_parallel(const ParallelCorpus& corpus, std::ostream& out);

LabeledCorpus read_labeled_file(const std::string& path, const ParseOptions& opts = {});
ParallelCorpus read_parallel_file(const std::string& path, const ParseOptions& opts = {});
void write_labeled_file(const LabeledCorpus& corpus, const std::string& path);

struct LevelDistribution {
  std::array<std::size_t, kNumLevels> token_counts{};
  std::array<std::size_t, kNumLevels> fragment_counts{};

  std::size_t total_tokens() const noexcept;
  std::size_t total_fragments() const noexcept;
  double token_fraction(Level l) const noexcept;
  double fragment_fraction(Level l) const noexcept;
};

/// Requires every token labeled and every fragment resolvable to a level
/// (explicit or via its tokens); throws Error otherwise.
LevelDistribution corpus_stats(const LabeledCorpus& corpus);

}  // namespace leveler
