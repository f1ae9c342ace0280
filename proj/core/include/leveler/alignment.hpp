#pragma once

// Monotone word alignment between an original fragment and a simplified
// version, and the derivation of word/fragment readability labels from a
// (original, level-4, level-3) parallel triple.
//
// Cost model: match 0, insert 1, delete 1, substitute = character edit
// distance / max(length) in (0, 1]. Equal-cost ties prefer
// match > substitute > delete > insert, resolved left to right.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leveler/corpus.hpp"
#include "leveler/level.hpp"

namespace leveler {

enum class EditOp { match, substitute, del, insert };

const char* to_string(EditOp op) noexcept;

struct AlignmentLink {
  std::optional<std::size_t> src;
  std::optional<std::size_t> tgt;
  EditOp op;

  friend bool operator==(const AlignmentLink&, const AlignmentLink&) = default;
};

/// Levenshtein distance over code points divided by the longer length.
/// 0 for identical strings; 1 when nothing can be reused.
double normalized_char_distance(std::string_view a, std::string_view b);

/// Minimal-cost monotone alignment. Every src and tgt index is touched by
/// exactly one link; links are ordered by position. Throws Error if either
/// side is empty.
std::vector<AlignmentLink> align_words(std::span<const std::string> src,
                                       std::span<const std::string> tgt);

/// Total cost of `links` under the cost model.
double alignment_cost(std::span<const std::string> src, std::span<const std::string> tgt,
                      std::span<const AlignmentLink> links);

/// Per source token: true iff it is linked by a match (exact surface equality).
std::vector<bool> unchanged_mask(std::span<const std::string> src,
                                 std::span<const std::string> tgt);

struct LabeledParallel {
  ParallelFragment parallel;
  std::vector<Level> word_labels;  // one per original token
  Level fragment_label;
};

/// Unchanged in both simplified texts -> 3; unchanged only in the level-4
/// text -> 4; changed or deleted in the level-4 text -> 5.
LabeledParallel derive_word_labels(const ParallelFragment& p);

/// Max under 3 < 4 < 5. Throws Error on an empty sequence.
Level derive_fragment_label(std::span<const Level> word_labels);

/// Original fragments of the corpus with derived token and fragment levels.
LabeledCorpus derive_labels(const ParallelCorpus& corpus);

}  // namespace leveler
