#include "leveler/alignment.hpp"

#include <algorithm>
#include <cmath>

#include "leveler/text.hpp"

namespace leveler {

namespace {

constexpr double kIndel = 1.0;
constexpr double kTieEps = 1e-12;

bool cost_eq(double a, double b) { return std::abs(a - b) <= kTieEps; }

}  // namespace

const char* to_string(EditOp op) noexcept {
  switch (op) {
    case EditOp::match: return "match";
    case EditOp::substitute: return "substitute";
    case EditOp::del: return "delete";
    case EditOp::insert: return "insert";
  }
  return "?";
}

double normalized_char_distance(std::string_view a, std::string_view b) {
  if (a == b) return 0.0;
  const auto ca = text::decode_utf8(a);
  const auto cb = text::decode_utf8(b);
  const auto longest = std::max(ca.size(), cb.size());
  std::vector<std::size_t> prev(cb.size() + 1), cur(cb.size() + 1);
  for (std::size_t j = 0; j <= cb.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= ca.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= cb.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (ca[i - 1] == cb[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  const auto d = static_cast<double>(prev[cb.size()]) / static_cast<double>(longest);
  // Byte-different strings can decode to the same code points only if one is
  // invalid, which decode_utf8 rejects; so d > 0 here.
  return d;
}

std::vector<AlignmentLink> align_words(std::span<const std::string> src,
                                       std::span<const std::string> tgt) {
  if (src.empty() || tgt.empty()) throw Error("align_words: both sequences must be non-empty");
  const std::size_t n = src.size(), m = tgt.size();
  const std::size_t width = m + 1;

  std::vector<double> sub((n) * (m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) sub[i * m + j] = normalized_char_distance(src[i], tgt[j]);

  // suffix[i][j] = min cost of aligning src[i..] with tgt[j..]
  std::vector<double> suffix((n + 1) * width, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return suffix[i * width + j]; };
  for (std::size_t i = n + 1; i-- > 0;) {
    for (std::size_t j = m + 1; j-- > 0;) {
      if (i == n && j == m) continue;
      double best = INFINITY;
      if (i < n && j < m) best = std::min(best, sub[i * m + j] + at(i + 1, j + 1));
      if (i < n) best = std::min(best, kIndel + at(i + 1, j));
      if (j < m) best = std::min(best, kIndel + at(i, j + 1));
      at(i, j) = best;
    }
  }

  std::vector<AlignmentLink> links;
  links.reserve(n + m);
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    const double here = at(i, j);
    if (i < n && j < m && cost_eq(here, sub[i * m + j] + at(i + 1, j + 1))) {
      const auto op = src[i] == tgt[j] ? EditOp::match : EditOp::substitute;
      links.push_back({i, j, op});
      ++i;
      ++j;
    } else if (i < n && cost_eq(here, kIndel + at(i + 1, j))) {
      links.push_back({i, std::nullopt, EditOp::del});
      ++i;
    } else {
      links.push_back({std::nullopt, j, EditOp::insert});
      ++j;
    }
  }
  return links;
}

double alignment_cost(std::span<const std::string> src, std::span<const std::string> tgt,
                      std::span<const AlignmentLink> links) {
  double cost = 0.0;
  for (const auto& l : links) {
    switch (l.op) {
      case EditOp::match: break;
      case EditOp::substitute: cost += normalized_char_distance(src[*l.src], tgt[*l.tgt]); break;
      case EditOp::del:
      case EditOp::insert: cost += kIndel; break;
    }
  }
  return cost;
}

std::vector<bool> unchanged_mask(std::span<const std::string> src,
                                 std::span<const std::string> tgt) {
  std::vector<bool> mask(src.size(), false);
  for (const auto& l : align_words(src, tgt))
    if (l.op == EditOp::match) mask[*l.src] = true;
  return mask;
}

LabeledParallel derive_word_labels(const ParallelFragment& p) {
  const auto orig = p.original.surfaces();
  const auto in4 = unchanged_mask(orig, p.level4.surfaces());
  const auto in3 = unchanged_mask(orig, p.level3.surfaces());
  LabeledParallel out{p, {}, Level::L3};
  out.word_labels.reserve(orig.size());
  for (std::size_t i = 0; i < orig.size(); ++i) {
    if (!in4[i])
      out.word_labels.push_back(Level::L5);
    else if (!in3[i])
      out.word_labels.push_back(Level::L4);
    else
      out.word_labels.push_back(Level::L3);
  }
  out.fragment_label = derive_fragment_label(out.word_labels);
  return out;
}

Level derive_fragment_label(std::span<const Level> word_labels) {
  if (word_labels.empty()) throw Error("derive_fragment_label: empty label sequence");
  return *std::max_element(word_labels.begin(), word_labels.end());
}

LabeledCorpus derive_labels(const ParallelCorpus& corpus) {
  LabeledCorpus out;
  out.split = corpus.split;
  out.fragments.reserve(corpus.fragments.size());
  for (const auto& pf : corpus.fragments) {
    const auto& o = pf.original;
    if (pf.level4.doc_id != o.doc_id || pf.level4.frag_id != o.frag_id ||
        pf.level3.doc_id != o.doc_id || pf.level3.frag_id != o.frag_id)
      throw Error("record " + o.doc_id + "/" + o.frag_id +
                  ": parallel versions disagree on doc_id/frag_id");
    auto labeled = derive_word_labels(pf);
    Fragment f = o;
    for (std::size_t i = 0; i < f.tokens.size(); ++i) f.tokens[i].gold = labeled.word_labels[i];
    f.gold = labeled.fragment_label;
    out.fragments.push_back(std::move(f));
  }
  return out;
}

}  // namespace leveler
