#pragma once

// Corpus builders, seeded random generators and brute-force oracles shared by
// the unit and acceptance suites. Oracles here deliberately avoid the library
// code paths they are used to check.

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "leveler/corpus.hpp"
#include "leveler/level.hpp"

namespace leveler::testing {

inline LabeledCorpus parse_labeled_text(const std::string& text) {
  std::istringstream in(text);
  return parse_labeled(in);
}

inline std::string write_labeled_text(const LabeledCorpus& c) {
  std::ostringstream out;
  write_labeled(c, out);
  return out.str();
}

inline Fragment make_fragment(std::string doc, std::string frag, const std::vector<std::string>& words,
                              const std::vector<int>& levels = {}) {
  Fragment f{std::move(doc), std::move(frag), {}, std::nullopt};
  for (std::size_t i = 0; i < words.size(); ++i) {
    Token t{words[i], std::nullopt};
    if (i < levels.size()) t.gold = static_cast<Level>(levels[i]);
    f.tokens.push_back(std::move(t));
  }
  if (!levels.empty()) f.gold = f.effective_level();
  return f;
}

/// One single-token fragment per entry; tokens are w0, w1, ... unless a
/// vocabulary function is supplied.
inline LabeledCorpus corpus_with_counts(const std::array<std::size_t, 3>& counts) {
  LabeledCorpus c;
  std::size_t id = 0;
  for (std::size_t li = 0; li < 3; ++li)
    for (std::size_t k = 0; k < counts[li]; ++k, ++id)
      c.fragments.push_back(make_fragment("d", std::to_string(id), {"w" + std::to_string(id)},
                                          {static_cast<int>(li) + 3}));
  return c;
}

using Rng = std::mt19937_64;

inline Level random_level(Rng& rng) {
  return static_cast<Level>(std::uniform_int_distribution<int>(3, 5)(rng));
}

/// Fragments of 1..max_len words drawn from a vocabulary of `vocab` types,
/// each token labeled at random.
inline LabeledCorpus random_corpus(Rng& rng, std::size_t fragments, std::size_t max_len,
                                   std::size_t vocab) {
  LabeledCorpus c;
  std::uniform_int_distribution<std::size_t> len(1, max_len), word(0, vocab - 1);
  for (std::size_t i = 0; i < fragments; ++i) {
    std::vector<std::string> words;
    std::vector<int> levels;
    for (std::size_t k = len(rng); k > 0; --k) {
      words.push_back("t" + std::to_string(word(rng)));
      levels.push_back(to_int(random_level(rng)));
    }
    c.fragments.push_back(make_fragment("doc" + std::to_string(i / 10), std::to_string(i), words, levels));
  }
  return c;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::uint64_t serial = 0;
    const auto base = std::filesystem::temp_directory_path();
    std::random_device rd;
    for (;;) {
      path_ = base / ("leveler-test-" + std::to_string(rd()) + "-" + std::to_string(++serial));
      if (std::filesystem::create_directory(path_)) break;
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& content) const {
    const auto p = file(name);
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ---------------------------------------------------------------------------
// Oracles

/// Every monotone alignment of n source and m target items as op strings over
/// {'M','D','I'} ('M' = paired: match or substitute).
inline void enumerate_alignments(std::size_t n, std::size_t m, std::string& prefix,
                                 std::vector<std::string>& out) {
  if (n == 0 && m == 0) {
    out.push_back(prefix);
    return;
  }
  if (n > 0 && m > 0) {
    prefix.push_back('M');
    enumerate_alignments(n - 1, m - 1, prefix, out);
    prefix.pop_back();
  }
  if (n > 0) {
    prefix.push_back('D');
    enumerate_alignments(n - 1, m, prefix, out);
    prefix.pop_back();
  }
  if (m > 0) {
    prefix.push_back('I');
    enumerate_alignments(n, m - 1, prefix, out);
    prefix.pop_back();
  }
}

/// Plain O(nm) Levenshtein over bytes, normalized by the longer length
/// (fine for ASCII test words).
inline double ascii_normalized_distance(const std::string& a, const std::string& b) {
  if (a == b) return 0.0;
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
  return static_cast<double>(d[a.size()][b.size()]) / static_cast<double>(std::max(a.size(), b.size()));
}

inline double script_cost(const std::vector<std::string>& src, const std::vector<std::string>& tgt,
                          const std::string& ops) {
  double cost = 0;
  std::size_t i = 0, j = 0;
  for (char op : ops) {
    if (op == 'M') cost += ascii_normalized_distance(src[i++], tgt[j++]);
    else if (op == 'D') cost += 1, ++i;
    else cost += 1, ++j;
  }
  return cost;
}

/// Word labels by direct surface checks, valid when every original surface is
/// unique and edits never reuse an original surface: unchanged at a level iff
/// the surface still occurs in that version.
inline std::vector<Level> reference_labels(const std::vector<std::string>& original,
                                           const std::vector<std::string>& level4,
                                           const std::vector<std::string>& level3) {
  std::vector<Level> out;
  for (const auto& w : original) {
    const bool in4 = std::find(level4.begin(), level4.end(), w) != level4.end();
    const bool in3 = std::find(level3.begin(), level3.end(), w) != level3.end();
    out.push_back(!in4 ? Level::L5 : !in3 ? Level::L4 : Level::L3);
  }
  return out;
}

/// Count-and-argmax with ties to the lowest level.
inline std::map<std::string, Level> reference_argmax(const LabeledCorpus& c) {
  std::map<std::string, std::array<int, 3>> counts;
  for (const auto& f : c.fragments)
    for (const auto& t : f.tokens) counts[t.surface][to_int(*t.gold) - 3] += 1;
  std::map<std::string, Level> out;
  for (const auto& [w, cnt] : counts) {
    int best = 0;
    for (int i = 1; i < 3; ++i)
      if (cnt[i] > cnt[best]) best = i;
    out[w] = static_cast<Level>(best + 3);
  }
  return out;
}

}  // namespace leveler::testing
