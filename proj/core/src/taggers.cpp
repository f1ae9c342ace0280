#include "leveler/taggers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <tuple>

#include "leveler/text.hpp"

namespace leveler {

namespace {

__extension__ typedef unsigned __int128 u128;

template <typename Fn>
auto with_path(const std::string& path, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  try {
    return fn(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line());
  }
}

std::vector<std::string_view> expect_cols(const std::string& line, std::size_t n,
                                          std::size_t line_no, const char* what) {
  if (!text::is_valid_utf8(line)) throw ParseError("invalid UTF-8", line_no);
  auto cols = text::split(line, '\t');
  if (cols.size() != n)
    throw ParseError(std::string("expected ") + what + " (" + std::to_string(n) +
                         " columns), got " + std::to_string(cols.size()) + " columns",
                     line_no);
  return cols;
}

std::uint64_t uint_or_throw(std::string_view s, std::size_t line_no, const char* what) {
  auto v = text::parse_uint(s);
  if (!v) throw ParseError(std::string("bad ") + what + " '" + std::string(s) + "'", line_no);
  return *v;
}

Level level_or_throw(std::string_view s, std::size_t line_no) {
  auto l = parse_level(s);
  if (!l) throw ParseError("level '" + std::string(s) + "' outside 1..5", line_no);
  return *l;
}

Level argmax_lowest(const std::array<std::uint64_t, kNumLevels>& counts) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < kNumLevels; ++i)
    if (counts[i] > counts[best]) best = i;
  return level_from_index(best);
}

}  // namespace

// ---------------------------------------------------------------------------
// MLE

void MleTable::add(const std::string& word, Level level, std::uint64_t n) {
  if (n == 0) return;
  auto& e = entries_[word];
  e.counts[level_index(level)] += n;
  e.total += n;
  e.best = argmax_lowest(e.counts);
  e.probability = static_cast<double>(e.counts[level_index(e.best)]) / static_cast<double>(e.total);
}

const MleEntry* MleTable::find(const std::string& word) const {
  const auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

double MleTable::single_level_fraction() const noexcept {
  if (entries_.empty()) return 0.0;
  std::size_t single = 0;
  for (const auto& [w, e] : entries_)
    if (std::count(e.counts.begin(), e.counts.end(), 0u) == kNumLevels - 1) ++single;
  return static_cast<double>(single) / static_cast<double>(entries_.size());
}

double MleTable::all_levels_fraction() const noexcept {
  if (entries_.empty()) return 0.0;
  std::size_t all = 0;
  for (const auto& [w, e] : entries_)
    if (std::count(e.counts.begin(), e.counts.end(), 0u) == 0) ++all;
  return static_cast<double>(all) / static_cast<double>(entries_.size());
}

std::vector<std::pair<std::string, MleEntry>> MleTable::sorted_entries() const {
  std::vector<std::pair<std::string, MleEntry>> out(entries_.begin(), entries_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

MleTable build_mle(const LabeledCorpus& train) {
  MleTable table;
  for (const auto& f : train.fragments)
    for (const auto& t : f.tokens) {
      if (!t.gold)
        throw Error("build_mle: token '" + t.surface + "' in " + f.doc_id + "/" + f.frag_id +
                    " has no level");
      table.add(t.surface, *t.gold);
    }
  return table;
}

Decision mle_tag(const MleTable& table, const std::string& word, double min_prob,
                 std::uint64_t min_count) {
  const auto* e = table.find(word);
  if (!e || e->total < min_count || e->probability < min_prob) return std::nullopt;
  return e->best;
}

void write_mle(const MleTable& table, std::ostream& out) {
  for (const auto& [word, e] : table.sorted_entries())
    out << word << '\t' << e.counts[0] << '\t' << e.counts[1] << '\t' << e.counts[2] << '\n';
  out.flush();
  if (!out) throw Error("write failed");
}

MleTable read_mle(std::istream& in) {
  MleTable table;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (text::read_line(in, line)) {
    ++line_no;
    const auto cols = expect_cols(line, 4, line_no, "word and three level counts");
    std::string word(cols[0]);
    if (word.empty() || text::has_whitespace(word)) throw ParseError("bad word", line_no);
    if (!seen.insert(word).second) throw ParseError("duplicate word '" + word + "'", line_no);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < kNumLevels; ++i) {
      const auto n = uint_or_throw(cols[i + 1], line_no, "count");
      total += n;
      table.add(word, level_from_index(i), n);
    }
    if (total == 0) throw ParseError("word '" + word + "' has zero total count", line_no);
  }
  if (in.bad()) throw Error("read failed");
  return table;
}

// ---------------------------------------------------------------------------
// Lexicon

void Lexicon::add(const std::string& lemma, const std::string& pos, Level level) {
  if (lemma.empty()) throw Error("lexicon: empty lemma");
  const auto [it, inserted] = by_key_.emplace(lemma + '\t' + pos, level);
  if (!inserted && it->second != level)
    throw Error("lexicon: conflicting levels for " + lemma + "/" + pos);
  auto [lit, lnew] = by_lemma_.emplace(lemma, level);
  if (!lnew) lit->second = std::min(lit->second, level);
}

std::optional<Level> Lexicon::lookup(const std::string& lemma, const std::string& pos) const {
  if (pos_sensitive_) {
    const auto it = by_key_.find(lemma + '\t' + pos);
    if (it != by_key_.end()) return it->second;
  }
  const auto it = by_lemma_.find(lemma);
  if (it == by_lemma_.end()) return std::nullopt;
  return it->second;
}

Lexicon load_lexicon(std::istream& in, bool pos_sensitive) {
  Lexicon lex(pos_sensitive);
  std::string line;
  std::size_t line_no = 0;
  while (text::read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cols = expect_cols(line, 3, line_no, "lemma, pos, level");
    const auto level = level_or_throw(cols[2], line_no);
    try {
      lex.add(std::string(cols[0]), std::string(cols[1]), level);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (in.bad()) throw Error("read failed");
  return lex;
}

Lexicon load_lexicon_file(const std::string& path, bool pos_sensitive) {
  return with_path(path, [&](std::istream& in) { return load_lexicon(in, pos_sensitive); });
}

Decision lex_tag(const Lexicon& lex, const AnalyzerTable& analyzer, const std::string& word,
                 double top_eps) {
  Decision best;
  for (const auto& a : analyzer.top_analyses(word, top_eps)) {
    const auto l = lex.lookup(a.lemma, a.pos);
    if (l && (!best || *l < *best)) best = l;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Frequency list and bins

FrequencyList::FrequencyList(std::vector<FreqEntry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const FreqEntry& a, const FreqEntry& b) {
    return std::tie(b.count, a.type) < std::tie(a.count, b.type);
  });
  std::set<std::string_view> seen;
  for (const auto& e : entries_) {
    if (e.type.empty()) throw Error("frequency list: empty type");
    if (e.count == 0) throw Error("frequency list: zero count for '" + e.type + "'");
    if (!seen.insert(e.type).second) throw Error("frequency list: duplicate type '" + e.type + "'");
    total_ += e.count;
  }
}

FrequencyList load_frequency_list(std::istream& in) {
  std::vector<FreqEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (text::read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cols = expect_cols(line, 2, line_no, "type and count");
    const auto count = uint_or_throw(cols[1], line_no, "count");
    if (count == 0) throw ParseError("zero count", line_no);
    if (cols[0].empty()) throw ParseError("empty type", line_no);
    entries.push_back({std::string(cols[0]), count});
  }
  if (in.bad()) throw Error("read failed");
  return FrequencyList(std::move(entries));
}

FrequencyList load_frequency_list_file(const std::string& path) {
  return with_path(path, [](std::istream& in) { return load_frequency_list(in); });
}

const char* to_string(BinScheme s) noexcept { return s == BinScheme::dist ? "dist" : "ex"; }

BinTable::BinTable(BinScheme scheme, std::vector<FreqEntry> ranked, std::vector<Bin> bins,
                   Level unseen_level)
    : scheme_(scheme), ranked_(std::move(ranked)), bins_(std::move(bins)), unseen_(unseen_level) {
  std::size_t expect = 0;
  for (const auto& b : bins_) {
    if (b.begin != expect || b.end <= b.begin)
      throw Error("bin table: bins must be non-empty and contiguous");
    expect = b.end;
  }
  if (expect != ranked_.size()) throw Error("bin table: bins do not cover the frequency list");
  rank_.reserve(ranked_.size());
  for (std::size_t r = 0; r < ranked_.size(); ++r)
    if (!rank_.emplace(ranked_[r].type, r).second)
      throw Error("bin table: duplicate type '" + ranked_[r].type + "'");
}

std::optional<std::size_t> BinTable::rank_of(const std::string& type) const {
  const auto it = rank_.find(type);
  if (it == rank_.end()) return std::nullopt;
  return it->second;
}

Level BinTable::level_of(const std::string& type) const {
  const auto r = rank_of(type);
  if (!r) return unseen_;
  const auto it = std::upper_bound(bins_.begin(), bins_.end(), *r,
                                   [](std::size_t rank, const Bin& b) { return rank < b.end; });
  return it->level;
}

BinTable build_dist_freq(const FrequencyList& freq, const std::array<double, kNumLevels>& fractions,
                         DistMass mass) {
  if (freq.empty()) throw Error("build_dist_freq: empty frequency list");
  double sum = 0.0;
  for (double f : fractions) {
    if (!(f > 0.0)) throw Error("build_dist_freq: level fractions must be positive");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error("build_dist_freq: level fractions must sum to 1");

  const auto ranked = freq.entries();
  const double total = mass == DistMass::tokens ? static_cast<double>(freq.total_mass())
                                                : static_cast<double>(ranked.size());
  const double cut3 = fractions[0] * total;
  const double cut4 = (fractions[0] + fractions[1]) * total;
  const double tol = 1e-9 * total;

  std::vector<Bin> bins;
  double before = 0.0;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    const Level l = before + tol < cut3 ? Level::L3 : before + tol < cut4 ? Level::L4 : Level::L5;
    if (bins.empty() || bins.back().level != l)
      bins.push_back({r, r + 1, l});
    else
      bins.back().end = r + 1;
    before += mass == DistMass::tokens ? static_cast<double>(ranked[r].count) : 1.0;
  }
  return BinTable(BinScheme::dist, {ranked.begin(), ranked.end()}, std::move(bins));
}

BinTable build_ex_freq(const FrequencyList& freq, const LabeledCorpus& train,
                       std::size_t num_bins) {
  if (freq.empty()) throw Error("build_ex_freq: empty frequency list");
  if (num_bins == 0) throw Error("build_ex_freq: num_bins must be positive");
  if (train.token_count() == 0) throw Error("build_ex_freq: empty training corpus");

  const auto ranked = freq.entries();
  const u128 total = freq.total_mass();

  // bin = ceil((2*before + count) * num_bins / (2 * total)) - 1
  std::vector<Bin> bins;
  std::vector<std::size_t> bin_of_rank(ranked.size());
  u128 before = 0;
  std::size_t last_slot = SIZE_MAX;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    const u128 num = (2 * before + ranked[r].count) * static_cast<u128>(num_bins);
    const u128 den = 2 * total;
    auto slot = static_cast<std::size_t>((num + den - 1) / den) - 1;
    slot = std::min(slot, num_bins - 1);
    if (slot != last_slot) {
      bins.push_back({r, r + 1, Level::L3});
      last_slot = slot;
    } else {
      bins.back().end = r + 1;
    }
    bin_of_rank[r] = bins.size() - 1;
    before += ranked[r].count;
  }

  std::unordered_map<std::string_view, std::size_t> rank;
  rank.reserve(ranked.size());
  for (std::size_t r = 0; r < ranked.size(); ++r) rank.emplace(ranked[r].type, r);

  std::vector<std::array<std::uint64_t, kNumLevels>> votes(bins.size());
  for (const auto& f : train.fragments)
    for (const auto& t : f.tokens) {
      if (!t.gold)
        throw Error("build_ex_freq: token '" + t.surface + "' in " + f.doc_id + "/" + f.frag_id +
                    " has no level");
      const auto it = rank.find(t.surface);
      if (it != rank.end()) ++votes[bin_of_rank[it->second]][level_index(*t.gold)];
    }

  std::vector<std::size_t> labeled;
  for (std::size_t b = 0; b < bins.size(); ++b) {
    const auto& v = votes[b];
    if (v[0] + v[1] + v[2] == 0) continue;
    bins[b].level = argmax_lowest(v);
    labeled.push_back(b);
  }
  if (labeled.empty())
    throw Error("build_ex_freq: no training token occurs in the frequency list");

  // Fill unlabeled bins from the nearest labeled bin; ties go to the lower index.
  std::size_t next = 0;  // index into `labeled` of the first labeled bin >= b
  for (std::size_t b = 0; b < bins.size(); ++b) {
    while (next < labeled.size() && labeled[next] < b) ++next;
    if (next < labeled.size() && labeled[next] == b) continue;
    const bool has_left = next > 0;
    const bool has_right = next < labeled.size();
    std::size_t src;
    if (has_left && has_right)
      src = (b - labeled[next - 1] <= labeled[next] - b) ? labeled[next - 1] : labeled[next];
    else
      src = has_left ? labeled[next - 1] : labeled[next];
    bins[b].level = bins[src].level;
  }
  return BinTable(BinScheme::ex, {ranked.begin(), ranked.end()}, std::move(bins));
}

Decision freq_tag(const BinTable& bins, const std::string& word) { return bins.level_of(word); }

void write_bins(const BinTable& table, std::ostream& out) {
  out << "scheme\t" << to_string(table.scheme()) << '\n';
  out << "unseen\t" << to_int(table.unseen_level()) << '\n';
  out << "bins\t" << table.bins().size() << '\n';
  for (const auto& b : table.bins()) out << b.begin << '\t' << b.end << '\t' << to_int(b.level) << '\n';
  out << "types\t" << table.ranked().size() << '\n';
  for (const auto& e : table.ranked()) out << e.type << '\t' << e.count << '\n';
  out.flush();
  if (!out) throw Error("write failed");
}

BinTable read_bins(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&](const char* what) {
    if (!text::read_line(in, line)) throw ParseError(std::string("missing ") + what, line_no + 1);
    ++line_no;
  };
  auto header = [&](const char* key) {
    next(key);
    const auto cols = expect_cols(line, 2, line_no, key);
    if (cols[0] != key) throw ParseError(std::string("expected '") + key + "' header", line_no);
    return std::string(cols[1]);
  };

  const auto scheme_text = header("scheme");
  BinScheme scheme;
  if (scheme_text == "dist")
    scheme = BinScheme::dist;
  else if (scheme_text == "ex")
    scheme = BinScheme::ex;
  else
    throw ParseError("unknown scheme '" + scheme_text + "'", line_no);
  const auto unseen_text = header("unseen");
  const auto unseen = exact_level(static_cast<int>(text::parse_uint(unseen_text).value_or(0)));
  if (!unseen) throw ParseError("bad unseen level", line_no);

  const auto nbins = uint_or_throw(header("bins"), line_no, "bin count");
  std::vector<Bin> bins;
  bins.reserve(nbins);
  for (std::uint64_t i = 0; i < nbins; ++i) {
    next("bin row");
    const auto cols = expect_cols(line, 3, line_no, "bin begin, end, level");
    Bin b;
    b.begin = uint_or_throw(cols[0], line_no, "bin begin");
    b.end = uint_or_throw(cols[1], line_no, "bin end");
    const auto l = exact_level(static_cast<int>(text::parse_uint(cols[2]).value_or(0)));
    if (!l) throw ParseError("bad bin level", line_no);
    b.level = *l;
    bins.push_back(b);
  }
  const auto ntypes = uint_or_throw(header("types"), line_no, "type count");
  std::vector<FreqEntry> ranked;
  ranked.reserve(ntypes);
  for (std::uint64_t i = 0; i < ntypes; ++i) {
    next("type row");
    const auto cols = expect_cols(line, 2, line_no, "type and count");
    ranked.push_back({std::string(cols[0]), uint_or_throw(cols[1], line_no, "count")});
  }
  if (text::read_line(in, line)) throw ParseError("trailing content", line_no + 1);
  try {
    return BinTable(scheme, std::move(ranked), std::move(bins), *unseen);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what(), line_no);
  }
}

std::array<double, kNumLevels> token_fractions(const LabeledCorpus& corpus) {
  const auto dist = corpus_stats(corpus);
  std::array<double, kNumLevels> out{};
  for (auto l : kAllLevels) out[level_index(l)] = dist.token_fraction(l);
  return out;
}

// ---------------------------------------------------------------------------
// Default and external

Decision default_tag(Level level) noexcept { return level; }

void PredictionMap::add(const FragmentKey& key, std::size_t word_index, Level level) {
  auto& words = words_[key];
  auto [it, inserted] = words.emplace(word_index, level);
  if (!inserted) it->second = std::max(it->second, level);
}

std::optional<Level> PredictionMap::find(const FragmentKey& key, std::size_t word_index) const {
  const auto f = words_.find(key);
  if (f == words_.end()) return std::nullopt;
  const auto w = f->second.find(word_index);
  if (w == f->second.end()) return std::nullopt;
  return w->second;
}

std::optional<std::size_t> PredictionMap::max_word_index(const FragmentKey& key) const {
  const auto f = words_.find(key);
  if (f == words_.end() || f->second.empty()) return std::nullopt;
  return f->second.rbegin()->first;
}

std::size_t PredictionMap::word_count() const noexcept {
  std::size_t n = 0;
  for (const auto& [k, words] : words_) n += words.size();
  return n;
}

PredictionMap import_subword_predictions(std::istream& in) {
  PredictionMap preds;
  std::set<std::tuple<std::string, std::string, std::uint64_t, std::uint64_t>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (text::read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cols =
        expect_cols(line, 5, line_no, "doc_id, frag_id, word_index, subword_index, level");
    if (cols[0].empty() || cols[1].empty()) throw ParseError("empty doc_id or frag_id", line_no);
    const auto word = uint_or_throw(cols[2], line_no, "word index");
    const auto sub = uint_or_throw(cols[3], line_no, "subword index");
    const auto level = level_or_throw(cols[4], line_no);
    FragmentKey key{std::string(cols[0]), std::string(cols[1])};
    if (!seen.emplace(key.doc_id, key.frag_id, word, sub).second)
      throw ParseError("duplicate subword row", line_no);
    preds.add(key, word, level);
  }
  if (in.bad()) throw Error("read failed");
  return preds;
}

PredictionMap import_subword_predictions_file(const std::string& path) {
  return with_path(path, [](std::istream& in) { return import_subword_predictions(in); });
}

Decision external_tag(const PredictionMap& preds, const FragmentKey& key,
                      std::size_t word_index) {
  return preds.find(key, word_index);
}

}  // namespace leveler
