#include "leveler/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <utility>

#include "leveler/text.hpp"

namespace leveler {

namespace {

using Key = std::pair<std::string, std::string>;

void check_id(std::string_view id, std::string_view what, std::size_t line_no) {
  if (id.empty()) throw ParseError("empty " + std::string(what), line_no);
  if (text::has_whitespace(id))
    throw ParseError(std::string(what) + " contains whitespace", line_no);
}

std::string maybe_normalize(std::string_view s, const ParseOptions& opts) {
  return opts.normalize ? normalize_orthography(s) : std::string(s);
}

// Splits "surface|lvl" when the suffix after the last '|' is all digits.
std::pair<std::string_view, std::string_view> split_level_suffix(std::string_view tok) {
  const auto bar = tok.rfind('|');
  if (bar == std::string_view::npos || bar == 0 || bar + 1 == tok.size()) return {tok, {}};
  const auto suffix = tok.substr(bar + 1);
  if (!std::all_of(suffix.begin(), suffix.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return {tok, {}};
  return {tok.substr(0, bar), suffix};
}

Level level_or_throw(std::string_view text, std::size_t line_no) {
  auto lvl = parse_level(text);
  if (!lvl) throw ParseError("level '" + std::string(text) + "' outside 1..5", line_no);
  return *lvl;
}

std::vector<Token> parse_tokens(std::string_view field, bool allow_levels,
                                const ParseOptions& opts, std::size_t line_no) {
  std::vector<Token> tokens;
  for (auto piece : text::split_ws(field)) {
    Token tok;
    auto [surface, suffix] = allow_levels ? split_level_suffix(piece)
                                          : std::pair<std::string_view, std::string_view>{piece, {}};
    if (!suffix.empty()) tok.gold = level_or_throw(suffix, line_no);
    tok.surface = maybe_normalize(surface, opts);
    tokens.push_back(std::move(tok));
  }
  if (tokens.empty()) throw ParseError("empty fragment", line_no);
  return tokens;
}

void check_fragment_level(const Fragment& f, std::size_t line_no) {
  if (!f.gold) return;
  const bool all_labeled =
      std::all_of(f.tokens.begin(), f.tokens.end(), [](const Token& t) { return t.gold; });
  if (!all_labeled) return;
  Level mx = Level::L3;
  for (const auto& t : f.tokens) mx = std::max(mx, *t.gold);
  if (mx != *f.gold)
    throw ParseError("fragment level " + to_string(*f.gold) + " differs from max token level " +
                         to_string(mx),
                     line_no);
}

void check_stream(std::ostream& out) {
  if (!out) throw Error("write failed");
}

void write_tokens(const std::vector<Token>& tokens, bool with_levels, std::ostream& out) {
  if (tokens.empty()) throw Error("cannot write an empty fragment");
  bool first = true;
  for (const auto& t : tokens) {
    if (t.surface.empty() || text::has_whitespace(t.surface))
      throw Error("token surface '" + t.surface + "' is empty or contains whitespace");
    if (!first) out << ' ';
    first = false;
    out << t.surface;
    if (with_levels && t.gold) {
      out << '|' << to_int(*t.gold);
    } else if (with_levels && !split_level_suffix(t.surface).second.empty()) {
      throw Error("unlabeled token '" + t.surface + "' would read back as labeled");
    }
  }
}

}  // namespace

std::optional<Level> Fragment::effective_level() const {
  if (gold) return gold;
  if (tokens.empty()) return std::nullopt;
  Level mx = Level::L3;
  for (const auto& t : tokens) {
    if (!t.gold) return std::nullopt;
    mx = std::max(mx, *t.gold);
  }
  return mx;
}

std::vector<std::string> Fragment::surfaces() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

std::string_view to_string(Split s) noexcept {
  switch (s) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
    case Split::unsplit: return "unsplit";
  }
  return "unsplit";
}

std::optional<Split> parse_split(std::string_view s) noexcept {
  for (auto sp : {Split::train, Split::dev, Split::test, Split::unsplit})
    if (to_string(sp) == s) return sp;
  return std::nullopt;
}

std::size_t LabeledCorpus::token_count() const noexcept {
  std::size_t n = 0;
  for (const auto& f : fragments) n += f.tokens.size();
  return n;
}

std::string normalize_orthography(std::string_view word) {
  // Pairs of (UTF-8 source, UTF-8 replacement). All sources are 2-byte
  // sequences in the Arabic block.
  static constexpr std::pair<std::string_view, std::string_view> kMap[] = {
      {"\xD8\xA2", "\xD8\xA7"},  // alef madda -> alef
      {"\xD8\xA3", "\xD8\xA7"},  // alef hamza above -> alef
      {"\xD8\xA5", "\xD8\xA7"},  // alef hamza below -> alef
      {"\xD9\xB1", "\xD8\xA7"},  // alef wasla -> alef
      {"\xD9\x89", "\xD9\x8A"},  // alef maqsura -> ya
      {"\xD8\xA9", "\xD9\x87"},  // ta marbuta -> ha
  };
  std::string out;
  out.reserve(word.size());
  for (std::size_t i = 0; i < word.size();) {
    bool replaced = false;
    for (const auto& [from, to] : kMap) {
      if (word.compare(i, from.size(), from) == 0) {
        out.append(to);
        i += from.size();
        replaced = true;
        break;
      }
    }
    if (!replaced) out.push_back(word[i++]);
  }
  return out;
}

LabeledCorpus parse_labeled(std::istream& in, const ParseOptions& opts) {
  LabeledCorpus corpus;
  corpus.split = opts.split;
  std::set<Key> seen;
  std::string line;
  std::size_t line_no = 0;
  while (text::read_line(in, line)) {
    ++line_no;
    if (!text::is_valid_utf8(line)) throw ParseError("invalid UTF-8", line_no);
    const auto cols = text::split(line, '\t');
    if (cols.size() != 3 && cols.size() != 4)
      throw ParseError("expected 3 or 4 tab-separated columns, got " + std::to_string(cols.size()),
                       line_no);
    Fragment frag;
    check_id(cols[0], "doc_id", line_no);
    check_id(cols[1], "frag_id", line_no);
    frag.doc_id = cols[0];
    frag.frag_id = cols[1];
    frag.tokens = parse_tokens(cols[2], true, opts, line_no);
    if (cols.size() == 4) frag.gold = level_or_throw(cols[3], line_no);
    check_fragment_level(frag, line_no);
    if (!seen.emplace(frag.doc_id, frag.frag_id).second)
      throw ParseError("duplicate fragment " + frag.doc_id + "/" + frag.frag_id, line_no);
    corpus.fragments.push_back(std::move(frag));
  }
  if (in.bad()) throw Error("read failed");
  return corpus;
}

ParallelCorpus parse_parallel(std::istream& in, const ParseOptions& opts) {
  ParallelCorpus corpus;
  corpus.split = opts.split;
  std::set<Key> seen;
  std::string line;
  std::size_t line_no = 0;
  while (text::read_line(in, line)) {
    ++line_no;
    if (!text::is_valid_utf8(line)) throw ParseError("invalid UTF-8", line_no);
    const auto cols = text::split(line, '\t');
    if (cols.size() != 5)
      throw ParseError("expected 5 tab-separated columns, got " + std::to_string(cols.size()),
                       line_no);
    check_id(cols[0], "doc_id", line_no);
    check_id(cols[1], "frag_id", line_no);
    ParallelFragment pf;
    auto make = [&](std::string_view field) {
      Fragment f;
      f.doc_id = cols[0];
      f.frag_id = cols[1];
      f.tokens = parse_tokens(field, false, opts, line_no);
      return f;
    };
    pf.original = make(cols[2]);
    pf.level4 = make(cols[3]);
    pf.level3 = make(cols[4]);
    if (!seen.emplace(pf.original.doc_id, pf.original.frag_id).second)
      throw ParseError("duplicate fragment " + pf.original.doc_id + "/" + pf.original.frag_id,
                       line_no);
    corpus.fragments.push_back(std::move(pf));
  }
  if (in.bad()) throw Error("read failed");
  return corpus;
}

void write_labeled(const LabeledCorpus& corpus, std::ostream& out) {
  for (const auto& f : corpus.fragments) {
    out << f.doc_id << '\t' << f.frag_id << '\t';
    write_tokens(f.tokens, true, out);
    if (f.gold) out << '\t' << to_int(*f.gold);
    out << '\n';
    check_stream(out);
  }
  out.flush();
  check_stream(out);
}

void write_parallel(const ParallelCorpus& corpus, std::ostream& out) {
  for (const auto& pf : corpus.fragments) {
    const auto& o = pf.original;
    if (pf.level4.doc_id != o.doc_id || pf.level4.frag_id != o.frag_id ||
        pf.level3.doc_id != o.doc_id || pf.level3.frag_id != o.frag_id)
      throw Error("parallel versions of " + o.doc_id + "/" + o.frag_id + " disagree on ids");
    out << o.doc_id << '\t' << o.frag_id << '\t';
    write_tokens(o.tokens, false, out);
    out << '\t';
    write_tokens(pf.level4.tokens, false, out);
    out << '\t';
    write_tokens(pf.level3.tokens, false, out);
    out << '\n';
    check_stream(out);
  }
  out.flush();
  check_stream(out);
}

LabeledCorpus read_labeled_file(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  try {
    return parse_labeled(in, opts);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line());
  }
}

ParallelCorpus read_parallel_file(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  try {
    return parse_parallel(in, opts);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line());
  }
}

void write_labeled_file(const LabeledCorpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_labeled(corpus, out);
}

std::size_t LevelDistribution::total_tokens() const noexcept {
  return token_counts[0] + token_counts[1] + token_counts[2];
}

std::size_t LevelDistribution::total_fragments() const noexcept {
  return fragment_counts[0] + fragment_counts[1] + fragment_counts[2];
}

double LevelDistribution::token_fraction(Level l) const noexcept {
  const auto total = total_tokens();
  return total ? static_cast<double>(token_counts[level_index(l)]) / total : 0.0;
}

double LevelDistribution::fragment_fraction(Level l) const noexcept {
  const auto total = total_fragments();
  return total ? static_cast<double>(fragment_counts[level_index(l)]) / total : 0.0;
}

LevelDistribution corpus_stats(const LabeledCorpus& corpus) {
  LevelDistribution dist;
  for (const auto& f : corpus.fragments) {
    for (const auto& t : f.tokens) {
      if (!t.gold)
        throw Error("token '" + t.surface + "' in " + f.doc_id + "/" + f.frag_id +
                    " has no level");
      ++dist.token_counts[level_index(*t.gold)];
    }
    const auto lvl = f.effective_level();
    if (!lvl) throw Error("fragment " + f.doc_id + "/" + f.frag_id + " has no level");
    ++dist.fragment_counts[level_index(*lvl)];
  }
  return dist;
}

}  // namespace leveler
