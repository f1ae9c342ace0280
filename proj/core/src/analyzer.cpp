#include "leveler/analyzer.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

#include "leveler/level.hpp"
#include "leveler/text.hpp"

namespace leveler {

std::optional<std::span<const Analysis>> AnalyzerTable::analyze(const std::string& word) const {
  const auto it = entries_.find(word);
  if (it == entries_.end()) return std::nullopt;
  return std::span<const Analysis>(it->second);
}

std::vector<Analysis> AnalyzerTable::top_analyses(const std::string& word, double eps) const {
  std::vector<Analysis> out;
  const auto list = analyze(word);
  if (!list) return out;
  const double best = list->front().logprob;
  for (const auto& a : *list) {
    if (a.logprob < best - eps) break;
    out.push_back(a);
  }
  return out;
}

void AnalyzerTable::add(const std::string& word, Analysis a) {
  if (word.empty()) throw Error("analyzer: empty surface word");
  if (a.lemma.empty()) throw Error("analyzer: empty lemma for '" + word + "'");
  if (a.logprob > 0.0) throw Error("analyzer: positive logprob for '" + word + "'");
  auto& list = entries_[word];
  for (const auto& existing : list)
    if (existing.lemma == a.lemma && existing.pos == a.pos)
      throw Error("analyzer: duplicate analysis " + word + " -> " + a.lemma + "/" + a.pos);
  // Insert after every entry with logprob >= a.logprob, keeping file order on ties.
  const auto pos = std::find_if(list.begin(), list.end(),
                                [&](const Analysis& e) { return e.logprob < a.logprob; });
  list.insert(pos, std::move(a));
}

AnalyzerTable load_analyzer(std::istream& in) {
  AnalyzerTable table;
  std::string line;
  std::size_t line_no = 0;
  while (text::read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!text::is_valid_utf8(line)) throw ParseError("invalid UTF-8", line_no);
    const auto cols = text::split(line, '\t');
    if (cols.size() != 4)
      throw ParseError("expected surface, lemma, pos, logprob; got " +
                           std::to_string(cols.size()) + " columns",
                       line_no);
    const auto lp = text::parse_double(cols[3]);
    if (!lp) throw ParseError("bad logprob '" + std::string(cols[3]) + "'", line_no);
    try {
      table.add(std::string(cols[0]), Analysis{std::string(cols[1]), std::string(cols[2]), *lp});
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (in.bad()) throw Error("read failed");
  return table;
}

AnalyzerTable load_analyzer_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  try {
    return load_analyzer(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line());
  }
}

}  // namespace leveler
