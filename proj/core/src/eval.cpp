#include "leveler/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <sstream>

#include "leveler/text.hpp"

namespace leveler {

namespace {

double percent(std::uint64_t num, std::uint64_t den) {
  return den ? 100.0 * static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

const Fragment& matching_fragment(const TagTrace& t, const LabeledCorpus& gold, std::size_t i) {
  if (i >= gold.fragments.size()) throw Error("more traces than gold fragments");
  const auto& f = gold.fragments[i];
  if (t.doc_id != f.doc_id || t.frag_id != f.frag_id)
    throw Error("trace " + std::to_string(i) + " is " + t.doc_id + "/" + t.frag_id +
                " but gold fragment is " + f.doc_id + "/" + f.frag_id);
  if (t.words.size() != f.tokens.size())
    throw Error("fragment " + f.doc_id + "/" + f.frag_id + ": " + std::to_string(t.words.size()) +
                " predicted words vs " + std::to_string(f.tokens.size()) + " gold tokens");
  return f;
}

void check_coverage(std::span<const TagTrace> traces, const LabeledCorpus& gold) {
  if (traces.size() != gold.fragments.size())
    throw Error("coverage mismatch: " + std::to_string(traces.size()) + " predicted fragments vs " +
                std::to_string(gold.fragments.size()) + " gold fragments");
}

Level gold_word(const Fragment& f, std::size_t w) {
  if (!f.tokens[w].gold)
    throw Error("gold token " + std::to_string(w) + " of " + f.doc_id + "/" + f.frag_id +
                " has no level");
  return *f.tokens[w].gold;
}

Level gold_fragment(const Fragment& f) {
  const auto l = f.effective_level();
  if (!l) throw Error("gold fragment " + f.doc_id + "/" + f.frag_id + " has no level");
  return *l;
}

// Plain-text table helper: first column left-aligned, the rest right-aligned.
std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()));
    for (std::size_t c = 0; c < r.size(); ++c)
      width[c] = std::max(width[c], text::decode_utf8(r[c]).size());
  }
  std::ostringstream out;
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      const auto pad = width[c] - text::decode_utf8(r[c]).size();
      if (c == 0) {
        out << r[c] << std::string(pad, ' ');
      } else {
        out << "  " << std::string(pad, ' ') << r[c];
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string render_tsv(const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "\t" : "") << r[c];
    out << '\n';
  }
  return out.str();
}

const char* kReportHeader[] = {"model",        "word_f1_3",    "word_f1_4",    "word_f1_5",
                               "word_f1",      "word_acc",     "fragment_f1_3", "fragment_f1_4",
                               "fragment_f1_5", "fragment_f1", "fragment_acc"};

}  // namespace

std::uint64_t ConfusionMatrix::total() const noexcept {
  std::uint64_t n = 0;
  for (const auto& row : cells_)
    for (auto c : row) n += c;
  return n;
}

std::uint64_t ConfusionMatrix::correct() const noexcept {
  return cells_[0][0] + cells_[1][1] + cells_[2][2];
}

ConfusionMatrix confusion(std::span<const Level> gold, std::span<const Level> pred) {
  if (gold.size() != pred.size())
    throw Error("confusion: " + std::to_string(gold.size()) + " gold vs " +
                std::to_string(pred.size()) + " predicted labels");
  if (gold.empty()) throw Error("confusion: no labels");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < gold.size(); ++i) m.add(gold[i], pred[i]);
  return m;
}

EvalReport report(const ConfusionMatrix& m) {
  const auto total = m.total();
  if (total == 0) throw Error("report: empty confusion matrix");
  EvalReport r;
  for (auto l : kAllLevels) {
    std::uint64_t predicted = 0, actual = 0;
    for (auto o : kAllLevels) {
      predicted += m.count(o, l);
      actual += m.count(l, o);
    }
    const auto tp = static_cast<double>(m.count(l, l));
    const double precision = predicted ? tp / static_cast<double>(predicted) : 0.0;
    const double recall = actual ? tp / static_cast<double>(actual) : 0.0;
    const double f1 =
        precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    r.f1[level_index(l)] = 100.0 * f1;
  }
  r.macro_f1 = (r.f1[0] + r.f1[1] + r.f1[2]) / 3.0;
  r.accuracy = percent(m.correct(), total);
  return r;
}

ConfusionMatrix confusion(std::span<const TagTrace> traces, const LabeledCorpus& gold,
                          Granularity granularity) {
  check_coverage(traces, gold);
  ConfusionMatrix m;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& f = matching_fragment(traces[i], gold, i);
    if (granularity == Granularity::fragment) {
      m.add(gold_fragment(f), traces[i].fragment_level);
    } else {
      for (std::size_t w = 0; w < f.tokens.size(); ++w)
        m.add(gold_word(f, w), traces[i].words[w].level);
    }
  }
  return m;
}

EvalReport evaluate(std::span<const TagTrace> traces, const LabeledCorpus& gold,
                    Granularity granularity) {
  return report(confusion(traces, gold, granularity));
}

double LayerDecomposition::applied(std::size_t k) const noexcept {
  return percent(layers[k].decisions, total_tokens);
}

double LayerDecomposition::word_error(std::size_t k) const noexcept {
  return percent(layers[k].mistakes, layers[k].decisions);
}

double LayerDecomposition::fragment_error(std::size_t k) const noexcept {
  return percent(layers[k].fragment_errors, layers[k].mistakes);
}

LayerDecomposition layer_decomposition(std::span<const TagTrace> traces, const LabeledCorpus& gold,
                                       std::size_t num_layers) {
  check_coverage(traces, gold);
  LayerDecomposition d;
  d.layers.resize(num_layers);
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& t = traces[i];
    const auto& f = matching_fragment(t, gold, i);
    const bool fragment_wrong = t.fragment_level != gold_fragment(f);
    for (std::size_t w = 0; w < t.words.size(); ++w) {
      const auto& wd = t.words[w];
      if (wd.layer >= num_layers)
        throw Error("trace references layer " + std::to_string(wd.layer) + " of a " +
                    std::to_string(num_layers) + "-layer cascade");
      auto& s = d.layers[wd.layer];
      ++s.decisions;
      ++d.total_tokens;
      if (wd.level != gold_word(f, w)) {
        ++s.mistakes;
        if (fragment_wrong) ++s.fragment_errors;
      }
    }
  }
  return d;
}

std::uint64_t ErrorCombinationTable::total() const noexcept {
  std::uint64_t n = 0;
  for (const auto& row : counts)
    for (auto c : row) n += c;
  return n;
}

double ErrorCombinationTable::fraction(bool correct, std::size_t bucket) const noexcept {
  return percent(count(correct, bucket), total());
}

ErrorCombinationTable error_combinations(std::span<const TagTrace> traces,
                                         const LabeledCorpus& gold) {
  check_coverage(traces, gold);
  ErrorCombinationTable table;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& t = traces[i];
    const auto& f = matching_fragment(t, gold, i);
    std::size_t errors = 0;
    for (std::size_t w = 0; w < t.words.size(); ++w)
      if (t.words[w].level != gold_word(f, w)) ++errors;
    const bool correct = t.fragment_level == gold_fragment(f);
    ++table.counts[correct ? 0 : 1][std::min<std::size_t>(errors, 3)];
  }
  return table;
}

std::string format_report_rows(std::span<const ReportRow> rows, ReportFormat fmt) {
  std::vector<std::vector<std::string>> table;
  if (fmt == ReportFormat::tsv) {
    table.emplace_back(std::begin(kReportHeader), std::end(kReportHeader));
    for (const auto& r : rows) {
      std::vector<std::string> line{r.model};
      for (const auto* rep : {&r.word, &r.fragment}) {
        for (double v : rep->f1) line.push_back(text::format_double(v));
        line.push_back(text::format_double(rep->macro_f1));
        line.push_back(text::format_double(rep->accuracy));
      }
      table.push_back(std::move(line));
    }
    return render_tsv(table);
  }
  table.push_back({"", "Word-Level", "", "", "", "", "Fragment-Level", "", "", "", ""});
  table.push_back({"Model", "F1(3)", "F1(4)", "F1(5)", "F1", "Acc.", "F1(3)", "F1(4)", "F1(5)",
                   "F1", "Acc."});
  for (const auto& r : rows) {
    std::vector<std::string> line{r.model};
    for (const auto* rep : {&r.word, &r.fragment}) {
      for (double v : rep->f1) line.push_back(text::format_percent(v));
      line.push_back(text::format_percent(rep->macro_f1));
      line.push_back(text::format_percent(rep->accuracy));
    }
    table.push_back(std::move(line));
  }
  return render_table(table);
}

std::vector<ReportRow> parse_report_rows(std::istream& in) {
  std::vector<ReportRow> rows;
  std::string line;
  std::size_t line_no = 0;
  if (!text::read_line(in, line)) throw ParseError("missing report header", 1);
  ++line_no;
  const auto header = text::split(line, '\t');
  if (header.size() != std::size(kReportHeader) || header[0] != kReportHeader[0])
    throw ParseError("not a report TSV header", line_no);
  while (text::read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cols = text::split(line, '\t');
    if (cols.size() != std::size(kReportHeader))
      throw ParseError("expected 11 columns in report row", line_no);
    std::vector<double> v;
    for (std::size_t c = 1; c < cols.size(); ++c) {
      const auto d = text::parse_double(cols[c]);
      if (!d) throw ParseError("bad number '" + std::string(cols[c]) + "'", line_no);
      v.push_back(*d);
    }
    ReportRow r;
    r.model = cols[0];
    r.word = {{v[0], v[1], v[2]}, v[3], v[4]};
    r.fragment = {{v[5], v[6], v[7]}, v[8], v[9]};
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_layer_decomposition(const LayerDecomposition& d,
                                       std::span<const std::string> layer_names, ReportFormat fmt) {
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> head{""};
  for (std::size_t k = 0; k < d.layers.size(); ++k)
    head.push_back(k < layer_names.size() ? layer_names[k] : "layer " + std::to_string(k));
  table.push_back(head);
  auto row = [&](const std::string& name, auto&& cell) {
    std::vector<std::string> line{name};
    for (std::size_t k = 0; k < d.layers.size(); ++k) line.push_back(cell(k));
    table.push_back(std::move(line));
  };
  const bool tsv = fmt == ReportFormat::tsv;
  auto pct = [&](double v) { return tsv ? text::format_double(v) : text::format_percent(v) + "%"; };
  row("Decisions", [&](std::size_t k) { return std::to_string(d.layers[k].decisions); });
  row("Mistakes", [&](std::size_t k) { return std::to_string(d.layers[k].mistakes); });
  row("Applied", [&](std::size_t k) { return pct(d.applied(k)); });
  row("Word Error", [&](std::size_t k) { return pct(d.word_error(k)); });
  row("Fragment Error", [&](std::size_t k) { return pct(d.fragment_error(k)); });
  if (tsv) return render_tsv(table);
  return render_table(table) + "Total tokens: " + std::to_string(d.total_tokens) +
         "\nFragment Error = share of the layer's word mistakes that fall in a mislabeled "
         "fragment.\n";
}

std::string format_error_combinations(const ErrorCombinationTable& t, ReportFormat fmt) {
  const bool tsv = fmt == ReportFormat::tsv;
  std::vector<std::vector<std::string>> table;
  table.push_back({"Fragment Label", "Word Errors", "# of Fragments", "%"});
  const char* buckets[] = {"0", "1", "2", "3+"};
  for (bool correct : {true, false}) {
    for (std::size_t b = 0; b < ErrorCombinationTable::kBuckets; ++b) {
      // An incorrect fragment with no word errors cannot arise from max
      // aggregation; it is shown only when present.
      if (!correct && b == 0 && t.count(false, 0) == 0) continue;
      const double f = t.fraction(correct, b);
      table.push_back({correct ? "Correct" : "Incorrect", buckets[b],
                       std::to_string(t.count(correct, b)),
                       tsv ? text::format_double(f) : text::format_percent(f) + "%"});
    }
  }
  return tsv ? render_tsv(table) : render_table(table);
}

std::string format_distribution(std::span<const std::pair<std::string, LevelDistribution>> rows,
                                ReportFormat fmt) {
  const bool tsv = fmt == ReportFormat::tsv;
  std::vector<std::vector<std::string>> table;
  table.push_back({"", "Frag L3", "Frag L4", "Frag L5", "Fragments", "Tok L3", "Tok L4", "Tok L5",
                   "Tokens"});
  for (const auto& [name, d] : rows) {
    std::vector<std::string> line{name};
    for (auto l : kAllLevels) {
      const auto n = d.fragment_counts[level_index(l)];
      const double f = 100.0 * d.fragment_fraction(l);
      line.push_back(tsv ? std::to_string(n)
                         : std::to_string(n) + " (" + text::format_percent(f) + "%)");
    }
    line.push_back(std::to_string(d.total_fragments()));
    for (auto l : kAllLevels) {
      const auto n = d.token_counts[level_index(l)];
      const double f = 100.0 * d.token_fraction(l);
      line.push_back(tsv ? std::to_string(n)
                         : std::to_string(n) + " (" + text::format_percent(f) + "%)");
    }
    line.push_back(std::to_string(d.total_tokens()));
    table.push_back(std::move(line));
  }
  return tsv ? render_tsv(table) : render_table(table);
}

}  // namespace leveler
