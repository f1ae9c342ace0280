#include "leveler/cascade.hpp"

#include <istream>
#include <ostream>
#include <set>

#include "leveler/text.hpp"

namespace leveler {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const std::string kArrow = " \xE2\x86\x92 ";  // " → "

bool has_model(const Layer& layer) {
  return std::visit(overloaded{
                        [](const MleLayer& l) { return l.table != nullptr; },
                        [](const LexLayer& l) { return l.lexicon && l.analyzer; },
                        [](const FreqLayer& l) { return l.bins != nullptr; },
                        [](const DefaultLayer&) { return true; },
                        [](const ExternalLayer& l) { return l.predictions != nullptr; },
                    },
                    layer.tagger);
}

}  // namespace

std::string layer_label(const Layer& layer) {
  if (!layer.label.empty()) return layer.label;
  return std::visit(
      overloaded{
          [](const MleLayer& l) -> std::string {
            return l.min_prob > 0.0 || l.min_count > 0 ? "Tuned-MLE" : "MLE";
          },
          [](const LexLayer&) -> std::string { return "Lex"; },
          [](const FreqLayer& l) -> std::string {
            if (!l.bins) return "Freq";
            return l.bins->scheme() == BinScheme::dist ? "Dist-Freq" : "Ex-Freq";
          },
          [](const DefaultLayer& l) -> std::string { return "L" + to_string(l.level); },
          [](const ExternalLayer&) -> std::string { return "BERT"; },
      },
      layer.tagger);
}

bool is_total(const Layer& layer) noexcept {
  return std::holds_alternative<DefaultLayer>(layer.tagger) ||
         std::holds_alternative<FreqLayer>(layer.tagger);
}

Decision run_layer(const Layer& layer, const Fragment& fragment, std::size_t index) {
  const auto& word = fragment.tokens[index].surface;
  return std::visit(
      overloaded{
          [&](const MleLayer& l) { return mle_tag(*l.table, word, l.min_prob, l.min_count); },
          [&](const LexLayer& l) { return lex_tag(*l.lexicon, *l.analyzer, word, l.top_eps); },
          [&](const FreqLayer& l) { return freq_tag(*l.bins, word); },
          [&](const DefaultLayer& l) { return default_tag(l.level); },
          [&](const ExternalLayer& l) {
            return external_tag(*l.predictions, {fragment.doc_id, fragment.frag_id}, index);
          },
      },
      layer.tagger);
}

void CascadeSpec::validate() const {
  const auto who = name.empty() ? arrow_name() : name;
  if (layers.empty()) throw Error("cascade '" + who + "' has no layers");
  for (const auto& l : layers)
    if (!has_model(l)) throw Error("cascade '" + who + "': layer " + layer_label(l) + " has no model");
  const auto& last = layers.back();
  if (!is_total(last) && !std::holds_alternative<ExternalLayer>(last.tagger))
    throw Error("cascade '" + who + "' ends in " + layer_label(last) +
                ", which may abstain; the last layer must be a default, frequency or external "
                "tagger");
}

std::string CascadeSpec::arrow_name() const {
  std::string out;
  for (const auto& l : layers) {
    if (!out.empty()) out += kArrow;
    out += layer_label(l);
  }
  return out;
}

CascadeSpec make_cascade(std::vector<Layer> layers, std::string name) {
  CascadeSpec spec{std::move(name), std::move(layers)};
  if (spec.name.empty()) spec.name = spec.arrow_name();
  return spec;
}

WordDecision tag_word(const CascadeSpec& spec, const Fragment& fragment, std::size_t index) {
  for (std::size_t k = 0; k < spec.layers.size(); ++k)
    if (auto d = run_layer(spec.layers[k], fragment, index)) return {*d, k};
  throw Error("cascade '" + spec.name + "': every layer abstained on word " +
              std::to_string(index) + " ('" + fragment.tokens[index].surface + "') of " +
              fragment.doc_id + "/" + fragment.frag_id);
}

TagTrace tag_fragment(const CascadeSpec& spec, const Fragment& fragment) {
  if (fragment.tokens.empty())
    throw Error("fragment " + fragment.doc_id + "/" + fragment.frag_id + " is empty");
  for (const auto& l : spec.layers) {
    if (const auto* ext = std::get_if<ExternalLayer>(&l.tagger); ext && ext->predictions) {
      const auto mx = ext->predictions->max_word_index({fragment.doc_id, fragment.frag_id});
      if (mx && *mx >= fragment.tokens.size())
        throw Error("predictions for " + fragment.doc_id + "/" + fragment.frag_id +
                    " reference word index " + std::to_string(*mx) + " but the fragment has " +
                    std::to_string(fragment.tokens.size()) + " words");
    }
  }
  TagTrace trace{fragment.doc_id, fragment.frag_id, {}, Level::L3};
  trace.words.reserve(fragment.tokens.size());
  for (std::size_t i = 0; i < fragment.tokens.size(); ++i) {
    trace.words.push_back(tag_word(spec, fragment, i));
    trace.fragment_level = std::max(trace.fragment_level, trace.words.back().level);
  }
  return trace;
}

std::vector<TagTrace> tag_corpus(const CascadeSpec& spec, const LabeledCorpus& corpus) {
  spec.validate();
  std::vector<TagTrace> out;
  out.reserve(corpus.fragments.size());
  for (const auto& f : corpus.fragments) out.push_back(tag_fragment(spec, f));
  return out;
}

LabeledCorpus apply_traces(const LabeledCorpus& corpus, const std::vector<TagTrace>& traces) {
  if (traces.size() != corpus.fragments.size())
    throw Error("trace count does not match fragment count");
  LabeledCorpus out = corpus;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    auto& f = out.fragments[i];
    const auto& t = traces[i];
    if (t.doc_id != f.doc_id || t.frag_id != f.frag_id || t.words.size() != f.tokens.size())
      throw Error("trace for " + t.doc_id + "/" + t.frag_id + " does not match fragment " +
                  f.doc_id + "/" + f.frag_id);
    for (std::size_t w = 0; w < t.words.size(); ++w) f.tokens[w].gold = t.words[w].level;
    f.gold = t.fragment_level;
  }
  return out;
}

std::vector<TagTrace> traces_from_corpus(const LabeledCorpus& predicted) {
  std::vector<TagTrace> out;
  out.reserve(predicted.fragments.size());
  for (const auto& f : predicted.fragments) {
    TagTrace t{f.doc_id, f.frag_id, {}, Level::L3};
    for (const auto& tok : f.tokens) {
      if (!tok.gold)
        throw Error("predicted token '" + tok.surface + "' in " + f.doc_id + "/" + f.frag_id +
                    " has no level");
      t.words.push_back({*tok.gold, 0});
      t.fragment_level = std::max(t.fragment_level, *tok.gold);
    }
    if (t.words.empty()) throw Error("fragment " + f.doc_id + "/" + f.frag_id + " is empty");
    out.push_back(std::move(t));
  }
  return out;
}

void write_traces(const TraceFile& file, std::ostream& out) {
  out << "cascade\t" << file.cascade << '\n';
  out << "layers\t" << file.layers.size() << '\n';
  for (std::size_t k = 0; k < file.layers.size(); ++k)
    out << "layer\t" << k << '\t' << file.layers[k] << '\n';
  for (const auto& t : file.traces) {
    for (std::size_t w = 0; w < t.words.size(); ++w)
      out << t.doc_id << '\t' << t.frag_id << '\t' << w << '\t' << to_int(t.words[w].level)
          << '\t' << t.words[w].layer << '\n';
  }
  out.flush();
  if (!out) throw Error("write failed");
}

TraceFile read_traces(std::istream& in) {
  TraceFile file;
  std::string line;
  std::size_t line_no = 0;
  auto next = [&](const char* what) {
    if (!text::read_line(in, line)) throw ParseError(std::string("missing ") + what, line_no + 1);
    ++line_no;
    return text::split(line, '\t');
  };

  auto cols = next("cascade header");
  if (cols.size() != 2 || cols[0] != "cascade") throw ParseError("expected 'cascade' header", line_no);
  file.cascade = cols[1];
  cols = next("layers header");
  const auto n = cols.size() == 2 && cols[0] == "layers" ? text::parse_uint(cols[1]) : std::nullopt;
  if (!n) throw ParseError("expected 'layers' header", line_no);
  for (std::uint64_t k = 0; k < *n; ++k) {
    cols = next("layer row");
    if (cols.size() != 3 || cols[0] != "layer" || text::parse_uint(cols[1]) != k)
      throw ParseError("expected 'layer TAB " + std::to_string(k) + " TAB label'", line_no);
    file.layers.emplace_back(cols[2]);
  }

  std::set<std::pair<std::string, std::string>> closed;
  while (text::read_line(in, line)) {
    ++line_no;
    cols = text::split(line, '\t');
    if (cols.size() != 5) throw ParseError("expected 5 columns in trace row", line_no);
    const auto idx = text::parse_uint(cols[2]);
    const auto lvl = exact_level(static_cast<int>(text::parse_uint(cols[3]).value_or(0)));
    const auto layer = text::parse_uint(cols[4]);
    if (!idx || !lvl || !layer) throw ParseError("bad trace row", line_no);
    if (*layer >= file.layers.size()) throw ParseError("layer index out of range", line_no);
    const bool same = !file.traces.empty() && file.traces.back().doc_id == cols[0] &&
                      file.traces.back().frag_id == cols[1];
    if (!same) {
      if (!file.traces.empty())
        closed.emplace(file.traces.back().doc_id, file.traces.back().frag_id);
      if (closed.count({std::string(cols[0]), std::string(cols[1])}))
        throw ParseError("rows of fragment " + std::string(cols[0]) + "/" + std::string(cols[1]) +
                             " are not contiguous",
                         line_no);
      file.traces.push_back({std::string(cols[0]), std::string(cols[1]), {}, Level::L3});
    }
    auto& t = file.traces.back();
    if (*idx != t.words.size()) throw ParseError("word indices must run 0,1,2,...", line_no);
    t.words.push_back({*lvl, static_cast<std::size_t>(*layer)});
    t.fragment_level = std::max(t.fragment_level, *lvl);
  }
  if (in.bad()) throw Error("read failed");
  return file;
}

// ---------------------------------------------------------------------------

namespace {

Layer require_mle(const ModelSet& m, double min_prob = 0.0) {
  if (!m.mle) throw Error("missing model for layer MLE (MLE table)");
  return {MleLayer{m.mle, min_prob, 0}, {}};
}

Layer require_lex(const ModelSet& m) {
  if (!m.lexicon) throw Error("missing model for layer Lex (lexicon)");
  if (!m.analyzer) throw Error("missing model for layer Lex (analyzer table)");
  return {LexLayer{m.lexicon, m.analyzer}, {}};
}

Layer require_bins(const std::shared_ptr<const BinTable>& bins, const char* name) {
  if (!bins) throw Error(std::string("missing model for layer ") + name + " (bin table)");
  return {FreqLayer{bins}, name};
}

Layer require_external(const ModelSet& m) {
  if (!m.external) throw Error("missing model for layer " + m.external_label + " (predictions)");
  return {ExternalLayer{m.external}, m.external_label};
}

std::vector<Layer> finals(const ModelSet& m) {
  return {
      {DefaultLayer{Level::L3}, {}},
      {DefaultLayer{Level::L4}, {}},
      {DefaultLayer{Level::L5}, {}},
      require_bins(m.dist_freq, "Dist-Freq"),
      require_bins(m.ex_freq, "Ex-Freq"),
      require_external(m),
  };
}

}  // namespace

std::vector<CascadeSpec> enumerate_combinations(const ModelSet& models) {
  const auto mle = require_mle(models);
  const auto lex = require_lex(models);
  const std::vector<std::vector<Layer>> prefixes = {{mle}, {mle, lex}, {lex}, {lex, mle}};
  const auto tails = finals(models);
  std::vector<CascadeSpec> out;
  out.reserve(prefixes.size() * tails.size());
  for (const auto& prefix : prefixes)
    for (const auto& tail : tails) {
      auto layers = prefix;
      layers.push_back(tail);
      out.push_back(make_cascade(std::move(layers)));
    }
  return out;
}

std::vector<CascadeSpec> standalone_models(const ModelSet& models) {
  std::vector<CascadeSpec> out;
  for (auto& tail : finals(models)) {
    std::string name;
    if (const auto* d = std::get_if<DefaultLayer>(&tail.tagger))
      name = "Default level " + to_string(d->level);
    else
      name = layer_label(tail);
    out.push_back(make_cascade({tail}, name));
  }
  return out;
}

CascadeSpec tuned_best_cascade(const ModelSet& models, double min_prob) {
  auto mle = require_mle(models, min_prob);
  mle.label = "Tuned-MLE";
  return make_cascade({mle, require_lex(models), require_external(models)});
}

}  // namespace leveler
