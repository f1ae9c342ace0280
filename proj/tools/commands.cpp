#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "leveler/alignment.hpp"
#include "leveler/text.hpp"
#include "leveler/tuning.hpp"

namespace leveler::cli {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

ReportFormat parse_format(const std::string& v) {
  if (v == "text") return ReportFormat::text;
  if (v == "tsv") return ReportFormat::tsv;
  throw Error("format must be 'text' or 'tsv', got '" + v + "'");
}

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "on" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "off" || v == "false" || v == "no") return false;
  throw Error("expected on/off, got '" + v + "'");
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    err << "leveler: error: " << e.what() << '\n';
    return 1;
  }
}

LabeledCorpus strip_levels(LabeledCorpus c) {
  for (auto& f : c.fragments) {
    f.gold.reset();
    for (auto& t : f.tokens) t.gold.reset();
  }
  return c;
}

ParallelCorpus zip_versions(const DeriveOptions& opt) {
  ParseOptions po;
  po.normalize = opt.normalize;
  const auto orig = strip_levels(read_labeled_file(opt.original, po));
  const auto l4 = strip_levels(read_labeled_file(opt.level4, po));
  const auto l3 = strip_levels(read_labeled_file(opt.level3, po));
  if (orig.fragments.size() != l4.fragments.size() || orig.fragments.size() != l3.fragments.size())
    throw Error("version files have different record counts (" +
                std::to_string(orig.fragments.size()) + ", " +
                std::to_string(l4.fragments.size()) + ", " + std::to_string(l3.fragments.size()) +
                ")");
  ParallelCorpus pc;
  for (std::size_t i = 0; i < orig.fragments.size(); ++i) {
    const auto& o = orig.fragments[i];
    for (const auto* v : {&l4.fragments[i], &l3.fragments[i]}) {
      if (v->doc_id != o.doc_id || v->frag_id != o.frag_id)
        throw Error("record " + std::to_string(i + 1) + " (" + o.doc_id + "/" + o.frag_id +
                    "): mismatched ids across versions (" + v->doc_id + "/" + v->frag_id + ")");
    }
    pc.fragments.push_back({o, l4.fragments[i], l3.fragments[i]});
  }
  return pc;
}

std::string stem(const std::string& path) { return std::filesystem::path(path).filename().string(); }

}  // namespace

std::vector<double> parse_number_list(const std::string& text_in) {
  std::vector<double> out;
  for (auto piece : text::split(text_in, ',')) {
    const auto t = trim(piece);
    if (t.empty()) continue;
    const auto v = text::parse_double(t);
    if (!v) throw Error("not a number: '" + t + "'");
    out.push_back(*v);
  }
  return out;
}

void apply_config_file(const std::string& path, RunConfig& cfg,
                       const std::vector<std::string>& set_on_command_line) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  auto flagged = [&](const std::string& key) {
    return std::find(set_on_command_line.begin(), set_on_command_line.end(), key) !=
           set_on_command_line.end();
  };
  std::string line;
  std::size_t line_no = 0;
  while (text::read_line(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(path + ": expected key = value", line_no);
    const auto key = trim(t.substr(0, eq));
    const auto value = trim(t.substr(eq + 1));
    if (flagged(key)) continue;
    auto& m = cfg.models;
    if (key == "mle") m.mle = value;
    else if (key == "lexicon") m.lexicon = value;
    else if (key == "analyzer") m.analyzer = value;
    else if (key == "dist_freq") m.dist_freq = value;
    else if (key == "ex_freq") m.ex_freq = value;
    else if (key == "predictions") m.predictions = value;
    else if (key == "lexicon_pos") m.lexicon_pos_sensitive = parse_bool(value);
    else if (key == "data_dir") m.data_dir = value;
    else if (key == "cascade") cfg.cascade = value;
    else if (key == "cascades") cfg.cascades_file = value;
    else if (key == "format") cfg.format = parse_format(value);
    else if (key == "normalize") cfg.normalize = parse_bool(value);
    else if (key == "seed") {
      const auto v = text::parse_uint(value);
      if (!v) throw ParseError(path + ": seed must be a non-negative integer", line_no);
      cfg.seed = *v;
    } else {
      throw ParseError(path + ": unknown key '" + key + "'", line_no);
    }
  }
}

std::string describe(const RunConfig& cfg) {
  std::ostringstream s;
  const auto& m = cfg.models;
  auto show = [&](const char* k, const std::string& v) {
    s << "  " << k << " = " << (v.empty() ? "-" : v) << '\n';
  };
  s << "effective config:\n";
  show("cascade", cfg.cascade);
  show("cascades", cfg.cascades_file);
  show("mle", m.mle);
  show("lexicon", m.lexicon);
  show("lexicon_pos", m.lexicon_pos_sensitive ? "on" : "off");
  show("analyzer", m.analyzer);
  show("dist_freq", m.dist_freq);
  show("ex_freq", m.ex_freq);
  show("predictions", m.predictions);
  show("data_dir", m.data_dir);
  show("format", cfg.format == ReportFormat::tsv ? "tsv" : "text");
  show("normalize", cfg.normalize ? "on" : "off");
  show("seed", std::to_string(cfg.seed));
  return s.str();
}

CascadeSpec resolve_cascade(const RunConfig& cfg, ModelLoader& loader) {
  if (cfg.cascade.empty()) throw Error("no cascade given (use --cascade)");
  if (!cfg.cascades_file.empty()) {
    std::ifstream in(loader.locate(cfg.cascades_file));
    if (!in) throw Error("cannot open cascades file " + cfg.cascades_file);
    for (const auto& c : parse_cascade_file(in))
      if (c.name == cfg.cascade) return loader.resolve(c);
  }
  if (const auto* b = builtin_cascade(cfg.cascade)) return loader.resolve(*b);
  return loader.resolve(parse_cascade_expr(cfg.cascade));
}

int cmd_derive_labels(const DeriveOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const bool three = !opt.original.empty() || !opt.level4.empty() || !opt.level3.empty();
    if (three == !opt.parallel.empty())
      throw Error("give either a parallel corpus file or --original/--level4/--level3");
    if (three && (opt.original.empty() || opt.level4.empty() || opt.level3.empty()))
      throw Error("--original, --level4 and --level3 must be given together");
    if (opt.out.empty()) throw Error("missing output path");

    ParseOptions po;
    po.normalize = opt.normalize;
    const auto parallel = three ? zip_versions(opt) : read_parallel_file(opt.parallel, po);
    const auto labeled = derive_labels(parallel);
    auto sink = open_out(opt.out);
    write_labeled(labeled, sink);

    const std::pair<std::string, LevelDistribution> row{stem(opt.out), corpus_stats(labeled)};
    out << format_distribution({&row, 1}, ReportFormat::text);
    return 0;
  });
}

int cmd_build(const BuildOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.out.empty()) throw Error("missing output path");
    auto need = [](const std::string& p, const char* flag) {
      if (p.empty()) throw Error(std::string("missing input ") + flag);
      return p;
    };
    if (opt.kind == "mle") {
      const auto train = read_labeled_file(need(opt.train, "--train"));
      if (train.token_count() == 0) throw Error("training corpus is empty");
      const auto table = build_mle(train);
      auto sink = open_out(opt.out);
      write_mle(table, sink);
      out << "mle: " << table.size() << " types, "
          << text::format_percent(100.0 * table.single_level_fraction())
          << "% with a single level\n";
    } else if (opt.kind == "dist-freq") {
      const auto freq = load_frequency_list_file(need(opt.freq, "--freq"));
      std::array<double, kNumLevels> fractions{};
      if (opt.fractions) {
        fractions = *opt.fractions;
      } else {
        const auto train = read_labeled_file(need(opt.train, "--train (or --fractions)"));
        if (train.token_count() == 0) throw Error("training corpus is empty");
        fractions = token_fractions(train);
      }
      const auto bins = build_dist_freq(freq, fractions, opt.mass);
      auto sink = open_out(opt.out);
      write_bins(bins, sink);
      out << "dist-freq: " << freq.size() << " types; fractions";
      for (double f : fractions) out << ' ' << text::format_percent(100.0 * f) << '%';
      out << '\n';
    } else if (opt.kind == "ex-freq") {
      const auto freq = load_frequency_list_file(need(opt.freq, "--freq"));
      const auto train = read_labeled_file(need(opt.train, "--train"));
      const auto bins = build_ex_freq(freq, train, opt.bins);
      auto sink = open_out(opt.out);
      write_bins(bins, sink);
      out << "ex-freq: " << freq.size() << " types in " << bins.bins().size() << " bins (requested "
          << opt.bins << ")\n";
    } else {
      throw Error("unknown model kind '" + opt.kind + "' (mle, dist-freq, ex-freq)");
    }
    return 0;
  });
}

int cmd_tag(const TagOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    err << describe(opt.run);
    if (opt.out.empty()) throw Error("missing output path");
    ModelLoader loader(opt.run.models);
    const auto spec = resolve_cascade(opt.run, loader);

    ParseOptions po;
    po.normalize = opt.run.normalize;
    const auto corpus = read_labeled_file(loader.locate(opt.corpus), po);
    const auto traces = tag_corpus(spec, corpus);

    auto sink = open_out(opt.out);
    write_labeled(apply_traces(corpus, traces), sink);

    TraceFile tf{spec.name, {}, traces};
    for (const auto& l : spec.layers) tf.layers.push_back(layer_label(l));
    auto trace_sink = open_out(opt.trace.empty() ? opt.out + ".trace.tsv" : opt.trace);
    write_traces(tf, trace_sink);

    out << "tagged " << corpus.fragments.size() << " fragments, " << corpus.token_count()
        << " tokens with " << spec.name << '\n';
    return 0;
  });
}

int cmd_evaluate(const EvaluateOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto pred = read_labeled_file(opt.pred);
    const auto gold = read_labeled_file(opt.gold);
    const auto traces = traces_from_corpus(pred);
    ReportRow row{stem(opt.pred), evaluate(traces, gold, Granularity::word),
                  evaluate(traces, gold, Granularity::fragment)};
    out << format_report_rows({&row, 1}, opt.format);

    if (opt.layers) {
      if (opt.trace.empty()) throw Error("--layers needs --trace");
      std::ifstream in(opt.trace, std::ios::binary);
      if (!in) throw Error("cannot open " + opt.trace);
      const auto tf = read_traces(in);
      const auto d = layer_decomposition(tf.traces, gold, tf.layers.size());
      out << '\n' << format_layer_decomposition(d, tf.layers, opt.format);
    }
    if (opt.error_combos) out << '\n' << format_error_combinations(error_combinations(traces, gold), opt.format);
    return 0;
  });
}

int cmd_tune(const TuneOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    err << describe(opt.run);
    ModelLoader loader(opt.run.models);
    const auto spec = resolve_cascade(opt.run, loader);
    ParseOptions po;
    po.normalize = opt.run.normalize;
    const auto dev = read_labeled_file(loader.locate(opt.dev), po);
    const auto grid = opt.grid.empty() ? default_threshold_grid() : opt.grid;
    const auto result = tune_mle_threshold(spec, dev, grid);

    const bool tsv = opt.run.format == ReportFormat::tsv;
    out << (tsv ? "threshold\tword_f1\n" : "threshold  word F1\n");
    for (const auto& s : result.scores) {
      if (tsv)
        out << text::format_double(s.threshold) << '\t' << text::format_double(s.macro_f1) << '\n';
      else
        out << std::string(9 - std::min<std::size_t>(9, text::format_double(s.threshold).size()), ' ')
            << text::format_double(s.threshold) << "  " << text::format_percent(s.macro_f1) << '\n';
    }
    out << (tsv ? "selected\t" : "selected threshold: ") << text::format_double(result.best) << '\n';
    return 0;
  });
}

int cmd_combos(const CombosOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    err << describe(opt.run);
    ModelLoader loader(opt.run.models);
    const auto models = loader.model_set();
    ParseOptions po;
    po.normalize = opt.run.normalize;
    const auto dev = read_labeled_file(loader.locate(opt.dev), po);

    auto specs = standalone_models(models);
    for (auto& s : enumerate_combinations(models)) specs.push_back(std::move(s));
    if (opt.tuned_threshold) specs.push_back(tuned_best_cascade(models, *opt.tuned_threshold));

    std::vector<ReportRow> rows;
    rows.reserve(specs.size());
    for (const auto& spec : specs) {
      const auto traces = tag_corpus(spec, dev);
      rows.push_back({spec.name, evaluate(traces, dev, Granularity::word),
                      evaluate(traces, dev, Granularity::fragment)});
    }
    out << format_report_rows(rows, opt.run.format);
    return 0;
  });
}

int cmd_stats(const StatsOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.corpora.empty()) throw Error("no corpus given");
    std::vector<std::pair<std::string, LevelDistribution>> rows;
    LevelDistribution total;
    ParseOptions po;
    po.normalize = opt.normalize;
    for (const auto& path : opt.corpora) {
      const auto d = corpus_stats(read_labeled_file(path, po));
      for (std::size_t i = 0; i < kNumLevels; ++i) {
        total.token_counts[i] += d.token_counts[i];
        total.fragment_counts[i] += d.fragment_counts[i];
      }
      rows.emplace_back(stem(path), d);
    }
    if (rows.size() > 1) rows.emplace_back("Total", total);
    out << format_distribution(rows, opt.format);
    return 0;
  });
}

}  // namespace leveler::cli
