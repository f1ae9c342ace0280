// leveler: derive, build, tag, evaluate and tune readability-level taggers.

#include <algorithm>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using namespace leveler;
using namespace leveler::cli;

// Model-path and cascade flags shared by tag, tune and combos.
struct ModelFlags {
  RunConfig run;
  std::string config;
  std::string format = "text";
  std::string lexicon_pos = "on";
  std::vector<CLI::Option*> options;

  void add_to(CLI::App& app, bool with_cascade) {
    auto& m = run.models;
    options.push_back(app.add_option("--config", config, "key = value run configuration file"));
    options.push_back(app.add_option("--mle", m.mle, "MLE table (from `build mle`)")->option_text("FILE"));
    options.push_back(app.add_option("--lexicon", m.lexicon, "lexicon TSV: lemma, pos, level"));
    options.push_back(app.add_option("--lexicon-pos", lexicon_pos, "match lexicon on lemma+POS (on/off)"));
    options.push_back(app.add_option("--analyzer", m.analyzer, "analyzer TSV: surface, lemma, pos, logprob"));
    options.push_back(app.add_option("--dist-freq", m.dist_freq, "Dist-Freq bin table"));
    options.push_back(app.add_option("--ex-freq", m.ex_freq, "Ex-Freq bin table"));
    options.push_back(app.add_option("--predictions", m.predictions, "subword predictions TSV"));
    options.push_back(app.add_option("--data-dir", m.data_dir, "fallback directory for relative paths")
                          ->envname("LEVELER_DATA_DIR"));
    options.push_back(app.add_option("--format", format, "text or tsv"));
    options.push_back(app.add_option("--seed", run.seed, "seed for sampling utilities"));
    options.push_back(app.add_flag("--normalize", run.normalize, "fold Alef/Ya/Ta-marbuta variants"));
    if (with_cascade) {
      options.push_back(app.add_option("--cascade", run.cascade,
                                       "cascade name (default3/4/5 or from --cascades) or expression"));
      options.push_back(app.add_option("--cascades", run.cascades_file, "file of `name = expr` cascades"));
    }
  }

  // Flag > config file > default.
  void finalize() {
    std::vector<std::string> set;
    for (auto* o : options) {
      if (o->count() == 0) continue;
      auto name = o->get_name();
      while (!name.empty() && name.front() == '-') name.erase(name.begin());
      for (auto& c : name)
        if (c == '-') c = '_';
      set.push_back(name);
    }
    if (!run.models.data_dir.empty()) set.push_back("data_dir");
    const bool fmt_flag = std::find(set.begin(), set.end(), "format") != set.end();
    const bool pos_flag = std::find(set.begin(), set.end(), "lexicon_pos") != set.end();
    if (pos_flag) run.models.lexicon_pos_sensitive = lexicon_pos != "off" && lexicon_pos != "0";
    if (fmt_flag) run.format = format == "tsv" ? ReportFormat::tsv : ReportFormat::text;
    if (!config.empty()) apply_config_file(config, run, set);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"leveler: word and fragment readability leveling toolkit"};
  app.require_subcommand(1);

  // derive-labels
  DeriveOptions derive;
  auto* derive_cmd = app.add_subcommand("derive-labels", "label original words from parallel simplifications");
  derive_cmd->add_option("parallel", derive.parallel, "parallel corpus: doc, frag, original, level4, level3");
  derive_cmd->add_option("--original", derive.original, "original fragments (labeled-corpus layout)");
  derive_cmd->add_option("--level4", derive.level4, "level-4 simplification, same records");
  derive_cmd->add_option("--level3", derive.level3, "level-3 simplification, same records");
  derive_cmd->add_option("-o,--out", derive.out, "output labeled corpus")->required();
  derive_cmd->add_flag("--normalize", derive.normalize, "fold Alef/Ya/Ta-marbuta variants");

  // build
  BuildOptions build;
  std::string fractions, mass = "tokens";
  auto* build_cmd = app.add_subcommand("build", "build an MLE table or frequency bin table");
  build_cmd->add_option("kind", build.kind, "mle, dist-freq or ex-freq")
      ->required()
      ->check(CLI::IsMember({"mle", "dist-freq", "ex-freq"}));
  build_cmd->add_option("--train", build.train, "labeled training corpus");
  build_cmd->add_option("--freq", build.freq, "frequency list TSV: type, count");
  build_cmd->add_option("--bins", build.bins, "Ex-Freq bin count")->check(CLI::PositiveNumber);
  build_cmd->add_option("--fractions", fractions, "Dist-Freq level fractions f3,f4,f5 (default: from --train)");
  build_cmd->add_option("--mass", mass, "Dist-Freq mass: tokens or types")
      ->check(CLI::IsMember({"tokens", "types"}));
  build_cmd->add_option("-o,--out", build.out, "output table")->required();

  // tag
  TagOptions tag;
  ModelFlags tag_flags;
  auto* tag_cmd = app.add_subcommand("tag", "tag a corpus with a cascade");
  tag_flags.add_to(*tag_cmd, true);
  tag_cmd->add_option("corpus", tag.corpus, "corpus to tag (labels, if any, are replaced)")->required();
  tag_cmd->add_option("-o,--out", tag.out, "output labeled corpus")->required();
  tag_cmd->add_option("--trace", tag.trace, "per-word trace TSV (default: OUT.trace.tsv)");

  // evaluate
  EvaluateOptions ev;
  std::string ev_format = "text";
  auto* eval_cmd = app.add_subcommand("evaluate", "score predictions against gold labels");
  eval_cmd->add_option("pred", ev.pred, "predicted labeled corpus")->required();
  eval_cmd->add_option("gold", ev.gold, "gold labeled corpus")->required();
  eval_cmd->add_option("--trace", ev.trace, "trace TSV written by `tag`");
  eval_cmd->add_flag("--layers", ev.layers, "per-layer decision and error breakdown (needs --trace)");
  eval_cmd->add_flag("--error-combos", ev.error_combos, "fragment/word error combinations");
  eval_cmd->add_option("--format", ev_format, "text or tsv")->check(CLI::IsMember({"text", "tsv"}));

  // tune
  TuneOptions tune;
  ModelFlags tune_flags;
  std::string grid;
  auto* tune_cmd = app.add_subcommand("tune", "pick the MLE back-off threshold on a dev set");
  tune_flags.add_to(*tune_cmd, true);
  tune_cmd->add_option("--dev", tune.dev, "labeled dev corpus")->required();
  tune_cmd->add_option("--grid", grid, "comma-separated thresholds (default 0.5,0.55,...,1)");

  // combos
  CombosOptions combos;
  ModelFlags combos_flags;
  double tuned = -1.0;
  auto* combos_cmd = app.add_subcommand("combos", "evaluate every standalone model and layered combination");
  combos_flags.add_to(*combos_cmd, false);
  combos_cmd->add_option("--dev", combos.dev, "labeled dev corpus")->required();
  combos_cmd->add_option("--tuned-threshold", tuned, "add a Tuned-MLE → Lex → BERT row")
      ->check(CLI::Range(0.0, 1.0));

  // stats
  StatsOptions stats;
  std::string stats_format = "text";
  auto* stats_cmd = app.add_subcommand("stats", "token and fragment level distributions");
  stats_cmd->add_option("corpora", stats.corpora, "labeled corpora")->required();
  stats_cmd->add_option("--format", stats_format, "text or tsv")->check(CLI::IsMember({"text", "tsv"}));
  stats_cmd->add_flag("--normalize", stats.normalize, "fold Alef/Ya/Ta-marbuta variants");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*derive_cmd) return cmd_derive_labels(derive, std::cout, std::cerr);
    if (*build_cmd) {
      if (!fractions.empty()) {
        const auto v = parse_number_list(fractions);
        if (v.size() != kNumLevels) throw Error("--fractions needs three values");
        build.fractions = std::array<double, kNumLevels>{v[0], v[1], v[2]};
      }
      build.mass = mass == "types" ? DistMass::types : DistMass::tokens;
      return cmd_build(build, std::cout, std::cerr);
    }
    if (*tag_cmd) {
      tag_flags.finalize();
      tag.run = tag_flags.run;
      return cmd_tag(tag, std::cout, std::cerr);
    }
    if (*eval_cmd) {
      ev.format = ev_format == "tsv" ? ReportFormat::tsv : ReportFormat::text;
      return cmd_evaluate(ev, std::cout, std::cerr);
    }
    if (*tune_cmd) {
      tune_flags.finalize();
      tune.run = tune_flags.run;
      if (!grid.empty()) tune.grid = parse_number_list(grid);
      return cmd_tune(tune, std::cout, std::cerr);
    }
    if (*combos_cmd) {
      combos_flags.finalize();
      combos.run = combos_flags.run;
      if (tuned >= 0.0) combos.tuned_threshold = tuned;
      return cmd_combos(combos, std::cout, std::cerr);
    }
    if (*stats_cmd) {
      stats.format = stats_format == "tsv" ? ReportFormat::tsv : ReportFormat::text;
      return cmd_stats(stats, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "leveler: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
