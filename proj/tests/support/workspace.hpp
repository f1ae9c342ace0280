#pragma once

// A small on-disk model workspace: training and dev corpora, frequency list,
// lexicon, analyzer table and subword predictions covering every dev word,
// plus MLE and bin tables built through the command layer.

#include <sstream>
#include <string>

#include "commands.hpp"
#include "support/fixtures.hpp"

namespace leveler::testing {

struct Workspace {
  TempDir dir;
  std::string train, dev, freq, lexicon, analyzer, predictions;
  std::string mle, dist_freq, ex_freq;

  explicit Workspace(std::uint64_t seed = 1, std::size_t train_frags = 120, std::size_t dev_frags = 40) {
    Rng rng(seed);
    const std::size_t vocab = 60;
    auto train_c = random_corpus(rng, train_frags, 8, vocab);
    auto dev_c = random_corpus(rng, dev_frags, 8, vocab + 20);  // some dev words are unseen
    for (auto& f : dev_c.fragments) f.doc_id = "dev" + f.doc_id;
    train = dir.write("train.tsv", write_labeled_text(train_c));
    dev = dir.write("dev.tsv", write_labeled_text(dev_c));

    std::ostringstream fr, lx, an, pr;
    for (std::size_t i = 0; i < vocab + 10; ++i) fr << 't' << i << '\t' << 1 + (i * 7919) % 997 << '\n';
    for (std::size_t i = 0; i < vocab + 20; i += 3) lx << "lem" << i << "\tn\t" << 1 + i % 5 << '\n';
    for (std::size_t i = 0; i < vocab + 20; i += 2) {
      an << 't' << i << "\tlem" << i << "\tn\t-0.5\n";
      an << 't' << i << "\tlem" << i + 1 << "\tv\t-2\n";
    }
    for (const auto& f : dev_c.fragments)
      for (std::size_t w = 0; w < f.tokens.size(); ++w)
        for (std::size_t s = 0; s < 1 + w % 2; ++s)
          pr << f.doc_id << '\t' << f.frag_id << '\t' << w << '\t' << s << '\t' << 3 + (w + s) % 3 << '\n';
    freq = dir.write("freq.tsv", fr.str());
    lexicon = dir.write("lexicon.tsv", lx.str());
    analyzer = dir.write("analyzer.tsv", an.str());
    predictions = dir.write("preds.tsv", pr.str());

    mle = dir.file("mle.tsv");
    dist_freq = dir.file("dist.tsv");
    ex_freq = dir.file("ex.tsv");
    std::ostringstream out, err;
    cli::BuildOptions b;
    b.train = train;
    b.freq = freq;
    b.kind = "mle", b.out = mle;
    check(cli::cmd_build(b, out, err), err);
    b.kind = "dist-freq", b.out = dist_freq;
    check(cli::cmd_build(b, out, err), err);
    b.kind = "ex-freq", b.out = ex_freq, b.bins = 20;
    check(cli::cmd_build(b, out, err), err);
  }

  cli::RunConfig run(const std::string& cascade = {}) const {
    cli::RunConfig r;
    r.models.mle = mle;
    r.models.lexicon = lexicon;
    r.models.analyzer = analyzer;
    r.models.dist_freq = dist_freq;
    r.models.ex_freq = ex_freq;
    r.models.predictions = predictions;
    r.cascade = cascade;
    r.format = ReportFormat::tsv;
    return r;
  }

 private:
  static void check(int status, const std::ostringstream& err) {
    if (status != 0) throw Error("workspace build failed: " + err.str());
  }
};

}  // namespace leveler::testing
