#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "leveler/cascade.hpp"
#include "support/fixtures.hpp"

using namespace leveler;
using testing::make_fragment;

namespace {

struct Models {
  std::shared_ptr<MleTable> mle = std::make_shared<MleTable>();
  std::shared_ptr<Lexicon> lex = std::make_shared<Lexicon>();
  std::shared_ptr<AnalyzerTable> an = std::make_shared<AnalyzerTable>();
  std::shared_ptr<PredictionMap> preds = std::make_shared<PredictionMap>();
  std::shared_ptr<BinTable> dist;
  std::shared_ptr<BinTable> ex;

  Models() {
    mle->add("known", Level::L4);
    mle->add("noisy", Level::L3, 3);
    mle->add("noisy", Level::L5, 2);
    an->add("lexword", {"lemma", "n", -0.1});
    an->add("known", {"lemma", "n", -0.1});
    lex->add("lemma", "n", Level::L5);
    const FrequencyList freq({{"known", 50}, {"lexword", 10}, {"other", 1}});
    dist = std::make_shared<BinTable>(build_dist_freq(freq, {0.8, 0.15, 0.05}));
    LabeledCorpus train;
    train.fragments.push_back(make_fragment("t", "1", {"known", "other"}, {3, 4}));
    ex = std::make_shared<BinTable>(build_ex_freq(freq, train, 3));
  }

  ModelSet set() const { return {mle, lex, an, dist, ex, preds, "BERT"}; }
  Layer mle_layer(double p = 0.0) const { return {MleLayer{mle, p, 0}, ""}; }
  Layer lex_layer() const { return {LexLayer{lex, an, kTopAnalysisEpsilon}, ""}; }
  static Layer def(Level l) { return {DefaultLayer{l}, ""}; }
};

}  // namespace

TEST_CASE("first non-abstaining layer decides") {
  Models m;
  const auto spec = make_cascade({m.mle_layer(), m.lex_layer(), Models::def(Level::L3)});
  const auto f = make_fragment("d", "1", {"known", "lexword", "nothing"});
  CHECK(tag_word(spec, f, 0) == WordDecision{Level::L4, 0});  // Lex would say 5
  CHECK(tag_word(spec, f, 1) == WordDecision{Level::L5, 1});
  CHECK(tag_word(spec, f, 2) == WordDecision{Level::L3, 2});
}

TEST_CASE("fragment level is the highest word level") {
  Models m;
  const auto spec = make_cascade({m.mle_layer(), m.lex_layer(), Models::def(Level::L3)});
  CHECK(tag_fragment(spec, make_fragment("d", "1", {"a", "b"})).fragment_level == Level::L3);
  const auto t = tag_fragment(spec, make_fragment("d", "2", {"x", "lexword", "known"}));
  CHECK(t.words[0].level == Level::L3);
  CHECK(t.words[1].level == Level::L5);
  CHECK(t.words[2].level == Level::L4);
  CHECK(t.fragment_level == Level::L5);
  CHECK(tag_fragment(spec, make_fragment("d", "3", {"known"})).fragment_level == Level::L4);
  CHECK_THROWS_AS(tag_fragment(spec, Fragment{"d", "4", {}, std::nullopt}), Error);
}

TEST_CASE("validation of cascade specs") {
  Models m;
  CHECK_THROWS_AS(make_cascade({}).validate(), Error);
  CHECK_THROWS_AS(make_cascade({m.mle_layer()}).validate(), Error);
  CHECK_THROWS_AS(make_cascade({Models::def(Level::L3), m.lex_layer()}).validate(), Error);
  CHECK_THROWS_AS(make_cascade({Layer{MleLayer{nullptr, 0, 0}, ""}, Models::def(Level::L3)}).validate(),
                  Error);
  CHECK_NOTHROW(make_cascade({m.mle_layer(), Layer{ExternalLayer{m.preds}, ""}}).validate());
  CHECK(is_total(Models::def(Level::L4)));
  CHECK(is_total(Layer{FreqLayer{m.dist}, ""}));
  CHECK_FALSE(is_total(m.mle_layer()));
}

TEST_CASE("an external final layer must cover every word that reaches it") {
  Models m;
  m.preds->add({"d", "1"}, 1, Level::L4);
  const auto spec = make_cascade({m.mle_layer(), Layer{ExternalLayer{m.preds}, ""}});
  const auto ok = tag_fragment(spec, make_fragment("d", "1", {"known", "x"}));
  CHECK(ok.words[1] == WordDecision{Level::L4, 1});
  CHECK_THROWS_AS(tag_word(spec, make_fragment("d", "1", {"x", "y"}), 0), Error);
  // prediction index beyond the fragment
  m.preds->add({"d", "2"}, 5, Level::L4);
  CHECK_THROWS_AS(tag_fragment(spec, make_fragment("d", "2", {"known"})), Error);
}

TEST_CASE("cascade names and layer labels") {
  Models m;
  const auto spec = make_cascade({m.mle_layer(0.85), m.lex_layer(), Layer{ExternalLayer{m.preds}, ""}});
  CHECK(spec.arrow_name() == "Tuned-MLE → Lex → BERT");
  CHECK(layer_label(Layer{FreqLayer{m.dist}, ""}) == "Dist-Freq");
  CHECK(layer_label(Layer{FreqLayer{m.ex}, ""}) == "Ex-Freq");
  CHECK(layer_label(Models::def(Level::L4)) == "L4");
  CHECK(layer_label(Layer{DefaultLayer{Level::L3}, "custom"}) == "custom");
}

TEST_CASE("the 24 combinations") {
  Models m;
  const auto combos = enumerate_combinations(m.set());
  CHECK(combos.size() == 24);
  std::set<std::string> names;
  for (const auto& c : combos) {
    names.insert(c.name);
    CHECK(c.name == c.arrow_name());
    CHECK_NOTHROW(c.validate());
  }
  CHECK(names.size() == 24);
  CHECK(names.count("MLE → Lex → BERT") == 1);
  CHECK(names.count("Lex → Dist-Freq") == 1);
  CHECK(names.count("Lex → MLE → Ex-Freq") == 1);
  CHECK(names.count("MLE → L3") == 1);
  CHECK(combos.front().name == "MLE → L3");
  CHECK(combos.back().name == "Lex → MLE → BERT");

  auto partial = m.set();
  partial.ex_freq.reset();
  CHECK_THROWS_WITH_AS(enumerate_combinations(partial), doctest::Contains("Ex-Freq"), Error);

  const auto solo = standalone_models(m.set());
  REQUIRE(solo.size() == 6);
  CHECK(solo[0].name == "Default level 3");
  CHECK(solo[5].name == "BERT");
  CHECK(tuned_best_cascade(m.set(), 0.85).name == "Tuned-MLE → Lex → BERT");
}

TEST_CASE("tagging is deterministic and layer additions only refine abstentions") {
  Models m;
  testing::Rng rng(13);
  auto corpus = testing::random_corpus(rng, 40, 6, 20);
  corpus.fragments[0].tokens[0].surface = "known";
  corpus.fragments[1].tokens[0].surface = "lexword";
  const auto shorter = make_cascade({m.mle_layer(), Models::def(Level::L5)});
  const auto longer = make_cascade({m.mle_layer(), m.lex_layer(), Models::def(Level::L5)});
  const auto a = tag_corpus(longer, corpus);
  CHECK(a == tag_corpus(longer, corpus));

  const auto s = tag_corpus(shorter, corpus);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a[i].words.size(); ++k) {
      // a word the shorter cascade decided at layer 0 is decided identically
      if (s[i].words[k].layer == 0) CHECK(a[i].words[k] == s[i].words[k]);
      // fragment level equals the max over its words
    }
  for (const auto& t : a) {
    Level mx = Level::L3;
    for (const auto& w : t.words) mx = std::max(mx, w.level);
    CHECK(t.fragment_level == mx);
  }
}

TEST_CASE("apply_traces and traces_from_corpus are inverse views") {
  Models m;
  testing::Rng rng(1);
  const auto corpus = testing::random_corpus(rng, 20, 5, 10);
  const auto spec = make_cascade({m.mle_layer(), Models::def(Level::L4)});
  const auto traces = tag_corpus(spec, corpus);
  const auto predicted = apply_traces(corpus, traces);
  const auto back = traces_from_corpus(predicted);
  REQUIRE(back.size() == traces.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].fragment_level == traces[i].fragment_level);
    for (std::size_t k = 0; k < back[i].words.size(); ++k) CHECK(back[i].words[k].level == traces[i].words[k].level);
  }
  CHECK_THROWS_AS(apply_traces(corpus, {}), Error);
}

TEST_CASE("trace files round trip byte for byte") {
  Models m;
  testing::Rng rng(6);
  const auto corpus = testing::random_corpus(rng, 25, 5, 15);
  const auto spec = make_cascade({m.mle_layer(), m.lex_layer(), Models::def(Level::L3)}, "mine");
  TraceFile file{spec.name, {"MLE", "Lex", "L3"}, tag_corpus(spec, corpus)};
  std::ostringstream out;
  write_traces(file, out);
  std::istringstream in(out.str());
  const auto back = read_traces(in);
  CHECK(back == file);
  std::ostringstream again;
  write_traces(back, again);
  CHECK(again.str() == out.str());

  std::istringstream bad("cascade\tx\nlayers\t1\nlayer\t0\tL3\nd\tf\t0\t3\t4\n");
  CHECK_THROWS_AS(read_traces(bad), ParseError);
  std::istringstream gap("cascade\tx\nlayers\t1\nlayer\t0\tL3\nd\tf\t1\t3\t0\n");
  CHECK_THROWS_AS(read_traces(gap), ParseError);
}
