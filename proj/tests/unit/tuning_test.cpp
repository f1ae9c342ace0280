#include "doctest.h"
#include "leveler/tuning.hpp"
#include "support/fixtures.hpp"

using namespace leveler;
using testing::make_fragment;

namespace {

struct Setup {
  std::shared_ptr<MleTable> mle = std::make_shared<MleTable>();
  std::shared_ptr<Lexicon> lex = std::make_shared<Lexicon>();
  std::shared_ptr<AnalyzerTable> an = std::make_shared<AnalyzerTable>();
  LabeledCorpus dev;

  // "noisy" was seen 3x as L3 and 2x as L5 in training (p = 0.6), but the
  // lexicon knows it as L5, and in dev it is always L5. Every other dev word
  // is a clean MLE hit.
  Setup() {
    mle->add("noisy", Level::L3, 3);
    mle->add("noisy", Level::L5, 2);
    for (int i = 0; i < 4; ++i) {
      mle->add("easy" + std::to_string(i), Level::L3, 5);
      mle->add("mid" + std::to_string(i), Level::L4, 5);
    }
    an->add("noisy", {"noise", "n", -0.1});
    lex->add("noise", "n", Level::L5);
    for (int i = 0; i < 4; ++i)
      dev.fragments.push_back(make_fragment("d", std::to_string(i),
                                            {"easy" + std::to_string(i), "mid" + std::to_string(i), "noisy",
                                             "easy" + std::to_string((i + 1) % 4), "mid" + std::to_string((i + 2) % 4)},
                                            {3, 4, 5, 3, 4}));
  }

  CascadeSpec tmpl() const {
    return make_cascade({Layer{MleLayer{mle, 0.0, 0}, ""}, Layer{LexLayer{lex, an, kTopAnalysisEpsilon}, ""},
                         Layer{DefaultLayer{Level::L3}, ""}});
  }
};

}  // namespace

TEST_CASE("default grid runs from 0.50 to 1.00 in steps of 0.05") {
  const auto g = default_threshold_grid();
  REQUIRE(g.size() == 11);
  CHECK(g.front() == 0.5);
  CHECK(g[7] == 0.85);
  CHECK(g.back() == 1.0);
}

TEST_CASE("threshold 0.85 beats 0.0 on a 20-token dev set") {
  Setup s;
  CHECK(s.dev.token_count() == 20);
  const std::vector<double> cands{0.0, 0.85};
  const auto r = tune_mle_threshold(s.tmpl(), s.dev, cands);
  REQUIRE(r.scores.size() == 2);
  // Independent evaluation: at 0.0 the 4 "noisy" tokens are tagged L3 and
  // nothing is predicted L5; at 0.85 MLE abstains and the lexicon is right.
  // 0.0: L3 P=8/12 R=1 -> 0.8; L4 1.0; L5 0.  macro 60
  CHECK(r.scores[0].macro_f1 == doctest::Approx(60.0));
  CHECK(r.scores[1].macro_f1 == doctest::Approx(100.0));
  CHECK(r.best == 0.85);
}

TEST_CASE("singleton and tied candidates") {
  Setup s;
  const std::vector<double> one{0.0};
  CHECK(tune_mle_threshold(s.tmpl(), s.dev, one).best == 0.0);
  // 0.7 and 0.9 both make MLE abstain on "noisy" only: identical scores.
  const std::vector<double> tied{0.9, 0.7};
  const auto r = tune_mle_threshold(s.tmpl(), s.dev, tied);
  CHECK(r.scores[0].threshold == 0.7);
  CHECK(r.scores[0].macro_f1 == r.scores[1].macro_f1);
  CHECK(r.best == 0.7);
}

TEST_CASE("tuning errors") {
  Setup s;
  const std::vector<double> cands{0.5};
  const std::vector<double> none;
  CHECK_THROWS_AS(tune_mle_threshold(s.tmpl(), s.dev, none), Error);
  CHECK_THROWS_AS(tune_mle_threshold(s.tmpl(), LabeledCorpus{}, cands), Error);
  const auto no_mle = make_cascade({Layer{DefaultLayer{Level::L3}, ""}});
  CHECK_THROWS_AS(tune_mle_threshold(no_mle, s.dev, cands), Error);
  const auto two = make_cascade({Layer{MleLayer{s.mle, 0, 0}, ""}, Layer{MleLayer{s.mle, 0, 0}, ""},
                                 Layer{DefaultLayer{Level::L3}, ""}});
  CHECK_THROWS_AS(tune_mle_threshold(two, s.dev, cands), Error);
}
