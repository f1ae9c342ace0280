#include <sstream>

#include "doctest.h"
#include "leveler/cascade_config.hpp"
#include "support/fixtures.hpp"

using namespace leveler;

TEST_CASE("cascade expressions parse layers and parameters") {
  const auto c = parse_cascade_expr("mle(min_prob=0.85) -> lex → bert", "tuned");
  REQUIRE(c.layers.size() == 3);
  CHECK(c.name == "tuned");
  CHECK(c.layers[0].kind == "mle");
  CHECK(c.layers[0].params.at("min_prob") == "0.85");
  CHECK(c.layers[1].kind == "lex");
  CHECK(c.layers[2].kind == "external");
  CHECK(to_string(c) == "tuned = mle(min_prob=0.85) -> lex -> external");

  const auto d = parse_cascade_expr("MLE -> L4");
  CHECK(d.layers[1] == LayerConfig{"default", {{"level", "4"}}});
  CHECK(parse_cascade_expr(to_string(d)) == d);
}

TEST_CASE("cascade expression errors") {
  CHECK_THROWS_AS(parse_cascade_expr("mle -> "), Error);
  CHECK_THROWS_AS(parse_cascade_expr("magic"), Error);
  CHECK_THROWS_AS(parse_cascade_expr("mle(colour=red)"), Error);
  CHECK_THROWS_AS(parse_cascade_expr("mle(min_prob)"), Error);
  CHECK_THROWS_AS(parse_cascade_expr("mle(min_prob=0.5"), Error);
}

TEST_CASE("cascade files") {
  std::istringstream in("# comment\n\na = mle -> l3\nb = lex -> dist-freq\n");
  const auto all = parse_cascade_file(in);
  REQUIRE(all.size() == 2);
  CHECK(all[1].name == "b");
  std::istringstream dup("a = l3\na = l4\n");
  CHECK_THROWS_AS(parse_cascade_file(dup), ParseError);
  std::istringstream bad("a = l3\nb = nonsense\n");
  try {
    parse_cascade_file(bad);
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("built-in cascades") {
  REQUIRE(builtin_cascade("default4"));
  CHECK(builtin_cascade("default4")->layers[0].params.at("level") == "4");
  CHECK(builtin_cascade("nope") == nullptr);
}

TEST_CASE("model loader resolves files, caches them and uses the data directory") {
  testing::TempDir dir;
  dir.write("mle.tsv", "known\t0\t2\t0\n");
  dir.write("lex.tsv", "lem\tn\t5\n");
  dir.write("an.tsv", "w\tlem\tn\t-1\n");
  dir.write("preds.tsv", "d\tf\t0\t0\t4\n");

  ModelPaths paths;
  paths.mle = "mle.tsv";
  paths.data_dir = dir.path().string();
  ModelLoader loader(paths);
  const auto spec = loader.resolve(parse_cascade_expr("mle -> default(level=5)"));
  CHECK(spec.layers.size() == 2);
  CHECK(loader.mle("mle.tsv") == loader.mle("mle.tsv"));

  const auto lex = loader.resolve(parse_cascade_expr(
      "lex(lexicon=" + dir.file("lex.tsv") + ", analyzer=an.tsv, pos=off) -> bert(preds=preds.tsv, label=Ext)"));
  CHECK(lex.arrow_name() == "Lex → Ext");

  CHECK_THROWS_WITH_AS(loader.resolve(parse_cascade_expr("lex -> l3")), doctest::Contains("--lexicon"), Error);
  CHECK_THROWS_AS(loader.resolve(parse_cascade_expr("mle")), Error);
  CHECK_THROWS_AS(loader.resolve(parse_cascade_expr("mle(min_prob=1.5) -> l3")), Error);
  CHECK_THROWS_AS(loader.resolve(parse_cascade_expr("default(level=2)")), Error);
  CHECK_THROWS_AS(loader.resolve(parse_cascade_expr("mle(table=missing.tsv) -> l3")), Error);
  CHECK_THROWS_WITH_AS(loader.model_set(), doctest::Contains("Lex"), Error);
}

TEST_CASE("a dist-freq layer refuses an ex-freq table") {
  testing::TempDir dir;
  LabeledCorpus train;
  train.fragments.push_back(testing::make_fragment("d", "1", {"a"}, {3}));
  std::ostringstream out;
  write_bins(build_ex_freq(FrequencyList({{"a", 3}}), train, 1), out);
  const auto p = dir.write("ex.tsv", out.str());
  ModelLoader loader({});
  CHECK_THROWS_AS(loader.resolve(parse_cascade_expr("dist-freq(bins=" + p + ")")), Error);
  CHECK_NOTHROW(loader.resolve(parse_cascade_expr("ex-freq(bins=" + p + ")")));
  CHECK_NOTHROW(loader.resolve(parse_cascade_expr("freq(bins=" + p + ")")));
}
