#include <sstream>

#include "doctest.h"
#include "leveler/analyzer.hpp"
#include "leveler/level.hpp"

using namespace leveler;

namespace {
AnalyzerTable load(const std::string& text) {
  std::istringstream in(text);
  return load_analyzer(in);
}
}  // namespace

TEST_CASE("one row gives one word with one analysis") {
  const auto t = load("kataba\tkatab\tverb\t-0.1\n");
  CHECK(t.size() == 1);
  const auto a = t.analyze("kataba");
  REQUIRE(a);
  REQUIRE(a->size() == 1);
  CHECK((*a)[0] == Analysis{"katab", "verb", -0.1});
}

TEST_CASE("analyses are stored by descending logprob, file order on ties") {
  const auto t = load("w\tl1\tn\t-2\nw\tl2\tv\t-0.5\nw\tl3\tn\t-2\nw\tl4\tadj\t-0.5\n");
  const auto a = t.analyze("w");
  REQUIRE(a);
  REQUIRE(a->size() == 4);
  CHECK((*a)[0].lemma == "l2");
  CHECK((*a)[1].lemma == "l4");
  CHECK((*a)[2].lemma == "l1");
  CHECK((*a)[3].lemma == "l3");
}

TEST_CASE("unknown words are absent") {
  const auto t = load("w\tl\tn\t0\n");
  CHECK_FALSE(t.analyze("other"));
  CHECK(t.top_analyses("other").empty());
}

TEST_CASE("top analyses are those within epsilon of the best") {
  const auto t = load("w\ta\tn\t-1\nw\tb\tn\t-1.0000000001\nw\tc\tn\t-1.1\n");
  const auto top = t.top_analyses("w");
  REQUIRE(top.size() == 2);
  CHECK(top[0].lemma == "a");
  CHECK(top[1].lemma == "b");
  CHECK(t.top_analyses("w", 0.5).size() == 3);
}

TEST_CASE("repeated queries are identical") {
  const auto t = load("w\ta\tn\t-1\nw\tb\tv\t-3\n");
  const auto first = t.top_analyses("w");
  for (int i = 0; i < 5; ++i) CHECK(t.top_analyses("w") == first);
}

TEST_CASE("malformed analyzer rows") {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      load(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("w\tl\tn\t-1\nw\tl\tn\t-2\n") == 2);  // duplicate (word, lemma, pos)
  CHECK(line_of("w\tl\tn\t0.5\n") == 1);             // positive logprob
  CHECK(line_of("w\t\tn\t-1\n") == 1);               // empty lemma
  CHECK(line_of("w\tl\tn\n") == 1);                  // missing column
  CHECK(line_of("w\tl\tn\tabc\n") == 1);
  CHECK_NOTHROW(load("w\tl\tn\t-1\nw\tl\tv\t-1\n"));  // same lemma, other POS
}
