#include "rgqa/prompt.hpp"

#include <random>

#include "doctest.h"
#include "rgqa/postprocess.hpp"

using namespace rgqa;

TEST_CASE("mark_trigger wraps the trigger with [trg]") {
  const std::string context = "John M is nominated by Adam to be chief justice.";
  Span trigger{10, 19, "nominated"};
  CHECK(mark_trigger(context, trigger) ==
        "John M is [trg] nominated [trg] by Adam to be chief justice.");

  SUBCASE("trigger spanning the whole context") {
    const std::string word = "nominated";
    CHECK(mark_trigger(word, {0, word.size(), word}) ==
          "[trg] nominated [trg]");
  }
  SUBCASE("zero-width span is rejected") {
    CHECK_THROWS_AS(mark_trigger(context, {3, 3, ""}), std::runtime_error);
  }
  SUBCASE("adds exactly twelve characters") {
    CHECK(mark_trigger(context, trigger).size() == context.size() + 12);
  }
  SUBCASE("context already containing a special token is rejected") {
    CHECK_THROWS_AS(mark_trigger("a [sep] b", {0, 1, "a"}), std::runtime_error);
  }
}

TEST_CASE("render_demonstration") {
  Demonstration demo;
  demo.question = "Who are nominated?";
  demo.context = "Adam picked John M. for the bench.";

  SUBCASE("single answer") {
    demo.answers = {"John M."};
    CHECK(render_demonstration(demo) ==
          "Who are nominated? [sep] Adam picked John M. for the bench. [sep] "
          "The answer is: John M.");
  }
  SUBCASE("two answers join with [sep_arg]") {
    demo.answers = {"John M.", "Adam"};
    CHECK(render_demonstration(demo) ==
          "Who are nominated? [sep] Adam picked John M. for the bench. [sep] "
          "The answer is: John M. [sep_arg] Adam");
  }
  SUBCASE("no answers leaves the payload empty") {
    CHECK(render_demonstration(demo) ==
          "Who are nominated? [sep] Adam picked John M. for the bench. [sep] "
          "The answer is: ");
  }
}

TEST_CASE("build_input grammar") {
  CHECK(build_input("D", "Q", "C") == "<S> [demo] D [demo] Q [sep] C </S>");
  CHECK(build_input("", "Q", "C") == "<S> Q [sep] C </S>");
  CHECK_THROWS_AS(build_input("D", "Q [sep] evil", "C"), std::runtime_error);
  CHECK_THROWS_AS(build_input("D", "", "C"), std::runtime_error);
}

TEST_CASE("build_target grammar") {
  CHECK(build_target({{0, 7, "John M."}, {10, 14, "Adam"}}) ==
        "<s> John M. [sep_arg] Adam </s>");
  CHECK(build_target({}) == "<s> </s>");
  CHECK(build_target({{0, 7, "John M."}}) == "<s> John M. </s>");

  SUBCASE("arguments serialize in document order") {
    CHECK(build_target({{10, 14, "Adam"}, {0, 7, "John M."}}) ==
          "<s> John M. [sep_arg] Adam </s>");
  }
  SUBCASE("special tokens in an argument are rejected") {
    CHECK_THROWS_AS(build_target({{0, 5, "[trg]"}}), std::runtime_error);
  }
}

TEST_CASE("split_answers inverts build_target") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> n_args(0, 5);
  std::uniform_int_distribution<int> n_words(1, 4);
  const std::vector<std::string> words{"John",  "Adam",   "court", "Baghdad",
                                       "fraud", "office", "Mary",  "airport"};
  std::uniform_int_distribution<std::size_t> word(0, words.size() - 1);

  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Span> args;
    std::size_t offset = 0;
    const int n = n_args(rng);
    for (int i = 0; i < n; ++i) {
      std::string text;
      const int w = n_words(rng);
      for (int j = 0; j < w; ++j) {
        if (j) text += ' ';
        text += words[word(rng)];
      }
      args.push_back({offset, offset + text.size(), text});
      offset += text.size() + 1;
    }
    std::vector<std::string> expected;
    for (const auto& a : args) expected.push_back(a.text);
    CHECK(split_answers(build_target(args)) == expected);
  }
}
