#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "framekit/corpus.hpp"
#include "helpers.hpp"

using namespace framekit;
using namespace framekit::test;

TEST_CASE("valid sentence passes validation without warnings") {
  Sentence s = two_frame_sentence();
  CHECK(validate_sentence(s).empty());
}

TEST_CASE("token index gaps are rejected") {
  Sentence s = chain_sentence({"a", "b", "c"});
  s.tokens[2].index = 5;
  CHECK_THROWS_AS(validate_sentence(s), ValidationError);
}

TEST_CASE("head out of range and self-head are rejected") {
  Sentence s = chain_sentence({"a", "b"});
  s.tokens[1].head = 7;
  CHECK_THROWS_AS(validate_sentence(s), ValidationError);
  s.tokens[1].head = 2;
  CHECK_THROWS_AS(validate_sentence(s), ValidationError);
}

TEST_CASE("trigger and FE spans must stay inside the sentence") {
  Sentence s = chain_sentence({"a", "b", "c"});
  s.frames = {{"F", 4, {}}};
  CHECK_THROWS_AS(validate_sentence(s), ValidationError);
  s.frames = {{"F", 1, {{"R", {2, 9}, 1}}}};
  CHECK_THROWS_AS(validate_sentence(s), ValidationError);
  s.frames = {{"F", 1, {{"R", {3, 2}, 1}}}};
  CHECK_THROWS_AS(validate_sentence(s), ValidationError);
}

TEST_CASE("two triggers of one instance frame position must be unique") {
  Sentence s = chain_sentence({"a", "b", "c"});
  s.frames = {{"F", 2, {}}, {"G", 2, {}}};
  CHECK_THROWS_AS(validate_sentence(s), ValidationError);
}

TEST_CASE("overlapping FEs inside one instance are rejected") {
  Sentence s = chain_sentence({"a", "b", "c", "d"});
  s.frames = {{"F", 1, {{"R1", {2, 3}, 1}, {"R2", {3, 4}, 1}}}};
  CHECK_THROWS_AS(validate_sentence(s), ValidationError);
}

TEST_CASE("an FE covering its own trigger only warns") {
  Sentence s = chain_sentence({"a", "b", "c"});
  s.frames = {{"F", 2, {{"R", {1, 2}, 2}}}};
  auto warnings = validate_sentence(s);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("trigger") != std::string::npos);
}

TEST_CASE("stats recount a hand-built corpus exactly") {
  Corpus c = one_sentence_corpus(two_frame_sentence());
  Sentence other = chain_sentence({"small", "extra", "sentence"}, "doc1#0");
  other.frames = {{kOtherFrame, 2, {}}};
  Document d;
  d.id = "doc1";
  d.source = "WA";
  d.sentences.push_back(other);
  c.documents.push_back(d);

  StatsReport r = corpus_stats(c);
  CHECK(r.total.sentences == 2);
  CHECK(r.total.words == 21);
  CHECK(r.total.frames == 2);
  CHECK(r.total.others == 1);
  CHECK(r.total.fes == 5);
  CHECK(r.total.pct_sentences_with_frame == doctest::Approx(50.0));
  CHECK(r.total.fes_per_frame == doctest::Approx(2.5));
  REQUIRE(r.per_source.count("WGM"));
  REQUIRE(r.per_source.count("WA"));
  CHECK(r.per_source.at("WGM").sentences == 1);
  CHECK(r.per_source.at("WGM").frames == 2);
  CHECK(r.per_source.at("WA").frames == 0);
  CHECK(r.per_source.at("WA").others == 1);
  // distinct surfaces in the 18-token sentence: "The"/"the" differ by case,
  // "to" repeats -> 16; plus 3 in the second sentence
  CHECK(r.per_source.at("WGM").lexicon == 16);
  CHECK(r.total.lexicon == 19);
}
