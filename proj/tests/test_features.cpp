#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "framekit/features.hpp"
#include "helpers.hpp"

using namespace framekit;
using namespace framekit::test;

TEST_CASE("dependency paths walk up to the common ancestor and back down") {
  Sentence s = two_frame_sentence();
  // "general"(2, subj of 5) to "order"(11, ccomp of 5): up subj, down ccomp
  DependencyPath p = dependency_path(s, 2, 11);
  CHECK(p.rendered() == "^subj.vccomp");
  // trigger to itself: empty path
  CHECK(dependency_path(s, 5, 5).rendered() == "");
  // purely descending: 5 -> 11 -> 13
  CHECK(dependency_path(s, 5, 13).rendered() == "vccomp.vobj");
  // purely ascending: 18 -> 16 -> 11
  CHECK(dependency_path(s, 18, 11).rendered() == "^nmod.^obj");
}

TEST_CASE("cycles and multiple roots are rejected") {
  Sentence s = chain_sentence({"a", "b", "c"});
  s.tokens[1].head = 3;
  s.tokens[2].head = 2;  // 2 <-> 3 cycle
  CHECK_THROWS_AS(dependency_path(s, 1, 3), TreeError);

  Sentence two_roots = chain_sentence({"a", "b"});
  two_roots.tokens[1].head = 0;
  CHECK_THROWS_AS(dependency_path(two_roots, 1, 2), TreeError);
}

TEST_CASE("long paths are bucketed but keep their endpoints") {
  std::vector<std::string> words(10, "w");
  Sentence s = chain_sentence(words);  // chain: token i heads i+1
  auto feats = crf_feature_strings(s, 1, 10);  // 9 ascending steps
  auto it = std::find_if(feats.begin(), feats.end(),
                         [](const std::string& f) { return f.rfind("PATH=", 0) == 0; });
  REQUIRE(it != feats.end());
  CHECK(it->rfind("PATH=LONGPATH:", 0) == 0);
  CHECK(it->find("^dep") != std::string::npos);
}

TEST_CASE("feature strings cover the window, the path and the trigger") {
  Sentence s = two_frame_sentence();
  auto feats = crf_feature_strings(s, 11, 1);
  auto has = [&](const std::string& f) {
    return std::find(feats.begin(), feats.end(), f) != feats.end();
  };
  CHECK(has("LEM[-1]=<pad>"));
  CHECK(has("POS[-2]=<pad>"));
  CHECK(has("LEM[0]=the"));
  CHECK(has("LEM[1]=general"));
  CHECK(has("POS[2]=AUX"));
  CHECK(has("TRIGLEM=order"));
  CHECK_FALSE(has("IS_TRIGGER"));
  auto trig_feats = crf_feature_strings(s, 11, 11);
  CHECK(std::find(trig_feats.begin(), trig_feats.end(), "IS_TRIGGER") != trig_feats.end());
}

TEST_CASE("the feature dictionary drops unknowns once frozen") {
  FeatureDict dict;
  std::uint32_t a = dict.intern("A");
  std::uint32_t b = dict.intern("B");
  CHECK(a != b);
  CHECK(dict.intern("A") == a);
  dict.freeze();
  CHECK(dict.lookup("A") == a);
  CHECK(dict.lookup("C") == -1);
  CHECK_THROWS_AS(dict.intern("C"), CorpusError);

  Sentence s = two_frame_sentence();
  FeatureVector fv = crf_features(s, 11, 1, dict);
  CHECK(fv.ids.empty());  // nothing interned from this sentence
}

TEST_CASE("crf feature ids are sorted and unique") {
  Sentence s = two_frame_sentence();
  FeatureDict dict;
  for (int pos = 1; pos <= s.size(); ++pos)
    for (const auto& f : crf_feature_strings(s, 11, pos)) dict.intern(f);
  dict.freeze();
  FeatureVector fv = crf_features(s, 11, 5, dict);
  CHECK(std::is_sorted(fv.ids.begin(), fv.ids.end()));
  CHECK(std::adjacent_find(fv.ids.begin(), fv.ids.end()) == fv.ids.end());
  CHECK(fv.ids.size() == crf_feature_strings(s, 11, 5).size());
}

TEST_CASE("the token vocabulary maps unknowns to a shared id") {
  Vocabulary v;
  CHECK(v.id("anything") == Vocabulary::kUnkId);
  std::uint32_t w = v.intern("word");
  CHECK(w != Vocabulary::kUnkId);
  CHECK(v.id("word") == w);
  CHECK(v.token(w) == "word");
}

TEST_CASE("neural features flag lexical-unit tokens") {
  Corpus c = one_sentence_corpus(two_frame_sentence());
  NeuralVocab vocab = build_neural_vocab(c);
  const Sentence& s = c.documents[0].sentences[0];
  auto feats = neural_features(s, vocab, c.lu_lexicon);
  REQUIRE(feats.size() == 18);
  CHECK(feats[4].is_lu);   // decide
  CHECK(feats[10].is_lu);  // order
  CHECK_FALSE(feats[0].is_lu);
  CHECK(feats[0].word_id != Vocabulary::kUnkId);

  Sentence unseen = chain_sentence({"zebra"});
  auto u = neural_features(unseen, vocab, c.lu_lexicon);
  CHECK(u[0].word_id == Vocabulary::kUnkId);
}

TEST_CASE("embedding files are dimension-checked") {
  std::string path = "/tmp/framekit_emb.txt";
  {
    std::ofstream out(path);
    out << "alpha 0.5 -1.0\n";
    out << "beta 1.25 2.5\n";
  }
  auto emb = load_embeddings(path, 2);
  REQUIRE(emb.count("alpha"));
  CHECK(emb.at("alpha")[1] == doctest::Approx(-1.0));
  {
    std::ofstream out(path);
    out << "gamma 1.0\n";
  }
  CHECK_THROWS_AS(load_embeddings(path, 2), CorpusError);
  std::remove(path.c_str());
}
