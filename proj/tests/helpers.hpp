#ifndef FRAMEKIT_TEST_HELPERS_HPP
#define FRAMEKIT_TEST_HELPERS_HPP

#include <string>
#include <vector>

#include "framekit/corpus.hpp"

namespace framekit::test {

inline Token tok(int i, std::string surface, std::string lemma, std::string pos, int head,
                 std::string rel) {
  return Token{i, std::move(surface), std::move(lemma), std::move(pos), head, std::move(rel)};
}

// Lowercase surface = lemma; chain tree rooted at the first token.
inline Sentence chain_sentence(const std::vector<std::string>& words,
                               const std::string& source_id = "s1") {
  Sentence s;
  s.source_id = source_id;
  for (std::size_t i = 0; i < words.size(); ++i)
    s.tokens.push_back(tok(static_cast<int>(i) + 1, words[i], words[i], "X",
                           static_cast<int>(i), i == 0 ? "root" : "dep"));
  return s;
}

// 18 tokens, two frames sharing overlapping spans; mirrors the docs example
// used by the round-trip tests.
inline Sentence two_frame_sentence() {
  Sentence s;
  s.source_id = "doc0#0";
  s.tokens = {
      tok(1, "The", "the", "DET", 2, "det"),
      tok(2, "general", "general", "NOUN", 5, "subj"),
      tok(3, "has", "have", "AUX", 5, "aux"),
      tok(4, "to", "to", "PART", 5, "mark"),
      tok(5, "decide", "decide", "VERB", 0, "root"),
      tok(6, "if", "if", "SCONJ", 11, "mark"),
      tok(7, "it", "it", "PRON", 8, "subj"),
      tok(8, "is", "be", "AUX", 11, "cop"),
      tok(9, "necessary", "necessary", "ADJ", 8, "amod"),
      tok(10, "to", "to", "PART", 11, "mark"),
      tok(11, "order", "order", "VERB", 5, "ccomp"),
      tok(12, "the", "the", "DET", 13, "det"),
      tok(13, "enemy", "enemy", "NOUN", 11, "obj"),
      tok(14, "the", "the", "DET", 16, "det"),
      tok(15, "immediate", "immediate", "ADJ", 16, "amod"),
      tok(16, "surrender", "surrender", "NOUN", 11, "obj"),
      tok(17, "of", "of", "ADP", 18, "case"),
      tok(18, "Belfort", "belfort", "PROPN", 16, "nmod"),
  };
  FrameInstance request{"Request", 11, {
      {"Speaker", {1, 2}, 11},
      {"Addressee", {12, 13}, 11},
      {"Message", {14, 18}, 11},
  }};
  FrameInstance deciding{"Deciding", 5, {
      {"Cognizer", {1, 2}, 5},
      {"Decision", {6, 18}, 5},
  }};
  s.frames = {request, deciding};
  return s;
}

inline Corpus one_sentence_corpus(Sentence s) {
  Corpus c;
  Document d;
  d.id = "doc0";
  d.source = "WGM";
  for (const auto& f : s.frames)
    if (!f.is_other()) c.lu_lexicon[s.token(f.trigger).lemma].insert(f.frame);
  d.sentences.push_back(std::move(s));
  c.documents.push_back(std::move(d));
  return c;
}

}  // namespace framekit::test

#endif
