#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "framekit/corpus_io.hpp"
#include "framekit/synth.hpp"
#include "helpers.hpp"

using namespace framekit;
using namespace framekit::test;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/framekit_io_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("a synthetic corpus survives a write/read round trip") {
  GeneratorConfig config;
  config.frame_inventory = default_inventory();
  config.n_documents = 6;
  Corpus original = generate(config);
  TempFile f("roundtrip.jsonl");
  write_corpus(original, f.path);
  Corpus loaded = read_corpus(f.path);
  CHECK(corpus_equal(original, loaded));
  CHECK(loaded.lu_lexicon == original.lu_lexicon);
}

TEST_CASE("the lexicon header line is optional") {
  Corpus c = one_sentence_corpus(two_frame_sentence());
  std::ostringstream out;
  write_corpus(c, out);
  std::string text = out.str();
  REQUIRE(text.rfind("{\"lu_lexicon\"", 0) == 0);

  // strip the header: the lexicon is then induced from the annotations
  std::string body = text.substr(text.find('\n') + 1);
  std::istringstream in(body);
  Corpus induced = read_corpus(in);
  CHECK(induced.lu_lexicon == c.lu_lexicon);
  CHECK(corpus_equal(induced, c));
}

TEST_CASE("parse errors carry the offending line number") {
  TempFile f("bad.jsonl");
  {
    std::ofstream out(f.path);
    out << "{\"lu_lexicon\": {}}\n";
    out << "this is not json\n";
  }
  try {
    read_corpus(f.path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("structurally invalid documents are rejected on read") {
  TempFile f("invalid.jsonl");
  {
    std::ofstream out(f.path);
    // head index out of range
    out << R"({"id":"d","source":"WA","sentences":[{"id":"d#0","tokens":)"
        << R"([{"i":1,"w":"a","lemma":"a","pos":"X","head":9,"rel":"root"}],"frames":[]}]})"
        << "\n";
  }
  CHECK_THROWS_AS(read_corpus(f.path), CorpusError);
}

TEST_CASE("missing files raise an error mentioning the path") {
  try {
    read_corpus("/nonexistent/corpus.jsonl");
    FAIL("expected CorpusError");
  } catch (const CorpusError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/corpus.jsonl") != std::string::npos);
  }
}

TEST_CASE("corpus_equal distinguishes differing annotations") {
  Corpus a = one_sentence_corpus(two_frame_sentence());
  Corpus b = a;
  CHECK(corpus_equal(a, b));
  b.documents[0].sentences[0].frames[0].elements[0].span.end += 1;
  CHECK_FALSE(corpus_equal(a, b));
}

TEST_CASE("stats serialize to JSON with per-source blocks") {
  Corpus c = one_sentence_corpus(two_frame_sentence());
  std::string json = stats_to_json(corpus_stats(c));
  CHECK(json.find("\"WGM\"") != std::string::npos);
  CHECK(json.find("\"total\"") != std::string::npos);
  CHECK(json.find("\"frames\"") != std::string::npos);
}
