#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "framekit/loop.hpp"
#include "framekit/synth.hpp"
#include "helpers.hpp"

using namespace framekit;
using namespace framekit::test;

namespace {

Corpus loop_corpus(int docs = 12, std::uint64_t seed = 6) {
  GeneratorConfig config;
  config.frame_inventory = default_inventory();
  config.n_documents = docs;
  config.seed = seed;
  return generate(config);
}

CrfHyper fast_crf() {
  CrfHyper h;
  h.epochs = 6;
  return h;
}

}  // namespace

TEST_CASE("the example pool lists every lexical-unit occurrence") {
  Corpus corpus = loop_corpus();
  auto pool = collect_examples(corpus);
  std::size_t expected = 0;
  for (const auto& d : corpus.documents)
    for (const auto& s : d.sentences)
      for (const auto& t : s.tokens)
        if (corpus.lu_lexicon.count(t.lemma)) ++expected;
  CHECK(pool.size() == expected);
  CHECK(expected > 0);
  for (const auto& e : pool) {
    const Sentence& s = corpus.documents[e.doc].sentences[e.sentence];
    CHECK(s.token(e.trigger).lemma == e.lemma);
  }
}

TEST_CASE("similarity is 1.0 for identical contexts and drops with edits") {
  Corpus c;
  Document d;
  d.id = "doc0";
  d.source = "WA";
  Sentence a = chain_sentence({"the", "army", "will", "attack", "the", "fort"}, "doc0#0");
  Sentence b = a;
  b.source_id = "doc0#1";
  Sentence far = chain_sentence({"birds", "sing", "when", "attack", "ends", "softly"}, "doc0#2");
  far.tokens[3].deprel = "obj";  // different syntax around the trigger
  d.sentences = {a, b, far};
  c.documents.push_back(d);
  c.lu_lexicon["attack"].insert("Attack");

  auto pool = collect_examples(c);
  REQUIRE(pool.size() == 3);
  CHECK(similarity(c, pool[0], pool[1]) == doctest::Approx(1.0));
  double cross = similarity(c, pool[0], pool[2]);
  CHECK(cross < 0.5);

  LuExample wrong = pool[0];
  wrong.lemma = "decide";
  CHECK_THROWS_AS(similarity(c, pool[0], wrong), CorpusError);
}

TEST_CASE("batches are per-LU, bounded and cover the candidates") {
  Corpus corpus = loop_corpus();
  auto pool = collect_examples(corpus);
  std::vector<std::size_t> ids(pool.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  auto batches = select_batches(corpus, pool, ids, 5);

  std::set<std::size_t> covered;
  for (const auto& b : batches) {
    CHECK(b.example_ids.size() <= 5);
    CHECK_FALSE(b.example_ids.empty());
    for (std::size_t id : b.example_ids) {
      CHECK(pool[id].lemma == b.lemma);
      CHECK_FALSE(covered.count(id));
      covered.insert(id);
    }
  }
  CHECK(covered.size() == pool.size());
}

TEST_CASE("k-fold evaluation aggregates micro counts") {
  Corpus corpus = loop_corpus(8);
  EvalReport r = kfold_crf_eval(corpus, 4, fast_crf(), 0.5, MatchMode::Exact);
  for (auto sub : {Subtask::TI, Subtask::TC, Subtask::RI, Subtask::RC}) {
    CHECK(r[sub].precision >= 0.0);
    CHECK(r[sub].precision <= 1.0);
    CHECK(r[sub].recall <= 1.0);
  }
  CHECK(r[Subtask::TI].tp + r[Subtask::TI].fn == corpus.num_frames());
}

TEST_CASE("the loop annotates monotonically and reports each iteration") {
  Corpus corpus = loop_corpus(10);
  LoopConfig config;
  config.iterations = 3;
  config.batch_size = 10;
  config.batches_per_iteration = 4;
  config.k = 3;
  config.crf = fast_crf();
  LoopReport report = run_loop(corpus, config);
  REQUIRE(!report.iterations.empty());
  CHECK(report.iterations.size() <= 3);
  std::size_t last = 0;
  for (const auto& ir : report.iterations) {
    CHECK(ir.annotated > last);
    last = ir.annotated;
    CHECK(ir.preannotation_frame_accuracy >= 0.0);
    CHECK(ir.preannotation_frame_accuracy <= 1.0);
  }

  std::string json = loop_report_json(report);
  CHECK(json.find("\"iterations\"") != std::string::npos);
  std::string csv = loop_report_csv(report);
  CHECK(csv.rfind("iteration,annotated", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        static_cast<long>(report.iterations.size()) + 1);
}

TEST_CASE("the loop config loader applies overrides") {
  std::string path = "/tmp/framekit_loop_config.txt";
  {
    std::ofstream out(path);
    out << "iterations = 2\n";
    out << "batch_size = 7\n";
    out << "match = partial\n";
    out << "epochs = 3\n";
  }
  LoopConfig c = load_loop_config(path);
  CHECK(c.iterations == 2);
  CHECK(c.batch_size == 7);
  CHECK(c.mode == MatchMode::PartialOverlap);
  CHECK(c.crf.epochs == 3);
  {
    std::ofstream out(path);
    out << "mystery = 1\n";
  }
  CHECK_THROWS_AS(load_loop_config(path), CorpusError);
  std::remove(path.c_str());
}
