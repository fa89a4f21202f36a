#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "framekit/bilstm.hpp"
#include "framekit/synth.hpp"
#include "helpers.hpp"

using namespace framekit;
using namespace framekit::test;

namespace {

NeuralHyper tiny_hyper() {
  NeuralHyper h;
  h.hidden = 6;
  h.word_dim = 5;
  h.pos_dim = 3;
  h.deprel_dim = 3;
  h.lu_dim = 2;
  h.epochs = 5;
  h.seed = 1;
  return h;
}

Corpus tiny_corpus() {
  GeneratorConfig config;
  config.frame_inventory = default_inventory();
  config.n_documents = 4;
  config.seed = 2;
  return generate(config);
}

}  // namespace

TEST_CASE("gold task columns mirror the annotation") {
  Corpus c = one_sentence_corpus(two_frame_sentence());
  NeuralTagger net = init_tagger(c, tiny_hyper());
  REQUIRE(net.tasks.size() == 2);  // Deciding, Request (sorted)
  CHECK(net.tasks[0] == "Deciding");
  CHECK(net.tasks[1] == "Request");

  const Sentence& s = c.documents[0].sentences[0];
  TaskGold gold = gold_task_columns(net, s);
  REQUIRE(gold.size() == 2);
  int deciding = net.task_index("Deciding");
  int request = net.task_index("Request");
  // trigger positions carry the LU label of their own task and O elsewhere
  CHECK(net.task_labels[deciding][gold[deciding][4]] == Label::lu("Deciding"));
  CHECK(net.task_labels[request][gold[request][10]] == Label::lu("Request"));
  CHECK(net.task_labels[request][gold[request][4]] == Label::outside());
  // FE cells carry B/I with the role (links stripped inside the net)
  CHECK(net.task_labels[request][gold[request][0]] ==
        Label::begin("Request", "Speaker", -1));
  CHECK(net.task_labels[deciding][gold[deciding][17]] ==
        Label::inside("Deciding", "Decision", -1));
}

TEST_CASE("the forward pass yields proper distributions") {
  Corpus c = tiny_corpus();
  NeuralTagger net = init_tagger(c, tiny_hyper());
  const Sentence& s = c.documents[0].sentences[0];
  auto feats = neural_features(s, net.vocab, net.lu_lexicon);
  ForwardResult fwd = net_forward(net, feats);
  REQUIRE(fwd.probs.size() == net.tasks.size());
  for (std::size_t k = 0; k < fwd.probs.size(); ++k) {
    REQUIRE(fwd.probs[k].size() == feats.size());
    for (const auto& dist : fwd.probs[k]) {
      double sum = 0.0;
      for (double p : dist) {
        CHECK(p >= 0.0);
        sum += p;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("backpropagation matches central finite differences") {
  Corpus c = one_sentence_corpus(two_frame_sentence());
  NeuralHyper hyper = tiny_hyper();
  hyper.hidden = 4;
  NeuralTagger net = init_tagger(c, hyper);
  const Sentence& s = c.documents[0].sentences[0];
  // truncate to 4 tokens for speed; keep the annotation out of the cut
  Sentence small;
  small.source_id = "t#0";
  for (int i = 0; i < 4; ++i) small.tokens.push_back(s.tokens[i]);
  small.tokens[1].head = 0;
  small.tokens[2].head = 2;
  small.tokens[3].head = 2;
  small.frames = {{"Deciding", 2, {{"Cognizer", {3, 4}, 2}}}};

  auto feats = neural_features(small, net.vocab, net.lu_lexicon);
  TaskGold gold = gold_task_columns(net, small);

  NeuralGradients grads = net_backward(net, feats, net_forward(net, feats), gold);
  auto params = net.param_arrays();
  REQUIRE(grads.arrays.size() == params.size());

  std::mt19937_64 rng(17);
  const double h = 1e-6;
  int checked = 0;
  for (std::size_t a = 0; a < params.size(); ++a) {
    if (params[a]->empty()) continue;
    for (int probe = 0; probe < 4; ++probe) {
      std::size_t i =
          std::uniform_int_distribution<std::size_t>(0, params[a]->size() - 1)(rng);
      double saved = (*params[a])[i];
      (*params[a])[i] = saved + h;
      double up = net_loss(net, net_forward(net, feats), gold);
      (*params[a])[i] = saved - h;
      double down = net_loss(net, net_forward(net, feats), gold);
      (*params[a])[i] = saved;
      double numeric = (up - down) / (2 * h);
      CHECK(std::abs(numeric - grads.arrays[a][i]) < 1e-5);
      ++checked;
    }
  }
  CHECK(checked >= 40);
}

TEST_CASE("training reduces the multi-task loss") {
  Corpus c = tiny_corpus();
  NeuralHyper hyper = tiny_hyper();
  hyper.epochs = 8;
  std::vector<double> loss;
  NeuralTagger net = train_tagger(c, hyper, &loss);
  REQUIRE(loss.size() == 8);
  CHECK(loss.back() < loss.front());
  CHECK(std::isfinite(loss.back()));
  (void)net;
}

TEST_CASE("prediction thresholds suppress low-confidence labels") {
  Corpus c = tiny_corpus();
  NeuralHyper hyper = tiny_hyper();
  hyper.epochs = 15;
  NeuralTagger net = train_tagger(c, hyper);
  const Sentence& s = c.documents[0].sentences[0];
  auto open = net_predict(net, s, 0.0);
  auto closed = net_predict(net, s, 0.999999);
  std::size_t open_tags = 0, closed_tags = 0;
  for (const auto& col : open)
    for (const auto& l : col.labels)
      if (l.kind != LabelKind::Outside) ++open_tags;
  for (const auto& col : closed)
    for (const auto& l : col.labels)
      if (l.kind != LabelKind::Outside) ++closed_tags;
  CHECK(closed_tags <= open_tags);
}

TEST_CASE("a saved tagger reloads to identical predictions") {
  Corpus c = tiny_corpus();
  NeuralHyper hyper = tiny_hyper();
  hyper.epochs = 4;
  NeuralTagger net = train_tagger(c, hyper);
  std::string path = "/tmp/framekit_tagger.json";
  save_tagger(net, path);
  NeuralTagger loaded = load_tagger(path);
  std::remove(path.c_str());
  for (const auto& d : c.documents)
    for (const auto& s : d.sentences) {
      auto a = net_predict(net, s, 0.2);
      auto b = net_predict(loaded, s, 0.2);
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].labels == b[i].labels);
        for (std::size_t t = 0; t < a[i].conf.size(); ++t)
          CHECK(a[i].conf[t] == doctest::Approx(b[i].conf[t]).epsilon(1e-9));
      }
    }
}

TEST_CASE("pretrained embeddings seed known words") {
  Corpus c = one_sentence_corpus(two_frame_sentence());
  NeuralHyper hyper = tiny_hyper();
  std::string path = "/tmp/framekit_pre.txt";
  {
    std::ofstream out(path);
    out << "decide 1 2 3 4 5\n";
  }
  hyper.embeddings_path = path;
  NeuralTagger net = init_tagger(c, hyper);
  std::remove(path.c_str());
  std::uint32_t id = net.vocab.words.id("decide");
  REQUIRE(id != Vocabulary::kUnkId);
  CHECK(net.emb_word.at(id, 0) == doctest::Approx(1.0));
  CHECK(net.emb_word.at(id, 4) == doctest::Approx(5.0));
}
