#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "framekit/crf.hpp"
#include "framekit/synth.hpp"
#include "helpers.hpp"

using namespace framekit;
using namespace framekit::test;

namespace {

std::vector<Label> flat_labels(int n) {
  std::vector<Label> labels = {Label::outside()};
  for (int i = 1; i < n; ++i) labels.push_back(Label::lu("F" + std::to_string(i)));
  return labels;
}

CrfModel random_model(std::mt19937_64& rng, int n_labels, std::size_t n_features, double scale) {
  CrfModel m("lu", flat_labels(n_labels), n_features, 0.0);
  std::normal_distribution<double> gauss(0.0, scale);
  for (auto& w : m.emission_weights()) w = gauss(rng);
  for (int p = 0; p < n_labels; ++p)
    for (int q = 0; q < n_labels; ++q)
      if (m.transition_allowed(p, q)) m.transition(p, q) = gauss(rng);
  return m;
}

CrfExample random_example(std::mt19937_64& rng, int len, int n_labels, std::size_t n_features,
                          bool with_gold) {
  CrfExample x;
  for (int t = 0; t < len; ++t) {
    FeatureVector fv;
    std::vector<std::uint32_t> pool(n_features);
    for (std::size_t i = 0; i < n_features; ++i) pool[i] = static_cast<std::uint32_t>(i);
    std::shuffle(pool.begin(), pool.end(), rng);
    int k = std::uniform_int_distribution<int>(1, static_cast<int>(n_features) / 2)(rng);
    fv.ids.assign(pool.begin(), pool.begin() + k);
    std::sort(fv.ids.begin(), fv.ids.end());
    x.features.push_back(std::move(fv));
    if (with_gold) x.gold.push_back(std::uniform_int_distribution<int>(0, n_labels - 1)(rng));
  }
  return x;
}

// enumerate every label sequence: exact partition, exact argmax
struct Enumeration {
  double log_partition;
  std::vector<int> best_path;
  double best_score;
  std::vector<std::vector<double>> token_marginals;
};

Enumeration enumerate_paths(const CrfModel& m, const CrfExample& x) {
  const int T = static_cast<int>(x.features.size());
  const int L = static_cast<int>(m.num_labels());
  Enumeration out;
  out.token_marginals.assign(T, std::vector<double>(L, 0.0));
  std::vector<int> path(T, 0);
  double z = 0.0;
  out.best_score = -1e300;
  bool first = true;
  while (true) {
    bool allowed = m.start_allowed(path[0]);
    for (int t = 1; allowed && t < T; ++t)
      if (!m.transition_allowed(path[t - 1], path[t])) allowed = false;
    if (allowed) {
      double score = m.path_score(x, path);
      z += std::exp(score);
      if (first || score > out.best_score + 1e-12 ||
          (std::abs(score - out.best_score) <= 1e-12 && path < out.best_path)) {
        out.best_score = score;
        out.best_path = path;
        first = false;
      }
      for (int t = 0; t < T; ++t) out.token_marginals[t][path[t]] += std::exp(score);
    }
    int t = T - 1;
    while (t >= 0 && ++path[t] == L) path[t--] = 0;
    if (t < 0) break;
  }
  out.log_partition = std::log(z);
  for (auto& row : out.token_marginals)
    for (auto& p : row) p /= z;
  return out;
}

}  // namespace

TEST_CASE("forward-backward and Viterbi agree with exhaustive enumeration") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    int L = std::uniform_int_distribution<int>(2, 5)(rng);
    int T = std::uniform_int_distribution<int>(1, 6)(rng);
    std::size_t F = 8;
    CrfModel m = random_model(rng, L, F, 1.0);
    CrfExample x = random_example(rng, T, L, F, false);

    Enumeration oracle = enumerate_paths(m, x);
    CrfMarginals marg = log_partition_and_marginals(m, x);
    CHECK(marg.log_partition == doctest::Approx(oracle.log_partition).epsilon(1e-8));
    for (int t = 0; t < T; ++t)
      for (int l = 0; l < L; ++l)
        CHECK(marg.token[t][l] == doctest::Approx(oracle.token_marginals[t][l]).epsilon(1e-8));

    ViterbiResult v = viterbi(m, x);
    CHECK(v.path == oracle.best_path);
    CHECK(v.score == doctest::Approx(oracle.best_score).epsilon(1e-8));
  }
}

TEST_CASE("the analytic gradient matches central finite differences") {
  std::mt19937_64 rng(23);
  const double h = 1e-5;
  for (int it = 0; it < 100; ++it) {
    int L = std::uniform_int_distribution<int>(2, 4)(rng);
    int T = std::uniform_int_distribution<int>(2, 5)(rng);
    std::size_t F = 6;
    CrfModel m = random_model(rng, L, F, 0.5);
    CrfExample x = random_example(rng, T, L, F, true);
    // gold must respect the transition mask (flat labels: always allowed)

    CrfGradient g = nll_and_gradient(m, x);
    auto check_param = [&](double& w, double analytic) {
      double saved = w;
      w = saved + h;
      double up = nll_and_gradient(m, x).nll;
      w = saved - h;
      double down = nll_and_gradient(m, x).nll;
      w = saved;
      double numeric = (up - down) / (2 * h);
      CHECK(std::abs(numeric - analytic) < 1e-4);
    };
    // spot-check a handful of weights per instance to keep the runtime sane
    for (int probe = 0; probe < 6; ++probe) {
      std::size_t fi = std::uniform_int_distribution<std::size_t>(0, F - 1)(rng);
      int li = std::uniform_int_distribution<int>(0, L - 1)(rng);
      check_param(m.emission(static_cast<std::uint32_t>(fi), li),
                  g.emission[fi * L + li]);
      int p = std::uniform_int_distribution<int>(0, L - 1)(rng);
      int q = std::uniform_int_distribution<int>(0, L - 1)(rng);
      if (m.transition_allowed(p, q))
        check_param(m.transition(p, q), g.transition[p * L + q]);
    }
  }
}

TEST_CASE("the BIO transition mask keeps Viterbi output well-formed") {
  std::vector<Label> labels = {
      Label::outside(), Label::lu("F"),
      Label::begin("F", "R1", -1), Label::inside("F", "R1", -1),
      Label::begin("F", "R2", -1), Label::inside("F", "R2", -1)};
  CrfModel m("lu", labels, 4, 0.0);
  CHECK_FALSE(m.start_allowed(3));       // I cannot start
  CHECK(m.start_allowed(2));             // B can
  CHECK(m.transition_allowed(2, 3));     // B:R1 -> I:R1
  CHECK_FALSE(m.transition_allowed(2, 5));  // B:R1 -> I:R2
  CHECK_FALSE(m.transition_allowed(0, 3));  // O -> I
  CHECK(m.transition_allowed(3, 3));     // I -> same I
  CHECK_FALSE(m.transition_allowed(5, 3));  // I:R2 -> I:R1

  std::mt19937_64 rng(5);
  for (auto& w : m.emission_weights()) w = std::normal_distribution<double>(0, 2)(rng);
  for (int it = 0; it < 50; ++it) {
    CrfExample x = random_example(rng, 8, 6, 4, false);
    ViterbiResult v = viterbi(m, x);
    int prev = -1;
    for (int l : v.path) {
      const Label& lab = m.labels()[l];
      if (lab.kind == LabelKind::Inside) {
        REQUIRE(prev >= 0);
        const Label& plab = m.labels()[prev];
        CHECK((plab.kind == LabelKind::Begin || plab.kind == LabelKind::Inside));
        CHECK(plab.role == lab.role);
      }
      prev = l;
    }
  }
}

TEST_CASE("a position mask pins labels to chosen tokens") {
  std::mt19937_64 rng(9);
  CrfModel m = random_model(rng, 3, 5, 1.0);
  CrfExample x = random_example(rng, 4, 3, 5, false);
  PositionMask mask(4, std::vector<bool>(3, true));
  for (int t = 0; t < 4; ++t) mask[t][1] = (t == 2);  // label 1 only at position 2
  ViterbiResult v = viterbi(m, x, mask);
  for (int t = 0; t < 4; ++t)
    if (t != 2) CHECK(v.path[t] != 1);
  CrfMarginals marg = log_partition_and_marginals(m, x, mask);
  for (int t = 0; t < 4; ++t)
    if (t != 2) CHECK(marg.token[t][1] == doctest::Approx(0.0));
}

TEST_CASE("training drives the regularized NLL down on separable data") {
  // two labels, feature 0 votes for label 0 and feature 1 for label 1
  std::vector<CrfExample> data;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 40; ++i) {
    CrfExample x;
    for (int t = 0; t < 5; ++t) {
      int y = std::uniform_int_distribution<int>(0, 1)(rng);
      FeatureVector fv;
      fv.ids = {static_cast<std::uint32_t>(y)};
      x.features.push_back(fv);
      x.gold.push_back(y);
    }
    data.push_back(std::move(x));
  }
  CrfHyper hyper;
  hyper.epochs = 20;
  std::vector<double> nll;
  CrfModel m = train_crf(data, "lu", flat_labels(2), 2, hyper, &nll);
  REQUIRE(nll.size() == 20);
  CHECK(nll.back() < 0.5 * nll.front());
  for (const auto& x : data) CHECK(viterbi(m, x).path == x.gold);
}

TEST_CASE("per-LU banks label every trigger occurrence in training data") {
  GeneratorConfig config;
  config.frame_inventory = default_inventory();
  config.n_documents = 16;
  config.seed = 4;
  Corpus corpus = generate(config);
  CrfHyper hyper;
  hyper.epochs = 12;
  ModelBank bank = train_multi(corpus, hyper);
  CHECK(bank.models.size() == corpus.lu_lexicon.size());
  CHECK(bank.dict.frozen());

  // training accuracy should be high; check triggers are recovered
  std::size_t gold_frames = 0, predicted_match = 0;
  for (const auto& d : corpus.documents)
    for (const auto& s : d.sentences) {
      auto columns = parse_multi(bank, corpus.lu_lexicon, s, 0.0);
      for (const auto& f : s.frames) {
        if (f.is_other()) continue;
        ++gold_frames;
        for (const auto& col : columns) {
          const Label& at = col.labels[f.trigger - 1];
          if (at.kind == LabelKind::Lu && at.frame == f.frame) {
            ++predicted_match;
            break;
          }
        }
      }
    }
  CHECK(gold_frames > 0);
  CHECK(static_cast<double>(predicted_match) / gold_frames > 0.9);
}

TEST_CASE("parallel training gives the same bank as sequential") {
  GeneratorConfig config;
  config.frame_inventory = default_inventory();
  config.n_documents = 8;
  Corpus corpus = generate(config);
  CrfHyper hyper;
  hyper.epochs = 4;
  ModelBank seq = train_multi(corpus, hyper, 1);
  ModelBank par = train_multi(corpus, hyper, 4);
  REQUIRE(seq.models.size() == par.models.size());
  for (const auto& [lemma, m] : seq.models) {
    REQUIRE(par.models.count(lemma));
    CHECK(par.models.at(lemma).emission_weights() == m.emission_weights());
    CHECK(par.models.at(lemma).transition_weights() == m.transition_weights());
  }
}

TEST_CASE("a saved bank reloads to identical predictions") {
  GeneratorConfig config;
  config.frame_inventory = default_inventory();
  config.n_documents = 6;
  Corpus corpus = generate(config);
  CrfHyper hyper;
  hyper.epochs = 6;
  ModelBank bank = train_multi(corpus, hyper);
  std::string path = "/tmp/framekit_bank.json";
  save_model_bank(bank, path);
  ModelBank loaded = load_model_bank(path);
  std::remove(path.c_str());

  for (const auto& d : corpus.documents)
    for (const auto& s : d.sentences) {
      auto a = parse_multi(bank, corpus.lu_lexicon, s, 0.3);
      auto b = parse_multi(loaded, corpus.lu_lexicon, s, 0.3);
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].labels == b[i].labels);
        for (std::size_t t = 0; t < a[i].conf.size(); ++t)
          CHECK(a[i].conf[t] == doctest::Approx(b[i].conf[t]).epsilon(1e-9));
      }
    }
}

TEST_CASE("training columns strip trigger links and blank OTHER occurrences") {
  Sentence s = two_frame_sentence();
  auto column = training_column(s, 11);
  REQUIRE(column.size() == 18);
  CHECK(column[10] == Label::lu("Request"));
  CHECK(column[0] == Label::begin("Request", "Speaker", -1));
  CHECK(column[2] == Label::outside());

  Sentence other = chain_sentence({"they", "decide", "now"});
  other.frames = {{kOtherFrame, 2, {}}};
  auto blank = training_column(other, 2);
  for (const auto& l : blank) CHECK(l == Label::outside());
}
