#include "framekit/split.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "json.hpp"

namespace framekit {

namespace {

std::map<std::string, std::size_t> frame_counts(const Document& d) {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : d.sentences)
    for (const auto& f : s.frames)
      if (!f.is_other()) ++counts[f.frame];
  return counts;
}

std::size_t total(const std::map<std::string, std::size_t>& counts) {
  std::size_t n = 0;
  for (const auto& [_, c] : counts) n += c;
  return n;
}

}  // namespace

SplitResult split(const Corpus& corpus, double train_fraction, std::uint64_t seed) {
  if (train_fraction <= 0.0 || train_fraction >= 1.0)
    throw CorpusError("train fraction must be in (0,1)");
  if (corpus.documents.size() < 2) throw CorpusError("split needs at least 2 documents");

  const std::size_t n_docs = corpus.documents.size();
  std::vector<std::map<std::string, std::size_t>> doc_counts(n_docs);
  std::map<std::string, std::size_t> totals;
  for (std::size_t i = 0; i < n_docs; ++i) {
    doc_counts[i] = frame_counts(corpus.documents[i]);
    for (const auto& [f, c] : doc_counts[i]) totals[f] += c;
  }

  std::vector<std::size_t> order(n_docs);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);  // random tie-breaking
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return total(doc_counts[a]) > total(doc_counts[b]);
  });

  std::map<std::string, std::size_t> train_counts;
  std::size_t train_sentences = 0, total_sentences = corpus.num_sentences();
  std::vector<bool> in_train(n_docs, false);

  auto objective = [&](const std::map<std::string, std::size_t>& counts) {
    double cost = 0.0;
    for (const auto& [f, tot] : totals) {
      auto it = counts.find(f);
      double have = it == counts.end() ? 0.0 : static_cast<double>(it->second);
      double want = train_fraction * static_cast<double>(tot);
      cost += (have - want) * (have - want);
    }
    return cost;
  };

  for (std::size_t idx : order) {
    auto with = train_counts;
    for (const auto& [f, c] : doc_counts[idx]) with[f] += c;
    double cost_train = objective(with);
    double cost_test = objective(train_counts);
    bool to_train;
    if (cost_train < cost_test) {
      to_train = true;
    } else if (cost_train > cost_test) {
      to_train = false;
    } else {
      // frameless document: balance sentence counts instead
      to_train = static_cast<double>(train_sentences) <
                 train_fraction * static_cast<double>(total_sentences);
    }
    if (to_train) {
      train_counts = std::move(with);
      train_sentences += corpus.documents[idx].sentences.size();
      in_train[idx] = true;
    }
  }

  // local refinement: flip single documents while the skew keeps dropping
  bool improved = true;
  for (int pass = 0; improved && pass < 20; ++pass) {
    improved = false;
    for (std::size_t idx : order) {
      auto flipped = train_counts;
      if (in_train[idx]) {
        for (const auto& [f, c] : doc_counts[idx]) flipped[f] -= c;
      } else {
        for (const auto& [f, c] : doc_counts[idx]) flipped[f] += c;
      }
      if (objective(flipped) + 1e-9 < objective(train_counts)) {
        train_counts = std::move(flipped);
        if (in_train[idx])
          train_sentences -= corpus.documents[idx].sentences.size();
        else
          train_sentences += corpus.documents[idx].sentences.size();
        in_train[idx] = !in_train[idx];
        improved = true;
      }
    }
  }

  SplitResult result;
  result.train.lu_lexicon = corpus.lu_lexicon;
  result.test.lu_lexicon = corpus.lu_lexicon;
  for (std::size_t i = 0; i < n_docs; ++i)
    (in_train[i] ? result.train : result.test).documents.push_back(corpus.documents[i]);
  result.train_frame_counts = train_counts;
  for (const auto& [f, tot] : totals) {
    std::size_t tr = train_counts.count(f) ? train_counts[f] : 0;
    if (tot > tr) result.test_frame_counts[f] = tot - tr;
  }
  std::size_t grand_total = total(totals);
  result.achieved_fraction =
      grand_total ? static_cast<double>(total(train_counts)) / grand_total : 0.0;
  result.within_tolerance = std::abs(result.achieved_fraction - train_fraction) <= 0.02;
  return result;
}

std::string split_manifest_json(const SplitResult& result, double requested_fraction) {
  nlohmann::json train_ids = nlohmann::json::array();
  nlohmann::json test_ids = nlohmann::json::array();
  for (const auto& d : result.train.documents) train_ids.push_back(d.id);
  for (const auto& d : result.test.documents) test_ids.push_back(d.id);
  nlohmann::json j{{"requested_fraction", requested_fraction},
                   {"achieved_fraction", result.achieved_fraction},
                   {"within_tolerance", result.within_tolerance},
                   {"train_documents", train_ids},
                   {"test_documents", test_ids},
                   {"train_frame_counts", result.train_frame_counts},
                   {"test_frame_counts", result.test_frame_counts}};
  return j.dump(2);
}

std::vector<std::pair<Corpus, Corpus>> kfold(const Corpus& corpus, int k) {
  if (k < 2) throw CorpusError("kfold requires k >= 2");
  if (static_cast<std::size_t>(k) > corpus.documents.size())
    throw CorpusError("kfold requires at least k documents (" + std::to_string(k) + " > " +
                      std::to_string(corpus.documents.size()) + ")");
  std::vector<std::pair<Corpus, Corpus>> folds(k);
  for (auto& [train, heldout] : folds) {
    train.lu_lexicon = corpus.lu_lexicon;
    heldout.lu_lexicon = corpus.lu_lexicon;
  }
  for (std::size_t i = 0; i < corpus.documents.size(); ++i)
    for (int f = 0; f < k; ++f)
      (static_cast<int>(i % k) == f ? folds[f].second : folds[f].first)
          .documents.push_back(corpus.documents[i]);
  return folds;
}

}  // namespace framekit
