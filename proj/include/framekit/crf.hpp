#ifndef FRAMEKIT_CRF_HPP
#define FRAMEKIT_CRF_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "framekit/corpus.hpp"
#include "framekit/features.hpp"
#include "framekit/tagging.hpp"

namespace framekit {

class TrainError : public CorpusError {
 public:
  explicit TrainError(const std::string& msg) : CorpusError(msg) {}
};

// One training/decoding instance: per-token observation features plus gold
// label ids (empty when decoding).
struct CrfExample {
  std::vector<FeatureVector> features;
  std::vector<int> gold;
};

struct CrfHyper {
  double l2 = 1e-3;
  int epochs = 50;
  double learning_rate = 0.5;
  double decay = 0.01;  // step t gets learning_rate / (1 + decay * t)
  int batch_size = 8;
  std::uint64_t seed = 0;
};

// Linear-chain CRF over a per-LU label set. Label 0 is always O; transitions
// into I labels are hard-masked unless the previous label opens the same
// segment, so Viterbi output is BIO well-formed by construction.
class CrfModel {
 public:
  CrfModel() = default;
  CrfModel(std::string lemma, std::vector<Label> labels, std::size_t num_features,
           double l2 = 1e-3);

  const std::string& lemma() const { return lemma_; }
  const std::vector<Label>& labels() const { return labels_; }
  std::size_t num_labels() const { return labels_.size(); }
  std::size_t num_features() const { return num_features_; }
  double l2() const { return l2_; }

  double& emission(std::uint32_t feature, int label) {
    return emission_[static_cast<std::size_t>(feature) * labels_.size() + label];
  }
  double emission(std::uint32_t feature, int label) const {
    return emission_[static_cast<std::size_t>(feature) * labels_.size() + label];
  }
  double& transition(int prev, int next) { return transition_[prev * labels_.size() + next]; }
  double transition(int prev, int next) const { return transition_[prev * labels_.size() + next]; }
  bool transition_allowed(int prev, int next) const {
    return allowed_[prev * labels_.size() + next];
  }
  bool start_allowed(int label) const { return start_allowed_[label]; }

  std::vector<double>& emission_weights() { return emission_; }
  const std::vector<double>& emission_weights() const { return emission_; }
  std::vector<double>& transition_weights() { return transition_; }
  const std::vector<double>& transition_weights() const { return transition_; }

  // Unnormalized path score of a label sequence.
  double path_score(const CrfExample& x, const std::vector<int>& path) const;

 private:
  std::string lemma_;
  std::vector<Label> labels_;
  std::size_t num_features_ = 0;
  double l2_ = 1e-3;
  std::vector<double> emission_;    // feature-major [feature][label]
  std::vector<double> transition_;  // [prev][next]
  std::vector<bool> allowed_;
  std::vector<bool> start_allowed_;
};

struct CrfMarginals {
  double log_partition = 0.0;
  std::vector<std::vector<double>> token;                // [t][label]
  std::vector<std::vector<double>> transition;           // [t][prev*L+next], t in [0,T-2]
};

// Optional per-position label mask for decoding (e.g. pin LU labels to the
// trigger position). Empty means all labels available everywhere.
using PositionMask = std::vector<std::vector<bool>>;

CrfMarginals log_partition_and_marginals(const CrfModel& model, const CrfExample& x,
                                         const PositionMask& mask = {});

struct ViterbiResult {
  std::vector<int> path;
  double score = 0.0;
};

// Ties resolved toward the lexicographically smallest label sequence.
ViterbiResult viterbi(const CrfModel& model, const CrfExample& x, const PositionMask& mask = {});

struct CrfGradient {
  double nll = 0.0;
  std::vector<double> emission;    // same layout as the model
  std::vector<double> transition;
};

// Regularized negative log-likelihood and its gradient (model expectations
// minus empirical counts plus the L2 term).
CrfGradient nll_and_gradient(const CrfModel& model, const CrfExample& example);

CrfModel train_crf(const std::vector<CrfExample>& examples, const std::string& lemma,
                   std::vector<Label> labels, std::size_t num_features, const CrfHyper& hyper,
                   std::vector<double>* nll_history = nullptr);

struct ModelBank {
  std::map<std::string, CrfModel> models;  // lemma -> model
  FeatureDict dict;
};

ModelBank train_multi(const Corpus& train, const CrfHyper& hyper, int jobs = 1);

struct ParseCoverage {
  std::size_t occurrences = 0;       // LU-lexicon occurrences seen
  std::size_t missing_models = 0;    // occurrences with no trained model
};

// Runs the per-lemma model at every LU occurrence and keeps columns whose
// trigger confidence reaches the threshold. Trigger links are attached.
std::vector<ScoredColumn> parse_multi(const ModelBank& bank, const LuLexicon& lexicon,
                                      const Sentence& sentence, double threshold,
                                      ParseCoverage* coverage = nullptr);

// Per-LU training columns: the annotated column of the occurrence, or all-O
// for OTHER/no-frame occurrences. Trigger indices are stripped.
std::vector<Label> training_column(const Sentence& sentence, int trigger);

void save_model_bank(const ModelBank& bank, const std::string& path);
ModelBank load_model_bank(const std::string& path);

}  // namespace framekit

#endif
