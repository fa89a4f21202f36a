#ifndef FRAMEKIT_FEATURES_HPP
#define FRAMEKIT_FEATURES_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "framekit/corpus.hpp"

namespace framekit {

class TreeError : public CorpusError {
 public:
  explicit TreeError(const std::string& msg) : CorpusError(msg) {}
};

enum class StepDirection { Ascending, Descending };

struct PathStep {
  StepDirection direction;
  std::string deprel;
  bool operator==(const PathStep&) const = default;
};

struct DependencyPath {
  std::vector<PathStep> steps;

  std::string rendered() const;  // "^subj.vobj" style: ^ ascending, v descending
  bool operator==(const DependencyPath&) const = default;
};

// Shortest tree path: ascending from `from` to the lowest common ancestor,
// then descending to `to`. Throws TreeError on cycles or multiple roots.
DependencyPath dependency_path(const Sentence& sentence, int from, int to);

// Paths longer than this are bucketed, keeping first and last step.
inline constexpr std::size_t kMaxPathSteps = 6;

struct FeatureVector {
  std::vector<std::uint32_t> ids;  // sorted, unique; implicit value 1.0
};

// String-feature dictionary; closed after training (unknown features drop).
class FeatureDict {
 public:
  std::uint32_t intern(const std::string& feature);       // add if absent
  std::int64_t lookup(const std::string& feature) const;  // -1 when absent
  std::size_t size() const { return names_.size(); }
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> names_;
  bool frozen_ = false;
};

// Raw feature strings for one (trigger, position) pair: lemma/POS in a +-2
// window, the dependency path to the trigger, and an is-trigger indicator.
std::vector<std::string> crf_feature_strings(const Sentence& sentence, int trigger, int position);

FeatureVector crf_features(const Sentence& sentence, int trigger, int position,
                           const FeatureDict& dict);

// Token-id vocabularies for the neural tagger.
class Vocabulary {
 public:
  static constexpr std::uint32_t kUnkId = 0;

  explicit Vocabulary(std::string unk_token = "<unk>");
  std::uint32_t intern(const std::string& token);
  std::uint32_t id(const std::string& token) const;  // kUnkId when absent
  const std::string& token(std::uint32_t id) const;
  std::size_t size() const { return tokens_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> tokens_;
};

struct NeuralVocab {
  Vocabulary words;
  Vocabulary pos;
  Vocabulary deprel;
};

NeuralVocab build_neural_vocab(const Corpus& train);

struct NeuralTokenFeatures {
  std::uint32_t word_id = 0;
  std::uint32_t pos_id = 0;
  std::uint32_t deprel_id = 0;
  bool is_lu = false;
};

std::vector<NeuralTokenFeatures> neural_features(const Sentence& sentence,
                                                 const NeuralVocab& vocab,
                                                 const LuLexicon& lu_lexicon);

// "word v1 ... vd" text format; rows with the wrong dimension are rejected.
std::unordered_map<std::string, std::vector<double>> load_embeddings(const std::string& path,
                                                                     std::size_t dim);

}  // namespace framekit

#endif
