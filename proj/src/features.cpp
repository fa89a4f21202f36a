#include "framekit/features.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace framekit {

std::string DependencyPath::rendered() const {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += '.';
    out += steps[i].direction == StepDirection::Ascending ? '^' : 'v';
    out += steps[i].deprel;
  }
  return out;
}

namespace {

// depth of each token, validating single-root acyclicity on the way
std::vector<int> tree_depths(const Sentence& s) {
  const int n = s.size();
  int roots = 0;
  for (const auto& t : s.tokens)
    if (t.head == 0) ++roots;
  if (roots != 1) throw TreeError("sentence has " + std::to_string(roots) + " roots");
  std::vector<int> depth(n + 1, -1);
  for (int i = 1; i <= n; ++i) {
    int steps = 0, j = i;
    while (j != 0) {
      j = s.token(j).head;
      if (++steps > n) throw TreeError("dependency cycle through token " + std::to_string(i));
    }
    depth[i] = steps;
  }
  return depth;
}

}  // namespace

DependencyPath dependency_path(const Sentence& sentence, int from, int to) {
  const int n = sentence.size();
  if (from < 1 || from > n || to < 1 || to > n)
    throw TreeError("path endpoints out of bounds");
  DependencyPath path;
  if (from == to) return path;

  std::vector<int> depth = tree_depths(sentence);
  int a = from, b = to;
  std::vector<PathStep> up, down;
  while (depth[a] > depth[b]) {
    up.push_back({StepDirection::Ascending, sentence.token(a).deprel});
    a = sentence.token(a).head;
  }
  while (depth[b] > depth[a]) {
    down.push_back({StepDirection::Descending, sentence.token(b).deprel});
    b = sentence.token(b).head;
  }
  while (a != b) {
    up.push_back({StepDirection::Ascending, sentence.token(a).deprel});
    a = sentence.token(a).head;
    down.push_back({StepDirection::Descending, sentence.token(b).deprel});
    b = sentence.token(b).head;
  }
  path.steps = std::move(up);
  path.steps.insert(path.steps.end(), down.rbegin(), down.rend());
  return path;
}

std::uint32_t FeatureDict::intern(const std::string& feature) {
  auto it = index_.find(feature);
  if (it != index_.end()) return it->second;
  if (frozen_) throw CorpusError("intern on a frozen feature dictionary: " + feature);
  std::uint32_t id = static_cast<std::uint32_t>(names_.size());
  index_.emplace(feature, id);
  names_.push_back(feature);
  return id;
}

std::int64_t FeatureDict::lookup(const std::string& feature) const {
  auto it = index_.find(feature);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::vector<std::string> crf_feature_strings(const Sentence& sentence, int trigger,
                                             int position) {
  std::vector<std::string> out;
  const int n = sentence.size();
  for (int off = -2; off <= 2; ++off) {
    int i = position + off;
    std::string suffix = "[" + std::to_string(off) + "]";
    if (i < 1 || i > n) {
      out.push_back("LEM" + suffix + "=<pad>");
      out.push_back("POS" + suffix + "=<pad>");
    } else {
      out.push_back("LEM" + suffix + "=" + sentence.token(i).lemma);
      out.push_back("POS" + suffix + "=" + sentence.token(i).pos);
    }
  }
  DependencyPath path = dependency_path(sentence, position, trigger);
  if (path.steps.size() > kMaxPathSteps) {
    out.push_back("PATH=LONGPATH:" +
                  (std::string(1, path.steps.front().direction == StepDirection::Ascending
                                      ? '^' : 'v') + path.steps.front().deprel) +
                  "..." +
                  (std::string(1, path.steps.back().direction == StepDirection::Ascending
                                      ? '^' : 'v') + path.steps.back().deprel));
  } else {
    out.push_back("PATH=" + path.rendered());
  }
  if (position == trigger) out.push_back("IS_TRIGGER");
  out.push_back("TRIGLEM=" + sentence.token(trigger).lemma);
  return out;
}

FeatureVector crf_features(const Sentence& sentence, int trigger, int position,
                           const FeatureDict& dict) {
  FeatureVector fv;
  for (const auto& f : crf_feature_strings(sentence, trigger, position)) {
    std::int64_t id = dict.lookup(f);
    if (id >= 0) fv.ids.push_back(static_cast<std::uint32_t>(id));
  }
  std::sort(fv.ids.begin(), fv.ids.end());
  fv.ids.erase(std::unique(fv.ids.begin(), fv.ids.end()), fv.ids.end());
  return fv;
}

Vocabulary::Vocabulary(std::string unk_token) {
  index_.emplace(unk_token, kUnkId);
  tokens_.push_back(std::move(unk_token));
}

std::uint32_t Vocabulary::intern(const std::string& token) {
  auto it = index_.find(token);
  if (it != index_.end()) return it->second;
  std::uint32_t id = static_cast<std::uint32_t>(tokens_.size());
  index_.emplace(token, id);
  tokens_.push_back(token);
  return id;
}

std::uint32_t Vocabulary::id(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnkId : it->second;
}

const std::string& Vocabulary::token(std::uint32_t id) const { return tokens_.at(id); }

NeuralVocab build_neural_vocab(const Corpus& train) {
  NeuralVocab vocab;
  for (const auto& d : train.documents)
    for (const auto& s : d.sentences)
      for (const auto& t : s.tokens) {
        vocab.words.intern(t.surface);
        vocab.pos.intern(t.pos);
        vocab.deprel.intern(t.deprel);
      }
  return vocab;
}

std::vector<NeuralTokenFeatures> neural_features(const Sentence& sentence,
                                                 const NeuralVocab& vocab,
                                                 const LuLexicon& lu_lexicon) {
  std::vector<NeuralTokenFeatures> out;
  out.reserve(sentence.tokens.size());
  for (const auto& t : sentence.tokens) {
    NeuralTokenFeatures f;
    f.word_id = vocab.words.id(t.surface);
    f.pos_id = vocab.pos.id(t.pos);
    f.deprel_id = vocab.deprel.id(t.deprel);
    f.is_lu = lu_lexicon.count(t.lemma) > 0;
    out.push_back(f);
  }
  return out;
}

std::unordered_map<std::string, std::vector<double>> load_embeddings(const std::string& path,
                                                                     std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open embedding file: " + path);
  std::unordered_map<std::string, std::vector<double>> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string word;
    row >> word;
    std::vector<double> vec;
    double v;
    while (row >> v) vec.push_back(v);
    if (vec.size() != dim)
      throw CorpusError("embedding row " + std::to_string(line_no) + " has dimension " +
                        std::to_string(vec.size()) + ", expected " + std::to_string(dim));
    table[word] = std::move(vec);
  }
  return table;
}

}  // namespace framekit
