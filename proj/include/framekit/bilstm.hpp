#ifndef FRAMEKIT_BILSTM_HPP
#define FRAMEKIT_BILSTM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "framekit/corpus.hpp"
#include "framekit/features.hpp"
#include "framekit/tagging.hpp"

namespace framekit {

struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct LstmParams {
  Matrix wx;               // [4H x Din], gate order i,f,o,g
  Matrix wh;               // [4H x H]
  std::vector<double> b;   // [4H]
};

struct NeuralHyper {
  int hidden = 100;      // per direction
  int word_dim = 200;
  int pos_dim = 16;
  int deprel_dim = 16;
  int lu_dim = 4;
  int epochs = 30;
  double learning_rate = 0.1;
  double decay = 0.005;
  int batch_size = 8;
  double clip = 5.0;  // gradient norm clip
  std::uint64_t seed = 0;
  std::string embeddings_path;  // optional pretrained word vectors
};

// Shared bidirectional recurrent encoder with one softmax head per frame.
struct NeuralTagger {
  NeuralHyper hyper;
  NeuralVocab vocab;
  LuLexicon lu_lexicon;

  std::vector<std::string> tasks;              // frame names, sorted
  std::vector<std::vector<Label>> task_labels; // per task: O, LU, B/I per role
  std::vector<double> task_weights;            // alpha_k

  Matrix emb_word, emb_pos, emb_deprel, emb_lu;  // emb_lu: 2 rows
  LstmParams forward_cell, backward_cell;
  std::vector<Matrix> head_w;                  // [L_k x 2H]
  std::vector<std::vector<double>> head_b;

  int input_dim() const {
    return hyper.word_dim + hyper.pos_dim + hyper.deprel_dim + hyper.lu_dim;
  }
  int task_index(const std::string& frame) const;

  // Every trainable array, in a fixed order (for updates and grad checks).
  std::vector<std::vector<double>*> param_arrays();
  std::vector<const std::vector<double>*> param_arrays() const;
};

struct NeuralGradients {
  std::vector<std::vector<double>> arrays;  // parallel to param_arrays()

  void accumulate(const NeuralGradients& other);
  double norm() const;
  void scale(double s);
};

// Per-task, per-token probability distributions plus the caches backward
// needs. probs[k][t][i] sums to 1 over i.
struct ForwardResult {
  std::vector<std::vector<std::vector<double>>> probs;
  // caches
  std::vector<std::vector<double>> inputs;            // [t][Din]
  std::vector<std::vector<std::vector<double>>> gate_f, gate_b;  // [t][4][H] post-activation
  std::vector<std::vector<double>> cell_f, cell_b, hid_f, hid_b; // [t][H]
};

ForwardResult net_forward(const NeuralTagger& net,
                          const std::vector<NeuralTokenFeatures>& features);

// Gold label ids per task per token; -1 marks tokens excluded from the loss
// (unused here, all tokens carry a label).
using TaskGold = std::vector<std::vector<int>>;

double net_loss(const NeuralTagger& net, const ForwardResult& fwd, const TaskGold& gold);

NeuralGradients net_backward(const NeuralTagger& net,
                             const std::vector<NeuralTokenFeatures>& features,
                             const ForwardResult& fwd, const TaskGold& gold);

NeuralGradients zero_gradients(const NeuralTagger& net);

// Gold columns for every task of the net over one sentence.
TaskGold gold_task_columns(const NeuralTagger& net, const Sentence& sentence);

NeuralTagger init_tagger(const Corpus& train, const NeuralHyper& hyper);

NeuralTagger train_tagger(const Corpus& train, const NeuralHyper& hyper,
                          std::vector<double>* loss_history = nullptr);

// One pass over the sentence; per task the argmax label is kept at tokens
// where a non-O argmax reaches the threshold. All-O columns are omitted.
std::vector<ScoredColumn> net_predict(const NeuralTagger& net, const Sentence& sentence,
                                      double threshold);

void save_tagger(const NeuralTagger& net, const std::string& path);
NeuralTagger load_tagger(const std::string& path);

}  // namespace framekit

#endif
