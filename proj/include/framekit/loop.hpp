#ifndef FRAMEKIT_LOOP_HPP
#define FRAMEKIT_LOOP_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "framekit/corpus.hpp"
#include "framekit/crf.hpp"
#include "framekit/eval.hpp"

namespace framekit {

// One LU occurrence to annotate.
struct LuExample {
  std::size_t doc = 0;
  std::size_t sentence = 0;  // index within the document
  int trigger = 0;
  std::string lemma;
};

std::vector<LuExample> collect_examples(const Corpus& corpus);

// 0.5 * Jaccard of the +-3 context lemma bags + 0.5 * [trigger deprel and
// governor POS both match]. Throws on different lemmas.
double similarity(const Corpus& corpus, const LuExample& a, const LuExample& b);

struct Batch {
  std::string lemma;
  std::vector<std::size_t> example_ids;  // indices into the pool
  double centroid_similarity = 1.0;      // mean similarity to the seed example
  int iteration = 0;
};

// Greedy per-LU clustering: seed = first unassigned example in pool order,
// batch = seed plus its most similar peers up to batch_size.
std::vector<Batch> select_batches(const Corpus& corpus, const std::vector<LuExample>& pool,
                                  const std::vector<std::size_t>& candidate_ids,
                                  std::size_t batch_size);

enum class LoopParser { Crf, Neural };

struct LoopConfig {
  int iterations = 5;
  std::size_t batch_size = 20;
  std::size_t batches_per_iteration = 10;
  int k = 5;
  LoopParser parser = LoopParser::Crf;
  double threshold = 0.5;
  MatchMode mode = MatchMode::Exact;
  CrfHyper crf;
};

struct IterationReport {
  int iteration = 0;
  std::size_t annotated = 0;  // cumulative
  std::size_t batches = 0;
  double preannotation_frame_accuracy = 0.0;
  bool kfold_run = false;
  std::array<double, 4> f1{};  // TI/TC/RI/RC when kfold_run
};

struct LoopReport {
  std::vector<IterationReport> iterations;
};

// Micro-averaged document-atomic k-fold: train on k-1 folds, parse and score
// the heldout fold, aggregate counts, then compute P/R/F1.
EvalReport kfold_crf_eval(const Corpus& corpus, int k, const CrfHyper& hyper, double threshold,
                          MatchMode mode);

// Oracle-driven simulation of the iterative annotation process: parser
// pre-annotation, batch selection, gold substitution, retraining, k-fold
// monitoring. Iteration 1 pre-annotates with the no-frame baseline.
LoopReport run_loop(const Corpus& pool, const LoopConfig& config);

std::string loop_report_json(const LoopReport& report);
std::string loop_report_csv(const LoopReport& report);
LoopConfig load_loop_config(const std::string& path);

}  // namespace framekit

#endif
