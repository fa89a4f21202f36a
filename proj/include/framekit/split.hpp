#ifndef FRAMEKIT_SPLIT_HPP
#define FRAMEKIT_SPLIT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "framekit/corpus.hpp"

namespace framekit {

struct SplitResult {
  Corpus train;
  Corpus test;
  double achieved_fraction = 0.0;  // train share of frame occurrences
  bool within_tolerance = true;    // |achieved - requested| <= 0.02
  std::map<std::string, std::size_t> train_frame_counts;
  std::map<std::string, std::size_t> test_frame_counts;
};

// Document-atomic split targeting `train_fraction` of the frame occurrences.
// Greedy largest-first assignment minimizing per-frame distribution skew;
// ties broken by a seed-shuffled document order.
SplitResult split(const Corpus& corpus, double train_fraction, std::uint64_t seed);

std::string split_manifest_json(const SplitResult& result, double requested_fraction);

// Document-atomic k folds; fold i's heldout sets are disjoint and cover the
// corpus. Throws on k < 2 or k > #documents.
std::vector<std::pair<Corpus, Corpus>> kfold(const Corpus& corpus, int k);

}  // namespace framekit

#endif
