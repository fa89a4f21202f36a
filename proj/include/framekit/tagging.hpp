#ifndef FRAMEKIT_TAGGING_HPP
#define FRAMEKIT_TAGGING_HPP

#include <string>
#include <vector>

#include "framekit/bio.hpp"

namespace framekit {

// Raw per-frame tagger output, before the coherence filter. `conf[i]` is the
// tagger's confidence in `labels[i]` (CRF: posterior marginal; neural:
// softmax probability). Trigger links in `labels` may be absent (-1).
struct ScoredColumn {
  std::vector<Label> labels;
  std::vector<double> conf;

  int size() const { return static_cast<int>(labels.size()); }
};

// A filtered frame prediction with its confidences. `fe_conf[i]` belongs to
// `instance.elements[i]`; frame_conf scores the trigger decision.
struct ScoredInstance {
  FrameInstance instance;
  double frame_conf = 1.0;
  std::vector<double> fe_conf;
};

}  // namespace framekit

#endif
