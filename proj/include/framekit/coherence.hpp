#ifndef FRAMEKIT_COHERENCE_HPP
#define FRAMEKIT_COHERENCE_HPP

#include <vector>

#include "framekit/tagging.hpp"

namespace framekit {

enum class RepairMode {
  Repair,  // promote a leading I to B, then link
  Strict   // drop segments that do not start with B
};

// Nearest trigger by token distance from the segment midpoint; ties toward
// the leftmost trigger.
int resolve_multi_trigger(const std::vector<int>& candidate_triggers, const Span& segment);

// Frame-level repair and linking: segments whose frame has no LU-labeled
// token anywhere in the columns are removed; survivors are linked to the
// nearest same-frame trigger. Total function, never throws on tagger noise.
std::vector<ScoredInstance> coherence_filter(const Sentence& sentence,
                                             const std::vector<ScoredColumn>& columns,
                                             RepairMode mode = RepairMode::Repair);

// Gold instances re-expressed as perfectly confident scored columns; used to
// route gold data through the same evaluation path as tagger output.
std::vector<ScoredColumn> gold_columns(const Sentence& sentence);

}  // namespace framekit

#endif
