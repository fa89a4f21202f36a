#ifndef FRAMEKIT_EVAL_HPP
#define FRAMEKIT_EVAL_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "framekit/corpus.hpp"
#include "framekit/tagging.hpp"

namespace framekit {

enum class MatchMode { Exact, PartialOverlap };
enum class Subtask { TI = 0, TC = 1, RI = 2, RC = 3 };

inline const char* subtask_name(Subtask s) {
  switch (s) {
    case Subtask::TI: return "TI";
    case Subtask::TC: return "TC";
    case Subtask::RI: return "RI";
    case Subtask::RC: return "RC";
  }
  return "?";
}

struct SubtaskScore {
  std::size_t tp = 0, fp = 0, fn = 0;
  double precision = 1.0;  // convention: 1.0 with no predictions
  double recall = 1.0;     // convention: 1.0 with no gold items
  double f1 = 0.0;

  void finalize();
};

struct EvalReport {
  std::array<SubtaskScore, 4> scores;  // indexed by Subtask
  MatchMode mode = MatchMode::Exact;
  double threshold = 0.0;

  const SubtaskScore& operator[](Subtask s) const { return scores[static_cast<int>(s)]; }
  SubtaskScore& operator[](Subtask s) { return scores[static_cast<int>(s)]; }
};

// Predictions per sentence, keyed by Sentence::source_id.
using PredictionSet = std::map<std::string, std::vector<ScoredInstance>>;

// Drops instances below the frame threshold (with all their FEs) and FEs
// below the FE threshold.
PredictionSet apply_threshold(const PredictionSet& predictions, double threshold);

// TI: trigger position; TC: + frame; RI: FE span under a TC-correct parent;
// RC: + role. FEs of wrong or missing parent frames cascade to errors.
EvalReport score(const Corpus& gold, const PredictionSet& predictions, MatchMode mode,
                 double threshold = 0.0);

struct PrPoint {
  double threshold = 0.0;
  double precision = 1.0;
  double recall = 0.0;
};

struct EerPoint {
  double threshold = 0.0;
  double value = 0.0;
  bool boundary = false;  // set when precision and recall never cross
};

struct PrCurve {
  std::array<std::vector<PrPoint>, 4> points;  // per subtask
  std::array<EerPoint, 4> eer;
};

std::vector<double> threshold_grid(int n_points);  // uniform over [0,1]

PrCurve pr_curve(const Corpus& gold, const PredictionSet& predictions,
                 const std::vector<double>& thresholds, MatchMode mode = MatchMode::Exact);

// Interpolated precision = recall crossing of one subtask's curve.
EerPoint eer_operating_point(const std::vector<PrPoint>& points);

std::string report_to_json(const EvalReport& report);
std::string curve_to_csv(const PrCurve& curve);

// JSON-lines: {"sentence": id, "frames":[{frame,trigger,conf,
//              fes:[{role,start,end,conf}]}]}
void write_predictions(const PredictionSet& predictions, const std::string& path);
PredictionSet read_predictions(const std::string& path);

PredictionSet gold_as_predictions(const Corpus& corpus);

}  // namespace framekit

#endif
