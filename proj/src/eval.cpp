#include "framekit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace framekit {

void SubtaskScore::finalize() {
  precision = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 1.0;
  recall = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 1.0;
  f1 = (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

PredictionSet apply_threshold(const PredictionSet& predictions, double threshold) {
  PredictionSet out;
  for (const auto& [id, instances] : predictions) {
    std::vector<ScoredInstance> kept;
    for (const auto& inst : instances) {
      if (inst.frame_conf < threshold) continue;  // frame gate suppresses its FEs
      ScoredInstance copy;
      copy.instance.frame = inst.instance.frame;
      copy.instance.trigger = inst.instance.trigger;
      copy.frame_conf = inst.frame_conf;
      for (std::size_t k = 0; k < inst.instance.elements.size(); ++k) {
        double conf = k < inst.fe_conf.size() ? inst.fe_conf[k] : 1.0;
        if (conf < threshold) continue;
        copy.instance.elements.push_back(inst.instance.elements[k]);
        copy.fe_conf.push_back(conf);
      }
      kept.push_back(std::move(copy));
    }
    if (!kept.empty()) out[id] = std::move(kept);
  }
  return out;
}

namespace {

bool spans_match(const Span& a, const Span& b, MatchMode mode) {
  return mode == MatchMode::Exact ? a == b : a.overlaps(b);
}

void score_sentence(const Sentence& gold, const std::vector<ScoredInstance>& preds,
                    MatchMode mode, EvalReport& report) {
  std::set<int> gold_triggers;
  std::map<int, const FrameInstance*> gold_by_trigger;
  std::size_t gold_fes = 0;
  for (const auto& f : gold.frames) {
    if (f.is_other()) continue;
    gold_triggers.insert(f.trigger);
    gold_by_trigger[f.trigger] = &f;
    gold_fes += f.elements.size();
  }

  std::set<int> pred_triggers;
  for (const auto& p : preds) pred_triggers.insert(p.instance.trigger);

  auto& ti = report[Subtask::TI];
  for (int t : pred_triggers)
    gold_triggers.count(t) ? ++ti.tp : ++ti.fp;
  for (int t : gold_triggers)
    if (!pred_triggers.count(t)) ++ti.fn;

  auto& tc = report[Subtask::TC];
  auto& ri = report[Subtask::RI];
  auto& rc = report[Subtask::RC];
  std::size_t ri_tp_here = 0, rc_tp_here = 0;
  std::set<int> gold_tc_matched;

  for (const auto& p : preds) {
    auto it = gold_by_trigger.find(p.instance.trigger);
    bool frame_ok = it != gold_by_trigger.end() && it->second->frame == p.instance.frame;
    if (frame_ok) {
      ++tc.tp;
      gold_tc_matched.insert(p.instance.trigger);
      const FrameInstance& g = *it->second;
      // role+span matches first, then span-only completions; one-to-one
      std::vector<bool> used_rc(g.elements.size(), false);
      std::vector<bool> used_ri(g.elements.size(), false);
      std::vector<bool> pred_rc(p.instance.elements.size(), false);
      for (std::size_t a = 0; a < p.instance.elements.size(); ++a)
        for (std::size_t b = 0; b < g.elements.size(); ++b)
          if (!used_rc[b] && p.instance.elements[a].role == g.elements[b].role &&
              spans_match(p.instance.elements[a].span, g.elements[b].span, mode)) {
            used_rc[b] = used_ri[b] = pred_rc[a] = true;
            ++rc_tp_here;
            ++ri_tp_here;
            break;
          }
      for (std::size_t a = 0; a < p.instance.elements.size(); ++a) {
        if (pred_rc[a]) continue;
        for (std::size_t b = 0; b < g.elements.size(); ++b)
          if (!used_ri[b] && spans_match(p.instance.elements[a].span, g.elements[b].span, mode)) {
            used_ri[b] = true;
            ++ri_tp_here;
            break;
          }
      }
    } else {
      ++tc.fp;  // cascade: every FE below also counts as a false positive
    }
  }

  // FP/FN bookkeeping for the role subtasks
  std::size_t pred_fes = 0;
  for (const auto& p : preds) pred_fes += p.instance.elements.size();
  ri.tp += ri_tp_here;
  rc.tp += rc_tp_here;
  ri.fp += pred_fes - ri_tp_here;
  rc.fp += pred_fes - rc_tp_here;
  ri.fn += gold_fes - ri_tp_here;
  rc.fn += gold_fes - rc_tp_here;
  for (const auto& [trigger, g] : gold_by_trigger)
    if (!gold_tc_matched.count(trigger)) ++tc.fn;
}

}  // namespace

EvalReport score(const Corpus& gold, const PredictionSet& predictions, MatchMode mode,
                 double threshold) {
  EvalReport report;
  report.mode = mode;
  report.threshold = threshold;
  std::set<std::string> known;
  for (const auto& d : gold.documents)
    for (const auto& s : d.sentences) {
      known.insert(s.source_id);
      auto it = predictions.find(s.source_id);
      static const std::vector<ScoredInstance> kEmpty;
      score_sentence(s, it == predictions.end() ? kEmpty : it->second, mode, report);
    }
  for (const auto& [id, _] : predictions)
    if (!known.count(id))
      throw CorpusError("predictions reference unknown sentence '" + id + "'");
  for (auto& s : report.scores) s.finalize();
  return report;
}

std::vector<double> threshold_grid(int n_points) {
  if (n_points < 2) throw CorpusError("threshold grid needs at least 2 points");
  std::vector<double> grid(n_points);
  for (int i = 0; i < n_points; ++i)
    grid[i] = static_cast<double>(i) / static_cast<double>(n_points - 1);
  return grid;
}

EerPoint eer_operating_point(const std::vector<PrPoint>& points) {
  if (points.empty()) throw CorpusError("empty precision/recall curve");
  EerPoint best;
  double best_gap = std::abs(points[0].precision - points[0].recall);
  best.threshold = points[0].threshold;
  best.value = 0.5 * (points[0].precision + points[0].recall);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    double d0 = points[i].precision - points[i].recall;
    double d1 = points[i + 1].precision - points[i + 1].recall;
    if ((d0 <= 0.0 && d1 >= 0.0) || (d0 >= 0.0 && d1 <= 0.0)) {
      double lambda = (d0 == d1) ? 0.0 : d0 / (d0 - d1);
      EerPoint eer;
      eer.threshold =
          points[i].threshold + lambda * (points[i + 1].threshold - points[i].threshold);
      eer.value =
          points[i].precision + lambda * (points[i + 1].precision - points[i].precision);
      eer.boundary = false;
      return eer;
    }
  }
  for (const auto& p : points) {
    double gap = std::abs(p.precision - p.recall);
    if (gap < best_gap) {
      best_gap = gap;
      best.threshold = p.threshold;
      best.value = 0.5 * (p.precision + p.recall);
    }
  }
  best.boundary = true;
  return best;
}

PrCurve pr_curve(const Corpus& gold, const PredictionSet& predictions,
                 const std::vector<double>& thresholds, MatchMode mode) {
  PrCurve curve;
  for (double t : thresholds) {
    EvalReport report = score(gold, apply_threshold(predictions, t), mode, t);
    for (int s = 0; s < 4; ++s) {
      const auto& sc = report.scores[s];
      curve.points[s].push_back({t, sc.precision, (sc.tp + sc.fn) ? sc.recall : 0.0});
    }
  }
  for (int s = 0; s < 4; ++s) curve.eer[s] = eer_operating_point(curve.points[s]);
  return curve;
}

namespace {

nlohmann::json subtask_to_json(const SubtaskScore& s) {
  return nlohmann::json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
                        {"tp", s.tp},              {"fp", s.fp},          {"fn", s.fn}};
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j{
      {"mode", report.mode == MatchMode::Exact ? "exact" : "partial"},
      {"threshold", report.threshold},
      {"TI", subtask_to_json(report[Subtask::TI])},
      {"TC", subtask_to_json(report[Subtask::TC])},
      {"RI", subtask_to_json(report[Subtask::RI])},
      {"RC", subtask_to_json(report[Subtask::RC])},
  };
  return j.dump(2);
}

std::string curve_to_csv(const PrCurve& curve) {
  std::ostringstream out;
  out << "threshold";
  for (int s = 0; s < 4; ++s)
    out << ',' << subtask_name(static_cast<Subtask>(s)) << "_precision,"
        << subtask_name(static_cast<Subtask>(s)) << "_recall";
  out << '\n';
  for (std::size_t i = 0; i < curve.points[0].size(); ++i) {
    out << curve.points[0][i].threshold;
    for (int s = 0; s < 4; ++s)
      out << ',' << curve.points[s][i].precision << ',' << curve.points[s][i].recall;
    out << '\n';
  }
  return out.str();
}

void write_predictions(const PredictionSet& predictions, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CorpusError("cannot open output file: " + path);
  for (const auto& [id, instances] : predictions) {
    nlohmann::json frames = nlohmann::json::array();
    for (const auto& inst : instances) {
      nlohmann::json fes = nlohmann::json::array();
      for (std::size_t k = 0; k < inst.instance.elements.size(); ++k) {
        const auto& fe = inst.instance.elements[k];
        fes.push_back(nlohmann::json{{"role", fe.role},
                                     {"start", fe.span.start},
                                     {"end", fe.span.end},
                                     {"conf", k < inst.fe_conf.size() ? inst.fe_conf[k] : 1.0}});
      }
      frames.push_back(nlohmann::json{{"frame", inst.instance.frame},
                                      {"trigger", inst.instance.trigger},
                                      {"conf", inst.frame_conf},
                                      {"fes", fes}});
    }
    out << nlohmann::json{{"sentence", id}, {"frames", frames}}.dump() << '\n';
  }
}

PredictionSet read_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open predictions file: " + path);
  PredictionSet preds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      std::string id = j.at("sentence").get<std::string>();
      auto& instances = preds[id];
      for (const auto& jf : j.at("frames")) {
        ScoredInstance inst;
        inst.instance.frame = jf.at("frame").get<std::string>();
        inst.instance.trigger = jf.at("trigger").get<int>();
        inst.frame_conf = jf.value("conf", 1.0);
        for (const auto& jfe : jf.value("fes", nlohmann::json::array())) {
          FrameElement fe;
          fe.role = jfe.at("role").get<std::string>();
          fe.span.start = jfe.at("start").get<int>();
          fe.span.end = jfe.at("end").get<int>();
          fe.trigger_link = inst.instance.trigger;
          inst.instance.elements.push_back(std::move(fe));
          inst.fe_conf.push_back(jfe.value("conf", 1.0));
        }
        instances.push_back(std::move(inst));
      }
    } catch (const nlohmann::json::exception& e) {
      throw CorpusError("predictions line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return preds;
}

PredictionSet gold_as_predictions(const Corpus& corpus) {
  PredictionSet preds;
  for (const auto& d : corpus.documents)
    for (const auto& s : d.sentences) {
      std::vector<ScoredInstance> instances;
      for (const auto& f : s.frames) {
        if (f.is_other()) continue;
        ScoredInstance inst;
        inst.instance = f;
        inst.frame_conf = 1.0;
        inst.fe_conf.assign(f.elements.size(), 1.0);
        instances.push_back(std::move(inst));
      }
      if (!instances.empty()) preds[s.source_id] = std::move(instances);
    }
  return preds;
}

}  // namespace framekit
