#include "framekit/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace framekit {

int resolve_multi_trigger(const std::vector<int>& candidate_triggers, const Span& segment) {
  if (candidate_triggers.empty()) return -1;
  double midpoint = 0.5 * (segment.start + segment.end);
  int best = candidate_triggers.front();
  double best_dist = std::abs(midpoint - best);
  for (int cand : candidate_triggers) {
    double dist = std::abs(midpoint - cand);
    if (dist < best_dist || (dist == best_dist && cand < best)) {
      best = cand;
      best_dist = dist;
    }
  }
  return best;
}

namespace {

struct RawSegment {
  std::string frame;
  std::string role;
  Span span;
  double conf = 1.0;
};

// B/I runs of one column; leading or mismatched I is promoted to B in repair
// mode and discarded in strict mode. A same-frame LU cell inside a run does
// not break the segment (spans may cross another label's trigger).
std::vector<RawSegment> scan_segments(const ScoredColumn& column, RepairMode mode) {
  std::vector<RawSegment> segments;
  const int n = column.size();
  int i = 0;
  while (i < n) {
    const Label& l = column.labels[i];
    bool opens = l.kind == LabelKind::Begin ||
                 (l.kind == LabelKind::Inside && mode == RepairMode::Repair);
    if (!opens) {
      ++i;
      continue;
    }
    RawSegment seg;
    seg.frame = l.frame;
    seg.role = l.role;
    seg.span.start = i + 1;
    seg.conf = column.conf.empty() ? 1.0 : column.conf[i];
    int j = i + 1;
    while (j < n) {
      const Label& next = column.labels[j];
      if (next.kind == LabelKind::Inside && next.frame == seg.frame && next.role == seg.role &&
          next.trigger == l.trigger) {
        if (!column.conf.empty()) seg.conf = std::min(seg.conf, column.conf[j]);
        ++j;
      } else if (next.kind == LabelKind::Lu && next.frame == seg.frame && j + 1 < n &&
                 column.labels[j + 1].kind == LabelKind::Inside &&
                 column.labels[j + 1].frame == seg.frame &&
                 column.labels[j + 1].role == seg.role) {
        ++j;
      } else {
        break;
      }
    }
    seg.span.end = j;
    segments.push_back(std::move(seg));
    i = j;
  }
  return segments;
}

}  // namespace

std::vector<ScoredInstance> coherence_filter(const Sentence& sentence,
                                             const std::vector<ScoredColumn>& columns,
                                             RepairMode mode) {
  // frame -> trigger index -> best confidence
  std::map<std::string, std::map<int, double>> triggers;
  std::vector<RawSegment> segments;
  for (const auto& col : columns) {
    for (int i = 0; i < col.size(); ++i) {
      const Label& l = col.labels[i];
      if (l.kind != LabelKind::Lu) continue;
      double conf = col.conf.empty() ? 1.0 : col.conf[i];
      auto [it, inserted] = triggers[l.frame].emplace(i + 1, conf);
      if (!inserted) it->second = std::max(it->second, conf);
    }
    auto segs = scan_segments(col, mode);
    segments.insert(segments.end(), segs.begin(), segs.end());
  }

  std::map<std::pair<std::string, int>, ScoredInstance> instances;
  for (const auto& [frame, cands] : triggers) {
    for (const auto& [index, conf] : cands) {
      ScoredInstance inst;
      inst.instance.frame = frame;
      inst.instance.trigger = index;
      inst.frame_conf = conf;
      instances[{frame, index}] = std::move(inst);
    }
  }

  for (const auto& seg : segments) {
    auto frame_it = triggers.find(seg.frame);
    if (frame_it == triggers.end()) continue;  // unlinked FE: removed
    std::vector<int> cands;
    for (const auto& [index, _] : frame_it->second) cands.push_back(index);
    int link = resolve_multi_trigger(cands, seg.span);
    ScoredInstance& inst = instances.at({seg.frame, link});

    // keep FrameInstance invariants: overlapping FEs within one instance
    // resolve toward the higher-confidence segment
    bool drop = false;
    for (std::size_t k = 0; k < inst.instance.elements.size();) {
      if (!inst.instance.elements[k].span.overlaps(seg.span)) {
        ++k;
        continue;
      }
      if (inst.fe_conf[k] >= seg.conf) {
        drop = true;
        break;
      }
      inst.instance.elements.erase(inst.instance.elements.begin() + k);
      inst.fe_conf.erase(inst.fe_conf.begin() + k);
    }
    if (drop) continue;
    inst.instance.elements.push_back({seg.role, seg.span, link});
    inst.fe_conf.push_back(seg.conf);
  }

  std::vector<ScoredInstance> out;
  for (auto& [_, inst] : instances) {
    std::vector<std::size_t> order(inst.instance.elements.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return inst.instance.elements[a].span.start < inst.instance.elements[b].span.start;
    });
    ScoredInstance sorted;
    sorted.instance.frame = inst.instance.frame;
    sorted.instance.trigger = inst.instance.trigger;
    sorted.frame_conf = inst.frame_conf;
    for (std::size_t k : order) {
      sorted.instance.elements.push_back(inst.instance.elements[k]);
      sorted.fe_conf.push_back(inst.fe_conf[k]);
    }
    out.push_back(std::move(sorted));
  }
  std::sort(out.begin(), out.end(), [](const ScoredInstance& a, const ScoredInstance& b) {
    return a.instance.trigger != b.instance.trigger
               ? a.instance.trigger < b.instance.trigger
               : a.instance.frame < b.instance.frame;
  });
  (void)sentence;
  return out;
}

std::vector<ScoredColumn> gold_columns(const Sentence& sentence) {
  std::vector<ScoredColumn> columns;
  for (const auto& f : sentence.frames) {
    if (f.is_other()) continue;
    LabelColumn col = encode_bio(sentence, f);
    ScoredColumn sc;
    sc.labels = col.labels;
    sc.conf.assign(sc.labels.size(), 1.0);
    columns.push_back(std::move(sc));
  }
  return columns;
}

}  // namespace framekit
