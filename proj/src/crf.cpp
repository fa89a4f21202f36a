#include "framekit/crf.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "json.hpp"

namespace framekit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logsumexp(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

bool opens_segment(const Label& prev, const Label& next) {
  return (prev.kind == LabelKind::Begin || prev.kind == LabelKind::Inside) &&
         prev.same_segment(next);
}

}  // namespace

CrfModel::CrfModel(std::string lemma, std::vector<Label> labels, std::size_t num_features,
                   double l2)
    : lemma_(std::move(lemma)), labels_(std::move(labels)), num_features_(num_features), l2_(l2) {
  if (labels_.empty() || labels_[0].kind != LabelKind::Outside)
    throw TrainError("CRF label set must start with O");
  const std::size_t L = labels_.size();
  emission_.assign(num_features_ * L, 0.0);
  transition_.assign(L * L, 0.0);
  allowed_.assign(L * L, true);
  start_allowed_.assign(L, true);
  for (std::size_t y = 0; y < L; ++y) {
    if (labels_[y].kind == LabelKind::Inside) {
      start_allowed_[y] = false;
      for (std::size_t p = 0; p < L; ++p)
        allowed_[p * L + y] = opens_segment(labels_[p], labels_[y]);
    }
  }
}

double CrfModel::path_score(const CrfExample& x, const std::vector<int>& path) const {
  double score = 0.0;
  for (std::size_t t = 0; t < path.size(); ++t) {
    if (t == 0) {
      if (!start_allowed_[path[0]]) return kNegInf;
    } else {
      if (!transition_allowed(path[t - 1], path[t])) return kNegInf;
      score += transition(path[t - 1], path[t]);
    }
    for (std::uint32_t f : x.features[t].ids) score += emission(f, path[t]);
  }
  return score;
}

namespace {

// emission scores per (token, label), honoring the optional position mask
std::vector<std::vector<double>> node_scores(const CrfModel& model, const CrfExample& x,
                                             const PositionMask& mask) {
  const std::size_t T = x.features.size();
  const std::size_t L = model.num_labels();
  std::vector<std::vector<double>> e(T, std::vector<double>(L, 0.0));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      if (!mask.empty() && !mask[t][y]) {
        e[t][y] = kNegInf;
        continue;
      }
      for (std::uint32_t f : x.features[t].ids) e[t][y] += model.emission(f, y);
    }
  }
  return e;
}

}  // namespace

CrfMarginals log_partition_and_marginals(const CrfModel& model, const CrfExample& x,
                                         const PositionMask& mask) {
  const std::size_t T = x.features.size();
  const std::size_t L = model.num_labels();
  if (T == 0) throw TrainError("empty sequence");
  auto e = node_scores(model, x, mask);

  std::vector<std::vector<double>> alpha(T, std::vector<double>(L, kNegInf));
  std::vector<std::vector<double>> beta(T, std::vector<double>(L, kNegInf));
  std::vector<double> scratch(L);

  for (std::size_t y = 0; y < L; ++y)
    alpha[0][y] = model.start_allowed(static_cast<int>(y)) ? e[0][y] : kNegInf;
  for (std::size_t t = 1; t < T; ++t)
    for (std::size_t y = 0; y < L; ++y) {
      for (std::size_t p = 0; p < L; ++p)
        scratch[p] = model.transition_allowed(static_cast<int>(p), static_cast<int>(y))
                         ? alpha[t - 1][p] + model.transition(static_cast<int>(p), static_cast<int>(y))
                         : kNegInf;
      alpha[t][y] = logsumexp(scratch) + e[t][y];
    }

  for (std::size_t y = 0; y < L; ++y) beta[T - 1][y] = 0.0;
  for (std::size_t t = T - 1; t-- > 0;)
    for (std::size_t p = 0; p < L; ++p) {
      for (std::size_t y = 0; y < L; ++y)
        scratch[y] = model.transition_allowed(static_cast<int>(p), static_cast<int>(y))
                         ? model.transition(static_cast<int>(p), static_cast<int>(y)) + e[t + 1][y] +
                               beta[t + 1][y]
                         : kNegInf;
      beta[t][p] = logsumexp(scratch);
    }

  CrfMarginals out;
  out.log_partition = logsumexp(alpha[T - 1]);
  if (!std::isfinite(out.log_partition))
    throw TrainError("no admissible label path (over-constrained mask)");

  out.token.assign(T, std::vector<double>(L, 0.0));
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t y = 0; y < L; ++y) {
      double lp = alpha[t][y] + beta[t][y] - out.log_partition;
      out.token[t][y] = lp == kNegInf ? 0.0 : std::exp(lp);
    }

  if (T > 1) {
    out.transition.assign(T - 1, std::vector<double>(L * L, 0.0));
    for (std::size_t t = 0; t + 1 < T; ++t)
      for (std::size_t p = 0; p < L; ++p)
        for (std::size_t y = 0; y < L; ++y) {
          if (!model.transition_allowed(static_cast<int>(p), static_cast<int>(y))) continue;
          double lp = alpha[t][p] + model.transition(static_cast<int>(p), static_cast<int>(y)) +
                      e[t + 1][y] + beta[t + 1][y] - out.log_partition;
          out.transition[t][p * L + y] = std::isfinite(lp) ? std::exp(lp) : 0.0;
        }
  }
  return out;
}

ViterbiResult viterbi(const CrfModel& model, const CrfExample& x, const PositionMask& mask) {
  const std::size_t T = x.features.size();
  const std::size_t L = model.num_labels();
  if (T == 0) throw TrainError("empty sequence");
  auto e = node_scores(model, x, mask);

  // forward maxes and suffix maxes; the path is then rebuilt greedily from
  // the front, taking the lowest label index among optimal continuations
  std::vector<std::vector<double>> fwd(T, std::vector<double>(L, kNegInf));
  std::vector<std::vector<double>> suf(T, std::vector<double>(L, 0.0));
  for (std::size_t y = 0; y < L; ++y)
    fwd[0][y] = model.start_allowed(static_cast<int>(y)) ? e[0][y] : kNegInf;
  for (std::size_t t = 1; t < T; ++t)
    for (std::size_t y = 0; y < L; ++y) {
      double best = kNegInf;
      for (std::size_t p = 0; p < L; ++p)
        if (model.transition_allowed(static_cast<int>(p), static_cast<int>(y)))
          best = std::max(best, fwd[t - 1][p] +
                                    model.transition(static_cast<int>(p), static_cast<int>(y)));
      fwd[t][y] = best + e[t][y];
    }
  for (std::size_t t = T - 1; t-- > 0;)
    for (std::size_t p = 0; p < L; ++p) {
      double best = kNegInf;
      for (std::size_t y = 0; y < L; ++y)
        if (model.transition_allowed(static_cast<int>(p), static_cast<int>(y)))
          best = std::max(best, model.transition(static_cast<int>(p), static_cast<int>(y)) +
                                    e[t + 1][y] + suf[t + 1][y]);
      suf[t][p] = best;
    }

  double best_total = kNegInf;
  for (std::size_t y = 0; y < L; ++y) best_total = std::max(best_total, fwd[T - 1][y]);
  if (!std::isfinite(best_total)) throw TrainError("no admissible Viterbi path");
  const double eps = 1e-9 * (1.0 + std::abs(best_total));

  ViterbiResult result;
  result.path.resize(T);
  double prefix = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    int chosen = -1;
    for (std::size_t y = 0; y < L; ++y) {
      double step;
      if (t == 0) {
        if (!model.start_allowed(static_cast<int>(y))) continue;
        step = e[0][y];
      } else {
        int p = result.path[t - 1];
        if (!model.transition_allowed(p, static_cast<int>(y))) continue;
        step = model.transition(p, static_cast<int>(y)) + e[t][y];
      }
      if (prefix + step + suf[t][y] >= best_total - eps) {
        chosen = static_cast<int>(y);
        prefix += step;
        break;
      }
    }
    if (chosen < 0) throw TrainError("Viterbi reconstruction failed");
    result.path[t] = chosen;
  }
  result.score = prefix;
  return result;
}

namespace {

// data term only (expectations minus empirical counts); returns unregularized NLL
double data_gradient(const CrfModel& model, const CrfExample& x, std::vector<double>& g_emit,
                     std::vector<double>& g_trans) {
  const std::size_t T = x.features.size();
  const std::size_t L = model.num_labels();
  if (x.gold.size() != T) throw TrainError("gold length mismatch");
  for (int y : x.gold)
    if (y < 0 || static_cast<std::size_t>(y) >= L)
      throw TrainError("gold label outside the model label set");

  CrfMarginals m = log_partition_and_marginals(model, x);
  for (std::size_t t = 0; t < T; ++t)
    for (std::uint32_t f : x.features[t].ids)
      for (std::size_t y = 0; y < L; ++y) {
        double diff = m.token[t][y] - (static_cast<std::size_t>(x.gold[t]) == y ? 1.0 : 0.0);
        g_emit[static_cast<std::size_t>(f) * L + y] += diff;
      }
  for (std::size_t t = 0; t + 1 < T; ++t)
    for (std::size_t py = 0; py < L * L; ++py) {
      double diff = m.transition[t][py];
      if (py == static_cast<std::size_t>(x.gold[t]) * L + static_cast<std::size_t>(x.gold[t + 1]))
        diff -= 1.0;
      g_trans[py] += diff;
    }
  return m.log_partition - model.path_score(x, x.gold);
}

double squared_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

CrfGradient nll_and_gradient(const CrfModel& model, const CrfExample& example) {
  CrfGradient g;
  g.emission.assign(model.emission_weights().size(), 0.0);
  g.transition.assign(model.transition_weights().size(), 0.0);
  g.nll = data_gradient(model, example, g.emission, g.transition);
  const double l2 = model.l2();
  g.nll += 0.5 * l2 *
           (squared_norm(model.emission_weights()) + squared_norm(model.transition_weights()));
  for (std::size_t i = 0; i < g.emission.size(); ++i)
    g.emission[i] += l2 * model.emission_weights()[i];
  const std::size_t L = model.num_labels();
  for (std::size_t p = 0; p < L; ++p)
    for (std::size_t y = 0; y < L; ++y)
      if (model.transition_allowed(static_cast<int>(p), static_cast<int>(y)))
        g.transition[p * L + y] += l2 * model.transition(static_cast<int>(p), static_cast<int>(y));
  return g;
}

CrfModel train_crf(const std::vector<CrfExample>& examples, const std::string& lemma,
                   std::vector<Label> labels, std::size_t num_features, const CrfHyper& hyper,
                   std::vector<double>* nll_history) {
  if (examples.empty()) throw TrainError("train_crf needs at least one example");
  CrfModel model(lemma, std::move(labels), num_features, hyper.l2);
  const std::size_t L = model.num_labels();
  const double n = static_cast<double>(examples.size());

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(hyper.seed);

  std::vector<double> g_emit(model.emission_weights().size());
  std::vector<double> g_trans(model.transition_weights().size());
  long step = 0;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_nll = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(hyper.batch_size)) {
      std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(hyper.batch_size));
      std::fill(g_emit.begin(), g_emit.end(), 0.0);
      std::fill(g_trans.begin(), g_trans.end(), 0.0);
      for (std::size_t i = start; i < stop; ++i)
        epoch_nll += data_gradient(model, examples[order[i]], g_emit, g_trans);
      double lr = hyper.learning_rate / (1.0 + hyper.decay * static_cast<double>(step++));
      double l2_share = hyper.l2 * static_cast<double>(stop - start) / n;
      for (std::size_t i = 0; i < g_emit.size(); ++i)
        model.emission_weights()[i] -=
            lr * (g_emit[i] + l2_share * model.emission_weights()[i]);
      for (std::size_t p = 0; p < L; ++p)
        for (std::size_t y = 0; y < L; ++y)
          if (model.transition_allowed(static_cast<int>(p), static_cast<int>(y)))
            model.transition_weights()[p * L + y] -=
                lr * (g_trans[p * L + y] + l2_share * model.transition_weights()[p * L + y]);
    }
    if (nll_history)
      nll_history->push_back(
          (epoch_nll + 0.5 * hyper.l2 * (squared_norm(model.emission_weights()) +
                                         squared_norm(model.transition_weights()))) /
          n);
  }
  return model;
}

std::vector<Label> training_column(const Sentence& sentence, int trigger) {
  for (const auto& f : sentence.frames) {
    if (f.trigger != trigger || f.is_other()) continue;
    LabelColumn col = encode_bio(sentence, f);
    for (auto& l : col.labels) l.trigger = -1;
    return col.labels;
  }
  return std::vector<Label>(sentence.tokens.size(), Label::outside());
}

namespace {

std::vector<Label> label_set_for_lemma(const std::set<std::string>& candidate_frames,
                                       const std::map<std::string, std::set<std::string>>& roles) {
  std::vector<Label> labels{Label::outside()};
  for (const auto& frame : candidate_frames) {
    labels.push_back(Label::lu(frame));
    auto it = roles.find(frame);
    if (it == roles.end()) continue;
    for (const auto& role : it->second) {
      labels.push_back(Label::begin(frame, role, -1));
      labels.push_back(Label::inside(frame, role, -1));
    }
  }
  return labels;
}

int label_index(const std::vector<Label>& labels, const Label& l) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == l) return static_cast<int>(i);
  return -1;
}

struct LuOccurrence {
  const Sentence* sentence;
  int trigger;
};

}  // namespace

ModelBank train_multi(const Corpus& train, const CrfHyper& hyper, int jobs) {
  ModelBank bank;
  std::map<std::string, std::vector<LuOccurrence>> sub_corpora;
  std::map<std::string, std::set<std::string>> frame_roles;

  for (const auto& d : train.documents)
    for (const auto& s : d.sentences) {
      for (const auto& t : s.tokens)
        if (train.lu_lexicon.count(t.lemma))
          sub_corpora[t.lemma].push_back({&s, t.index});
      for (const auto& f : s.frames)
        if (!f.is_other())
          for (const auto& fe : f.elements) frame_roles[f.frame].insert(fe.role);
    }

  for (const auto& [lemma, occurrences] : sub_corpora)
    for (const auto& occ : occurrences)
      for (int pos = 1; pos <= occ.sentence->size(); ++pos)
        for (const auto& f : crf_feature_strings(*occ.sentence, occ.trigger, pos))
          bank.dict.intern(f);
  bank.dict.freeze();

  std::vector<std::string> lemmas;
  for (const auto& [lemma, _] : sub_corpora) lemmas.push_back(lemma);

  std::vector<CrfModel> trained(lemmas.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < lemmas.size(); i = next.fetch_add(1)) {
      const std::string& lemma = lemmas[i];
      auto labels = label_set_for_lemma(train.lu_lexicon.at(lemma), frame_roles);
      std::vector<CrfExample> examples;
      for (const auto& occ : sub_corpora[lemma]) {
        CrfExample x;
        for (int pos = 1; pos <= occ.sentence->size(); ++pos)
          x.features.push_back(crf_features(*occ.sentence, occ.trigger, pos, bank.dict));
        for (const auto& l : training_column(*occ.sentence, occ.trigger)) {
          int id = label_index(labels, l);
          if (id < 0)
            throw TrainError("gold label " + format_label(l) + " outside label set of '" +
                             lemma + "' in " + occ.sentence->source_id);
          x.gold.push_back(id);
        }
        examples.push_back(std::move(x));
      }
      trained[i] = train_crf(examples, lemma, labels, bank.dict.size(), hyper);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  for (std::size_t i = 0; i < lemmas.size(); ++i)
    bank.models.emplace(lemmas[i], std::move(trained[i]));
  return bank;
}

std::vector<ScoredColumn> parse_multi(const ModelBank& bank, const LuLexicon& lexicon,
                                      const Sentence& sentence, double threshold,
                                      ParseCoverage* coverage) {
  std::vector<ScoredColumn> columns;
  for (const auto& tok : sentence.tokens) {
    if (!lexicon.count(tok.lemma)) continue;
    if (coverage) ++coverage->occurrences;
    auto it = bank.models.find(tok.lemma);
    if (it == bank.models.end()) {
      if (coverage) ++coverage->missing_models;
      continue;
    }
    const CrfModel& model = it->second;
    const int trigger = tok.index;
    const std::size_t L = model.num_labels();

    CrfExample x;
    for (int pos = 1; pos <= sentence.size(); ++pos)
      x.features.push_back(crf_features(sentence, trigger, pos, bank.dict));

    // LU labels are pinned to the occurrence position
    PositionMask mask(sentence.size(), std::vector<bool>(L, true));
    for (int pos = 1; pos <= sentence.size(); ++pos)
      if (pos != trigger)
        for (std::size_t y = 0; y < L; ++y)
          if (model.labels()[y].kind == LabelKind::Lu) mask[pos - 1][y] = false;

    ViterbiResult best = viterbi(model, x, mask);
    const Label& at_trigger = model.labels()[best.path[trigger - 1]];
    if (at_trigger.kind != LabelKind::Lu) continue;  // no-frame decision

    CrfMarginals marg = log_partition_and_marginals(model, x, mask);
    double frame_conf = marg.token[trigger - 1][best.path[trigger - 1]];
    if (frame_conf < threshold) continue;

    ScoredColumn col;
    for (std::size_t t = 0; t < best.path.size(); ++t) {
      Label l = model.labels()[best.path[t]];
      if (l.kind == LabelKind::Begin || l.kind == LabelKind::Inside) l.trigger = trigger;
      col.labels.push_back(std::move(l));
      col.conf.push_back(marg.token[t][best.path[t]]);
    }
    columns.push_back(std::move(col));
  }
  return columns;
}

void save_model_bank(const ModelBank& bank, const std::string& path) {
  nlohmann::json models = nlohmann::json::object();
  for (const auto& [lemma, model] : bank.models) {
    nlohmann::json labels = nlohmann::json::array();
    for (const auto& l : model.labels()) labels.push_back(format_label(l));
    models[lemma] = nlohmann::json{{"labels", labels},
                                   {"l2", model.l2()},
                                   {"emission", model.emission_weights()},
                                   {"transition", model.transition_weights()}};
  }
  nlohmann::json j{{"format", "framekit-crf-bank"},
                   {"version", 1},
                   {"features", bank.dict.names()},
                   {"models", models}};
  std::ofstream out(path);
  if (!out) throw CorpusError("cannot open output file: " + path);
  out << j.dump() << '\n';
}

ModelBank load_model_bank(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open model bank: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CorpusError(std::string("malformed model bank: ") + e.what());
  }
  if (j.value("format", "") != "framekit-crf-bank" || j.value("version", 0) != 1)
    throw CorpusError("unsupported model bank format in " + path);
  ModelBank bank;
  for (const auto& name : j.at("features")) bank.dict.intern(name.get<std::string>());
  bank.dict.freeze();
  for (const auto& [lemma, jm] : j.at("models").items()) {
    std::vector<Label> labels;
    for (const auto& ls : jm.at("labels")) labels.push_back(parse_label(ls.get<std::string>()));
    CrfModel model(lemma, std::move(labels), bank.dict.size(), jm.value("l2", 1e-3));
    model.emission_weights() = jm.at("emission").get<std::vector<double>>();
    model.transition_weights() = jm.at("transition").get<std::vector<double>>();
    if (model.emission_weights().size() != bank.dict.size() * model.num_labels() ||
        model.transition_weights().size() != model.num_labels() * model.num_labels())
      throw CorpusError("weight shape mismatch in model '" + lemma + "'");
    bank.models.emplace(lemma, std::move(model));
  }
  return bank;
}

}  // namespace framekit
