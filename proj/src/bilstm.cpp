#include "framekit/bilstm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include "framekit/bio.hpp"
#include "json.hpp"

namespace framekit {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// y += M x
void matvec_add(const Matrix& m, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    double s = 0.0;
    const double* row = &m.data[r * m.cols];
    for (std::size_t c = 0; c < m.cols; ++c) s += row[c] * x[c];
    y[r] += s;
  }
}

// y += M^T x
void matvec_t_add(const Matrix& m, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* row = &m.data[r * m.cols];
    for (std::size_t c = 0; c < m.cols; ++c) y[c] += row[c] * x[r];
  }
}

// G += a b^T (outer product into a gradient matrix)
void outer_add(std::vector<double>& g, const std::vector<double>& a,
               const std::vector<double>& b) {
  for (std::size_t r = 0; r < a.size(); ++r) {
    double ar = a[r];
    if (ar == 0.0) continue;
    double* row = &g[r * b.size()];
    for (std::size_t c = 0; c < b.size(); ++c) row[c] += ar * b[c];
  }
}

}  // namespace

int NeuralTagger::task_index(const std::string& frame) const {
  for (std::size_t k = 0; k < tasks.size(); ++k)
    if (tasks[k] == frame) return static_cast<int>(k);
  return -1;
}

std::vector<std::vector<double>*> NeuralTagger::param_arrays() {
  std::vector<std::vector<double>*> out = {
      &emb_word.data,     &emb_pos.data,      &emb_deprel.data, &emb_lu.data,
      &forward_cell.wx.data,  &forward_cell.wh.data,  &forward_cell.b,
      &backward_cell.wx.data, &backward_cell.wh.data, &backward_cell.b};
  for (auto& w : head_w) out.push_back(&w.data);
  for (auto& b : head_b) out.push_back(&b);
  return out;
}

std::vector<const std::vector<double>*> NeuralTagger::param_arrays() const {
  auto mutable_arrays = const_cast<NeuralTagger*>(this)->param_arrays();
  return {mutable_arrays.begin(), mutable_arrays.end()};
}

void NeuralGradients::accumulate(const NeuralGradients& other) {
  for (std::size_t i = 0; i < arrays.size(); ++i)
    for (std::size_t j = 0; j < arrays[i].size(); ++j) arrays[i][j] += other.arrays[i][j];
}

double NeuralGradients::norm() const {
  double s = 0.0;
  for (const auto& a : arrays)
    for (double v : a) s += v * v;
  return std::sqrt(s);
}

void NeuralGradients::scale(double s) {
  for (auto& a : arrays)
    for (double& v : a) v *= s;
}

NeuralGradients zero_gradients(const NeuralTagger& net) {
  NeuralGradients g;
  for (const auto* p : net.param_arrays()) g.arrays.emplace_back(p->size(), 0.0);
  return g;
}

namespace {

std::vector<double> input_vector(const NeuralTagger& net, const NeuralTokenFeatures& f) {
  std::vector<double> x;
  x.reserve(net.input_dim());
  auto append = [&](const Matrix& emb, std::size_t row) {
    if (row >= emb.rows) throw CorpusError("feature id out of vocabulary range");
    x.insert(x.end(), emb.data.begin() + row * emb.cols, emb.data.begin() + (row + 1) * emb.cols);
  };
  append(net.emb_word, f.word_id);
  append(net.emb_pos, f.pos_id);
  append(net.emb_deprel, f.deprel_id);
  append(net.emb_lu, f.is_lu ? 1 : 0);
  return x;
}

struct LstmStep {
  std::vector<double> gates;  // i,f,o,g post-activation, [4][H] flattened
  std::vector<double> c, h;
};

LstmStep lstm_step(const LstmParams& p, const std::vector<double>& x,
                   const std::vector<double>& h_prev, const std::vector<double>& c_prev) {
  const std::size_t H = p.wh.cols;
  std::vector<double> a = p.b;
  matvec_add(p.wx, x, a);
  matvec_add(p.wh, h_prev, a);
  LstmStep step;
  step.gates.resize(4 * H);
  step.c.resize(H);
  step.h.resize(H);
  for (std::size_t j = 0; j < H; ++j) {
    double i = sigmoid(a[j]);
    double f = sigmoid(a[H + j]);
    double o = sigmoid(a[2 * H + j]);
    double g = std::tanh(a[3 * H + j]);
    step.gates[j] = i;
    step.gates[H + j] = f;
    step.gates[2 * H + j] = o;
    step.gates[3 * H + j] = g;
    step.c[j] = f * c_prev[j] + i * g;
    step.h[j] = o * std::tanh(step.c[j]);
  }
  return step;
}

}  // namespace

ForwardResult net_forward(const NeuralTagger& net,
                          const std::vector<NeuralTokenFeatures>& features) {
  const std::size_t T = features.size();
  const std::size_t H = static_cast<std::size_t>(net.hyper.hidden);
  if (T == 0) throw CorpusError("empty sentence");
  ForwardResult out;
  out.inputs.resize(T);
  for (std::size_t t = 0; t < T; ++t) out.inputs[t] = input_vector(net, features[t]);

  out.gate_f.resize(T);
  out.gate_b.resize(T);
  out.cell_f.resize(T);
  out.cell_b.resize(T);
  out.hid_f.resize(T);
  out.hid_b.resize(T);

  std::vector<double> h(H, 0.0), c(H, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    LstmStep step = lstm_step(net.forward_cell, out.inputs[t], h, c);
    out.gate_f[t] = {std::vector<double>(step.gates.begin(), step.gates.begin() + H),
                     std::vector<double>(step.gates.begin() + H, step.gates.begin() + 2 * H),
                     std::vector<double>(step.gates.begin() + 2 * H, step.gates.begin() + 3 * H),
                     std::vector<double>(step.gates.begin() + 3 * H, step.gates.end())};
    h = step.h;
    c = step.c;
    out.cell_f[t] = c;
    out.hid_f[t] = h;
  }
  std::fill(h.begin(), h.end(), 0.0);
  std::fill(c.begin(), c.end(), 0.0);
  for (std::size_t t = T; t-- > 0;) {
    LstmStep step = lstm_step(net.backward_cell, out.inputs[t], h, c);
    out.gate_b[t] = {std::vector<double>(step.gates.begin(), step.gates.begin() + H),
                     std::vector<double>(step.gates.begin() + H, step.gates.begin() + 2 * H),
                     std::vector<double>(step.gates.begin() + 2 * H, step.gates.begin() + 3 * H),
                     std::vector<double>(step.gates.begin() + 3 * H, step.gates.end())};
    h = step.h;
    c = step.c;
    out.cell_b[t] = c;
    out.hid_b[t] = h;
  }

  out.probs.resize(net.tasks.size());
  std::vector<double> hcat(2 * H);
  for (std::size_t k = 0; k < net.tasks.size(); ++k) {
    out.probs[k].resize(T);
    for (std::size_t t = 0; t < T; ++t) {
      std::copy(out.hid_f[t].begin(), out.hid_f[t].end(), hcat.begin());
      std::copy(out.hid_b[t].begin(), out.hid_b[t].end(), hcat.begin() + H);
      std::vector<double> logits = net.head_b[k];
      matvec_add(net.head_w[k], hcat, logits);
      double mx = *std::max_element(logits.begin(), logits.end());
      double z = 0.0;
      for (double& v : logits) {
        v = std::exp(v - mx);
        z += v;
      }
      for (double& v : logits) v /= z;
      out.probs[k][t] = std::move(logits);
    }
  }
  return out;
}

double net_loss(const NeuralTagger& net, const ForwardResult& fwd, const TaskGold& gold) {
  const std::size_t T = fwd.inputs.size();
  if (gold.size() != net.tasks.size()) throw CorpusError("gold columns misaligned with tasks");
  double loss = 0.0;
  for (std::size_t k = 0; k < net.tasks.size(); ++k) {
    if (gold[k].size() != T) throw CorpusError("gold column length mismatch");
    double task_loss = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      int y = gold[k][t];
      if (y < 0) continue;
      task_loss -= std::log(std::max(fwd.probs[k][t][y], 1e-300));
    }
    loss += net.task_weights[k] * task_loss / static_cast<double>(T);
  }
  return loss;
}

NeuralGradients net_backward(const NeuralTagger& net,
                             const std::vector<NeuralTokenFeatures>& features,
                             const ForwardResult& fwd, const TaskGold& gold) {
  const std::size_t T = fwd.inputs.size();
  const std::size_t H = static_cast<std::size_t>(net.hyper.hidden);
  const std::size_t Din = static_cast<std::size_t>(net.input_dim());
  NeuralGradients g = zero_gradients(net);

  // layout indices into param_arrays()
  enum {
    kWord = 0, kPos, kDeprel, kLu,
    kFwx, kFwh, kFb, kBwx, kBwh, kBb,
    kHeads
  };

  std::vector<std::vector<double>> dh_f(T, std::vector<double>(H, 0.0));
  std::vector<std::vector<double>> dh_b(T, std::vector<double>(H, 0.0));

  // heads
  std::vector<double> hcat(2 * H);
  for (std::size_t k = 0; k < net.tasks.size(); ++k) {
    const double scale = net.task_weights[k] / static_cast<double>(T);
    if (scale == 0.0) continue;
    for (std::size_t t = 0; t < T; ++t) {
      int y = gold[k][t];
      if (y < 0) continue;
      std::copy(fwd.hid_f[t].begin(), fwd.hid_f[t].end(), hcat.begin());
      std::copy(fwd.hid_b[t].begin(), fwd.hid_b[t].end(), hcat.begin() + H);
      std::vector<double> dlogit = fwd.probs[k][t];
      dlogit[y] -= 1.0;
      for (double& v : dlogit) v *= scale;
      outer_add(g.arrays[kHeads + k], dlogit, hcat);
      auto& db = g.arrays[kHeads + net.tasks.size() + k];
      for (std::size_t i = 0; i < dlogit.size(); ++i) db[i] += dlogit[i];
      std::vector<double> dh(2 * H, 0.0);
      matvec_t_add(net.head_w[k], dlogit, dh);
      for (std::size_t j = 0; j < H; ++j) {
        dh_f[t][j] += dh[j];
        dh_b[t][j] += dh[H + j];
      }
    }
  }

  std::vector<std::vector<double>> dx(T, std::vector<double>(Din, 0.0));

  auto bptt = [&](bool is_forward) {
    const LstmParams& p = is_forward ? net.forward_cell : net.backward_cell;
    const auto& gates = is_forward ? fwd.gate_f : fwd.gate_b;
    const auto& cells = is_forward ? fwd.cell_f : fwd.cell_b;
    const auto& hids = is_forward ? fwd.hid_f : fwd.hid_b;
    auto& dh_acc = is_forward ? dh_f : dh_b;
    std::vector<double>& gwx = g.arrays[is_forward ? kFwx : kBwx];
    std::vector<double>& gwh = g.arrays[is_forward ? kFwh : kBwh];
    std::vector<double>& gb = g.arrays[is_forward ? kFb : kBb];

    std::vector<double> dc(H, 0.0), dh_next(H, 0.0);
    std::vector<double> da(4 * H);
    const std::vector<double> zeros(H, 0.0);
    // iterate in reverse time for the forward cell, forward time for backward
    for (std::size_t step = T; step-- > 0;) {
      std::size_t t = is_forward ? step : T - 1 - step;
      const auto& gt = gates[t];  // [4][H]: i,f,o,g
      const std::vector<double>& c_prev =
          is_forward ? (t == 0 ? zeros : cells[t - 1])
                     : (t == T - 1 ? zeros : cells[t + 1]);
      const std::vector<double>& h_prev =
          is_forward ? (t == 0 ? zeros : hids[t - 1])
                     : (t == T - 1 ? zeros : hids[t + 1]);
      std::vector<double> dh = dh_acc[t];
      for (std::size_t j = 0; j < H; ++j) dh[j] += dh_next[j];
      for (std::size_t j = 0; j < H; ++j) {
        double tc = std::tanh(cells[t][j]);
        double i = gt[0][j], f = gt[1][j], o = gt[2][j], cand = gt[3][j];
        double dcj = dc[j] + dh[j] * o * (1.0 - tc * tc);
        double doj = dh[j] * tc;
        double dij = dcj * cand;
        double dfj = dcj * c_prev[j];
        double dgj = dcj * i;
        da[j] = dij * i * (1.0 - i);
        da[H + j] = dfj * f * (1.0 - f);
        da[2 * H + j] = doj * o * (1.0 - o);
        da[3 * H + j] = dgj * (1.0 - cand * cand);
        dc[j] = dcj * f;
      }
      outer_add(gwx, da, fwd.inputs[t]);
      outer_add(gwh, da, h_prev);
      for (std::size_t j = 0; j < 4 * H; ++j) gb[j] += da[j];
      matvec_t_add(p.wx, da, dx[t]);
      std::fill(dh_next.begin(), dh_next.end(), 0.0);
      matvec_t_add(p.wh, da, dh_next);
    }
  };
  bptt(true);
  bptt(false);

  // scatter input gradients into the embedding tables
  const std::size_t dw = static_cast<std::size_t>(net.hyper.word_dim);
  const std::size_t dp = static_cast<std::size_t>(net.hyper.pos_dim);
  const std::size_t dd = static_cast<std::size_t>(net.hyper.deprel_dim);
  const std::size_t dl = static_cast<std::size_t>(net.hyper.lu_dim);
  for (std::size_t t = 0; t < T; ++t) {
    const auto& f = features[t];
    std::size_t off = 0;
    for (std::size_t j = 0; j < dw; ++j) g.arrays[kWord][f.word_id * dw + j] += dx[t][off + j];
    off += dw;
    for (std::size_t j = 0; j < dp; ++j) g.arrays[kPos][f.pos_id * dp + j] += dx[t][off + j];
    off += dp;
    for (std::size_t j = 0; j < dd; ++j)
      g.arrays[kDeprel][f.deprel_id * dd + j] += dx[t][off + j];
    off += dd;
    std::size_t lu_row = f.is_lu ? 1 : 0;
    for (std::size_t j = 0; j < dl; ++j) g.arrays[kLu][lu_row * dl + j] += dx[t][off + j];
  }
  return g;
}

TaskGold gold_task_columns(const NeuralTagger& net, const Sentence& sentence) {
  const std::size_t T = sentence.tokens.size();
  TaskGold gold(net.tasks.size());
  for (std::size_t k = 0; k < net.tasks.size(); ++k) gold[k].assign(T, 0);  // 0 = O

  auto label_id = [&](std::size_t k, const Label& l) {
    const auto& labels = net.task_labels[k];
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == l) return static_cast<int>(i);
    return -1;
  };

  for (const auto& f : sentence.frames) {
    if (f.is_other()) continue;
    int k = net.task_index(f.frame);
    if (k < 0) continue;  // frame absent from training: no head exists
    int lu = label_id(k, Label::lu(f.frame));
    if (lu >= 0) gold[k][f.trigger - 1] = lu;
    for (const auto& fe : f.elements) {
      int b = label_id(k, Label::begin(f.frame, fe.role, -1));
      int in = label_id(k, Label::inside(f.frame, fe.role, -1));
      if (b < 0 || in < 0)
        throw CorpusError("role " + fe.role + " of frame " + f.frame +
                          " missing from the task label set");
      bool first = true;
      for (int i = fe.span.start; i <= fe.span.end; ++i) {
        if (i == f.trigger) continue;
        if (gold[k][i - 1] == 0) gold[k][i - 1] = first ? b : in;
        first = false;
      }
    }
  }
  return gold;
}

NeuralTagger init_tagger(const Corpus& train, const NeuralHyper& hyper) {
  NeuralTagger net;
  net.hyper = hyper;
  net.vocab = build_neural_vocab(train);
  net.lu_lexicon = train.lu_lexicon;

  std::map<std::string, std::set<std::string>> frame_roles;
  for (const auto& d : train.documents)
    for (const auto& s : d.sentences)
      for (const auto& f : s.frames) {
        if (f.is_other()) continue;
        auto& roles = frame_roles[f.frame];
        for (const auto& fe : f.elements) roles.insert(fe.role);
      }
  for (const auto& [frame, roles] : frame_roles) {
    net.tasks.push_back(frame);
    std::vector<Label> labels{Label::outside(), Label::lu(frame)};
    for (const auto& role : roles) {
      labels.push_back(Label::begin(frame, role, -1));
      labels.push_back(Label::inside(frame, role, -1));
    }
    net.task_labels.push_back(std::move(labels));
  }
  net.task_weights.assign(net.tasks.size(), 1.0);

  std::mt19937_64 rng(hyper.seed);
  auto uniform_fill = [&](std::vector<double>& v, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    for (double& x : v) x = dist(rng);
  };

  const double emb_range = 0.05;
  net.emb_word = Matrix(net.vocab.words.size(), hyper.word_dim);
  net.emb_pos = Matrix(net.vocab.pos.size(), hyper.pos_dim);
  net.emb_deprel = Matrix(net.vocab.deprel.size(), hyper.deprel_dim);
  net.emb_lu = Matrix(2, hyper.lu_dim);
  uniform_fill(net.emb_word.data, -emb_range, emb_range);
  uniform_fill(net.emb_pos.data, -emb_range, emb_range);
  uniform_fill(net.emb_deprel.data, -emb_range, emb_range);
  uniform_fill(net.emb_lu.data, -emb_range, emb_range);

  if (!hyper.embeddings_path.empty()) {
    auto table = load_embeddings(hyper.embeddings_path, hyper.word_dim);
    for (std::uint32_t i = 0; i < net.vocab.words.size(); ++i) {
      auto it = table.find(net.vocab.words.token(i));
      if (it == table.end()) continue;
      std::copy(it->second.begin(), it->second.end(),
                net.emb_word.data.begin() + static_cast<std::size_t>(i) * hyper.word_dim);
    }
  }

  const double r = 1.0 / std::sqrt(static_cast<double>(hyper.hidden));
  auto init_cell = [&](LstmParams& p) {
    p.wx = Matrix(4 * hyper.hidden, net.input_dim());
    p.wh = Matrix(4 * hyper.hidden, hyper.hidden);
    p.b.assign(4 * hyper.hidden, 0.0);
    uniform_fill(p.wx.data, -r, r);
    uniform_fill(p.wh.data, -r, r);
    for (int j = 0; j < hyper.hidden; ++j) p.b[hyper.hidden + j] = 1.0;  // forget gate bias
  };
  init_cell(net.forward_cell);
  init_cell(net.backward_cell);

  for (std::size_t k = 0; k < net.tasks.size(); ++k) {
    net.head_w.emplace_back(net.task_labels[k].size(), 2 * hyper.hidden);
    uniform_fill(net.head_w.back().data, -r, r);
    net.head_b.emplace_back(net.task_labels[k].size(), 0.0);
  }
  return net;
}

NeuralTagger train_tagger(const Corpus& train, const NeuralHyper& hyper,
                          std::vector<double>* loss_history) {
  if (train.documents.empty()) throw CorpusError("empty training corpus");
  NeuralTagger net = init_tagger(train, hyper);

  struct Example {
    std::vector<NeuralTokenFeatures> features;
    TaskGold gold;
  };
  std::vector<Example> examples;
  for (const auto& d : train.documents)
    for (const auto& s : d.sentences) {
      if (s.tokens.empty()) continue;
      examples.push_back({neural_features(s, net.vocab, net.lu_lexicon),
                          gold_task_columns(net, s)});
    }

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(hyper.seed + 1);

  auto params = net.param_arrays();
  long step = 0;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(hyper.batch_size)) {
      std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(hyper.batch_size));
      NeuralGradients batch = zero_gradients(net);
      for (std::size_t i = start; i < stop; ++i) {
        const Example& ex = examples[order[i]];
        ForwardResult fwd = net_forward(net, ex.features);
        epoch_loss += net_loss(net, fwd, ex.gold);
        batch.accumulate(net_backward(net, ex.features, fwd, ex.gold));
      }
      double norm = batch.norm();
      if (norm > hyper.clip && norm > 0.0) batch.scale(hyper.clip / norm);
      double lr = hyper.learning_rate / (1.0 + hyper.decay * static_cast<double>(step++));
      for (std::size_t a = 0; a < params.size(); ++a)
        for (std::size_t j = 0; j < params[a]->size(); ++j)
          (*params[a])[j] -= lr * batch.arrays[a][j];
    }
    if (loss_history)
      loss_history->push_back(epoch_loss / static_cast<double>(examples.size()));
  }
  return net;
}

std::vector<ScoredColumn> net_predict(const NeuralTagger& net, const Sentence& sentence,
                                      double threshold) {
  auto features = neural_features(sentence, net.vocab, net.lu_lexicon);
  ForwardResult fwd = net_forward(net, features);
  std::vector<ScoredColumn> columns;
  for (std::size_t k = 0; k < net.tasks.size(); ++k) {
    ScoredColumn col;
    bool any = false;
    for (std::size_t t = 0; t < features.size(); ++t) {
      const auto& p = fwd.probs[k][t];
      std::size_t best = 0;
      for (std::size_t i = 1; i < p.size(); ++i)
        if (p[i] > p[best]) best = i;
      if (best != 0 && p[best] >= threshold) {
        col.labels.push_back(net.task_labels[k][best]);
        col.conf.push_back(p[best]);
        any = true;
      } else {
        col.labels.push_back(Label::outside());
        col.conf.push_back(p[0]);
      }
    }
    if (any) columns.push_back(std::move(col));
  }
  return columns;
}

void save_tagger(const NeuralTagger& net, const std::string& path) {
  nlohmann::json j;
  j["format"] = "framekit-bilstm";
  j["version"] = 1;
  j["hyper"] = {{"hidden", net.hyper.hidden},       {"word_dim", net.hyper.word_dim},
                {"pos_dim", net.hyper.pos_dim},     {"deprel_dim", net.hyper.deprel_dim},
                {"lu_dim", net.hyper.lu_dim}};
  j["vocab"] = {{"words", net.vocab.words.size()}, {"pos", net.vocab.pos.size()},
                {"deprel", net.vocab.deprel.size()}};
  nlohmann::json words = nlohmann::json::array(), pos = nlohmann::json::array(),
                 deprel = nlohmann::json::array();
  for (std::uint32_t i = 0; i < net.vocab.words.size(); ++i) words.push_back(net.vocab.words.token(i));
  for (std::uint32_t i = 0; i < net.vocab.pos.size(); ++i) pos.push_back(net.vocab.pos.token(i));
  for (std::uint32_t i = 0; i < net.vocab.deprel.size(); ++i)
    deprel.push_back(net.vocab.deprel.token(i));
  j["words"] = words;
  j["pos"] = pos;
  j["deprel"] = deprel;
  nlohmann::json lex = nlohmann::json::object();
  for (const auto& [lemma, frames] : net.lu_lexicon) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : frames) arr.push_back(f);
    lex[lemma] = arr;
  }
  j["lu_lexicon"] = lex;
  j["tasks"] = net.tasks;
  nlohmann::json task_labels = nlohmann::json::array();
  for (const auto& labels : net.task_labels) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& l : labels) arr.push_back(format_label(l));
    task_labels.push_back(arr);
  }
  j["task_labels"] = task_labels;
  j["task_weights"] = net.task_weights;
  nlohmann::json params = nlohmann::json::array();
  for (const auto* p : net.param_arrays()) params.push_back(*p);
  j["params"] = params;
  std::ofstream out(path);
  if (!out) throw CorpusError("cannot open output file: " + path);
  out << j.dump() << '\n';
}

NeuralTagger load_tagger(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open tagger file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CorpusError(std::string("malformed tagger file: ") + e.what());
  }
  if (j.value("format", "") != "framekit-bilstm" || j.value("version", 0) != 1)
    throw CorpusError("unsupported tagger format in " + path);

  NeuralTagger net;
  net.hyper.hidden = j["hyper"]["hidden"].get<int>();
  net.hyper.word_dim = j["hyper"]["word_dim"].get<int>();
  net.hyper.pos_dim = j["hyper"]["pos_dim"].get<int>();
  net.hyper.deprel_dim = j["hyper"]["deprel_dim"].get<int>();
  net.hyper.lu_dim = j["hyper"]["lu_dim"].get<int>();
  for (const auto& w : j["words"]) net.vocab.words.intern(w.get<std::string>());
  for (const auto& w : j["pos"]) net.vocab.pos.intern(w.get<std::string>());
  for (const auto& w : j["deprel"]) net.vocab.deprel.intern(w.get<std::string>());
  for (const auto& [lemma, frames] : j["lu_lexicon"].items())
    for (const auto& f : frames) net.lu_lexicon[lemma].insert(f.get<std::string>());
  net.tasks = j["tasks"].get<std::vector<std::string>>();
  for (const auto& arr : j["task_labels"]) {
    std::vector<Label> labels;
    for (const auto& l : arr) labels.push_back(parse_label(l.get<std::string>()));
    net.task_labels.push_back(std::move(labels));
  }
  net.task_weights = j["task_weights"].get<std::vector<double>>();

  net.emb_word = Matrix(net.vocab.words.size(), net.hyper.word_dim);
  net.emb_pos = Matrix(net.vocab.pos.size(), net.hyper.pos_dim);
  net.emb_deprel = Matrix(net.vocab.deprel.size(), net.hyper.deprel_dim);
  net.emb_lu = Matrix(2, net.hyper.lu_dim);
  auto init_cell = [&](LstmParams& p) {
    p.wx = Matrix(4 * net.hyper.hidden, net.input_dim());
    p.wh = Matrix(4 * net.hyper.hidden, net.hyper.hidden);
    p.b.assign(4 * net.hyper.hidden, 0.0);
  };
  init_cell(net.forward_cell);
  init_cell(net.backward_cell);
  for (std::size_t k = 0; k < net.tasks.size(); ++k) {
    net.head_w.emplace_back(net.task_labels[k].size(), 2 * net.hyper.hidden);
    net.head_b.emplace_back(net.task_labels[k].size(), 0.0);
  }
  auto params = net.param_arrays();
  const auto& stored = j["params"];
  if (stored.size() != params.size()) throw CorpusError("parameter count mismatch");
  for (std::size_t a = 0; a < params.size(); ++a) {
    auto values = stored[a].get<std::vector<double>>();
    if (values.size() != params[a]->size()) throw CorpusError("parameter shape mismatch");
    *params[a] = std::move(values);
  }
  return net;
}

}  // namespace framekit
