#include "framekit/loop.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "framekit/coherence.hpp"
#include "framekit/split.hpp"
#include "json.hpp"

namespace framekit {

std::vector<LuExample> collect_examples(const Corpus& corpus) {
  std::vector<LuExample> pool;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d)
    for (std::size_t s = 0; s < corpus.documents[d].sentences.size(); ++s)
      for (const auto& t : corpus.documents[d].sentences[s].tokens)
        if (corpus.lu_lexicon.count(t.lemma))
          pool.push_back({d, s, t.index, t.lemma});
  return pool;
}

namespace {

const Sentence& sentence_of(const Corpus& corpus, const LuExample& e) {
  return corpus.documents[e.doc].sentences[e.sentence];
}

std::set<std::string> context_bag(const Sentence& s, int trigger) {
  std::set<std::string> bag;
  for (int i = std::max(1, trigger - 3); i <= std::min(s.size(), trigger + 3); ++i)
    if (i != trigger) bag.insert(s.token(i).lemma);
  return bag;
}

}  // namespace

double similarity(const Corpus& corpus, const LuExample& a, const LuExample& b) {
  if (a.lemma != b.lemma)
    throw CorpusError("similarity is defined only between examples of one LU (" + a.lemma +
                      " vs " + b.lemma + ")");
  const Sentence& sa = sentence_of(corpus, a);
  const Sentence& sb = sentence_of(corpus, b);
  auto bag_a = context_bag(sa, a.trigger);
  auto bag_b = context_bag(sb, b.trigger);
  std::size_t inter = 0;
  for (const auto& w : bag_a) inter += bag_b.count(w);
  std::size_t uni = bag_a.size() + bag_b.size() - inter;
  double jaccard = uni ? static_cast<double>(inter) / static_cast<double>(uni) : 1.0;

  const Token& ta = sa.token(a.trigger);
  const Token& tb = sb.token(b.trigger);
  std::string gov_a = ta.head ? sa.token(ta.head).pos : "ROOT";
  std::string gov_b = tb.head ? sb.token(tb.head).pos : "ROOT";
  double syntactic = (ta.deprel == tb.deprel && gov_a == gov_b) ? 1.0 : 0.0;
  return 0.5 * jaccard + 0.5 * syntactic;
}

std::vector<Batch> select_batches(const Corpus& corpus, const std::vector<LuExample>& pool,
                                  const std::vector<std::size_t>& candidate_ids,
                                  std::size_t batch_size) {
  if (batch_size == 0) throw CorpusError("batch size must be positive");
  // group by LU, keeping pool order within each group
  std::map<std::string, std::vector<std::size_t>> by_lemma;
  for (std::size_t id : candidate_ids) by_lemma[pool[id].lemma].push_back(id);

  std::vector<Batch> batches;
  for (auto& [lemma, ids] : by_lemma) {
    std::vector<bool> taken(ids.size(), false);
    for (std::size_t seed_pos = 0; seed_pos < ids.size(); ++seed_pos) {
      if (taken[seed_pos]) continue;
      taken[seed_pos] = true;
      Batch batch;
      batch.lemma = lemma;
      batch.example_ids.push_back(ids[seed_pos]);

      std::vector<std::pair<double, std::size_t>> ranked;  // (similarity, position)
      for (std::size_t p = seed_pos + 1; p < ids.size(); ++p)
        if (!taken[p])
          ranked.push_back({similarity(corpus, pool[ids[seed_pos]], pool[ids[p]]), p});
      std::stable_sort(ranked.begin(), ranked.end(),
                       [](const auto& x, const auto& y) { return x.first > y.first; });
      double sim_sum = 1.0;
      for (const auto& [sim, p] : ranked) {
        if (batch.example_ids.size() >= batch_size) break;
        taken[p] = true;
        batch.example_ids.push_back(ids[p]);
        sim_sum += sim;
      }
      batch.centroid_similarity = sim_sum / static_cast<double>(batch.example_ids.size());
      batches.push_back(std::move(batch));
    }
  }
  return batches;
}

namespace {

PredictionSet parse_corpus_crf(const ModelBank& bank, const Corpus& corpus, double threshold,
                               MatchMode /*mode*/) {
  PredictionSet preds;
  for (const auto& d : corpus.documents)
    for (const auto& s : d.sentences) {
      auto columns = parse_multi(bank, corpus.lu_lexicon, s, threshold);
      auto instances = coherence_filter(s, columns, RepairMode::Repair);
      if (!instances.empty()) preds[s.source_id] = std::move(instances);
    }
  return preds;
}

}  // namespace

EvalReport kfold_crf_eval(const Corpus& corpus, int k, const CrfHyper& hyper, double threshold,
                          MatchMode mode) {
  EvalReport aggregate;
  aggregate.mode = mode;
  aggregate.threshold = threshold;
  for (auto& [train, heldout] : kfold(corpus, k)) {
    ModelBank bank = train_multi(train, hyper);
    EvalReport fold = score(heldout, parse_corpus_crf(bank, heldout, threshold, mode), mode,
                            threshold);
    for (int s = 0; s < 4; ++s) {
      aggregate.scores[s].tp += fold.scores[s].tp;
      aggregate.scores[s].fp += fold.scores[s].fp;
      aggregate.scores[s].fn += fold.scores[s].fn;
    }
  }
  for (auto& s : aggregate.scores) s.finalize();
  return aggregate;
}

namespace {

// corpus restricted to annotated triggers: all documents that contain at
// least one LU example keep all their sentences; a sentence keeps exactly
// the gold frames whose trigger has been annotated
Corpus annotated_corpus(const Corpus& pool, const std::vector<LuExample>& examples,
                        const std::vector<bool>& annotated) {
  std::vector<std::set<std::pair<std::size_t, int>>> kept(pool.documents.size());
  std::set<std::size_t> docs_with_examples;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    docs_with_examples.insert(examples[i].doc);
    if (annotated[i]) kept[examples[i].doc].insert({examples[i].sentence, examples[i].trigger});
  }
  Corpus out;
  out.lu_lexicon = pool.lu_lexicon;
  for (std::size_t d = 0; d < pool.documents.size(); ++d) {
    if (!docs_with_examples.count(d)) continue;
    if (kept[d].empty()) continue;  // document not yet touched by annotation
    Document doc;
    doc.id = pool.documents[d].id;
    doc.source = pool.documents[d].source;
    for (std::size_t s = 0; s < pool.documents[d].sentences.size(); ++s) {
      Sentence sent = pool.documents[d].sentences[s];
      std::vector<FrameInstance> frames;
      for (const auto& f : sent.frames)
        if (kept[d].count({s, f.trigger})) frames.push_back(f);
      sent.frames = std::move(frames);
      doc.sentences.push_back(std::move(sent));
    }
    out.documents.push_back(std::move(doc));
  }
  return out;
}

}  // namespace

LoopReport run_loop(const Corpus& pool, const LoopConfig& config) {
  if (config.parser == LoopParser::Neural)
    throw CorpusError("the neural parser is not wired into the loop; use parser=crf");
  std::vector<LuExample> examples = collect_examples(pool);
  if (examples.empty()) throw CorpusError("annotation pool has no LU occurrences");
  std::vector<bool> annotated(examples.size(), false);
  std::size_t n_annotated = 0;

  LoopReport report;
  ModelBank bank;  // empty: iteration 1's no-frame baseline
  bool have_model = false;

  for (int iter = 1; iter <= config.iterations; ++iter) {
    if (n_annotated == examples.size()) break;
    std::vector<std::size_t> remaining;
    for (std::size_t i = 0; i < examples.size(); ++i)
      if (!annotated[i]) remaining.push_back(i);
    auto batches = select_batches(pool, examples, remaining, config.batch_size);
    std::size_t take = std::min(batches.size(), config.batches_per_iteration);

    IterationReport ir;
    ir.iteration = iter;
    ir.batches = take;

    std::size_t correct = 0, seen = 0;
    for (std::size_t bi = 0; bi < take; ++bi) {
      for (std::size_t id : batches[bi].example_ids) {
        const LuExample& e = examples[id];
        const Sentence& sent = sentence_of(pool, e);
        // pre-annotation: predicted frame at this occurrence, no-frame baseline
        // before any model exists
        std::string predicted;
        if (have_model) {
          auto columns = parse_multi(bank, pool.lu_lexicon, sent, config.threshold);
          auto instances = coherence_filter(sent, columns);
          for (const auto& inst : instances)
            if (inst.instance.trigger == e.trigger) predicted = inst.instance.frame;
        }
        std::string gold;
        for (const auto& f : sent.frames)
          if (f.trigger == e.trigger && !f.is_other()) gold = f.frame;
        if (predicted == gold) ++correct;
        ++seen;
        annotated[id] = true;  // oracle correction: gold labels stand in
        ++n_annotated;
      }
    }
    ir.annotated = n_annotated;
    ir.preannotation_frame_accuracy =
        seen ? static_cast<double>(correct) / static_cast<double>(seen) : 0.0;

    Corpus labeled = annotated_corpus(pool, examples, annotated);
    bank = train_multi(labeled, config.crf);
    have_model = true;

    if (static_cast<int>(labeled.documents.size()) >= config.k) {
      EvalReport kf = kfold_crf_eval(labeled, config.k, config.crf, config.threshold, config.mode);
      ir.kfold_run = true;
      for (int s = 0; s < 4; ++s) ir.f1[s] = kf.scores[s].f1;
    }
    report.iterations.push_back(ir);
  }
  return report;
}

std::string loop_report_json(const LoopReport& report) {
  nlohmann::json iterations = nlohmann::json::array();
  for (const auto& ir : report.iterations) {
    iterations.push_back(nlohmann::json{
        {"iteration", ir.iteration},
        {"annotated", ir.annotated},
        {"batches", ir.batches},
        {"preannotation_frame_accuracy", ir.preannotation_frame_accuracy},
        {"kfold_run", ir.kfold_run},
        {"f1", {{"TI", ir.f1[0]}, {"TC", ir.f1[1]}, {"RI", ir.f1[2]}, {"RC", ir.f1[3]}}}});
  }
  return nlohmann::json{{"iterations", iterations}}.dump(2);
}

std::string loop_report_csv(const LoopReport& report) {
  std::ostringstream out;
  out << "iteration,annotated,preannotation_accuracy,TI_f1,TC_f1,RI_f1,RC_f1\n";
  for (const auto& ir : report.iterations) {
    out << ir.iteration << ',' << ir.annotated << ',' << ir.preannotation_frame_accuracy;
    for (int s = 0; s < 4; ++s) out << ',' << (ir.kfold_run ? ir.f1[s] : -1.0);
    out << '\n';
  }
  return out.str();
}

LoopConfig load_loop_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open loop config: " + path);
  LoopConfig config;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string v) {
      const char* ws = " \t\r";
      auto b = v.find_first_not_of(ws);
      if (b == std::string::npos) return std::string();
      return v.substr(b, v.find_last_not_of(ws) - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    if (key == "iterations") config.iterations = std::stoi(value);
    else if (key == "batch_size") config.batch_size = std::stoul(value);
    else if (key == "batches_per_iteration") config.batches_per_iteration = std::stoul(value);
    else if (key == "k") config.k = std::stoi(value);
    else if (key == "threshold") config.threshold = std::stod(value);
    else if (key == "parser") config.parser = value == "neural" ? LoopParser::Neural : LoopParser::Crf;
    else if (key == "match") config.mode = value == "partial" ? MatchMode::PartialOverlap : MatchMode::Exact;
    else if (key == "epochs") config.crf.epochs = std::stoi(value);
    else if (key == "l2") config.crf.l2 = std::stod(value);
    else if (key == "learning_rate") config.crf.learning_rate = std::stod(value);
    else if (key == "seed") config.crf.seed = std::stoull(value);
    else throw CorpusError("unknown loop config key '" + key + "'");
  }
  return config;
}

}  // namespace framekit
