#include "framekit/framekit_c.h"

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "framekit/bilstm.hpp"
#include "framekit/coherence.hpp"
#include "framekit/corpus_io.hpp"
#include "framekit/crf.hpp"
#include "framekit/eval.hpp"
#include "framekit/loop.hpp"
#include "framekit/split.hpp"
#include "framekit/synth.hpp"
#include "json.hpp"

using namespace framekit;

namespace {

thread_local std::string g_last_error = "no error";

fk_status fail(fk_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
fk_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    return fail(FK_ERR_PARSE, e.what());
  } catch (const ValidationError& e) {
    return fail(FK_ERR_INVALID, e.what());
  } catch (const CorpusError& e) {
    return fail(FK_ERR_INVALID, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(FK_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(FK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FK_ERR_INTERNAL, "unknown error");
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << text;
  if (!out) throw std::ios_base::failure("write to " + path + " failed");
}

PredictionSet predict_with_model(const std::string& model_path, const Corpus& corpus,
                                 double threshold, RepairMode repair) {
  std::ifstream in(model_path);
  if (!in) throw std::ios_base::failure("cannot open model: " + model_path);
  nlohmann::json head;
  try {
    head = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(model_path + ": " + e.what(), 0);
  }
  std::string format = head.value("format", "");

  PredictionSet preds;
  if (format == "framekit-crf-bank") {
    ModelBank bank = load_model_bank(model_path);
    for (const auto& d : corpus.documents)
      for (const auto& s : d.sentences) {
        auto columns = parse_multi(bank, corpus.lu_lexicon, s, threshold);
        auto instances = coherence_filter(s, columns, repair);
        if (!instances.empty()) preds[s.source_id] = std::move(instances);
      }
  } else if (format == "framekit-bilstm") {
    NeuralTagger net = load_tagger(model_path);
    for (const auto& d : corpus.documents)
      for (const auto& s : d.sentences) {
        auto columns = net_predict(net, s, threshold);
        auto instances = coherence_filter(s, columns, repair);
        if (!instances.empty()) preds[s.source_id] = std::move(instances);
      }
  } else {
    throw ParseError(model_path + ": unrecognized model format '" + format + "'", 0);
  }
  return preds;
}

}  // namespace

struct fk_corpus {
  Corpus corpus;
};

extern "C" {

const char* fk_last_error(void) { return g_last_error.c_str(); }

fk_status fk_corpus_open(const char* path, fk_corpus** out) {
  if (!path || !out) return fail(FK_ERR_INVALID, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<fk_corpus>();
    handle->corpus = read_corpus(path);
    *out = handle.release();
    return FK_OK;
  });
}

fk_status fk_corpus_write(const fk_corpus* corpus, const char* path) {
  if (!corpus || !path) return fail(FK_ERR_INVALID, "null argument");
  return guarded([&] {
    write_corpus(corpus->corpus, path);
    return FK_OK;
  });
}

void fk_corpus_free(fk_corpus* corpus) { delete corpus; }

size_t fk_corpus_documents(const fk_corpus* corpus) {
  return corpus ? corpus->corpus.documents.size() : 0;
}

size_t fk_corpus_sentences(const fk_corpus* corpus) {
  if (!corpus) return 0;
  size_t n = 0;
  for (const auto& d : corpus->corpus.documents) n += d.sentences.size();
  return n;
}

size_t fk_corpus_frame_instances(const fk_corpus* corpus) {
  if (!corpus) return 0;
  size_t n = 0;
  for (const auto& d : corpus->corpus.documents)
    for (const auto& s : d.sentences)
      for (const auto& f : s.frames)
        if (!f.is_other()) ++n;
  return n;
}

fk_status fk_generate(const char* config_path, uint64_t seed, int seed_override,
                      const char* corpus_out) {
  if (!corpus_out) return fail(FK_ERR_INVALID, "null output path");
  return guarded([&] {
    GeneratorConfig config =
        config_path ? load_generator_config(config_path) : GeneratorConfig{};
    if (config.frame_inventory.empty()) config.frame_inventory = default_inventory();
    if (seed_override) config.seed = seed;
    write_corpus(generate(config), corpus_out);
    return FK_OK;
  });
}

fk_status fk_stats(const char* corpus_path, const char* json_out) {
  if (!corpus_path || !json_out) return fail(FK_ERR_INVALID, "null argument");
  return guarded([&] {
    write_text(json_out, stats_to_json(corpus_stats(read_corpus(corpus_path))));
    return FK_OK;
  });
}

fk_status fk_split(const char* corpus_path, double train_fraction, uint64_t seed,
                   const char* train_out, const char* test_out, const char* manifest_out) {
  if (!corpus_path || !train_out || !test_out) return fail(FK_ERR_INVALID, "null argument");
  return guarded([&] {
    SplitResult result = split(read_corpus(corpus_path), train_fraction, seed);
    write_corpus(result.train, train_out);
    write_corpus(result.test, test_out);
    if (manifest_out) write_text(manifest_out, split_manifest_json(result, train_fraction));
    if (!result.within_tolerance)
      return fail(FK_ERR_INVALID, "achieved train fraction " +
                                      std::to_string(result.achieved_fraction) +
                                      " misses the request by more than 0.02");
    return FK_OK;
  });
}

fk_status fk_kfold(const char* corpus_path, int k, const char* out_dir) {
  if (!corpus_path || !out_dir) return fail(FK_ERR_INVALID, "null argument");
  return guarded([&] {
    Corpus corpus = read_corpus(corpus_path);
    auto folds = kfold(corpus, k);
    std::filesystem::create_directories(out_dir);
    for (std::size_t i = 0; i < folds.size(); ++i) {
      std::string base = std::string(out_dir) + "/fold" + std::to_string(i);
      write_corpus(folds[i].first, base + ".train.jsonl");
      write_corpus(folds[i].second, base + ".test.jsonl");
    }
    return FK_OK;
  });
}

fk_status fk_train_crf(const char* train_path, const char* model_out, int epochs, double l2,
                       double learning_rate, uint64_t seed, int jobs) {
  if (!train_path || !model_out) return fail(FK_ERR_INVALID, "null argument");
  return guarded([&] {
    CrfHyper hyper;
    if (epochs > 0) hyper.epochs = epochs;
    if (l2 >= 0.0) hyper.l2 = l2;
    if (learning_rate > 0.0) hyper.learning_rate = learning_rate;
    hyper.seed = seed;
    ModelBank bank = train_multi(read_corpus(train_path), hyper, jobs > 0 ? jobs : 1);
    save_model_bank(bank, model_out);
    return FK_OK;
  });
}

fk_status fk_train_bilstm(const char* train_path, const char* model_out, int hidden, int epochs,
                          double learning_rate, uint64_t seed, const char* embeddings_path) {
  if (!train_path || !model_out) return fail(FK_ERR_INVALID, "null argument");
  return guarded([&] {
    NeuralHyper hyper;
    if (hidden > 0) hyper.hidden = hidden;
    if (epochs > 0) hyper.epochs = epochs;
    if (learning_rate > 0.0) hyper.learning_rate = learning_rate;
    hyper.seed = seed;
    if (embeddings_path) hyper.embeddings_path = embeddings_path;
    NeuralTagger net = train_tagger(read_corpus(train_path), hyper);
    save_tagger(net, model_out);
    return FK_OK;
  });
}

fk_status fk_parse(const char* model_path, const char* corpus_path, double threshold,
                   int strict_mode, const char* predictions_out) {
  if (!model_path || !corpus_path || !predictions_out)
    return fail(FK_ERR_INVALID, "null argument");
  return guarded([&] {
    Corpus corpus = read_corpus(corpus_path);
    RepairMode repair = strict_mode ? RepairMode::Strict : RepairMode::Repair;
    write_predictions(predict_with_model(model_path, corpus, threshold, repair),
                      predictions_out);
    return FK_OK;
  });
}

fk_status fk_eval(const char* gold_path, const char* predictions_path, int partial_match,
                  double threshold, const char* report_out) {
  if (!gold_path || !predictions_path) return fail(FK_ERR_INVALID, "null argument");
  return guarded([&] {
    Corpus gold = read_corpus(gold_path);
    PredictionSet preds = apply_threshold(read_predictions(predictions_path), threshold);
    MatchMode mode = partial_match ? MatchMode::PartialOverlap : MatchMode::Exact;
    std::string json = report_to_json(score(gold, preds, mode, threshold));
    if (report_out)
      write_text(report_out, json);
    else
      std::cout << json << '\n';
    return FK_OK;
  });
}

fk_status fk_curve(const char* gold_path, const char* predictions_path, int partial_match,
                   int grid_points, const char* csv_out) {
  if (!gold_path || !predictions_path || !csv_out) return fail(FK_ERR_INVALID, "null argument");
  if (grid_points < 2) return fail(FK_ERR_INVALID, "grid needs at least 2 points");
  return guarded([&] {
    Corpus gold = read_corpus(gold_path);
    PredictionSet preds = read_predictions(predictions_path);
    MatchMode mode = partial_match ? MatchMode::PartialOverlap : MatchMode::Exact;
    PrCurve curve = pr_curve(gold, preds, threshold_grid(grid_points), mode);
    std::ostringstream text;
    text << curve_to_csv(curve);
    static const char* kNames[4] = {"TI", "TC", "RI", "RC"};
    for (int s = 0; s < 4; ++s) {
      const EerPoint& eer = curve.eer[s];
      text << "# EER " << kNames[s] << " threshold=" << eer.threshold << " value=" << eer.value
           << (eer.boundary ? " (boundary)" : "") << '\n';
    }
    write_text(csv_out, text.str());
    return FK_OK;
  });
}

fk_status fk_loop(const char* corpus_path, const char* config_path, const char* report_out,
                  const char* csv_out) {
  if (!corpus_path || !report_out) return fail(FK_ERR_INVALID, "null argument");
  return guarded([&] {
    LoopConfig config = config_path ? load_loop_config(config_path) : LoopConfig{};
    LoopReport report = run_loop(read_corpus(corpus_path), config);
    write_text(report_out, loop_report_json(report));
    if (csv_out) write_text(csv_out, loop_report_csv(report));
    return FK_OK;
  });
}

}  // extern "C"
