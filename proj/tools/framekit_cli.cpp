#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "framekit/framekit_c.h"

namespace {

int finish(fk_status status) {
  if (status == FK_OK) return 0;
  std::fprintf(stderr, "error: %s\n", fk_last_error());
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"framekit: semantic frame tagging toolkit"};
  app.require_subcommand(1);

  // generate
  std::string gen_config, gen_out;
  std::uint64_t gen_seed = 0;
  auto* generate = app.add_subcommand("generate", "Write a synthetic annotated corpus");
  generate->add_option("--config", gen_config, "key=value generator config");
  auto* gen_seed_opt = generate->add_option("--seed", gen_seed, "RNG seed (default 0)");
  generate->add_option("-o,--out", gen_out, "output corpus (JSON lines)")->required();

  // stats
  std::string stats_corpus, stats_out;
  auto* stats = app.add_subcommand("stats", "Per-source corpus statistics");
  stats->add_option("corpus", stats_corpus, "corpus file")->required();
  stats->add_option("-o,--out", stats_out, "JSON report path")->required();

  // split
  std::string split_corpus, split_train, split_test, split_manifest;
  double split_fraction = 0.8;
  std::uint64_t split_seed = 0;
  auto* splitcmd = app.add_subcommand("split", "Document-atomic stratified train/test split");
  splitcmd->add_option("corpus", split_corpus)->required();
  splitcmd->add_option("--fraction", split_fraction, "train share of frame occurrences");
  splitcmd->add_option("--seed", split_seed);
  splitcmd->add_option("--train", split_train, "train corpus output")->required();
  splitcmd->add_option("--test", split_test, "test corpus output")->required();
  splitcmd->add_option("--manifest", split_manifest, "JSON manifest output");

  // kfold
  std::string kfold_corpus, kfold_dir;
  int kfold_k = 5;
  auto* kfoldcmd = app.add_subcommand("kfold", "Write document-atomic cross-validation folds");
  kfoldcmd->add_option("corpus", kfold_corpus)->required();
  kfoldcmd->add_option("-k", kfold_k, "number of folds");
  kfoldcmd->add_option("--out-dir", kfold_dir)->required();

  // train
  std::string train_corpus, train_model, train_kind = "crf", train_embeddings;
  int train_epochs = 0, train_jobs = 1, train_hidden = 0;
  double train_l2 = -1.0, train_lr = 0.0;
  std::uint64_t train_seed = 0;
  auto* train = app.add_subcommand("train", "Train a tagging model");
  train->add_option("corpus", train_corpus)->required();
  train->add_option("--model", train_kind, "crf | bilstm")
      ->check(CLI::IsMember({"crf", "bilstm"}));
  train->add_option("-o,--out", train_model, "model file output")->required();
  train->add_option("--epochs", train_epochs);
  train->add_option("--l2", train_l2, "CRF L2 strength");
  train->add_option("--learning-rate", train_lr);
  train->add_option("--seed", train_seed);
  train->add_option("--jobs", train_jobs, "parallel per-LU CRF training");
  train->add_option("--hidden", train_hidden, "recurrent width per direction");
  train->add_option("--embeddings", train_embeddings, "pretrained word vectors (text)");

  // parse
  std::string parse_model, parse_corpus, parse_out, parse_mode = "repair";
  double parse_threshold = 0.0;
  auto* parse = app.add_subcommand("parse", "Tag a corpus with a trained model");
  parse->add_option("corpus", parse_corpus)->required();
  parse->add_option("--model-file", parse_model)->required();
  parse->add_option("--threshold", parse_threshold, "confidence floor");
  parse->add_option("--mode", parse_mode, "repair | strict")
      ->check(CLI::IsMember({"repair", "strict"}));
  parse->add_option("-o,--out", parse_out, "predictions (JSON lines)")->required();

  // eval
  std::string eval_gold, eval_pred, eval_out, eval_match = "exact";
  double eval_threshold = 0.0;
  auto* eval = app.add_subcommand("eval", "Score predictions against gold");
  eval->add_option("gold", eval_gold)->required();
  eval->add_option("predictions", eval_pred)->required();
  eval->add_option("--match", eval_match, "exact | partial")
      ->check(CLI::IsMember({"exact", "partial"}));
  eval->add_option("--threshold", eval_threshold);
  eval->add_option("-o,--out", eval_out, "JSON report (default: stdout)");

  // curve
  std::string curve_gold, curve_pred, curve_out, curve_match = "exact";
  int curve_grid = 101;
  auto* curve = app.add_subcommand("curve", "Precision/recall over a threshold grid");
  curve->add_option("gold", curve_gold)->required();
  curve->add_option("predictions", curve_pred)->required();
  curve->add_option("--match", curve_match)->check(CLI::IsMember({"exact", "partial"}));
  curve->add_option("--grid", curve_grid, "points in [0,1]");
  curve->add_option("-o,--out", curve_out, "CSV output")->required();

  // loop
  std::string loop_corpus, loop_config, loop_out, loop_csv;
  auto* loop = app.add_subcommand("loop", "Simulated iterative annotation");
  loop->add_option("corpus", loop_corpus)->required();
  loop->add_option("--config", loop_config, "key=value loop config");
  loop->add_option("-o,--out", loop_out, "JSON report")->required();
  loop->add_option("--csv", loop_csv, "per-iteration CSV");

  CLI11_PARSE(app, argc, argv);

  if (generate->parsed())
    return finish(fk_generate(gen_config.empty() ? nullptr : gen_config.c_str(), gen_seed,
                              gen_seed_opt->count() > 0 ? 1 : 0, gen_out.c_str()));
  if (stats->parsed()) return finish(fk_stats(stats_corpus.c_str(), stats_out.c_str()));
  if (splitcmd->parsed())
    return finish(fk_split(split_corpus.c_str(), split_fraction, split_seed, split_train.c_str(),
                           split_test.c_str(),
                           split_manifest.empty() ? nullptr : split_manifest.c_str()));
  if (kfoldcmd->parsed())
    return finish(fk_kfold(kfold_corpus.c_str(), kfold_k, kfold_dir.c_str()));
  if (train->parsed()) {
    if (train_kind == "crf")
      return finish(fk_train_crf(train_corpus.c_str(), train_model.c_str(), train_epochs,
                                 train_l2, train_lr, train_seed, train_jobs));
    return finish(fk_train_bilstm(train_corpus.c_str(), train_model.c_str(), train_hidden,
                                  train_epochs, train_lr, train_seed,
                                  train_embeddings.empty() ? nullptr : train_embeddings.c_str()));
  }
  if (parse->parsed())
    return finish(fk_parse(parse_model.c_str(), parse_corpus.c_str(), parse_threshold,
                           parse_mode == "strict" ? 1 : 0, parse_out.c_str()));
  if (eval->parsed())
    return finish(fk_eval(eval_gold.c_str(), eval_pred.c_str(), eval_match == "partial" ? 1 : 0,
                          eval_threshold, eval_out.empty() ? nullptr : eval_out.c_str()));
  if (curve->parsed())
    return finish(fk_curve(curve_gold.c_str(), curve_pred.c_str(),
                           curve_match == "partial" ? 1 : 0, curve_grid, curve_out.c_str()));
  if (loop->parsed())
    return finish(fk_loop(loop_corpus.c_str(), loop_config.empty() ? nullptr : loop_config.c_str(),
                          loop_out.c_str(), loop_csv.empty() ? nullptr : loop_csv.c_str()));
  return 1;
}
