#ifndef FRAMEKIT_C_H
#define FRAMEKIT_C_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fk_status {
  FK_OK = 0,
  FK_ERR_IO = 1,       /* file missing or unwritable */
  FK_ERR_PARSE = 2,    /* malformed corpus / model / config file */
  FK_ERR_INVALID = 3,  /* bad argument or inconsistent data */
  FK_ERR_INTERNAL = 4
} fk_status;

/* Message for the most recent failure on this thread. Never NULL. */
const char* fk_last_error(void);

/* ---- corpus handle ---- */

typedef struct fk_corpus fk_corpus;

fk_status fk_corpus_open(const char* path, fk_corpus** out);
fk_status fk_corpus_write(const fk_corpus* corpus, const char* path);
void fk_corpus_free(fk_corpus* corpus);
size_t fk_corpus_documents(const fk_corpus* corpus);
size_t fk_corpus_sentences(const fk_corpus* corpus);
size_t fk_corpus_frame_instances(const fk_corpus* corpus);

/* ---- file-level pipeline operations ---- */

/* Synthetic corpus. config_path may be NULL (defaults); seed overrides the
 * config seed when seed_override is nonzero. */
fk_status fk_generate(const char* config_path, uint64_t seed, int seed_override,
                      const char* corpus_out);

/* Per-source and total corpus statistics as JSON. */
fk_status fk_stats(const char* corpus_path, const char* json_out);

/* Document-atomic split stratified by frame counts. manifest_out may be
 * NULL. Returns FK_ERR_INVALID when the requested fraction cannot be met
 * within +-0.02 (outputs are still written). */
fk_status fk_split(const char* corpus_path, double train_fraction, uint64_t seed,
                   const char* train_out, const char* test_out, const char* manifest_out);

fk_status fk_kfold(const char* corpus_path, int k, const char* out_dir);

/* Conditional random field bank, one model per lexical unit. */
fk_status fk_train_crf(const char* train_path, const char* model_out, int epochs, double l2,
                       double learning_rate, uint64_t seed, int jobs);

/* Bidirectional recurrent tagger with one output head per frame.
 * embeddings_path may be NULL. */
fk_status fk_train_bilstm(const char* train_path, const char* model_out, int hidden, int epochs,
                          double learning_rate, uint64_t seed, const char* embeddings_path);

/* Parses a corpus with either model kind (detected from the file), applies
 * the coherence filter (strict_mode 0 repairs leading I tags, 1 drops those
 * segments) and writes JSON-lines predictions. */
fk_status fk_parse(const char* model_path, const char* corpus_path, double threshold,
                   int strict_mode, const char* predictions_out);

/* Scores predictions against gold. partial_match 0 = exact spans. The JSON
 * report goes to report_out when non-NULL, else to stdout. */
fk_status fk_eval(const char* gold_path, const char* predictions_path, int partial_match,
                  double threshold, const char* report_out);

/* Precision/recall over a uniform threshold grid, CSV output, and the
 * equal-error-rate crossing per subtask (appended to the CSV as comments). */
fk_status fk_curve(const char* gold_path, const char* predictions_path, int partial_match,
                   int grid_points, const char* csv_out);

/* Simulated iterative annotation with an oracle annotator. config_path and
 * csv_out may be NULL. */
fk_status fk_loop(const char* corpus_path, const char* config_path, const char* report_out,
                  const char* csv_out);

#ifdef __cplusplus
}
#endif

#endif
