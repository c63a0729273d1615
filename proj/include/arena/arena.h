/* C interface to the evaluation arena.
 *
 * Every fallible call returns an arena_status. On failure, arena_last_error()
 * returns a one-line description that stays valid until the next failing call
 * on the same thread. Objects are opaque handles created by *_create / *_load
 * and released by the matching *_destroy. Strings returned through char**
 * out-parameters are owned by the caller and released with arena_string_free.
 */
#ifndef ARENA_ARENA_H_
#define ARENA_ARENA_H_

#include <stddef.h>
#include <stdint.h>

#if defined(ARENA_BUILDING_LIBRARY)
#define ARENA_API __attribute__((visibility("default")))
#else
#define ARENA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum arena_status {
  ARENA_OK = 0,
  ARENA_ERR_INVALID_ARGUMENT = 1,
  ARENA_ERR_IO = 2,
  ARENA_ERR_PARSE = 3,
  ARENA_ERR_DUPLICATE_ID = 4,
  ARENA_ERR_EMPTY_FIELD = 5,
  ARENA_ERR_UNKNOWN_ID = 6,
  ARENA_ERR_UNKNOWN_MODEL = 7,
  ARENA_ERR_SCORER_FAILURE = 8,
  ARENA_ERR_PROVIDER_UNREACHABLE = 9,
  ARENA_ERR_MALFORMED_RESPONSE = 10,
  ARENA_ERR_DIMENSION_MISMATCH = 11,
  ARENA_ERR_ZERO_VECTOR = 12,
  ARENA_ERR_NO_REFERENCE_ANSWERS = 13,
  ARENA_ERR_TOO_FEW_MODELS = 14,
  ARENA_ERR_INSUFFICIENT_MODELS = 15,
  ARENA_ERR_NO_COMMON_RECORD = 16,
  ARENA_ERR_UNKNOWN_MATCH = 17,
  ARENA_ERR_ALREADY_RESOLVED = 18,
  ARENA_ERR_JUDGE_MISMATCH = 19,
  ARENA_ERR_INCOMPLETE_COLUMN = 20,
  ARENA_ERR_INTERNAL = 21
} arena_status;

/* Stable snake_case name of a status ("ok", "duplicate_id", ...). */
ARENA_API const char* arena_status_name(arena_status status);
ARENA_API const char* arena_last_error(void);
ARENA_API const char* arena_version(void);
ARENA_API void arena_string_free(char* s);

/* ---- Options shared by the pipeline calls ---------------------------- */

typedef struct arena_options arena_options;

/* Defaults: initial rating 1000, K 32, scale 400, 1000 permutations at a 95%
 * interval, seed 0, jobs = hardware concurrency, tabular output, Pearson,
 * HTTP embedding provider with no URL, stored quality scores. */
ARENA_API arena_options* arena_options_create(void);
ARENA_API void arena_options_destroy(arena_options* opts);
ARENA_API arena_status arena_options_set_elo(arena_options* opts, double initial_rating,
                                             double k_factor, double scale);
ARENA_API arena_status arena_options_set_permutations(arena_options* opts,
                                                      size_t permutations, double ci_level);
ARENA_API void arena_options_set_seed(arena_options* opts, uint64_t seed);
ARENA_API void arena_options_set_jobs(arena_options* opts, size_t jobs);
/* "table" or "json". */
ARENA_API arena_status arena_options_set_format(arena_options* opts, const char* format);
/* "pearson" or "spearman". */
ARENA_API arena_status arena_options_set_correlation(arena_options* opts, const char* method);
/* provider: "http", "hashing" or "cache". url and cache_dir may be NULL. */
ARENA_API arena_status arena_options_set_embedding(arena_options* opts, const char* provider,
                                                   const char* url, const char* cache_dir,
                                                   size_t hashing_dimension);
/* NULL or "" scores pairs by their stored quality_score. */
ARENA_API void arena_options_set_scorer_url(arena_options* opts, const char* url);

/* ---- File pipeline ----------------------------------------------------
 * An output path of NULL or "-" writes to stdout; files are replaced
 * atomically. */

ARENA_API arena_status arena_filter(const arena_options* opts, const char* input,
                                    const char* output, double threshold);
ARENA_API arena_status arena_combine(const arena_options* opts, const char* const* inputs,
                                     size_t n_inputs, const char* output);
/* responses: response files or directories of them. */
ARENA_API arena_status arena_score(const arena_options* opts, const char* dataset,
                                   const char* const* responses, size_t n_responses,
                                   const char* output);
/* models may be NULL/0 to rate every model named in the log. */
ARENA_API arena_status arena_elo(const arena_options* opts, const char* votes,
                                 const char* const* models, size_t n_models,
                                 const char* output);
ARENA_API arena_status arena_winpct(const arena_options* opts, const char* votes,
                                    const char* const* models, size_t n_models,
                                    const char* output);
ARENA_API arena_status arena_categories(const arena_options* opts, const char* votes,
                                        const char* dataset, const char* output);
/* labels[i] prefixes the columns taken from paths[i]. */
ARENA_API arena_status arena_correlate(const arena_options* opts, const char* const* labels,
                                       const char* const* paths, size_t n, const char* output);

typedef struct arena_report_inputs {
  const char* dataset;
  const char* const* responses;
  size_t n_responses;
  const char* votes;
  const char* general_dataset; /* optional */
  const char* const* general_responses;
  size_t n_general_responses;
} arena_report_inputs;

ARENA_API arena_status arena_report(const arena_options* opts,
                                    const arena_report_inputs* inputs, const char* out_dir);

/* ---- Metric primitives -------------------------------------------------- */

typedef struct arena_rouge {
  double precision;
  double recall;
  double f1;
} arena_rouge;

/* Tokenizes both texts and fills ROUGE-1, ROUGE-2 and ROUGE-L (any may be NULL). */
ARENA_API arena_status arena_rouge_text(const char* candidate, const char* reference,
                                        arena_rouge* rouge1, arena_rouge* rouge2,
                                        arena_rouge* rougeL);
ARENA_API arena_status arena_cosine(const double* a, const double* b, size_t dimension,
                                    double* out);
/* outcome: "A_WINS", "B_WINS" or "BOTH_GOOD". */
ARENA_API arena_status arena_elo_update(double r_a, double r_b, const char* outcome,
                                        double k_factor, double scale, double* out_a,
                                        double* out_b);

/* ---- Datasets ----------------------------------------------------------- */

typedef struct arena_dataset arena_dataset;

ARENA_API arena_status arena_dataset_load(const char* path, arena_dataset** out);
ARENA_API void arena_dataset_destroy(arena_dataset* ds);
ARENA_API size_t arena_dataset_size(const arena_dataset* ds);
ARENA_API const char* arena_dataset_name(const arena_dataset* ds);
/* NULL when i is out of range. */
ARENA_API const char* arena_dataset_record_id(const arena_dataset* ds, size_t i);
ARENA_API const char* arena_dataset_record_category(const arena_dataset* ds, size_t i);

/* ---- Ratings ------------------------------------------------------------ */

typedef struct arena_rating_report arena_rating_report;

typedef struct arena_rating_row {
  const char* model; /* owned by the report */
  double elo_sequential;
  double elo_mean;
  double ci_low;
  double ci_high;
  double winpct;
  size_t vote_count;
} arena_rating_row;

ARENA_API arena_status arena_rate_votes(const arena_options* opts, const char* votes,
                                        const char* const* models, size_t n_models,
                                        arena_rating_report** out);
ARENA_API size_t arena_rating_report_size(const arena_rating_report* report);
ARENA_API arena_status arena_rating_report_row(const arena_rating_report* report, size_t i,
                                               arena_rating_row* out);
ARENA_API void arena_rating_report_destroy(arena_rating_report* report);

/* ---- Voting service ----------------------------------------------------- */

typedef struct arena_server arena_server;

typedef struct arena_server_config {
  const char* dataset;
  const char* responses_dir;
  const char* vote_log;
  const char* scheduler;    /* "balanced" (default when NULL) or "uniform" */
  size_t live_permutations; /* 0 selects the default of 200 */
  const char* judge_token;  /* optional */
  int has_seed;
  uint64_t seed;
} arena_server_config;

ARENA_API arena_status arena_server_create(const arena_options* opts,
                                           const arena_server_config* config,
                                           arena_server** out);
ARENA_API void arena_server_destroy(arena_server* server);

/* JSON bodies identical to the HTTP endpoints. */
ARENA_API arena_status arena_server_next_matchup(arena_server* server, const char* judge_id,
                                                 char** json_out);
/* outcome: "LEFT", "RIGHT", "BOTH_GOOD" or "NEITHER". */
ARENA_API arena_status arena_server_submit_vote(arena_server* server, const char* match_id,
                                                const char* outcome, const char* judge_id,
                                                char** json_out);
ARENA_API arena_status arena_server_leaderboard(arena_server* server, char** json_out);

/* Serves HTTP until arena_server_stop is called. */
ARENA_API arena_status arena_server_listen(arena_server* server, const char* host, int port);
/* Binds an ephemeral port; returns it, or -1. Follow with listen_after_bind. */
ARENA_API int arena_server_bind_any_port(arena_server* server, const char* host);
ARENA_API arena_status arena_server_listen_after_bind(arena_server* server);
ARENA_API void arena_server_stop(arena_server* server);

#ifdef __cplusplus
}
#endif

#endif /* ARENA_ARENA_H_ */
