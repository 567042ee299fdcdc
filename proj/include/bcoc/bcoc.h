/* C interface to the bcoc simulator, analytics and custody ledger.
 *
 * Every function returns a bcoc_status. On failure bcoc_last_error() holds a
 * message for the calling thread. Strings and buffers returned through out
 * parameters are owned by the caller and released with bcoc_free(). */
#ifndef BCOC_BCOC_H
#define BCOC_BCOC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BCOC_BUILDING_LIBRARY)
#    define BCOC_API __declspec(dllexport)
#  else
#    define BCOC_API __declspec(dllimport)
#  endif
#else
#  define BCOC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bcoc_status {
  BCOC_OK = 0,
  BCOC_ERR_INVALID_ARGUMENT = 1,
  BCOC_ERR_CONFIG = 2,
  BCOC_ERR_INVALID_SPEC = 3,
  BCOC_ERR_EVIDENCE_NOT_FOUND = 4,
  BCOC_ERR_EVIDENCE_ALREADY_EXISTS = 5,
  BCOC_ERR_INVALID_ID = 6,
  BCOC_ERR_DESCRIPTION_TOO_LONG = 7,
  BCOC_ERR_INVALID_DESCRIPTION_LENGTH = 8,
  BCOC_ERR_INVALID_ADDRESS = 9,
  BCOC_ERR_NOT_OWNER = 10,
  BCOC_ERR_NOT_CREATOR = 11,
  BCOC_ERR_EMPTY_EVIDENCE = 12,
  BCOC_ERR_INTEGRITY_VIOLATION = 13,
  BCOC_ERR_ID_COLLISION = 14,
  BCOC_ERR_IO = 15,
  BCOC_ERR_SCHEDULING_IN_PAST = 16,
  BCOC_ERR_UNKNOWN_NODE = 17,
  BCOC_ERR_NOT_PROPOSER = 18,
  BCOC_ERR_INVALID_MAX_SIZE = 19,
  BCOC_ERR_INVALID_BOUNDS = 20,
  BCOC_ERR_CAPACITY_TOO_LARGE = 21,
  BCOC_ERR_INTERNAL = 99
} bcoc_status;

typedef enum bcoc_tx_kind {
  BCOC_TX_CREATE_EVIDENCE = 0,
  BCOC_TX_TRANSFER = 1,
  BCOC_TX_REMOVE_EVIDENCE = 2
} bcoc_tx_kind;

BCOC_API const char* bcoc_version(void);
BCOC_API const char* bcoc_status_name(bcoc_status status);
BCOC_API const char* bcoc_last_error(void);
BCOC_API void bcoc_free(void* ptr);

/* ---- cost model ------------------------------------------------------- */

/* desc_length is ignored except for BCOC_TX_CREATE_EVIDENCE. Either output
 * pointer may be NULL. */
BCOC_API bcoc_status bcoc_tx_cost(bcoc_tx_kind kind, uint32_t desc_length, uint64_t* size,
                                  uint64_t* gas);

/* ---- analytics -------------------------------------------------------- */

typedef struct bcoc_chain_params {
  double period;          /* seconds */
  uint64_t gas_limit;
  uint64_t header_size;   /* bytes */
  double bandwidth;       /* bytes per second */
  uint64_t prepare_size;
  uint64_t commit_size;
  uint64_t pp_overhead;
} bcoc_chain_params;

BCOC_API void bcoc_chain_params_default(bcoc_chain_params* params);

BCOC_API bcoc_status bcoc_block_inclusion_latency(double tx_issue_time, double block_time,
                                                  double period, double* seconds);
BCOC_API bcoc_status bcoc_consensus_latency(uint64_t block_size, const bcoc_chain_params* params,
                                            double* seconds);
BCOC_API bcoc_status bcoc_max_block_size_closed_form(uint64_t gas_limit, uint64_t header_size,
                                                     uint64_t* bytes);
/* Exact knapsack optimum over the standard transaction catalog. */
BCOC_API bcoc_status bcoc_max_block_size_ukp(uint64_t gas_limit, uint64_t header_size,
                                             uint64_t capacity_ceiling, uint64_t* bytes);
BCOC_API bcoc_status bcoc_gas_limit_range(uint64_t max_size, uint64_t header_size,
                                          uint64_t* gas_min, uint64_t* gas_max);
BCOC_API bcoc_status bcoc_header_overhead(double t, double period, uint64_t header_size,
                                          double* bytes);
/* Header term plus the sizes of the given transaction counts. */
BCOC_API bcoc_status bcoc_growth_rate(double t1, double t2, double period, uint64_t header_size,
                                      const bcoc_tx_kind* kinds, const uint32_t* desc_lengths,
                                      const uint64_t* counts, size_t n, double* bytes);
/* Kind of the dominating catalog entry of the standard catalog. */
BCOC_API bcoc_status bcoc_dominant_kind(bcoc_tx_kind* kind, uint32_t* desc_length);

/* Largest gas limit whose fullest block still meets the latency bound. */
BCOC_API bcoc_status bcoc_upper_gas_limit(double max_latency, const bcoc_chain_params* params,
                                          uint64_t* gas_limit);

typedef struct bcoc_gas_plan {
  uint64_t lower;
  uint64_t lower_average;
  uint64_t upper;
  uint64_t recommended;
  uint64_t range_low;
  uint64_t range_high;
  char tag[32];
} bcoc_gas_plan;

BCOC_API bcoc_status bcoc_plan_gas_limit(uint64_t lower, uint64_t lower_average, uint64_t upper,
                                         bcoc_gas_plan* plan);

typedef struct bcoc_table2_row {
  uint64_t n;
  uint64_t content_bytes;
  double header_bytes;
  double total_bytes;
  double overhead_pct;
} bcoc_table2_row;

BCOC_API bcoc_status bcoc_table2(double period, const uint64_t* ns, size_t count,
                                 bcoc_table2_row* rows);
/* Annual header bytes for each block period given in minutes. */
BCOC_API bcoc_status bcoc_fig3(const double* period_minutes, size_t count, uint64_t header_size,
                               double* annual_bytes);

/* Exact knapsack solver prepared for capacities up to max_capacity. */
typedef struct bcoc_ukp_solver bcoc_ukp_solver;

BCOC_API bcoc_status bcoc_ukp_solver_new(uint64_t max_capacity, uint64_t capacity_ceiling,
                                         bcoc_ukp_solver** solver);
BCOC_API bcoc_status bcoc_ukp_solver_optimum(const bcoc_ukp_solver* solver, uint64_t gas_limit,
                                             uint64_t* content_bytes);
BCOC_API void bcoc_ukp_solver_free(bcoc_ukp_solver* solver);

/* ---- experiments ------------------------------------------------------ */

typedef struct bcoc_config bcoc_config;
typedef struct bcoc_experiment bcoc_experiment;

typedef struct bcoc_metrics_row {
  uint64_t period_index;
  uint64_t gas_rate;
  double mean_lb;
  double max_lb;
  uint64_t included_txs;
  double mean_lc;
  uint64_t committed_block_size;
  uint64_t chain_size_bytes;
  uint64_t mempool_depth;
} bcoc_metrics_row;

BCOC_API bcoc_status bcoc_config_new(bcoc_config** config);
BCOC_API bcoc_status bcoc_config_clone(const bcoc_config* config, bcoc_config** copy);
BCOC_API void bcoc_config_free(bcoc_config* config);
/* Applies a "key = value" file on top of the current settings. */
BCOC_API bcoc_status bcoc_config_load(bcoc_config* config, const char* path);
BCOC_API bcoc_status bcoc_config_set(bcoc_config* config, const char* key, const char* value);
BCOC_API bcoc_status bcoc_config_validate(const bcoc_config* config);

/* Documented keys and CSV columns, for help output. Return count, or fill
 * name and description for index < count. */
BCOC_API size_t bcoc_config_key_count(void);
BCOC_API bcoc_status bcoc_config_key(size_t index, const char** name, const char** description);
BCOC_API size_t bcoc_metrics_column_count(void);
BCOC_API bcoc_status bcoc_metrics_column(size_t index, const char** name,
                                         const char** description);
BCOC_API size_t bcoc_summary_column_count(void);
BCOC_API bcoc_status bcoc_summary_column(size_t index, const char** name,
                                         const char** description);

BCOC_API bcoc_status bcoc_run(const bcoc_config* config, bcoc_experiment** experiment);
/* Runs every configuration; experiments[i] receives the result of configs[i]. */
BCOC_API bcoc_status bcoc_sweep(const bcoc_config* const* configs, size_t count, unsigned threads,
                                bcoc_experiment** experiments);
BCOC_API void bcoc_experiment_free(bcoc_experiment* experiment);

BCOC_API size_t bcoc_experiment_row_count(const bcoc_experiment* experiment);
BCOC_API bcoc_status bcoc_experiment_row(const bcoc_experiment* experiment, size_t index,
                                         bcoc_metrics_row* row);
BCOC_API int bcoc_experiment_agreement(const bcoc_experiment* experiment);
BCOC_API uint64_t bcoc_experiment_committed_blocks(const bcoc_experiment* experiment);
/* CSV text; prefix_header/prefix_value add a leading column when non-NULL. */
BCOC_API bcoc_status bcoc_experiment_metrics_csv(const bcoc_experiment* experiment,
                                                 const char* prefix_header,
                                                 const char* prefix_value, int with_header,
                                                 char** csv);
BCOC_API bcoc_status bcoc_experiment_summary_csv(const bcoc_experiment* experiment, char** csv);

/* ---- custody ledger --------------------------------------------------- */

/* A persisted single-node evidence log with its evidence store, kept under a
 * directory. Every operation commits immediately and is saved before the
 * call returns. Actors are 40-digit hex addresses or names (a name maps to
 * a fixed address). Ledger reverts are reported as the matching status. */
typedef struct bcoc_custody bcoc_custody;

BCOC_API bcoc_status bcoc_custody_open(const char* directory, bcoc_custody** custody);
BCOC_API void bcoc_custody_close(bcoc_custody* custody);
/* Ledger time, in seconds, stamped on subsequent operations. */
BCOC_API void bcoc_custody_set_time(bcoc_custody* custody, uint64_t seconds);

/* id_hex receives 64 hex digits and a terminating NUL. */
BCOC_API bcoc_status bcoc_custody_create(bcoc_custody* custody, const char* actor,
                                         const uint8_t* blob, size_t size,
                                         const char* description, char id_hex[65]);
BCOC_API bcoc_status bcoc_custody_transfer(bcoc_custody* custody, const char* actor,
                                           const char* id_hex, const char* new_owner);
/* Ledger-only removal; the stored blob is left in place. */
BCOC_API bcoc_status bcoc_custody_remove(bcoc_custody* custody, const char* actor,
                                         const char* id_hex);
/* Removal by the creator that also deletes the stored blob. */
BCOC_API bcoc_status bcoc_custody_discard(bcoc_custody* custody, const char* actor,
                                          const char* id_hex);
/* Blob of the evidence, checked against its id; owner only. */
BCOC_API bcoc_status bcoc_custody_acquire(bcoc_custody* custody, const char* actor,
                                          const char* id_hex, uint8_t** blob, size_t* size);
/* JSON object with id, creator, owner, description and history. */
BCOC_API bcoc_status bcoc_custody_show(const bcoc_custody* custody, const char* id_hex,
                                       char** json);
/* Hex address an actor string resolves to. */
BCOC_API bcoc_status bcoc_resolve_actor(const char* actor, char address_hex[41]);

#ifdef __cplusplus
}
#endif

#endif
