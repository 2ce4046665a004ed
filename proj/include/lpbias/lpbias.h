/* lpbias C interface.
 *
 * Every function returns an lpb_status. On failure the message is available
 * from lpb_last_error() on the same thread until the next call.
 * Handles are opaque and owned by the caller; free them with the matching
 * *_free function (NULL is accepted).
 */
#ifndef LPBIAS_LPBIAS_H
#define LPBIAS_LPBIAS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(LPBIAS_BUILDING)
#define LPB_API __declspec(dllexport)
#else
#define LPB_API __declspec(dllimport)
#endif
#else
#define LPB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lpb_status {
  LPB_OK = 0,
  LPB_ERR_INTERNAL = 1,
  LPB_ERR_CONFIG = 2,
  LPB_ERR_DATA = 3,
  LPB_ERR_STAGE = 4,    /* a run finished but some units failed */
  LPB_ERR_CONTRACT = 5  /* caller broke a precondition (bad id, adjacent pair, ...) */
} lpb_status;

typedef struct lpb_graph lpb_graph;
typedef struct lpb_split lpb_split;
typedef struct lpb_embedding lpb_embedding;

typedef enum lpb_log_level { LPB_LOG_INFO = 0, LPB_LOG_WARNING = 1, LPB_LOG_ERROR = 2 } lpb_log_level;
typedef void (*lpb_log_fn)(lpb_log_level level, const char* message, void* user);

typedef struct lpb_heuristics {
  uint64_t cn;
  double aa;
  uint64_t pa;
  double jaccard;
  double ra;
  uint64_t deg_lo;
  uint64_t deg_hi;
} lpb_heuristics;

enum { LPB_OP_HADAMARD = 0, LPB_OP_NHADAMARD = 1, LPB_OP_AVERAGE = 2, LPB_OP_L1 = 3, LPB_OP_L2 = 4 };
enum { LPB_DIST_TWO = 2, LPB_DIST_THREE_OR_MORE = 3 };

LPB_API const char* lpb_version(void);
LPB_API const char* lpb_last_error(void);

/* Routes library log messages; pass NULL to silence them. */
LPB_API void lpb_set_log_callback(lpb_log_fn fn, void* user);

/* graphs */
LPB_API lpb_status lpb_graph_load(const char* path, int weighted, lpb_graph** out);
LPB_API lpb_status lpb_graph_from_text(const char* text, int weighted, lpb_graph** out);
LPB_API void lpb_graph_free(lpb_graph* graph);
LPB_API size_t lpb_graph_node_count(const lpb_graph* graph);
LPB_API size_t lpb_graph_edge_count(const lpb_graph* graph);
LPB_API lpb_status lpb_graph_find(const lpb_graph* graph, const char* label, uint32_t* id);
LPB_API lpb_status lpb_graph_degree(const lpb_graph* graph, uint32_t u, size_t* degree);
LPB_API lpb_status lpb_graph_has_edge(const lpb_graph* graph, uint32_t u, uint32_t v, int* result);
LPB_API lpb_status lpb_graph_largest_component(const lpb_graph* graph, lpb_graph** out);
LPB_API lpb_status lpb_heuristics_compute(const lpb_graph* graph, uint32_t u, uint32_t v, lpb_heuristics* out);
LPB_API lpb_status lpb_distance_class(const lpb_graph* graph, uint32_t u, uint32_t v, int* out);

/* splits */
LPB_API lpb_status lpb_split_static(const lpb_graph* graph, double fraction, uint64_t seed, lpb_split** out);
LPB_API lpb_status lpb_split_load(const char* dir, lpb_split** out);
LPB_API lpb_status lpb_split_save(const lpb_split* split, const char* dir);
LPB_API void lpb_split_free(lpb_split* split);
/* Borrowed view of the learning graph, valid while the split lives. */
LPB_API const lpb_graph* lpb_split_learning(const lpb_split* split);
LPB_API size_t lpb_split_prediction_count(const lpb_split* split);
LPB_API lpb_status lpb_split_prediction_edge(const lpb_split* split, size_t index, uint32_t* u, uint32_t* v);

/* embeddings, rows indexed by node id of `graph` */
LPB_API lpb_status lpb_embedding_load(const char* path, const lpb_graph* graph, lpb_embedding** out);
LPB_API void lpb_embedding_free(lpb_embedding* embedding);
LPB_API size_t lpb_embedding_dim(const lpb_embedding* embedding);
LPB_API lpb_status lpb_edge_vector(const lpb_embedding* embedding, uint32_t u, uint32_t v, int op, double* out,
                                   size_t out_len);

/* Pipeline commands. Each takes a JSON object whose keys are the long flag
 * names of the matching CLI subcommand. */
LPB_API lpb_status lpb_cmd_split(const char* config_json);
LPB_API lpb_status lpb_cmd_run(const char* config_json);
LPB_API lpb_status lpb_cmd_report(const char* config_json);
LPB_API lpb_status lpb_cmd_features(const char* config_json);
LPB_API lpb_status lpb_cmd_embed(const char* config_json);

#ifdef __cplusplus
}
#endif

#endif /* LPBIAS_LPBIAS_H */
