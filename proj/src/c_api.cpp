#include "lpbias/lpbias.h"

#include <cstring>
#include <memory>
#include <sstream>
#include <string>

#include "lpbias/embedding.hpp"
#include "lpbias/error.hpp"
#include "lpbias/graph.hpp"
#include "lpbias/heuristics.hpp"
#include "lpbias/log.hpp"
#include "lpbias/pipeline.hpp"
#include "lpbias/split.hpp"

struct lpb_graph {
  std::unique_ptr<lpbias::Graph> owned;
  const lpbias::Graph* g = nullptr;
};

struct lpb_split {
  lpbias::Split s;
  lpb_graph learning;
};

struct lpb_embedding {
  lpbias::EmbeddingMatrix m;
};

namespace {

thread_local std::string g_last_error;

lpb_status fail(lpb_status code, const char* what) {
  g_last_error = what;
  return code;
}

// Maps exceptions onto status codes. ParseError is a DataError, so order matters.
template <class F>
lpb_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const lpbias::ConfigError& e) {
    return fail(LPB_ERR_CONFIG, e.what());
  } catch (const lpbias::DataError& e) {
    return fail(LPB_ERR_DATA, e.what());
  } catch (const lpbias::ContractViolation& e) {
    return fail(LPB_ERR_CONTRACT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LPB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LPB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LPB_ERR_INTERNAL, "unknown error");
  }
}

lpb_graph* wrap(lpbias::Graph g) {
  auto* h = new lpb_graph;
  h->owned = std::make_unique<lpbias::Graph>(std::move(g));
  h->g = h->owned.get();
  return h;
}

void check_node(const lpbias::Graph& g, uint32_t u) {
  if (u >= g.node_count()) throw lpbias::ContractViolation("node id " + std::to_string(u) + " out of range");
}

#define LPB_REQUIRE(cond) \
  if (!(cond)) return fail(LPB_ERR_CONTRACT, "null argument: " #cond)

}  // namespace

extern "C" {

const char* lpb_version(void) { return lpbias::kToolVersion; }

const char* lpb_last_error(void) { return g_last_error.c_str(); }

void lpb_set_log_callback(lpb_log_fn fn, void* user) {
  if (!fn) {
    lpbias::set_log_sink({});
    return;
  }
  lpbias::set_log_sink([fn, user](lpbias::LogLevel level, const std::string& message) {
    fn(static_cast<lpb_log_level>(level), message.c_str(), user);
  });
}

lpb_status lpb_graph_load(const char* path, int weighted, lpb_graph** out) {
  LPB_REQUIRE(path && out);
  return guarded([&] {
    *out = wrap(lpbias::build_graph(lpbias::read_edge_list_file(path, {weighted != 0, false})));
    return LPB_OK;
  });
}

lpb_status lpb_graph_from_text(const char* text, int weighted, lpb_graph** out) {
  LPB_REQUIRE(text && out);
  return guarded([&] {
    std::istringstream in{std::string(text)};
    *out = wrap(lpbias::build_graph(lpbias::parse_edge_list(in, {weighted != 0, false})));
    return LPB_OK;
  });
}

void lpb_graph_free(lpb_graph* graph) { delete graph; }

size_t lpb_graph_node_count(const lpb_graph* graph) { return graph ? graph->g->node_count() : 0; }

size_t lpb_graph_edge_count(const lpb_graph* graph) { return graph ? graph->g->edge_count() : 0; }

lpb_status lpb_graph_find(const lpb_graph* graph, const char* label, uint32_t* id) {
  LPB_REQUIRE(graph && label && id);
  auto found = graph->g->find(label);
  if (!found) return fail(LPB_ERR_DATA, "unknown node label");
  *id = *found;
  g_last_error.clear();
  return LPB_OK;
}

lpb_status lpb_graph_degree(const lpb_graph* graph, uint32_t u, size_t* degree) {
  LPB_REQUIRE(graph && degree);
  return guarded([&] {
    check_node(*graph->g, u);
    *degree = graph->g->degree(u);
    return LPB_OK;
  });
}

lpb_status lpb_graph_has_edge(const lpb_graph* graph, uint32_t u, uint32_t v, int* result) {
  LPB_REQUIRE(graph && result);
  return guarded([&] {
    check_node(*graph->g, u);
    check_node(*graph->g, v);
    *result = graph->g->has_edge(u, v) ? 1 : 0;
    return LPB_OK;
  });
}

lpb_status lpb_graph_largest_component(const lpb_graph* graph, lpb_graph** out) {
  LPB_REQUIRE(graph && out);
  return guarded([&] {
    *out = wrap(lpbias::largest_connected_component(*graph->g));
    return LPB_OK;
  });
}

lpb_status lpb_heuristics_compute(const lpb_graph* graph, uint32_t u, uint32_t v, lpb_heuristics* out) {
  LPB_REQUIRE(graph && out);
  return guarded([&] {
    check_node(*graph->g, u);
    check_node(*graph->g, v);
    auto h = lpbias::feature_vector(*graph->g, u, v);
    *out = lpb_heuristics{h.cn, h.aa, h.pa, h.jaccard, h.ra, h.deg_lo, h.deg_hi};
    return LPB_OK;
  });
}

lpb_status lpb_distance_class(const lpb_graph* graph, uint32_t u, uint32_t v, int* out) {
  LPB_REQUIRE(graph && out);
  return guarded([&] {
    check_node(*graph->g, u);
    check_node(*graph->g, v);
    *out = lpbias::distance_class(*graph->g, u, v) == lpbias::DistanceClass::AtDistanceTwo ? LPB_DIST_TWO
                                                                                            : LPB_DIST_THREE_OR_MORE;
    return LPB_OK;
  });
}

lpb_status lpb_split_static(const lpb_graph* graph, double fraction, uint64_t seed, lpb_split** out) {
  LPB_REQUIRE(graph && out);
  return guarded([&] {
    auto h = std::make_unique<lpb_split>();
    h->s = lpbias::split_static(*graph->g, fraction, seed);
    h->learning.g = &h->s.learning;
    *out = h.release();
    return LPB_OK;
  });
}

lpb_status lpb_split_load(const char* dir, lpb_split** out) {
  LPB_REQUIRE(dir && out);
  return guarded([&] {
    auto h = std::make_unique<lpb_split>();
    h->s = lpbias::load_split(dir);
    h->learning.g = &h->s.learning;
    *out = h.release();
    return LPB_OK;
  });
}

lpb_status lpb_split_save(const lpb_split* split, const char* dir) {
  LPB_REQUIRE(split && dir);
  return guarded([&] {
    lpbias::save_split(split->s, dir);
    return LPB_OK;
  });
}

void lpb_split_free(lpb_split* split) { delete split; }

const lpb_graph* lpb_split_learning(const lpb_split* split) { return split ? &split->learning : nullptr; }

size_t lpb_split_prediction_count(const lpb_split* split) { return split ? split->s.prediction.size() : 0; }

lpb_status lpb_split_prediction_edge(const lpb_split* split, size_t index, uint32_t* u, uint32_t* v) {
  LPB_REQUIRE(split && u && v);
  if (index >= split->s.prediction.size()) return fail(LPB_ERR_CONTRACT, "prediction edge index out of range");
  *u = split->s.prediction[index].first;
  *v = split->s.prediction[index].second;
  g_last_error.clear();
  return LPB_OK;
}

lpb_status lpb_embedding_load(const char* path, const lpb_graph* graph, lpb_embedding** out) {
  LPB_REQUIRE(path && graph && out);
  return guarded([&] {
    auto h = std::make_unique<lpb_embedding>();
    h->m = lpbias::load_embedding_file(path, *graph->g);
    *out = h.release();
    return LPB_OK;
  });
}

void lpb_embedding_free(lpb_embedding* embedding) { delete embedding; }

size_t lpb_embedding_dim(const lpb_embedding* embedding) { return embedding ? embedding->m.dim() : 0; }

lpb_status lpb_edge_vector(const lpb_embedding* embedding, uint32_t u, uint32_t v, int op, double* out,
                           size_t out_len) {
  LPB_REQUIRE(embedding && out);
  return guarded([&] {
    if (op < LPB_OP_HADAMARD || op > LPB_OP_L2) throw lpbias::ConfigError("unknown edge operator");
    if (out_len != embedding->m.dim()) throw lpbias::ContractViolation("output length differs from embedding dim");
    if (u >= embedding->m.node_count() || v >= embedding->m.node_count()) {
      throw lpbias::ContractViolation("node id out of range");
    }
    lpbias::edge_vector(embedding->m, u, v, static_cast<lpbias::EdgeOperator>(op), {out, out_len});
    return LPB_OK;
  });
}

lpb_status lpb_cmd_split(const char* config_json) {
  LPB_REQUIRE(config_json);
  return guarded([&] {
    lpbias::run_split_command(lpbias::parse_split_config(config_json));
    return LPB_OK;
  });
}

lpb_status lpb_cmd_run(const char* config_json) {
  LPB_REQUIRE(config_json);
  return guarded([&] {
    auto outcome = lpbias::run_run_command(lpbias::parse_run_config(config_json));
    if (outcome.failed > 0) {
      g_last_error = std::to_string(outcome.failed) + " of " + std::to_string(outcome.failed + outcome.completed) +
                     " (seed, method) units failed; see manifest.json";
      return LPB_ERR_STAGE;
    }
    return LPB_OK;
  });
}

lpb_status lpb_cmd_report(const char* config_json) {
  LPB_REQUIRE(config_json);
  return guarded([&] {
    lpbias::run_report_command(lpbias::parse_report_config(config_json));
    return LPB_OK;
  });
}

lpb_status lpb_cmd_features(const char* config_json) {
  LPB_REQUIRE(config_json);
  return guarded([&] {
    lpbias::run_features_command(lpbias::parse_features_config(config_json));
    return LPB_OK;
  });
}

lpb_status lpb_cmd_embed(const char* config_json) {
  LPB_REQUIRE(config_json);
  return guarded([&] {
    lpbias::run_embed_command(lpbias::parse_embed_config(config_json));
    return LPB_OK;
  });
}

}  // extern "C"
