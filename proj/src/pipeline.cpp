#include "lpbias/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lpbias/bias_audit.hpp"
#include "lpbias/community.hpp"
#include "lpbias/error.hpp"
#include "lpbias/evaluation.hpp"
#include "lpbias/heuristics.hpp"
#include "lpbias/log.hpp"
#include "lpbias/random.hpp"
#include "lpbias/svg_plot.hpp"
#include "lpbias/text_format.hpp"

namespace lpbias {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// config helpers

json parse_object(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  json normalized = json::object();
  for (auto& [key, value] : j.items()) {
    std::string k = key;
    std::replace(k.begin(), k.end(), '_', '-');
    normalized[k] = value;
  }
  return normalized;
}

const json* find_key(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

std::string get_string(const json& j, const char* key, std::string fallback = {}) {
  const json* v = find_key(j, key);
  if (!v) return fallback;
  if (!v->is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return v->get<std::string>();
}

double get_real(const json& j, const char* key, double fallback) {
  const json* v = find_key(j, key);
  if (!v) return fallback;
  if (v->is_number()) return v->get<double>();
  if (v->is_string()) {
    try {
      std::size_t used = 0;
      double x = std::stod(v->get<std::string>(), &used);
      if (used == v->get<std::string>().size()) return x;
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(std::string("'") + key + "' must be a number");
}

std::uint64_t get_uint(const json& j, const char* key, std::uint64_t fallback) {
  const json* v = find_key(j, key);
  if (!v) return fallback;
  if (v->is_number_unsigned()) return v->get<std::uint64_t>();
  if (v->is_number_integer() && v->get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v->get<std::int64_t>());
  if (v->is_string()) {
    const auto& s = v->get_ref<const std::string&>();
    if (!s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return std::stoull(s);
    }
  }
  throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
}

bool get_bool(const json& j, const char* key, bool fallback) {
  const json* v = find_key(j, key);
  if (!v) return fallback;
  if (!v->is_boolean()) throw ConfigError(std::string("'") + key + "' must be true or false");
  return v->get<bool>();
}

std::vector<std::string> split_list(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Accepts "a,b,c" or ["a","b","c"].
std::vector<std::string> get_string_list(const json& j, const char* key) {
  const json* v = find_key(j, key);
  if (!v) return {};
  if (v->is_string()) return split_list(v->get<std::string>());
  if (v->is_array()) {
    std::vector<std::string> out;
    for (const auto& item : *v) {
      if (!item.is_string()) throw ConfigError(std::string("'") + key + "' entries must be strings");
      out.push_back(item.get<std::string>());
    }
    return out;
  }
  throw ConfigError(std::string("'") + key + "' must be a string or an array of strings");
}

std::vector<std::uint64_t> get_seed_list(const json& j, const char* key, std::vector<std::uint64_t> fallback) {
  const json* v = find_key(j, key);
  if (!v) return fallback;
  std::vector<std::uint64_t> out;
  if (v->is_array()) {
    for (const auto& item : *v) {
      json wrapper = {{"seed", item}};
      out.push_back(get_uint(wrapper, "seed", 0));
    }
  } else if (v->is_string()) {
    for (const auto& s : split_list(v->get<std::string>())) {
      json wrapper = {{"seed", s}};
      out.push_back(get_uint(wrapper, "seed", 0));
    }
  } else {
    json wrapper = {{"seed", *v}};
    out.push_back(get_uint(wrapper, "seed", 0));
  }
  if (out.empty()) throw ConfigError(std::string("'") + key + "' needs at least one seed");
  return out;
}

void check_unit_interval(double f, const char* name) {
  if (!(f > 0.0 && f < 1.0)) throw ConfigError(std::string(name) + " must lie in (0, 1)");
}

WalkConfig parse_walk(const json& j) {
  WalkConfig w;
  w.p = get_real(j, "p", w.p);
  w.q = get_real(j, "q", w.q);
  w.walk_length = get_uint(j, "walk-length", w.walk_length);
  w.walks_per_node = get_uint(j, "walks-per-node", w.walks_per_node);
  w.window = get_uint(j, "window", w.window);
  w.negatives_per_positive = get_uint(j, "negatives", w.negatives_per_positive);
  w.epochs = get_uint(j, "epochs", w.epochs);
  w.learning_rate = get_real(j, "learning-rate", w.learning_rate);
  return w;
}

ojson walk_to_json(const WalkConfig& w) {
  return {{"p", w.p},
          {"q", w.q},
          {"walk_length", w.walk_length},
          {"walks_per_node", w.walks_per_node},
          {"window", w.window},
          {"negatives", w.negatives_per_positive},
          {"epochs", w.epochs},
          {"learning_rate", w.learning_rate},
          {"learning_rate_schedule", "linear decay to 1e-4 of start"}};
}

std::string compact_number(double x) {
  std::ostringstream o;
  o << x;
  return o.str();
}

std::string safe_name(std::string s) {
  for (char& c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                    c == '-' || c == '_';
    if (!ok) c = '_';
  }
  return s;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class StageTimer {
 public:
  void record(const std::string& stage, std::chrono::steady_clock::time_point start) {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    lines_ << stage << '\t' << format_fixed(ms, 1) << " ms\n";
  }
  std::string text() const { return lines_.str(); }

 private:
  std::ostringstream lines_;
};

std::string dataset_name_for(const SplitCommandConfig& c) {
  return c.name.empty() ? fs::path(c.input).stem().string() : c.name;
}

}  // namespace

// ---------------------------------------------------------------------------
// config parsing

double SplitCommandConfig::effective_fraction() const {
  if (fraction) return *fraction;
  return mode == SplitMode::Static ? 0.2 : 0.8;
}

namespace {

SplitCommandConfig split_config_from(const json& j) {
  SplitCommandConfig c;
  c.input = get_string(j, "input");
  c.mode = parse_split_mode(get_string(j, "mode", "static"));
  if (find_key(j, "fraction")) {
    c.fraction = get_real(j, "fraction", 0.0);
    check_unit_interval(*c.fraction, "fraction");
  }
  c.weighted = get_bool(j, "weighted", false);
  c.seed = get_uint(j, "seed", 0);
  c.name = get_string(j, "name");
  c.out = get_string(j, "out");
  return c;
}

}  // namespace

SplitCommandConfig parse_split_config(const std::string& text) {
  auto j = parse_object(text);
  auto c = split_config_from(j);
  if (c.input.empty()) throw ConfigError("split: 'input' is required");
  if (c.out.empty()) throw ConfigError("split: 'out' is required");
  return c;
}

RunCommandConfig parse_run_config(const std::string& text) {
  auto j = parse_object(text);
  RunCommandConfig c;
  c.split_dir = get_string(j, "split");
  c.out = get_string(j, "out");
  if (c.out.empty()) throw ConfigError("run: 'out' is required");
  if (c.split_dir.empty()) {
    c.inline_split = split_config_from(j);
    if (c.inline_split.input.empty()) throw ConfigError("run: either 'split' or 'input' is required");
  }
  c.master_seed = get_uint(j, "master-seed", get_uint(j, "seed", 0));
  c.seeds = get_seed_list(j, "seeds", c.seeds);
  c.sample_size = get_uint(j, "sample-size", c.sample_size);
  c.min_positives = get_uint(j, "min-positives", c.min_positives);
  c.quota_positives = get_uint(j, "quota-positives", c.quota_positives);
  c.max_k = get_uint(j, "max-k", c.max_k);
  c.positive_fraction = get_real(j, "positive-fraction", c.positive_fraction);
  c.hub_fraction = get_real(j, "hub-fraction", c.hub_fraction);
  c.fit.l2_lambda = get_real(j, "l2-lambda", c.fit.l2_lambda);
  c.fit.tolerance = get_real(j, "tolerance", c.fit.tolerance);
  c.fit.max_iters = get_uint(j, "max-iters", c.fit.max_iters);
  if (c.sample_size == 0 || c.quota_positives == 0 || c.max_k == 0) {
    throw ConfigError("sample sizes and max-k must be positive");
  }
  if (!(c.positive_fraction > 0.0 && c.positive_fraction <= 1.0)) {
    throw ConfigError("positive-fraction must lie in (0, 1]");
  }
  check_unit_interval(c.hub_fraction, "hub-fraction");
  if (!(c.fit.l2_lambda >= 0.0) || !(c.fit.tolerance > 0.0)) throw ConfigError("invalid classifier settings");

  const std::string default_op = get_string(j, "operator");
  const std::size_t dim = get_uint(j, "dim", 128);
  auto methods = get_string_list(j, "method");
  const json* method_objects = find_key(j, "methods");
  if (methods.empty() && !method_objects) methods = {"heuristics"};
  std::set<std::string> names;
  auto add = [&](MethodSpec m) {
    if (!names.insert(m.name).second) throw ConfigError("duplicate method name '" + m.name + "'");
    c.methods.push_back(std::move(m));
  };
  for (const auto& m : methods) {
    if (m == "heuristics") {
      add(MethodSpec{MethodKind::Heuristics, "heuristics", {}, EdgeOperator::Hadamard, {}, 0});
    } else if (m == "embedding") {
      auto files = get_string_list(j, "embedding-file");
      if (files.empty()) throw ConfigError("method 'embedding' needs --embedding-file");
      for (const auto& f : files) {
        MethodSpec spec;
        spec.kind = MethodKind::EmbeddingFile;
        spec.embedding_file = f;
        spec.op = parse_edge_operator(default_op.empty() ? "hadamard" : default_op);
        spec.name = "emb_" + safe_name(fs::path(f).stem().string());
        add(std::move(spec));
      }
    } else if (m == "walk") {
      auto grid = get_string_list(j, "pq");
      if (grid.empty()) grid = {compact_number(get_real(j, "p", 1.0)) + ":" + compact_number(get_real(j, "q", 1.0))};
      for (const auto& pq : grid) {
        auto parts = split_list(pq, ':');
        if (parts.size() != 2) throw ConfigError("walk grid entries must look like p:q, got '" + pq + "'");
        json walk_json = j;
        walk_json["p"] = parts[0];
        walk_json["q"] = parts[1];
        MethodSpec spec;
        spec.kind = MethodKind::Walk;
        spec.walk = parse_walk(walk_json);
        spec.walk.validate();
        spec.dim = dim;
        spec.op = parse_edge_operator(default_op.empty() ? "nhadamard" : default_op);
        spec.name = "walk_p" + compact_number(spec.walk.p) + "_q" + compact_number(spec.walk.q);
        add(std::move(spec));
      }
    } else {
      throw ConfigError("unknown method '" + m + "' (expected heuristics|embedding|walk)");
    }
  }
  if (method_objects) {
    if (!method_objects->is_array()) throw ConfigError("'methods' must be an array of objects");
    for (const auto& raw : *method_objects) {
      if (!raw.is_object()) throw ConfigError("'methods' entries must be objects");
      json mj = json::object();
      for (auto& [key, value] : raw.items()) {
        std::string k = key;
        std::replace(k.begin(), k.end(), '_', '-');
        mj[k] = value;
      }
      MethodSpec spec;
      const auto kind = get_string(mj, "kind", "heuristics");
      if (kind == "heuristics") {
        spec.kind = MethodKind::Heuristics;
        spec.name = "heuristics";
      } else if (kind == "embedding") {
        spec.kind = MethodKind::EmbeddingFile;
        spec.embedding_file = get_string(mj, "file");
        if (spec.embedding_file.empty()) throw ConfigError("embedding method needs 'file'");
        spec.op = parse_edge_operator(get_string(mj, "operator", default_op.empty() ? "hadamard" : default_op));
        spec.name = "emb_" + safe_name(fs::path(spec.embedding_file).stem().string());
      } else if (kind == "walk") {
        spec.kind = MethodKind::Walk;
        spec.walk = parse_walk(mj);
        spec.walk.validate();
        spec.dim = get_uint(mj, "dim", dim);
        spec.op = parse_edge_operator(get_string(mj, "operator", default_op.empty() ? "nhadamard" : default_op));
        spec.name = "walk_p" + compact_number(spec.walk.p) + "_q" + compact_number(spec.walk.q);
      } else {
        throw ConfigError("unknown method kind '" + kind + "'");
      }
      spec.name = safe_name(get_string(mj, "name", spec.name));
      add(std::move(spec));
    }
  }
  return c;
}

ReportCommandConfig parse_report_config(const std::string& text) {
  auto j = parse_object(text);
  ReportCommandConfig c;
  c.runs = get_string_list(j, "runs");
  c.out = get_string(j, "out");
  if (c.runs.empty()) throw ConfigError("report: at least one run directory is required");
  if (c.out.empty()) throw ConfigError("report: 'out' is required");
  return c;
}

FeaturesCommandConfig parse_features_config(const std::string& text) {
  auto j = parse_object(text);
  FeaturesCommandConfig c;
  c.split_dir = get_string(j, "split");
  c.pairs = get_string(j, "pairs");
  c.out = get_string(j, "out");
  if (c.split_dir.empty() || c.out.empty()) throw ConfigError("features: 'split' and 'out' are required");
  return c;
}

EmbedCommandConfig parse_embed_config(const std::string& text) {
  auto j = parse_object(text);
  EmbedCommandConfig c;
  c.split_dir = get_string(j, "split");
  c.out = get_string(j, "out");
  if (c.split_dir.empty() || c.out.empty()) throw ConfigError("embed: 'split' and 'out' are required");
  c.walk = parse_walk(j);
  c.walk.validate();
  c.dim = get_uint(j, "dim", c.dim);
  c.seed = get_uint(j, "seed", c.seed);
  if (c.dim == 0) throw ConfigError("dim must be positive");
  return c;
}

RunSeeds derive_run_seeds(std::uint64_t run_seed) {
  return {run_seed,
          derive_seed(run_seed, "training"),
          derive_seed(run_seed, "ratio-sample"),
          derive_seed(run_seed, "quota-sample"),
          derive_seed(run_seed, "perfect-order"),
          derive_seed(run_seed, "walk-embedding")};
}

// ---------------------------------------------------------------------------
// split

Split run_split_command(const SplitCommandConfig& config) {
  const double fraction = config.effective_fraction();
  Split split;
  if (config.mode == SplitMode::Static) {
    auto list = read_edge_list_file(config.input, {config.weighted, false});
    split = split_static(build_graph(list), fraction, config.seed);
  } else {
    EdgeList list;
    try {
      list = read_edge_list_file(config.input, {config.weighted, true});
    } catch (const ParseError& e) {
      throw ConfigError(std::string("temporal mode needs 'u v t' lines: ") + e.what());
    }
    split = split_temporal(list, fraction);
    split.seed = config.seed;
  }
  split.source = dataset_name_for(config);
  for (const auto& w : split.stats.warnings) log_warning("split: " + w);
  if (!config.out.empty()) save_split(split, config.out);
  log_info("split: " + std::to_string(split.learning.node_count()) + " nodes, " +
           std::to_string(split.learning.edge_count()) + " learning edges, " +
           std::to_string(split.prediction.size()) + " prediction edges");
  return split;
}

// ---------------------------------------------------------------------------
// run

namespace {

struct MethodRunResult {
  std::uint64_t seed = 0;
  double ap = 0.0;
  double auroc = 0.0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  ojson model_status;
};

void write_precision_csv(const fs::path& path, const ScoredRanking& ranking, std::size_t max_k) {
  const std::size_t last = std::min(max_k, ranking.size());
  std::vector<std::size_t> ks(last);
  for (std::size_t k = 1; k <= last; ++k) ks[k - 1] = k;
  std::ostringstream out;
  out << "k,precision\n";
  for (auto [k, p] : precision_at_k(ranking, ks)) out << k << ',' << format_real(p) << '\n';
  write_text(path, out.str());
}

std::vector<double> score_pairs(const LogisticModel& model, const PairFeaturizer& featurizer,
                                const std::vector<NodePair>& pairs) {
  std::vector<double> scores(pairs.size());
  std::vector<double> buffer(featurizer.dim());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    featurizer.featurize(pairs[i].first, pairs[i].second, buffer);
    scores[i] = model.decision_score(buffer);
  }
  return scores;
}

void write_bias_file(const fs::path& path, const BiasCurve& curve) {
  std::ostringstream out;
  write_bias_csv(out, curve);
  write_text(path, out.str());
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

CsvTable read_numeric_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty csv '" + path.string() + "'");
  t.header = split_list(line);
  t.columns.resize(t.header.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_list(line);
    if (cells.size() != t.header.size()) throw DataError("ragged csv '" + path.string() + "'");
    for (std::size_t i = 0; i < cells.size(); ++i) t.columns[i].push_back(std::stod(cells[i]));
  }
  return t;
}

PlotSeries horizontal(const std::string& label, double y, double x_lo, double x_hi) {
  return PlotSeries{label, {x_lo, x_hi}, {y, y}, true};
}

// One figure per property: method curves, both reference levels and the
// perfect-prediction overlay. Reads the CSVs written by a run.
void plot_bias_figures(const fs::path& out_dir, const std::string& dataset,
                       const std::vector<std::pair<std::string, fs::path>>& method_dirs, const fs::path& reference_dir,
                       std::size_t quota) {
  for (auto property : kAllBiasProperties) {
    const std::string file = std::string("bias_") + to_string(property) + ".csv";
    PlotSpec spec;
    spec.title = dataset + ": fraction@k, " + to_string(property);
    spec.x_label = "k";
    spec.y_label = "fraction@k";
    double x_hi = static_cast<double>(std::max<std::size_t>(quota, 10));
    double truth = NAN;
    double whole = NAN;
    for (const auto& [name, dir] : method_dirs) {
      if (!fs::exists(dir / file)) continue;
      auto t = read_numeric_csv(dir / file);
      spec.series.push_back(PlotSeries{name, t.columns[0], t.columns[1], false});
      x_hi = std::max(x_hi, t.columns[0].back());
      truth = t.columns[2].front();
      whole = t.columns[3].front();
    }
    const fs::path perfect = reference_dir / (std::string("perfect_") + to_string(property) + ".csv");
    if (fs::exists(perfect)) {
      auto t = read_numeric_csv(perfect);
      spec.series.push_back(PlotSeries{"perfect prediction", t.columns[0], t.columns[1], true});
      x_hi = std::max(x_hi, t.columns[0].back());
      truth = t.columns[2].front();
      whole = t.columns[3].front();
    }
    if (std::isfinite(truth)) spec.series.push_back(horizontal("ground truth", truth, 1.0, x_hi));
    if (std::isfinite(whole)) spec.series.push_back(horizontal("whole sample", whole, 1.0, x_hi));
    if (spec.series.empty()) continue;
    write_text(out_dir / (std::string("fraction_") + to_string(property) + "_" + safe_name(dataset) + ".svg"),
               render_line_plot(spec));
  }
}

void plot_precision_figure(const fs::path& out_dir, const std::string& dataset,
                           const std::vector<std::pair<std::string, fs::path>>& method_dirs) {
  PlotSpec spec;
  spec.title = dataset + ": precision@k";
  spec.x_label = "k";
  spec.y_label = "precision@k";
  for (const auto& [name, dir] : method_dirs) {
    if (!fs::exists(dir / "precision_at_k.csv")) continue;
    auto t = read_numeric_csv(dir / "precision_at_k.csv");
    spec.series.push_back(PlotSeries{name, t.columns[0], t.columns[1], false});
  }
  if (spec.series.empty()) return;
  write_text(out_dir / ("precision_at_k_" + safe_name(dataset) + ".svg"), render_line_plot(spec));
}

ojson summary_json(const std::vector<double>& values) {
  auto s = summarize(values);
  return {{"mean", s.mean}, {"std", s.stddev}};
}

}  // namespace

RunOutcome run_run_command(const RunCommandConfig& config) {
  using clock = std::chrono::steady_clock;
  StageTimer timer;
  const fs::path out = config.out;
  fs::create_directories(out);

  // split
  auto t0 = clock::now();
  Split split;
  std::string split_ref;
  std::string dataset;
  if (!config.split_dir.empty()) {
    split = load_split(config.split_dir);
    split_ref = config.split_dir;
    dataset = split.source.empty() ? fs::path(config.split_dir).filename().string() : split.source;
  } else {
    SplitCommandConfig sc = config.inline_split;
    sc.out = (out / "split").string();
    if (config.inline_split.seed == 0) sc.seed = derive_seed(config.master_seed, "split");
    split = run_split_command(sc);
    split_ref = "split";
    dataset = split.source;
  }
  timer.record("split", t0);
  const Graph& learning = split.learning;

  // method-independent structure of the learning graph
  t0 = clock::now();
  const std::uint64_t louvain_seed = derive_seed(config.master_seed, "louvain");
  auto communities = louvain(learning, louvain_seed);
  const double q = modularity(learning, communities.partition);
  {
    std::ostringstream csv;
    write_partition_csv(csv, learning, communities.partition);
    write_text(out / "partition.csv", csv.str());
  }
  const HubSet hubs = hub_set(learning, config.hub_fraction);
  const AuditContext audit{&learning, &communities.partition, &hubs};
  timer.record("louvain+hubs", t0);

  ojson failures = ojson::array();
  std::map<std::string, EmbeddingMatrix> file_embeddings;
  std::set<std::string> failed_methods;
  for (const auto& m : config.methods) {
    if (m.kind != MethodKind::EmbeddingFile) continue;
    t0 = clock::now();
    try {
      EmbeddingLoadReport report;
      file_embeddings.emplace(m.name, load_embedding_file(m.embedding_file, learning, &report));
      if (!report.unknown_labels.empty()) {
        log_warning(m.name + ": skipped " + std::to_string(report.unknown_labels.size()) +
                    " embedding rows for nodes outside the learning graph");
      }
    } catch (const Error& e) {
      failed_methods.insert(m.name);
      failures.push_back({{"method", m.name}, {"stage", "load-embedding"}, {"error", e.what()}});
      log_warning(m.name + ": " + e.what());
    }
    timer.record("load " + m.name, t0);
  }

  std::map<std::string, std::vector<MethodRunResult>> results;
  ojson seed_records = ojson::array();
  RunOutcome outcome;
  std::optional<std::uint64_t> plotted_seed;

  for (std::uint64_t run_seed : config.seeds) {
    const RunSeeds seeds = derive_run_seeds(run_seed);
    const fs::path seed_dir = out / ("seed_" + std::to_string(run_seed));
    fs::create_directories(seed_dir);
    ojson seed_record = {{"seed", run_seed},
                         {"training_seed", seeds.training},
                         {"ratio_sample_seed", seeds.ratio_sample},
                         {"quota_sample_seed", seeds.quota_sample},
                         {"perfect_order_seed", seeds.perfect_order},
                         {"walk_seed", seeds.walk}};

    EvalSample ratio_sample;
    EvalSample quota_sample;
    std::vector<std::size_t> ks;
    try {
      t0 = clock::now();
      ratio_sample = build_ratio_sample(split, config.sample_size, config.min_positives, seeds.ratio_sample);
      quota_sample = build_positive_quota_sample(split, config.quota_positives, seeds.quota_sample);
      const std::size_t quota_extra[] = {config.quota_positives};
      ks = default_k_grid(quota_sample.size(), quota_extra);
      const fs::path ref_dir = out / "references" / ("seed_" + std::to_string(run_seed));
      fs::create_directories(ref_dir);
      for (auto property : kAllBiasProperties) {
        auto curve = perfect_prediction_reference(quota_sample, property_predicate(audit, property), ks,
                                                  seeds.perfect_order, to_string(property));
        write_bias_file(ref_dir / (std::string("perfect_") + to_string(property) + ".csv"), curve);
      }
      timer.record("seed " + std::to_string(run_seed) + " samples", t0);
    } catch (const Error& e) {
      for (const auto& m : config.methods) {
        if (failed_methods.count(m.name)) continue;
        failures.push_back({{"method", m.name}, {"seed", run_seed}, {"stage", "sampling"}, {"error", e.what()}});
        ++outcome.failed;
      }
      log_warning("seed " + std::to_string(run_seed) + ": " + e.what());
      seed_record["error"] = e.what();
      seed_records.push_back(seed_record);
      continue;
    }
    seed_record["ratio_sample"] = {{"size", ratio_sample.size()},
                                   {"positives", ratio_sample.positives()},
                                   {"population_ratio", ratio_sample.population_ratio},
                                   {"realized_positive_ratio", ratio_sample.realized_positive_ratio}};
    seed_record["quota_sample"] = {{"size", quota_sample.size()},
                                   {"positives", quota_sample.positives()},
                                   {"population_ratio", quota_sample.population_ratio},
                                   {"realized_positive_ratio", quota_sample.realized_positive_ratio}};

    ojson method_status = ojson::object();
    for (const auto& m : config.methods) {
      if (failed_methods.count(m.name)) continue;
      const fs::path method_dir = seed_dir / m.name;
      try {
        t0 = clock::now();
        fs::create_directories(method_dir);
        std::unique_ptr<PairFeaturizer> featurizer;
        EmbeddingMatrix trained;
        ojson extra = ojson::object();
        switch (m.kind) {
          case MethodKind::Heuristics:
            featurizer = std::make_unique<HeuristicFeaturizer>(learning);
            break;
          case MethodKind::EmbeddingFile:
            featurizer = std::make_unique<EdgeEmbeddingFeaturizer>(file_embeddings.at(m.name), m.op);
            break;
          case MethodKind::Walk: {
            WalkTrainingReport report;
            trained = train_biased_walk_embedding(learning, m.walk, m.dim, seeds.walk, &report);
            featurizer = std::make_unique<EdgeEmbeddingFeaturizer>(trained, m.op);
            extra["walk_epoch_loss"] = report.epoch_loss;
            extra["walk_alias_tables"] = report.alias_tables;
            extra["walk_deterministic"] = report.deterministic;
            break;
          }
        }
        auto training = build_training_set(learning, *featurizer, seeds.training, config.positive_fraction);
        auto model = fit_logistic(training, config.fit);
        write_text(method_dir / "model.json", model_to_json(model) + "\n");

        auto ratio_scores = score_pairs(model, *featurizer, ratio_sample.pairs);
        ScoredRanking ratio_ranking(ratio_sample.pairs, ratio_scores, ratio_sample.labels);
        MethodRunResult r;
        r.seed = run_seed;
        r.ap = average_precision(ratio_ranking);
        r.auroc = auroc(ratio_ranking);
        r.n_pos = ratio_ranking.positives();
        r.n_neg = ratio_ranking.negatives();

        auto quota_scores = score_pairs(model, *featurizer, quota_sample.pairs);
        ScoredRanking quota_ranking(quota_sample.pairs, quota_scores, quota_sample.labels);
        write_precision_csv(method_dir / "precision_at_k.csv", quota_ranking, config.max_k);
        ojson fractions = ojson::object();
        for (auto property : kAllBiasProperties) {
          auto curve = fraction_at_k(quota_ranking, property_predicate(audit, property), ks, to_string(property));
          write_bias_file(method_dir / (std::string("bias_") + to_string(property) + ".csv"), curve);
          auto at = std::find(curve.ks.begin(), curve.ks.end(), config.quota_positives);
          if (at != curve.ks.end()) {
            fractions[to_string(property)] = {
                {"fraction_at_quota", curve.fraction[static_cast<std::size_t>(at - curve.ks.begin())]},
                {"ground_truth_ref", curve.ground_truth_ref},
                {"dataset_ref", curve.dataset_ref}};
          }
        }

        r.model_status = {{"converged", model.converged},
                          {"iterations", model.iterations},
                          {"final_loss", model.final_loss},
                          {"gradient_max_norm", model.gradient_norm},
                          {"training_rows", training.size()}};
        for (auto& [k, v] : extra.items()) r.model_status[k] = v;
        ojson metrics = {{"method", m.name},
                         {"seed", run_seed},
                         {"ap", r.ap},
                         {"auroc", r.auroc},
                         {"n_pos", r.n_pos},
                         {"n_neg", r.n_neg},
                         {"quota_sample_size", quota_sample.size()},
                         {"fraction_at_quota", fractions}};
        write_text(method_dir / "metrics.json", metrics.dump(2) + "\n");
        method_status[m.name] = r.model_status;
        results[m.name].push_back(std::move(r));
        ++outcome.completed;
        if (!plotted_seed) plotted_seed = run_seed;
        timer.record("seed " + std::to_string(run_seed) + " " + m.name, t0);
      } catch (const Error& e) {
        ++outcome.failed;
        failures.push_back({{"method", m.name}, {"seed", run_seed}, {"stage", "predict"}, {"error", e.what()}});
        log_warning(m.name + " seed " + std::to_string(run_seed) + ": " + e.what());
      }
    }
    seed_record["methods"] = method_status;
    seed_records.push_back(seed_record);
  }

  // aggregate
  ojson metrics = ojson::object();
  metrics["dataset"] = dataset;
  metrics["methods"] = ojson::object();
  for (const auto& m : config.methods) {
    auto it = results.find(m.name);
    if (it == results.end()) continue;
    ojson runs = ojson::array();
    std::vector<double> aps;
    std::vector<double> rocs;
    for (const auto& r : it->second) {
      runs.push_back({{"seed", r.seed}, {"ap", r.ap}, {"auroc", r.auroc}, {"n_pos", r.n_pos}, {"n_neg", r.n_neg}});
      aps.push_back(r.ap);
      rocs.push_back(r.auroc);
    }
    metrics["methods"][m.name] = {{"runs", runs}, {"ap", summary_json(aps)}, {"auroc", summary_json(rocs)}};
  }
  write_text(out / "metrics.json", metrics.dump(2) + "\n");

  ojson manifest;
  manifest["tool"] = "lpbias";
  manifest["version"] = kToolVersion;
  manifest["command"] = "run";
  manifest["dataset"] = dataset;
  manifest["split"] = {{"dir", split_ref},
                       {"mode", to_string(split.mode)},
                       {"target_fraction", split.target_fraction},
                       {"seed", split.seed},
                       {"learning_nodes", learning.node_count()},
                       {"learning_edges", learning.edge_count()},
                       {"prediction_edges", split.prediction.size()},
                       {"discarded_prediction_edges", split.stats.discarded_prediction_edges},
                       {"duplicate_prediction_edges", split.stats.duplicate_prediction_edges},
                       {"warnings", split.stats.warnings}};
  ojson methods = ojson::array();
  for (const auto& m : config.methods) {
    ojson mj = {{"name", m.name}};
    switch (m.kind) {
      case MethodKind::Heuristics:
        mj["kind"] = "heuristics";
        mj["features"] = {"cn", "aa", "pa", "jaccard", "ra", "deg_lo", "deg_hi"};
        break;
      case MethodKind::EmbeddingFile:
        mj["kind"] = "embedding";
        mj["file"] = m.embedding_file;
        mj["operator"] = to_string(m.op);
        break;
      case MethodKind::Walk:
        mj["kind"] = "walk";
        mj["operator"] = to_string(m.op);
        mj["dim"] = m.dim;
        mj["walk"] = walk_to_json(m.walk);
        mj["training_threads"] = 1;
        break;
    }
    methods.push_back(mj);
  }
  manifest["config"] = {{"master_seed", config.master_seed},
                        {"seeds", config.seeds},
                        {"sample_size", config.sample_size},
                        {"min_positives", config.min_positives},
                        {"quota_positives", config.quota_positives},
                        {"max_k", config.max_k},
                        {"positive_fraction", config.positive_fraction},
                        {"hub_fraction", config.hub_fraction},
                        {"l2_lambda", config.fit.l2_lambda},
                        {"tolerance", config.fit.tolerance},
                        {"max_iters", config.fit.max_iters},
                        {"methods", methods}};
  manifest["seed_derivation"] =
      "stage seed = splitmix64(splitmix64(seed) ^ fnv1a(stage name)); stages: training, ratio-sample, "
      "quota-sample, perfect-order, walk-embedding (per run seed), louvain and split (master seed)";
  manifest["community"] = {{"seed", louvain_seed},
                           {"communities", communities.partition.community_count},
                           {"levels", communities.levels},
                           {"modularity", q}};
  manifest["hubs"] = {{"top_fraction", hubs.top_fraction},
                      {"degree_threshold", hubs.degree_threshold},
                      {"members", hubs.member_count}};
  manifest["runs"] = seed_records;
  manifest["failures"] = failures;
  manifest["metrics"] = metrics["methods"];
  write_text(out / "manifest.json", manifest.dump(2) + "\n");
  write_text(out / "timings.log", timer.text());

  if (plotted_seed) {
    const fs::path seed_dir = out / ("seed_" + std::to_string(*plotted_seed));
    std::vector<std::pair<std::string, fs::path>> dirs;
    for (const auto& m : config.methods) dirs.emplace_back(m.name, seed_dir / m.name);
    fs::create_directories(out / "plots");
    plot_precision_figure(out / "plots", dataset, dirs);
    plot_bias_figures(out / "plots", dataset, dirs, out / "references" / ("seed_" + std::to_string(*plotted_seed)),
                      config.quota_positives);
  }
  outcome.failed += failed_methods.size() * config.seeds.size();
  return outcome;
}

// ---------------------------------------------------------------------------
// report

ReportOutcome run_report_command(const ReportCommandConfig& config) {
  ReportOutcome outcome;
  const fs::path out = config.out;
  fs::create_directories(out);

  struct RunInfo {
    fs::path dir;
    json manifest;
    json metrics;
  };
  std::vector<RunInfo> runs;
  for (const auto& dir : config.runs) {
    RunInfo info{dir, {}, {}};
    try {
      info.manifest = json::parse(read_text(fs::path(dir) / "manifest.json"));
      info.metrics = json::parse(read_text(fs::path(dir) / "metrics.json"));
    } catch (const json::exception& e) {
      throw DataError("run '" + dir + "': " + e.what());
    }
    runs.push_back(std::move(info));
  }

  auto warn = [&](const std::string& w) {
    outcome.warnings.push_back(w);
    log_warning("report: " + w);
  };

  // seeds must agree across runs of the same dataset for the comparison to be paired
  std::map<std::string, json> seeds_by_dataset;
  for (const auto& r : runs) {
    const std::string ds = r.manifest.value("dataset", std::string("unknown"));
    const json seeds = r.manifest.at("config").at("seeds");
    auto [it, inserted] = seeds_by_dataset.emplace(ds, seeds);
    if (!inserted && it->second != seeds) {
      warn("runs on '" + ds + "' use different sample seeds (" + it->second.dump() + " vs " + seeds.dump() + ")");
    }
  }

  std::ostringstream md;
  std::ostringstream csv;
  md << "| Dataset | Method | AP (mean ± std) | ROC (mean ± std) | Runs |\n";
  md << "|---|---|---|---|---|\n";
  csv << "dataset,method,ap_mean,ap_std,auroc_mean,auroc_std,runs\n";
  ojson report = ojson::object();
  report["rows"] = ojson::array();
  for (const auto& r : runs) {
    const std::string ds = r.manifest.value("dataset", std::string("unknown"));
    for (const auto& [method, entry] : r.metrics.at("methods").items()) {
      std::vector<double> aps;
      std::vector<double> rocs;
      for (const auto& run : entry.at("runs")) {
        aps.push_back(run.at("ap").get<double>());
        rocs.push_back(run.at("auroc").get<double>());
      }
      const auto ap = summarize(aps);
      const auto roc = summarize(rocs);
      const double stored_ap = entry.at("ap").at("mean").get<double>();
      const double stored_roc = entry.at("auroc").at("mean").get<double>();
      const double stored_ap_sd = entry.at("ap").at("std").get<double>();
      const double stored_roc_sd = entry.at("auroc").at("std").get<double>();
      const bool consistent = std::abs(ap.mean - stored_ap) <= 1e-12 && std::abs(roc.mean - stored_roc) <= 1e-12 &&
                              std::abs(ap.stddev - stored_ap_sd) <= 1e-12 &&
                              std::abs(roc.stddev - stored_roc_sd) <= 1e-12;
      if (!consistent) warn("aggregate of " + ds + "/" + method + " does not match its per-run values");
      md << "| " << ds << " | " << method << " | " << format_fixed(ap.mean, 3) << " ± " << format_fixed(ap.stddev, 3)
         << " | " << format_fixed(roc.mean, 3) << " ± " << format_fixed(roc.stddev, 3) << " | " << aps.size()
         << " |\n";
      csv << ds << ',' << method << ',' << format_real(ap.mean) << ',' << format_real(ap.stddev) << ','
          << format_real(roc.mean) << ',' << format_real(roc.stddev) << ',' << aps.size() << '\n';
      report["rows"].push_back({{"dataset", ds},
                                {"method", method},
                                {"ap_mean", ap.mean},
                                {"ap_std", ap.stddev},
                                {"auroc_mean", roc.mean},
                                {"auroc_std", roc.stddev},
                                {"runs", aps.size()},
                                {"consistent_with_aggregate", consistent}});
      ++outcome.rows;
    }
  }
  write_text(out / "table.md", md.str());
  write_text(out / "table.csv", csv.str());

  // figures: per dataset, the first seed shared by its runs
  std::map<std::string, std::vector<const RunInfo*>> by_dataset;
  for (const auto& r : runs) by_dataset[r.manifest.value("dataset", std::string("unknown"))].push_back(&r);
  for (const auto& [ds, group] : by_dataset) {
    std::vector<std::pair<std::string, fs::path>> dirs;
    fs::path reference_dir;
    std::size_t quota = 0;
    const std::uint64_t seed = seeds_by_dataset[ds].at(0).get<std::uint64_t>();
    for (const RunInfo* r : group) {
      const fs::path seed_dir = r->dir / ("seed_" + std::to_string(seed));
      for (const auto& [method, entry] : r->metrics.at("methods").items()) {
        (void)entry;
        dirs.emplace_back(method, seed_dir / method);
      }
      if (reference_dir.empty()) reference_dir = r->dir / "references" / ("seed_" + std::to_string(seed));
      quota = r->manifest.at("config").value("quota_positives", std::size_t{1000});
    }
    plot_precision_figure(out, ds, dirs);
    plot_bias_figures(out, ds, dirs, reference_dir, quota);
  }
  report["warnings"] = outcome.warnings;
  write_text(out / "report.json", report.dump(2) + "\n");
  return outcome;
}

// ---------------------------------------------------------------------------
// features / embed

void run_features_command(const FeaturesCommandConfig& config) {
  Split split = load_split(config.split_dir);
  std::vector<NodePair> pairs;
  if (config.pairs.empty()) {
    pairs = split.prediction;
  } else {
    auto list = read_edge_list_file(config.pairs);
    for (const auto& e : list.edges) {
      auto u = split.learning.find(e.u);
      auto v = split.learning.find(e.v);
      if (!u || !v) throw DataError("pair " + e.u + " " + e.v + " has a node outside the learning graph");
      pairs.emplace_back(*u, *v);
    }
  }
  std::ostringstream csv;
  write_feature_csv(csv, split.learning, pairs);
  write_text(config.out, csv.str());
}

void run_embed_command(const EmbedCommandConfig& config) {
  Split split = load_split(config.split_dir);
  WalkTrainingReport report;
  auto matrix = train_biased_walk_embedding(split.learning, config.walk, config.dim, config.seed, &report);
  std::ostringstream text;
  save_embeddings(text, matrix, split.learning);
  write_text(config.out, text.str());
  log_info("embed: " + std::to_string(report.corpus_tokens) + " corpus tokens, final epoch loss " +
           format_fixed(report.epoch_loss.empty() ? 0.0 : report.epoch_loss.back(), 4));
}

}  // namespace lpbias
