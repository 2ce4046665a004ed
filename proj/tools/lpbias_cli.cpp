// lpbias command-line front end. Everything goes through the C interface;
// this file only turns flags into the JSON configs the commands expect.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpbias/lpbias.h"

namespace {

using json = nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitStage = 4;

struct Flag {
  std::string key;
  CLI::Option* option = nullptr;
  std::function<json()> value;
};

// Collects flags per subcommand. Only flags that were given on the command
// line end up in the config, so a --config file supplies the rest.
class Command {
 public:
  Command(CLI::App& parent, const std::string& name, const std::string& help) : app_(parent.add_subcommand(name, help)) {
    app_->add_option("--config", config_path_, "JSON config file; flags override its keys")->check(CLI::ExistingFile);
  }

  CLI::App* app() { return app_; }

  template <class T>
  CLI::Option* add(const std::string& key, T& storage, const std::string& help) {
    auto* opt = app_->add_option("--" + key, storage, help);
    flags_.push_back({key, opt, [&storage] { return json(storage); }});
    return opt;
  }

  CLI::Option* add_flag(const std::string& key, bool& storage, const std::string& help) {
    auto* opt = app_->add_flag("--" + key, storage, help);
    flags_.push_back({key, opt, [&storage] { return json(storage); }});
    return opt;
  }

  // Throws std::runtime_error on an unreadable config file.
  std::string config_json() const {
    json j = json::object();
    if (!config_path_.empty()) {
      std::ifstream in(config_path_);
      std::stringstream text;
      text << in.rdbuf();
      j = json::parse(text.str(), nullptr, false);
      if (j.is_discarded() || !j.is_object()) throw std::runtime_error("config file is not a JSON object: " + config_path_);
      json normalized = json::object();
      for (auto& [k, v] : j.items()) {
        std::string key = k;
        std::replace(key.begin(), key.end(), '_', '-');
        normalized[key] = v;
      }
      j = std::move(normalized);
    }
    for (const auto& f : flags_) {
      if (f.option->count() > 0) j[f.key] = f.value();
    }
    return j.dump();
  }

 private:
  CLI::App* app_;
  std::string config_path_;
  std::vector<Flag> flags_;
};

void log_to_stderr(lpb_log_level level, const char* message, void* user) {
  const bool verbose = *static_cast<bool*>(user);
  if (level == LPB_LOG_INFO && !verbose) return;
  const char* tag = level == LPB_LOG_INFO ? "info" : level == LPB_LOG_WARNING ? "warning" : "error";
  std::fprintf(stderr, "lpbias: %s: %s\n", tag, message);
}

int to_exit_code(lpb_status status) {
  switch (status) {
    case LPB_OK:
      return 0;
    case LPB_ERR_CONFIG:
      return kExitConfig;
    case LPB_ERR_DATA:
      return kExitData;
    default:
      return kExitStage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link prediction benchmarking and bias audits"};
  app.set_version_flag("--version", std::string(lpb_version()));
  app.require_subcommand(1);
  app.fallthrough();
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "print progress messages");

  // split
  Command split(app, "split", "build a learning/prediction split");
  std::string s_input, s_mode, s_name, s_out;
  double s_fraction = 0;
  std::uint64_t s_seed = 0;
  bool s_weighted = false;
  split.add("input", s_input, "edge list file");
  split.add("mode", s_mode, "static|temporal")->check(CLI::IsMember({"static", "temporal"}));
  split.add("fraction", s_fraction, "removal fraction (static) or learning fraction (temporal)");
  split.add("seed", s_seed, "split seed");
  split.add("name", s_name, "dataset name (defaults to the input file stem)");
  split.add("out", s_out, "output directory");
  split.add_flag("weighted", s_weighted, "input has a weight column");

  // run
  Command run(app, "run", "train, score and audit methods over several seeds");
  std::string r_split, r_input, r_mode, r_method, r_op, r_pq, r_out, r_name;
  std::vector<std::string> r_embedding_files;
  std::vector<std::uint64_t> r_seeds;
  double r_fraction = 0, r_lambda = 0, r_tol = 0, r_pos_frac = 0, r_hub = 0, r_p = 1, r_q = 1, r_lr = 0;
  std::uint64_t r_master = 0;
  std::size_t r_sample = 0, r_min_pos = 0, r_quota = 0, r_max_k = 0, r_iters = 0, r_dim = 0, r_len = 0, r_walks = 0,
              r_window = 0, r_neg = 0, r_epochs = 0;
  bool r_weighted = false;
  run.add("split", r_split, "split directory from `split`");
  run.add("input", r_input, "edge list; builds the split inline when --split is absent");
  run.add("mode", r_mode, "inline split mode")->check(CLI::IsMember({"static", "temporal"}));
  run.add("fraction", r_fraction, "inline split fraction");
  run.add("name", r_name, "dataset name for an inline split");
  run.add_flag("weighted", r_weighted, "inline input has a weight column");
  run.add("method", r_method, "comma list of heuristics|embedding|walk");
  run.add("embedding-file", r_embedding_files, "embedding file(s) for method embedding")->delimiter(',');
  run.add("operator", r_op, "edge operator: hadamard|nhadamard|average|l1|l2");
  run.add("seeds", r_seeds, "run seeds, e.g. 1,2,3,4,5")->delimiter(',');
  run.add("master-seed", r_master, "seed for community detection and the inline split");
  run.add("sample-size", r_sample, "target size of the ratio-preserving sample");
  run.add("min-positives", r_min_pos, "positive floor of the ratio-preserving sample");
  run.add("quota-positives", r_quota, "positives in the audit sample");
  run.add("max-k", r_max_k, "last k of the precision@k table");
  run.add("positive-fraction", r_pos_frac, "share of learning edges used as training positives");
  run.add("hub-fraction", r_hub, "top degree fraction counted as hubs");
  run.add("l2-lambda", r_lambda, "L2 penalty");
  run.add("tolerance", r_tol, "gradient max-norm tolerance");
  run.add("max-iters", r_iters, "gradient descent iteration cap");
  run.add("pq", r_pq, "walk grid, e.g. 4:0.5,1:1");
  run.add("p", r_p, "walk return parameter");
  run.add("q", r_q, "walk in-out parameter");
  run.add("dim", r_dim, "walk embedding dimension");
  run.add("walk-length", r_len, "walk length");
  run.add("walks-per-node", r_walks, "walks per node");
  run.add("window", r_window, "skip-gram window");
  run.add("negatives", r_neg, "negative samples per positive");
  run.add("epochs", r_epochs, "skip-gram epochs");
  run.add("learning-rate", r_lr, "initial skip-gram learning rate");
  run.add("out", r_out, "output directory");

  // report
  Command report(app, "report", "tabulate and plot completed runs");
  std::vector<std::string> p_runs;
  std::string p_out;
  report.add("runs", p_runs, "run directories");
  report.add("out", p_out, "output directory");

  // features
  Command features(app, "features", "write heuristic features for node pairs");
  std::string f_split, f_pairs, f_out;
  features.add("split", f_split, "split directory");
  features.add("pairs", f_pairs, "`u v` pair file (defaults to the prediction edges)");
  features.add("out", f_out, "CSV output file");

  // embed
  Command embed(app, "embed", "train a biased-walk embedding on a learning graph");
  std::string e_split, e_out;
  double e_p = 1, e_q = 1, e_lr = 0;
  std::uint64_t e_seed = 0;
  std::size_t e_dim = 0, e_len = 0, e_walks = 0, e_window = 0, e_neg = 0, e_epochs = 0;
  embed.add("split", e_split, "split directory");
  embed.add("p", e_p, "return parameter");
  embed.add("q", e_q, "in-out parameter");
  embed.add("dim", e_dim, "dimension");
  embed.add("walk-length", e_len, "walk length");
  embed.add("walks-per-node", e_walks, "walks per node");
  embed.add("window", e_window, "skip-gram window");
  embed.add("negatives", e_neg, "negative samples per positive");
  embed.add("epochs", e_epochs, "epochs");
  embed.add("learning-rate", e_lr, "initial learning rate");
  embed.add("seed", e_seed, "seed");
  embed.add("out", e_out, "embedding output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  lpb_set_log_callback(log_to_stderr, &verbose);

  lpb_status status = LPB_OK;
  try {
    if (split.app()->parsed()) {
      status = lpb_cmd_split(split.config_json().c_str());
    } else if (run.app()->parsed()) {
      status = lpb_cmd_run(run.config_json().c_str());
    } else if (report.app()->parsed()) {
      status = lpb_cmd_report(report.config_json().c_str());
    } else if (features.app()->parsed()) {
      status = lpb_cmd_features(features.config_json().c_str());
    } else if (embed.app()->parsed()) {
      status = lpb_cmd_embed(embed.config_json().c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "lpbias: error: %s\n", e.what());
    return kExitConfig;
  }
  if (status != LPB_OK) std::fprintf(stderr, "lpbias: error: %s\n", lpb_last_error());
  return to_exit_code(status);
}
