#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpbias/classifier.hpp"
#include "lpbias/embedding.hpp"
#include "lpbias/split.hpp"
#include "lpbias/walk_embedding.hpp"

namespace lpbias {

inline constexpr const char* kToolVersion = "0.3.0";

/// Pipeline stages behind the command-line tool. Each stage takes a JSON
/// object whose keys mirror the long flag names (`sample-size`, `seeds`, ...).

struct SplitCommandConfig {
  std::string input;
  SplitMode mode = SplitMode::Static;
  std::optional<double> fraction;  ///< removal (static, default 0.2) or learning (temporal, default 0.8)
  bool weighted = false;
  std::uint64_t seed = 0;
  std::string name;  ///< dataset name, defaults to the input file stem
  std::string out;

  double effective_fraction() const;
};

enum class MethodKind { Heuristics, EmbeddingFile, Walk };

struct MethodSpec {
  MethodKind kind = MethodKind::Heuristics;
  std::string name;
  std::string embedding_file;
  EdgeOperator op = EdgeOperator::Hadamard;
  WalkConfig walk;
  std::size_t dim = 128;
};

struct RunCommandConfig {
  std::string split_dir;          ///< existing split, or
  SplitCommandConfig inline_split;  ///< built inside the run when split_dir is empty
  std::uint64_t master_seed = 0;
  std::vector<MethodSpec> methods;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::size_t sample_size = 500'000;
  std::size_t min_positives = 10;
  std::size_t quota_positives = 1000;
  std::size_t max_k = 10'000;  ///< last k of the precision@k table
  double positive_fraction = 0.25;
  double hub_fraction = 0.1;
  FitOptions fit;
  std::string out;
};

struct ReportCommandConfig {
  std::vector<std::string> runs;
  std::string out;
};

struct FeaturesCommandConfig {
  std::string split_dir;
  std::string pairs;  ///< optional `u v` label file, defaults to the prediction edges
  std::string out;
};

struct EmbedCommandConfig {
  std::string split_dir;
  WalkConfig walk;
  std::size_t dim = 128;
  std::uint64_t seed = 0;
  std::string out;
};

SplitCommandConfig parse_split_config(const std::string& json_text);
RunCommandConfig parse_run_config(const std::string& json_text);
ReportCommandConfig parse_report_config(const std::string& json_text);
FeaturesCommandConfig parse_features_config(const std::string& json_text);
EmbedCommandConfig parse_embed_config(const std::string& json_text);

/// Builds and writes the split; returns it for callers that continue in-process.
Split run_split_command(const SplitCommandConfig& config);

struct RunOutcome {
  std::size_t completed = 0;  ///< (seed, method) units that finished
  std::size_t failed = 0;
};

/// Trains, scores and audits every method for every seed. A failing unit is
/// recorded in the manifest and the others continue.
RunOutcome run_run_command(const RunCommandConfig& config);

struct ReportOutcome {
  std::size_t rows = 0;
  std::vector<std::string> warnings;
};

ReportOutcome run_report_command(const ReportCommandConfig& config);
void run_features_command(const FeaturesCommandConfig& config);
void run_embed_command(const EmbedCommandConfig& config);

/// Seeds of every random stage of one run, derived from the run seed.
struct RunSeeds {
  std::uint64_t run = 0;
  std::uint64_t training = 0;
  std::uint64_t ratio_sample = 0;
  std::uint64_t quota_sample = 0;
  std::uint64_t perfect_order = 0;
  std::uint64_t walk = 0;
};

RunSeeds derive_run_seeds(std::uint64_t run_seed);

}  // namespace lpbias
