#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "lpbias/error.hpp"
#include "lpbias/evaluation.hpp"
#include "lpbias/pipeline.hpp"
#include "lpbias/random.hpp"
#include "synthetic.hpp"

using namespace lpbias;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("lpbias_unit_pipeline_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("stage seeds are stable and distinct", "[pipeline][seeds]") {
  CHECK(derive_seed(1, "training") == derive_seed(1, "training"));
  CHECK(derive_seed(1, "training") != derive_seed(2, "training"));
  CHECK(derive_seed(1, "training") != derive_seed(1, "walk-embedding"));
  CHECK(derive_seed(1, "x", 0) != derive_seed(1, "x", 1));
  std::set<std::uint64_t> all;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    auto r = derive_run_seeds(s);
    for (auto v : {r.training, r.ratio_sample, r.quota_sample, r.perfect_order, r.walk}) all.insert(v);
  }
  CHECK(all.size() == 25);
}

TEST_CASE("run config defaults", "[pipeline][config]") {
  auto c = parse_run_config(R"({"split": "s", "out": "o"})");
  CHECK(c.seeds == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
  CHECK(c.sample_size == 500000);
  CHECK(c.min_positives == 10);
  CHECK(c.quota_positives == 1000);
  REQUIRE(c.methods.size() == 1);
  CHECK(c.methods[0].kind == MethodKind::Heuristics);
  CHECK(c.fit.l2_lambda == 1e-4);
}

TEST_CASE("run config with methods, seeds and underscores", "[pipeline][config]") {
  auto c = parse_run_config(R"({"split": "s", "out": "o", "method": "heuristics,embedding,walk",
      "embedding_file": ["a/le.emb", "b/hope.txt"], "operator": "nhadamard", "seeds": "7,8",
      "pq": "4:0.5,0.5:4", "walk-length": 20, "sample-size": "1000"})");
  CHECK(c.seeds == std::vector<std::uint64_t>{7, 8});
  CHECK(c.sample_size == 1000);
  REQUIRE(c.methods.size() == 5);
  CHECK(c.methods[1].name == "emb_le");
  CHECK(c.methods[1].op == EdgeOperator::NormalizedHadamard);
  CHECK(c.methods[2].embedding_file == "b/hope.txt");
  CHECK(c.methods[3].walk.p == 4.0);
  CHECK(c.methods[3].walk.q == 0.5);
  CHECK(c.methods[3].walk.walk_length == 20);
  CHECK(c.methods[4].name == "walk_p0.5_q4");
}

TEST_CASE("bad configs are config errors", "[pipeline][config]") {
  CHECK_THROWS_AS(parse_run_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[1]"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"split": "s"})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"out": "o"})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"split": "s", "out": "o", "method": "magic"})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"split": "s", "out": "o", "method": "embedding"})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"split": "s", "out": "o", "seeds": []})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"split": "s", "out": "o", "sample-size": -3})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"split": "s", "out": "o", "operator": "dot", "method": "walk"})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_split_config(R"({"input": "x", "out": "o", "fraction": 1.5})"), ConfigError);
  CHECK_THROWS_AS(parse_split_config(R"({"input": "x", "out": "o", "mode": "weekly"})"), ConfigError);
  CHECK_THROWS_AS(parse_report_config(R"({"out": "o"})"), ConfigError);
  CHECK_THROWS_AS(parse_embed_config(R"({"split": "s", "out": "o", "window": 100, "walk-length": 10})"),
                  ConfigError);
}

TEST_CASE("split fraction defaults per mode", "[pipeline][config]") {
  auto s = parse_split_config(R"({"input": "x", "out": "o"})");
  CHECK(s.effective_fraction() == 0.2);
  auto t = parse_split_config(R"({"input": "x", "out": "o", "mode": "temporal"})");
  CHECK(t.effective_fraction() == 0.8);
}

TEST_CASE("run writes every artifact and a consistent aggregate", "[pipeline][run]") {
  auto dir = scratch("run");
  auto g = testing::planted_partition(4, 30, 0.25, 0.01, 3);
  std::ofstream(dir / "g.txt") << testing::edge_list_text(g);
  SplitCommandConfig sc;
  sc.input = (dir / "g.txt").string();
  sc.seed = 5;
  sc.out = (dir / "split").string();
  run_split_command(sc);

  RunCommandConfig rc;
  rc.split_dir = sc.out;
  rc.out = (dir / "run").string();
  rc.seeds = {1, 2, 3};
  rc.sample_size = 3000;
  rc.quota_positives = 30;
  rc.methods = {MethodSpec{MethodKind::Heuristics, "heuristics", {}, EdgeOperator::Hadamard, {}, 0}};
  auto outcome = run_run_command(rc);
  CHECK(outcome.completed == 3);
  CHECK(outcome.failed == 0);
  for (const char* f : {"manifest.json", "metrics.json", "partition.csv", "timings.log"}) CHECK(fs::exists(dir / "run" / f));
  for (int s = 1; s <= 3; ++s) {
    auto m = dir / "run" / ("seed_" + std::to_string(s)) / "heuristics";
    for (const char* f : {"model.json", "metrics.json", "precision_at_k.csv", "bias_short_distance.csv",
                          "bias_involves_hub.csv", "bias_intra_community.csv"})
      CHECK(fs::exists(m / f));
  }
  auto metrics = nlohmann::json::parse(slurp(dir / "run" / "metrics.json"));
  auto entry = metrics["methods"]["heuristics"];
  std::vector<double> aps;
  for (auto& r : entry["runs"]) aps.push_back(r["ap"].get<double>());
  auto s = summarize(aps);
  CHECK(entry["ap"]["mean"].get<double>() == s.mean);
  CHECK(entry["ap"]["std"].get<double>() == s.stddev);
  auto manifest = nlohmann::json::parse(slurp(dir / "run" / "manifest.json"));
  CHECK(manifest["runs"].size() == 3);
  CHECK(manifest["runs"][0]["training_seed"].get<std::uint64_t>() == derive_run_seeds(1).training);
  CHECK(manifest["version"] == kToolVersion);

  ReportCommandConfig report{{rc.out}, (dir / "report").string()};
  auto ro = run_report_command(report);
  CHECK(ro.rows == 1);
  CHECK(ro.warnings.empty());
  auto table = slurp(dir / "report" / "table.md");
  CHECK(std::count(table.begin(), table.end(), '\n') == 3);
}
