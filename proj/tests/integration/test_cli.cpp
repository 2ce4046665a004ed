// Drives the lpbias executable as a user would and checks files and exit codes.

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "synthetic.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("lpbias_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(LPBIAS_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Every csv/json file under `a` exists under `b` with the same bytes.
bool same_outputs(const fs::path& a, const fs::path& b) {
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext != ".csv" && ext != ".json" && ext != ".edges" && ext != ".txt" && ext != ".svg") continue;
    const auto rel = fs::relative(entry.path(), a);
    if (slurp(entry.path()) != slurp(b / rel)) return false;
    ++compared;
  }
  return compared > 0;
}

fs::path write_graph(const fs::path& dir) {
  auto g = lpbias::testing::planted_partition(4, 30, 0.25, 0.01, 12);
  auto path = dir / "graph.txt";
  std::ofstream(path) << "# planted partition\n" << lpbias::testing::edge_list_text(g);
  return path;
}

}  // namespace

TEST_CASE("split, run and report end to end", "[cli]") {
  auto dir = scratch("e2e");
  auto graph = write_graph(dir);
  REQUIRE(cli("split --input " + graph.string() + " --seed 9 --out " + (dir / "split").string()) == 0);
  for (const char* f : {"nodes.txt", "learning.edges", "prediction.edges", "split.json"}) CHECK(fs::exists(dir / "split" / f));

  const std::string run_args = "run --split " + (dir / "split").string() +
                               " --method heuristics,walk --pq 1:1 --dim 8 --walks-per-node 2 --walk-length 20"
                               " --window 4 --epochs 1 --seeds 1,2 --sample-size 2000 --quota-positives 20 --out ";
  REQUIRE(cli(run_args + (dir / "run_a").string()) == 0);
  REQUIRE(cli(run_args + (dir / "run_b").string()) == 0);
  CHECK(same_outputs(dir / "run_a", dir / "run_b"));

  REQUIRE(cli("report --runs " + (dir / "run_a").string() + " --out " + (dir / "report").string()) == 0);
  auto table = slurp(dir / "report" / "table.md");
  CHECK(table.find("heuristics") != std::string::npos);
  CHECK(table.find("walk_p1_q1") != std::string::npos);
  CHECK(fs::exists(dir / "report" / "precision_at_k_graph.svg"));
  CHECK(fs::exists(dir / "report" / "fraction_involves_hub_graph.svg"));
}

TEST_CASE("split reruns are byte identical", "[cli]") {
  auto dir = scratch("rerun");
  auto graph = write_graph(dir);
  REQUIRE(cli("split --input " + graph.string() + " --seed 2 --out " + (dir / "a").string()) == 0);
  REQUIRE(cli("split --input " + graph.string() + " --seed 2 --out " + (dir / "b").string()) == 0);
  CHECK(same_outputs(dir / "a", dir / "b"));
}

TEST_CASE("config file with flag overrides", "[cli][config]") {
  auto dir = scratch("config");
  auto graph = write_graph(dir);
  std::ofstream(dir / "split.json") << R"({"input": ")" << graph.string() << R"(", "seed": 1, "fraction": 0.5, "out": ")"
                                    << (dir / "ignored").string() << R"("})";
  REQUIRE(cli("split --config " + (dir / "split.json").string() + " --fraction 0.1 --out " + (dir / "s").string()) == 0);
  CHECK_FALSE(fs::exists(dir / "ignored"));
  auto meta = nlohmann::json::parse(slurp(dir / "s" / "split.json"));
  CHECK(meta["target_fraction"].get<double>() == 0.1);
  CHECK(meta["seed"].get<std::uint64_t>() == 1);
}

TEST_CASE("exit codes", "[cli][errors]") {
  auto dir = scratch("codes");
  auto graph = write_graph(dir);
  CHECK(cli("") == 2);
  CHECK(cli("split --bogus") == 2);
  CHECK(cli("split --input " + graph.string() + " --mode temporal --out " + (dir / "t").string()) == 2);
  CHECK(cli("split --input " + graph.string() + " --fraction 2 --out " + (dir / "t").string()) == 2);
  CHECK(cli("split --input " + (dir / "missing.txt").string() + " --out " + (dir / "t").string()) == 3);
  CHECK(cli("run --split " + (dir / "nowhere").string() + " --out " + (dir / "r").string()) == 3);

  REQUIRE(cli("split --input " + graph.string() + " --out " + (dir / "s").string()) == 0);
  // a missing embedding fails that method only
  CHECK(cli("run --split " + (dir / "s").string() + " --method heuristics,embedding --embedding-file " +
            (dir / "none.emb").string() + " --seeds 1 --sample-size 2000 --quota-positives 20 --out " +
            (dir / "r").string()) == 4);
  CHECK(fs::exists(dir / "r" / "seed_1" / "heuristics" / "metrics.json"));
  auto manifest = nlohmann::json::parse(slurp(dir / "r" / "manifest.json"));
  REQUIRE(manifest["failures"].size() == 1);
  CHECK(manifest["failures"][0]["method"] == "emb_none");
}

TEST_CASE("features and embed commands", "[cli]") {
  auto dir = scratch("features");
  auto graph = write_graph(dir);
  REQUIRE(cli("split --input " + graph.string() + " --out " + (dir / "s").string()) == 0);
  REQUIRE(cli("features --split " + (dir / "s").string() + " --out " + (dir / "f.csv").string()) == 0);
  auto csv = slurp(dir / "f.csv");
  CHECK(csv.rfind("u,v,cn,aa,pa,jaccard,ra,deg_lo,deg_hi\n", 0) == 0);
  REQUIRE(cli("embed --split " + (dir / "s").string() +
              " --dim 8 --walks-per-node 2 --walk-length 20 --window 4 --epochs 1 --seed 3 --out " +
              (dir / "e.txt").string()) == 0);
  // the trained file feeds straight back into a run
  CHECK(cli("run --split " + (dir / "s").string() + " --method embedding --embedding-file " + (dir / "e.txt").string() +
            " --operator average --seeds 1 --sample-size 2000 --quota-positives 20 --out " + (dir / "r").string()) == 0);
  CHECK(fs::exists(dir / "r" / "seed_1" / "emb_e" / "metrics.json"));
}
