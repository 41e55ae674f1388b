// Copyright 2026 The confsom Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "confsom/ensemble_io.hpp"
#include "confsom/pipeline.hpp"

#include "synthetic.hpp"

#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace confsom;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("confsom_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

#ifdef CONFSOM_CLI
int cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(CONFSOM_CLI) + " " + args + " >" + (log / "stdout.txt").string() + " 2>" +
                          (log / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
#endif

PipelineConfig quick_config(const fs::path& input, const fs::path& out) {
  PipelineConfig cfg;
  cfg.input = input.string();
  cfg.out = out.string();
  cfg.training.map_size = 16;
  cfg.training.train_len = 20;
  cfg.training.radius0 = 2.0;
  return cfg;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("config parsing") {
  const PipelineConfig defaults = config_from_json("{}");
  CHECK(defaults.training.map_size == 100);
  CHECK(defaults.training.radius0 == 3.0);
  CHECK(defaults.training.train_len == 5000);
  CHECK(defaults.mojena_k == 1.25);
  CHECK(defaults.network.measure == Measure::xyz_pearson);

  CHECK_THROWS_AS(config_from_json("{\"inptu\": \"x.pdb\"}"), ConfigError);
  CHECK_THROWS_AS(config_from_json("{\"training\": {\"radius\": 3}}"), ConfigError);
  CHECK_THROWS_AS(config_from_json("{\"network\": {\"measure\": \"mutual_info\"}}"), ConfigError);
  CHECK_THROWS_AS(config_from_json("{\"stride\": \"two\"}"), ConfigError);
  CHECK_THROWS_AS(config_from_json("not json"), ConfigError);

  PipelineConfig cfg = config_from_json(
      R"({"input":"traj.xyz","stride":3,"seed":9,"training":{"map_size":36,"mode":"sequential","alpha0":0.2},)"
      R"("network":{"measure":"cosine","threshold":"beta","beta":4},"threads":4,"out":"elsewhere"})");
  CHECK(cfg.resolved_format() == Format::xyz);
  CHECK(cfg.training.seed == 9);
  const std::string echo = config_to_json(cfg);
  CHECK(echo.find("threads") == std::string::npos);
  CHECK(echo.find("elsewhere") == std::string::npos);
  const PipelineConfig back = config_from_json(echo);
  CHECK(config_to_json(back) == echo);
  CHECK(back.training == cfg.training);
  CHECK(back.network == cfg.network);

  cfg.stride = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("train, classify and report stages") {
  const fs::path dir = scratch("stages");
  const Ensemble e = testing::three_cluster_ensemble(5, 30, 0.6, 3);
  write(dir / "traj.csv", write_csv(e));

  PipelineConfig cfg = quick_config(dir / "traj.csv", dir / "train");
  const auto written = run_train(cfg);
  CHECK(written == std::vector<std::string>{(dir / "train/map.json").string(), (dir / "train/report.json").string()});
  const std::string map_bytes = slurp(dir / "train/map.json");
  run_train(cfg);
  CHECK(slurp(dir / "train/map.json") == map_bytes);

  const RunReport trained = read_report(slurp(dir / "train/report.json"));
  std::size_t total = 0;
  for (auto h : trained.training.hits) total += h;
  CHECK(total == e.frames());

  cfg.out = (dir / "classify").string();
  run_classify(cfg, (dir / "train/map.json").string());
  const RunReport classified = read_report(slurp(dir / "classify/classify.json"));
  CHECK(classified.training.hits == trained.training.hits);
  CHECK(classified.training.bmu == trained.training.bmu);

  cfg.out = (dir / "report").string();
  run_report(cfg, (dir / "train/map.json").string());
  const RunReport full = read_report(slurp(dir / "report/report.json"));
  REQUIRE(full.clustering.has_value());
  REQUIRE(full.networks.has_value());
  CHECK(full.clustering->cluster_of.size() == 16);
  for (const auto& c : full.clustering->summaries) CHECK(fs::exists(dir / "report" / c.representative_pdb));
  CHECK(full.networks->neurons.size() + full.networks->skipped.size() == 16);
}

TEST_CASE("full pipeline smoke run") {
  const fs::path dir = scratch("smoke");
  const Ensemble e = testing::three_state_trajectory(12, 150, 0.05, 5);
  std::string pdb;
  for (std::size_t f = 0; f < e.frames(); ++f) pdb += "MODEL\n" + write_pdb(e, f) + "ENDMDL\n";
  write(dir / "traj.pdb", pdb);
  PipelineConfig cfg = quick_config(dir / "traj.pdb", dir / "out");
  cfg.network.dump_matrices = true;
  run_pipeline(cfg);
  CHECK(fs::exists(dir / "out/report.json"));
  CHECK(fs::exists(dir / "out/som.svg"));
  CHECK(fs::exists(dir / "out/dendrogram.csv"));
  std::size_t graphml = 0;
  for (const auto& entry : fs::directory_iterator(dir / "out/networks")) {
    if (entry.path().extension() == ".graphml") ++graphml;
  }
  CHECK(graphml >= 1);
  CHECK(fs::exists(dir / "out/matrices"));

  const auto doc = nlohmann::json::parse(slurp(dir / "out/report.json"));
  CHECK(doc["config"]["training"]["map_size"] == 16);
  CHECK(doc["clustering"]["mojena"]["clusters"] == doc["clustering"]["clusters"].size());
}

#ifdef CONFSOM_CLI
TEST_CASE("cli exit codes") {
  const fs::path dir = scratch("cli");
  const Ensemble e = testing::random_ensemble(40, 4, 3.0, 8);
  write(dir / "traj.csv", write_csv(e));
  write(dir / "other.csv", write_csv(testing::random_ensemble(40, 5, 3.0, 9)));
  write(dir / "bad.json", "{\"trainig\": {}}");

  CHECK(cli("train --input " + (dir / "missing.csv").string() + " --out " + (dir / "o").string(), dir) == 3);
  CHECK(cli("train --config " + (dir / "bad.json").string(), dir) == 2);
  CHECK(cli("train --input " + (dir / "traj.csv").string() + " --stride 0", dir) == 2);
  CHECK(cli("train --input " + (dir / "traj.csv").string() + " --tau 0.5 --beta 3", dir) == 2);
  CHECK(cli("classify --input " + (dir / "traj.csv").string(), dir) == 2);  // --map is required

  write(dir / "quick.json", R"({"training":{"map_size":9,"train_len":5}})");
  REQUIRE(cli("train --config " + (dir / "quick.json").string() + " --input " + (dir / "traj.csv").string() +
                  " --out " + (dir / "run").string(),
              dir) == 0);
  const std::string stdout_text = slurp(dir / "stdout.txt");
  CHECK(stdout_text == (dir / "run/map.json").string() + "\n" + (dir / "run/report.json").string() + "\n");

  CHECK(cli("classify --map " + (dir / "run/map.json").string() + " --input " + (dir / "other.csv").string() +
                " --out " + (dir / "c").string(),
            dir) == 5);
  CHECK(slurp(dir / "stdout.txt").empty());
  CHECK_FALSE(slurp(dir / "stderr.txt").empty());
  CHECK(cli("classify --map " + (dir / "run/map.json").string() + " --input " + (dir / "traj.csv").string() +
                " --out " + (dir / "c").string(),
            dir) == 0);

  // The default map size of 100 on a valid CSV.
  write(dir / "short.json", R"({"training":{"train_len":3}})");
  REQUIRE(cli("train --config " + (dir / "short.json").string() + " --input " + (dir / "traj.csv").string() +
                  " --out " + (dir / "defaults").string(),
              dir) == 0);
  CHECK(map_from_json(slurp(dir / "defaults/map.json")).size() == 100);
}

#endif

}  // TEST_SUITE
