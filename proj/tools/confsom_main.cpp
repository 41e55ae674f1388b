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

// confsom: SOM clustering and per-neuron network analysis of conformational
// ensembles.
//
// Exit codes: 0 ok, 1 I/O or unexpected failure, 2 configuration error,
// 3 input parse error, 4 numeric failure, 5 dimension mismatch.
// Standard output carries only the paths of written artifacts.

#include "confsom/ensemble_io.hpp"
#include "confsom/error.hpp"
#include "confsom/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kParse = 3, kNumeric = 4, kDimension = 5 };

struct Flags {
  std::string config;
  std::string input;
  std::string format;
  std::string map;
  std::string out;
  std::string measure;
  std::size_t stride = 1;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::size_t train_len = 0;
  double tau = 0.0;
  double quantile = 0.0;
  double beta = 0.0;
};

struct Options {
  CLI::Option* stride = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* threads = nullptr;
  CLI::Option* train_len = nullptr;
  CLI::Option* tau = nullptr;
  CLI::Option* quantile = nullptr;
  CLI::Option* beta = nullptr;
};

Options add_common(CLI::App* sub, Flags& f, bool needs_map) {
  Options o;
  sub->add_option("--config", f.config, "JSON config file");
  sub->add_option("--input", f.input, "ensemble file (pdb, xyz or csv; '-' for stdin)");
  sub->add_option("--format", f.format, "input format")->check(CLI::IsMember({"pdb", "xyz", "csv"}));
  if (needs_map) sub->add_option("--map", f.map, "trained map (map.json)")->required();
  sub->add_option("--out", f.out, "output directory");
  o.stride = sub->add_option("--stride", f.stride, "keep every N-th frame")->check(CLI::PositiveNumber);
  o.seed = sub->add_option("--seed", f.seed, "random seed");
  o.threads = sub->add_option("--threads", f.threads, "worker thread cap")->check(CLI::PositiveNumber);
  o.train_len = sub->add_option("--train-len", f.train_len, "training length")->check(CLI::PositiveNumber);
  sub->add_option("--measure", f.measure, "similarity measure")
      ->check(CLI::IsMember({"xyz_pearson", "xyz_spearman", "xyz_bicor", "cosine", "concat_pearson"}));
  o.tau = sub->add_option("--tau", f.tau, "hard threshold");
  o.quantile = sub->add_option("--quantile", f.quantile, "hard threshold from this similarity quantile");
  o.beta = sub->add_option("--beta", f.beta, "soft-threshold power");
  o.tau->excludes(o.quantile)->excludes(o.beta);
  o.quantile->excludes(o.beta);
  return o;
}

confsom::PipelineConfig resolve(const Flags& f, const Options& o) {
  confsom::PipelineConfig cfg;
  if (!f.config.empty()) {
    try {
      cfg = confsom::config_from_json(confsom::read_text(f.config));
    } catch (const confsom::ParseError& e) {
      throw confsom::ConfigError(e.what());
    }
  }
  if (!f.input.empty()) cfg.input = f.input;
  if (!f.format.empty()) cfg.format = confsom::parse_format(f.format);
  if (!f.out.empty()) cfg.out = f.out;
  if (!f.measure.empty()) cfg.network.measure = confsom::parse_measure(f.measure);
  if (o.stride->count() > 0) cfg.stride = f.stride;
  if (o.seed->count() > 0) cfg.seed = f.seed;
  if (o.threads->count() > 0) cfg.threads = f.threads;
  if (o.train_len->count() > 0) cfg.training.train_len = f.train_len;
  if (o.tau->count() > 0) {
    cfg.network.threshold = confsom::ThresholdMode::tau;
    cfg.network.tau = f.tau;
  }
  if (o.quantile->count() > 0) {
    cfg.network.threshold = confsom::ThresholdMode::quantile;
    cfg.network.quantile = f.quantile;
  }
  if (o.beta->count() > 0) {
    cfg.network.threshold = confsom::ThresholdMode::beta;
    cfg.network.beta = f.beta;
  }
  cfg.training.seed = cfg.seed;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"confsom - SOM clustering and network analysis of conformational ensembles"};
  app.require_subcommand(1);

  Flags flags;
  auto* train = app.add_subcommand("train", "train a map and report the training assignment");
  auto* classify = app.add_subcommand("classify", "map a (foreign) ensemble onto a trained map");
  auto* cluster = app.add_subcommand("cluster", "cluster neurons, write SVG, dendrogram and representatives");
  auto* networks = app.add_subcommand("networks", "build and analyse per-neuron atom networks");
  auto* report = app.add_subcommand("report", "cluster + networks from a trained map");
  auto* pipeline = app.add_subcommand("pipeline", "run every stage end to end");

  const Options train_opts = add_common(train, flags, false);
  const Options classify_opts = add_common(classify, flags, true);
  const Options cluster_opts = add_common(cluster, flags, true);
  const Options networks_opts = add_common(networks, flags, true);
  const Options report_opts = add_common(report, flags, true);
  const Options pipeline_opts = add_common(pipeline, flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    std::vector<std::string> written;
    if (train->parsed()) {
      written = confsom::run_train(resolve(flags, train_opts));
    } else if (classify->parsed()) {
      written = confsom::run_classify(resolve(flags, classify_opts), flags.map);
    } else if (cluster->parsed()) {
      written = confsom::run_cluster(resolve(flags, cluster_opts), flags.map);
    } else if (networks->parsed()) {
      written = confsom::run_networks(resolve(flags, networks_opts), flags.map);
    } else if (report->parsed()) {
      written = confsom::run_report(resolve(flags, report_opts), flags.map);
    } else if (pipeline->parsed()) {
      written = confsom::run_pipeline(resolve(flags, pipeline_opts));
    }
    for (const auto& path : written) std::cout << path << '\n';
    return kOk;
  } catch (const confsom::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const confsom::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const confsom::DimensionError& e) {
    std::cerr << "dimension mismatch: " << e.what() << '\n';
    return kDimension;
  } catch (const confsom::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
