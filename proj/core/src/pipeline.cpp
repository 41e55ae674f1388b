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

#include "confsom/pipeline.hpp"

#include "confsom/ensemble_io.hpp"
#include "confsom/parallel.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

namespace confsom {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

std::string_view to_string(ThresholdMode m) {
  switch (m) {
    case ThresholdMode::quantile: return "quantile";
    case ThresholdMode::tau: return "tau";
    case ThresholdMode::beta: return "beta";
  }
  return "quantile";
}

ThresholdMode parse_threshold_mode(std::string_view s) {
  if (s == "quantile") return ThresholdMode::quantile;
  if (s == "tau") return ThresholdMode::tau;
  if (s == "beta") return ThresholdMode::beta;
  throw ConfigError("unknown threshold mode '" + std::string(s) + "'");
}

Format PipelineConfig::resolved_format() const { return format ? *format : infer_format(input); }

void PipelineConfig::validate() const {
  if (input.empty()) throw ConfigError("no input given");
  if (stride < 1) throw ConfigError("stride must be >= 1");
  if (selection.atom_name.empty()) throw ConfigError("selection.atom_name must not be empty");
  training.validate();
  if (!(mojena_k > 0.0)) throw ConfigError("mojena_k must be > 0");
  const auto& n = network;
  if (!(n.tau > 0.0 && n.tau < 1.0)) throw ConfigError("network.tau must lie in (0, 1)");
  if (!(n.quantile > 0.0 && n.quantile < 1.0)) throw ConfigError("network.quantile must lie in (0, 1)");
  if (!(n.beta >= 1.0)) throw ConfigError("network.beta must be >= 1");
  if (n.min_frames < 3) throw ConfigError("network.min_frames must be >= 3");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!keys.contains(key)) throw ConfigError("unknown config key '" + where + key + "'");
  }
}

template <class T>
void read_into(const json& obj, const char* key, T& target) {
  if (obj.contains(key)) target = obj.at(key).get<T>();
}

}  // namespace

PipelineConfig config_from_json(std::string_view text) {
  PipelineConfig cfg;
  try {
    const json doc = json::parse(text);
    reject_unknown(doc,
                   {"input", "format", "selection", "stride", "superpose", "reference_frame", "training", "mojena_k",
                    "network", "seed", "out", "threads"},
                   "");
    read_into(doc, "input", cfg.input);
    if (doc.contains("format")) cfg.format = parse_format(doc.at("format").get<std::string>());
    if (doc.contains("selection")) {
      const auto& s = doc.at("selection");
      reject_unknown(s, {"atom_name", "chains"}, "selection.");
      read_into(s, "atom_name", cfg.selection.atom_name);
      read_into(s, "chains", cfg.selection.chains);
    }
    read_into(doc, "stride", cfg.stride);
    read_into(doc, "superpose", cfg.superpose);
    read_into(doc, "reference_frame", cfg.reference_frame);
    if (doc.contains("training")) {
      const auto& t = doc.at("training");
      reject_unknown(t, {"map_size", "radius0", "radius_final", "train_len", "mode", "alpha0", "init", "neighbor_fn"},
                     "training.");
      read_into(t, "map_size", cfg.training.map_size);
      read_into(t, "radius0", cfg.training.radius0);
      read_into(t, "radius_final", cfg.training.radius_final);
      read_into(t, "train_len", cfg.training.train_len);
      read_into(t, "alpha0", cfg.training.alpha0);
      if (t.contains("mode")) cfg.training.mode = parse_training_mode(t.at("mode").get<std::string>());
      if (t.contains("init")) cfg.training.init = parse_init_method(t.at("init").get<std::string>());
      if (t.contains("neighbor_fn") && t.at("neighbor_fn").get<std::string>() != "gaussian") {
        throw ConfigError("training.neighbor_fn: only 'gaussian' is supported");
      }
    }
    read_into(doc, "mojena_k", cfg.mojena_k);
    if (doc.contains("network")) {
      const auto& n = doc.at("network");
      reject_unknown(n,
                     {"measure", "threshold", "tau", "quantile", "beta", "min_frames", "min_seq_gap", "seq_gap",
                      "top_hubs", "dump_matrices"},
                     "network.");
      if (n.contains("measure")) cfg.network.measure = parse_measure(n.at("measure").get<std::string>());
      if (n.contains("threshold")) cfg.network.threshold = parse_threshold_mode(n.at("threshold").get<std::string>());
      read_into(n, "tau", cfg.network.tau);
      read_into(n, "quantile", cfg.network.quantile);
      read_into(n, "beta", cfg.network.beta);
      read_into(n, "min_frames", cfg.network.min_frames);
      read_into(n, "min_seq_gap", cfg.network.min_seq_gap);
      read_into(n, "seq_gap", cfg.network.seq_gap);
      read_into(n, "top_hubs", cfg.network.top_hubs);
      read_into(n, "dump_matrices", cfg.network.dump_matrices);
    }
    read_into(doc, "seed", cfg.seed);
    read_into(doc, "out", cfg.out);
    read_into(doc, "threads", cfg.threads);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  cfg.training.seed = cfg.seed;
  return cfg;
}

std::string config_to_json(const PipelineConfig& cfg) {
  const auto& t = cfg.training;
  const auto& n = cfg.network;
  json doc = {
      {"input", cfg.input},
      {"format", format_name(cfg.resolved_format())},
      {"selection", {{"atom_name", cfg.selection.atom_name}, {"chains", cfg.selection.chains}}},
      {"stride", cfg.stride},
      {"superpose", cfg.superpose},
      {"reference_frame", cfg.reference_frame},
      {"training",
       {{"map_size", t.map_size},
        {"radius0", t.radius0},
        {"radius_final", t.radius_final},
        {"train_len", t.train_len},
        {"mode", to_string(t.mode)},
        {"alpha0", t.alpha0},
        {"init", to_string(t.init)},
        {"neighbor_fn", "gaussian"}}},
      {"mojena_k", cfg.mojena_k},
      {"network",
       {{"measure", to_string(n.measure)},
        {"threshold", to_string(n.threshold)},
        {"tau", n.tau},
        {"quantile", n.quantile},
        {"beta", n.beta},
        {"min_frames", n.min_frames},
        {"min_seq_gap", n.min_seq_gap},
        {"seq_gap", n.seq_gap},
        {"top_hubs", n.top_hubs},
        {"dump_matrices", n.dump_matrices}}},
      {"seed", cfg.seed}};
  return doc.dump();
}

// ---------------------------------------------------------------------------
// Stages

PreparedInput prepare_input(const PipelineConfig& cfg, Warnings* warnings) {
  const Format format = cfg.resolved_format();
  Ensemble raw = read_ensemble(cfg.input, format, cfg.selection);

  InputRecord rec;
  rec.source = raw.source();
  rec.format = std::string(format_name(format));
  rec.frames_read = raw.frames();
  rec.atoms = raw.atoms();
  rec.stride = cfg.stride;
  rec.superposed = cfg.superpose;
  rec.reference_frame = cfg.reference_frame;

  if (cfg.superpose) {
    if (cfg.reference_frame >= raw.frames()) throw ConfigError("reference_frame is beyond the last frame");
    auto result = superpose_kabsch(raw, cfg.reference_frame, warnings);
    rec.degenerate_frames = std::move(result.degenerate_frames);
    raw = std::move(result.ensemble);
  }
  Ensemble sampled = subsample(raw, cfg.stride);
  rec.frames_used = sampled.frames();
  return {std::move(sampled), std::move(rec)};
}

TrainedMap train_on(const Ensemble& e, const PipelineConfig& cfg, Warnings* warnings) {
  TrainingConfig tc = cfg.training;
  tc.seed = cfg.seed;
  tc.validate();
  Warnings local;
  SomMap initial = init_map(e, tc, &local);
  const bool fell_back = tc.init == InitMethod::linear && !local.empty();
  if (warnings != nullptr) warnings->insert(warnings->end(), local.begin(), local.end());

  SomMap trained = train(initial, e, tc);
  Assignment a = map_ensemble(trained, e);
  const double te = topographic_error(trained, e);
  return {std::move(trained), std::move(a), te, fell_back ? "random" : std::string(to_string(tc.init))};
}

ClusteringResult cluster_map(const SomMap& map, const Ensemble& e, const Assignment& a, double mojena_k,
                             Warnings* warnings) {
  Dendrogram d = complete_linkage(map.prototypes());
  MojenaCut cut = mojena_cut(d, mojena_k, warnings);
  MapPartition p = cut_dendrogram(d, cut.clusters);
  p.k_const = mojena_k;
  auto summaries = cluster_summaries(p, map, e, a);
  for (const auto& s : summaries) {
    if (s.searched_all_frames) {
      warn(warnings, "cluster " + std::to_string(s.cluster) +
                         " won no frames; representative searched over all frames");
    }
  }
  return {std::move(d), cut, std::move(p), std::move(summaries)};
}

NetworkAnalysis analyze_networks(const Ensemble& e, const Assignment& a, const NetworkConfig& cfg,
                                 Warnings* warnings) {
  const std::size_t m = a.hits.size();
  std::vector<std::optional<NeuronNetwork>> slots(m);
  std::vector<Warnings> slot_warnings(m);

  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    for (std::size_t neuron = begin; neuron < end; ++neuron) {
      if (a.hits[neuron] < cfg.min_frames) continue;
      auto& w = slot_warnings[neuron];
      const AtomSeriesSet series = gather_neuron_series(e, a, neuron, cfg.min_frames);

      NeuronNetwork net;
      net.neuron = neuron;
      net.frames = series.frames_used();
      net.similarity = similarity_matrix(series, cfg.measure);
      if (cfg.threshold == ThresholdMode::beta) {
        net.graph = soft_threshold(net.similarity, e.labels(), cfg.beta);
      } else {
        double tau = cfg.threshold == ThresholdMode::tau ? cfg.tau : pick_threshold(net.similarity, cfg.quantile);
        if (!(tau < 1.0)) {
          tau = std::nextafter(1.0, 0.0);
          w.push_back("neuron " + std::to_string(neuron) + ": threshold clamped below 1");
        } else if (!(tau > 0.0)) {
          tau = std::nextafter(0.0, 1.0);
          w.push_back("neuron " + std::to_string(neuron) + ": threshold clamped above 0");
        }
        net.graph = hard_threshold(net.similarity, e.labels(), tau, cfg.min_seq_gap);
      }
      net.communities = net.graph.edges.empty() ? connected_components(net.graph) : greedy_modularity(net.graph);
      net.classes = classify_edges(net.graph, cfg.seq_gap, e, net.frames, nullptr);
      net.hubs = hub_atoms(net.graph, cfg.top_hubs);
      slots[neuron] = std::move(net);
    }
  });

  NetworkAnalysis out;
  bool index_gap_noted = false;
  for (std::size_t neuron = 0; neuron < m; ++neuron) {
    if (warnings != nullptr) {
      warnings->insert(warnings->end(), slot_warnings[neuron].begin(), slot_warnings[neuron].end());
    }
    if (slots[neuron]) {
      if (slots[neuron]->classes.index_gap_fallback && !index_gap_noted) {
        warn(warnings, "residue numbers missing; edge classes and sequence gaps use node-index separation");
        index_gap_noted = true;
      }
      out.neurons.push_back(std::move(*slots[neuron]));
    } else {
      out.skipped.push_back({neuron, a.hits[neuron], "insufficient frames"});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Artifacts

namespace {

void write_file(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

struct Run {
  const PipelineConfig& cfg;
  fs::path out;
  std::vector<std::string> written;
  RunReport report;

  Run(const PipelineConfig& c, std::string command) : cfg(c), out(c.out) {
    c.validate();
    set_thread_count(c.threads);
    report.command = std::move(command);
    report.config_json = config_to_json(c);
  }

  void emit(const fs::path& rel, const std::string& bytes) {
    write_file(out / rel, bytes);
    written.push_back((out / rel).string());
  }
};

SomMap load_map(const std::string& path) {
  if (path.empty()) throw ConfigError("no map file given (--map)");
  return map_from_json(read_text(path));
}

TrainingRecord training_record(const SomMap& map, const Assignment& a, double te, std::string init_used) {
  TrainingRecord t;
  t.rows = map.grid().rows();
  t.cols = map.grid().cols();
  t.mode = std::string(to_string(map.config().mode));
  t.train_len_unit = map.config().mode == TrainingMode::batch ? "epochs" : "presentations_per_frame";
  t.init_used = std::move(init_used);
  t.quantization_error = a.qe;
  t.topographic_error = te;
  t.bmu = a.bmu;
  t.hits = a.hits;
  return t;
}

void add_clustering(Run& run, const SomMap& map, const Ensemble& e, const Assignment& a) {
  const ClusteringResult c = cluster_map(map, e, a, run.cfg.mojena_k, &run.report.warnings);
  ClusteringRecord rec;
  rec.heights = c.dendrogram.heights();
  rec.mojena_k = c.cut.k_const;
  rec.mojena_mean = c.cut.mean;
  rec.mojena_sd = c.cut.sd;
  rec.mojena_threshold = c.cut.threshold;
  rec.fallback = c.cut.fallback;
  rec.undefined = c.cut.undefined;
  rec.clusters = c.partition.clusters;
  rec.cluster_of = c.partition.cluster_of;

  run.emit("som.svg", render_som_svg(map, a, c.partition));
  run.emit("dendrogram.csv", dendrogram_csv(c.dendrogram));
  for (const auto& s : c.summaries) {
    ClusterRecord cr;
    cr.id = s.cluster;
    cr.neurons = s.neurons;
    cr.centroid.assign(s.centroid.data(), s.centroid.data() + s.centroid.size());
    cr.won_frames = s.won_frames;
    cr.representative_frame = s.representative_frame;
    cr.representative_distance = s.representative_distance;
    cr.searched_all_frames = s.searched_all_frames;
    cr.representative_pdb = "representatives/cluster_" + std::to_string(s.cluster) + ".pdb";
    run.emit(cr.representative_pdb, write_pdb(e, s.representative_frame));
    rec.summaries.push_back(std::move(cr));
  }
  run.report.clustering = std::move(rec);
}

void add_networks(Run& run, const Ensemble& e, const Assignment& a) {
  const auto& ncfg = run.cfg.network;
  const NetworkAnalysis analysis = analyze_networks(e, a, ncfg, &run.report.warnings);
  NetworksSection sec;
  for (const auto& net : analysis.neurons) {
    NetworkRecord r;
    r.neuron = net.neuron;
    r.frames = net.frames.size();
    r.measure = std::string(to_string(net.similarity.measure));
    r.combination = std::string(to_string(net.similarity.combination));
    r.mode = std::string(to_string(net.graph.mode));
    if (net.graph.mode == GraphMode::hard) {
      r.tau = net.graph.tau;
      if (ncfg.threshold == ThresholdMode::quantile) r.quantile = ncfg.quantile;
    } else {
      r.beta = net.graph.beta;
    }
    r.min_seq_gap = net.graph.min_seq_gap;
    r.seq_gap = net.classes.seq_gap;
    r.nodes = net.graph.size();
    r.edges = net.graph.edges.size();
    r.communities = net.communities.communities;
    r.q = net.communities.q;
    r.long_range_edges = net.classes.long_range_count();
    r.degenerate_pairs = net.similarity.degenerate_pairs;
    for (const auto& h : net.hubs) r.hubs.push_back(h.node);

    const std::string stem = "networks/neuron_" + std::to_string(net.neuron);
    r.graphml = stem + ".graphml";
    r.dot = stem + ".dot";
    run.emit(r.graphml, export_graphml(net.graph, net.communities, &net.classes));
    run.emit(r.dot, export_dot(net.graph, net.communities, &net.classes));
    if (ncfg.dump_matrices) {
      run.emit("matrices/neuron_" + std::to_string(net.neuron) + ".csv", matrix_csv(net.similarity.values));
      run.emit("matrices/neuron_" + std::to_string(net.neuron) + "_signed.csv",
               matrix_csv(net.similarity.signed_values));
    }
    sec.neurons.push_back(std::move(r));
  }
  sec.skipped = analysis.skipped;
  run.report.networks = std::move(sec);
}

std::vector<std::string> finish(Run& run, const std::string& report_name) {
  run.emit(report_name, write_report(run.report));
  return run.written;
}

// Shared body of the subcommands that start from a saved map.
std::vector<std::string> run_from_map(const PipelineConfig& cfg, const std::string& map_path, const char* command,
                                      bool clustering, bool networks) {
  Run run(cfg, command);
  const SomMap map = load_map(map_path);
  PreparedInput in = prepare_input(cfg, &run.report.warnings);
  run.report.input = in.record;
  const Assignment a = map_ensemble(map, in.ensemble);
  run.report.training = training_record(map, a, topographic_error(map, in.ensemble), std::string(to_string(map.config().init)));
  if (clustering) add_clustering(run, map, in.ensemble, a);
  if (networks) add_networks(run, in.ensemble, a);
  return finish(run, "report.json");
}

}  // namespace

std::vector<std::string> run_train(const PipelineConfig& cfg) {
  Run run(cfg, "train");
  PreparedInput in = prepare_input(cfg, &run.report.warnings);
  run.report.input = in.record;
  TrainedMap t = train_on(in.ensemble, cfg, &run.report.warnings);
  run.report.training = training_record(t.map, t.assignment, t.topographic_error, t.init_used);
  run.emit("map.json", map_to_json(t.map));
  return finish(run, "report.json");
}

std::vector<std::string> run_classify(const PipelineConfig& cfg, const std::string& map_path) {
  Run run(cfg, "classify");
  const SomMap map = load_map(map_path);
  PreparedInput in = prepare_input(cfg, &run.report.warnings);
  run.report.input = in.record;
  const Assignment a = map_ensemble(map, in.ensemble);
  run.report.training =
      training_record(map, a, topographic_error(map, in.ensemble), std::string(to_string(map.config().init)));
  return finish(run, "classify.json");
}

std::vector<std::string> run_cluster(const PipelineConfig& cfg, const std::string& map_path) {
  return run_from_map(cfg, map_path, "cluster", true, false);
}

std::vector<std::string> run_networks(const PipelineConfig& cfg, const std::string& map_path) {
  return run_from_map(cfg, map_path, "networks", false, true);
}

std::vector<std::string> run_report(const PipelineConfig& cfg, const std::string& map_path) {
  return run_from_map(cfg, map_path, "report", true, true);
}

std::vector<std::string> run_pipeline(const PipelineConfig& cfg) {
  Run run(cfg, "pipeline");
  PreparedInput in = prepare_input(cfg, &run.report.warnings);
  run.report.input = in.record;
  TrainedMap t = train_on(in.ensemble, cfg, &run.report.warnings);
  run.report.training = training_record(t.map, t.assignment, t.topographic_error, t.init_used);
  run.emit("map.json", map_to_json(t.map));
  add_clustering(run, t.map, in.ensemble, t.assignment);
  add_networks(run, in.ensemble, t.assignment);
  return finish(run, "report.json");
}

}  // namespace confsom
