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

#include "confsom/report.hpp"

#include "confsom/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>

namespace confsom {

namespace {

constexpr std::array<std::string_view, 12> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78"};

constexpr double kUnit = 40.0;    // pixels per lattice unit
constexpr double kMargin = 40.0;  // pixels around the lattice

std::string hexagon_points(double cx, double cy, double radius) {
  std::string pts;
  for (int k = 0; k < 6; ++k) {
    const double angle = (60.0 * k - 30.0) * M_PI / 180.0;
    if (k > 0) pts += ' ';
    pts += format_fixed(cx + radius * std::cos(angle), 3) + "," + format_fixed(cy + radius * std::sin(angle), 3);
  }
  return pts;
}

}  // namespace

std::string_view palette_color(std::size_t id) { return kPalette[id % kPalette.size()]; }

std::string render_som_svg(const SomMap& map, const Assignment& a, const MapPartition& p) {
  const std::size_t m = map.size();
  if (a.hits.size() != m || p.cluster_of.size() != m) {
    throw std::invalid_argument("render_som_svg: assignment/partition sizes differ from map");
  }
  const double outer = kUnit / std::sqrt(3.0);
  double max_x = 0.0, max_y = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto pos = map.grid().position(i);
    max_x = std::max(max_x, pos.x());
    max_y = std::max(max_y, pos.y());
  }
  const double width = 2.0 * kMargin + max_x * kUnit;
  const double height = 2.0 * kMargin + max_y * kUnit;
  const std::size_t max_hits = a.hits.empty() ? 0 : *std::max_element(a.hits.begin(), a.hits.end());

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + format_fixed(width, 3) +
         "\" height=\"" + format_fixed(height, 3) + "\" viewBox=\"0 0 " + format_fixed(width, 3) + " " +
         format_fixed(height, 3) + "\">\n";
  svg += "<title>SOM " + std::to_string(map.grid().rows()) + "x" + std::to_string(map.grid().cols()) + ", " +
         std::to_string(p.clusters) + " clusters</title>\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg += "<g id=\"neurons\">\n";
  for (std::size_t i = 0; i < m; ++i) {
    const auto pos = map.grid().position(i);
    const double cx = kMargin + pos.x() * kUnit;
    const double cy = kMargin + pos.y() * kUnit;
    svg += "<polygon class=\"neuron\" data-neuron=\"" + std::to_string(i) + "\" data-cluster=\"" +
           std::to_string(p.cluster_of[i]) + "\" points=\"" + hexagon_points(cx, cy, outer) + "\" fill=\"" +
           std::string(palette_color(p.cluster_of[i])) + "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    if (a.hits[i] == 0) continue;
    const double r = 0.9 * outer * std::sqrt(static_cast<double>(a.hits[i]) / static_cast<double>(max_hits));
    svg += "<polygon class=\"hits\" data-neuron=\"" + std::to_string(i) + "\" data-hits=\"" +
           std::to_string(a.hits[i]) + "\" data-r=\"" + format_double(r) + "\" points=\"" +
           hexagon_points(cx, cy, r) + "\" fill=\"#222222\" fill-opacity=\"0.6\"/>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

std::string export_graphml(const AtomGraph& g, const CommunityPartition& c, const EdgeClass* classes) {
  if (c.community_of.size() != g.size()) throw std::invalid_argument("export_graphml: partition size differs");
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
  out += "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n";
  out += "  <key id=\"residue\" for=\"node\" attr.name=\"residue\" attr.type=\"int\"/>\n";
  out += "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n";
  out += "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n";
  out += "  <key id=\"class\" for=\"edge\" attr.name=\"class\" attr.type=\"string\"/>\n";
  out += "  <key id=\"distance\" for=\"edge\" attr.name=\"distance\" attr.type=\"double\"/>\n";
  out += "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& label = g.nodes[i];
    out += "    <node id=\"n" + std::to_string(i) + "\">";
    out += "<data key=\"label\">" + xml_escape(label.display()) + "</data>";
    if (label.seq) out += "<data key=\"residue\">" + std::to_string(*label.seq) + "</data>";
    out += "<data key=\"community\">" + std::to_string(c.community_of[i]) + "</data>";
    out += "</node>\n";
  }
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    out += "    <edge id=\"e" + std::to_string(k) + "\" source=\"n" + std::to_string(e.a) + "\" target=\"n" +
           std::to_string(e.b) + "\">";
    out += "<data key=\"weight\">" + format_double(e.weight) + "</data>";
    if (classes != nullptr) {
      out += "<data key=\"class\">" + std::string(to_string(classes->kind.at(k))) + "</data>";
      out += "<data key=\"distance\">" + format_double(classes->mean_distance.at(k)) + "</data>";
    }
    out += "</edge>\n";
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

std::string export_dot(const AtomGraph& g, const CommunityPartition& c, const EdgeClass* classes) {
  if (c.community_of.size() != g.size()) throw std::invalid_argument("export_dot: partition size differs");
  std::string out = "graph atoms {\n  node [style=filled, shape=circle, fontsize=10];\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::string label = g.nodes[i].display();
    std::string escaped;
    for (char ch : label) {
      if (ch == '"' || ch == '\\') escaped += '\\';
      escaped += ch;
    }
    out += "  n" + std::to_string(i) + " [label=\"" + escaped + "\", community=" + std::to_string(c.community_of[i]) +
           ", fillcolor=\"" + std::string(palette_color(c.community_of[i])) + "\"];\n";
  }
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    out += "  n" + std::to_string(e.a) + " -- n" + std::to_string(e.b) + " [penwidth=" +
           format_fixed(1.0 + 4.0 * e.weight, 3) + ", weight=" + format_double(e.weight);
    if (classes != nullptr && classes->kind.at(k) == EdgeKind::long_range) out += ", style=dashed";
    out += "];\n";
  }
  out += "}\n";
  return out;
}

// ---------------------------------------------------------------------------
// JSON report

namespace {

using nlohmann::json;

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_get(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<T>();
}

}  // namespace

std::string write_report(const RunReport& r) {
  json doc;
  doc["format_version"] = r.format_version;
  doc["command"] = r.command;
  doc["config"] = r.config_json.empty() ? json::object() : json::parse(r.config_json);
  doc["input"] = {{"source", r.input.source},
                  {"format", r.input.format},
                  {"frames_read", r.input.frames_read},
                  {"frames_used", r.input.frames_used},
                  {"atoms", r.input.atoms},
                  {"stride", r.input.stride},
                  {"superposed", r.input.superposed},
                  {"reference_frame", r.input.reference_frame},
                  {"degenerate_frames", r.input.degenerate_frames}};
  const auto& t = r.training;
  doc["training"] = {{"rows", t.rows},
                     {"cols", t.cols},
                     {"mode", t.mode},
                     {"train_len_unit", t.train_len_unit},
                     {"init_used", t.init_used},
                     {"quantization_error", t.quantization_error},
                     {"topographic_error", t.topographic_error},
                     {"bmu", t.bmu},
                     {"hits", t.hits},
                     {"total_hits", t.bmu.size()}};
  if (r.clustering) {
    const auto& c = *r.clustering;
    json summaries = json::array();
    for (const auto& s : c.summaries) {
      summaries.push_back({{"id", s.id},
                           {"neurons", s.neurons},
                           {"centroid", s.centroid},
                           {"won_frames", s.won_frames},
                           {"representative_frame", s.representative_frame},
                           {"representative_distance", s.representative_distance},
                           {"searched_all_frames", s.searched_all_frames},
                           {"representative_pdb", s.representative_pdb}});
    }
    doc["clustering"] = {{"linkage", "complete"},
                         {"heights", c.heights},
                         {"mojena", {{"k", c.mojena_k},
                                     {"mean", c.mojena_mean},
                                     {"sd", c.mojena_sd},
                                     {"threshold", c.mojena_threshold},
                                     {"fallback", c.fallback},
                                     {"undefined", c.undefined},
                                     {"clusters", c.clusters}}},
                         {"cluster_of", c.cluster_of},
                         {"clusters", summaries}};
  }
  if (r.networks) {
    json neurons = json::array();
    for (const auto& n : r.networks->neurons) {
      neurons.push_back({{"neuron", n.neuron},
                         {"frames", n.frames},
                         {"measure", n.measure},
                         {"combination", n.combination},
                         {"mode", n.mode},
                         {"tau", opt(n.tau)},
                         {"beta", opt(n.beta)},
                         {"quantile", opt(n.quantile)},
                         {"min_seq_gap", n.min_seq_gap},
                         {"seq_gap", n.seq_gap},
                         {"nodes", n.nodes},
                         {"edges", n.edges},
                         {"communities", n.communities},
                         {"modularity", opt(n.q)},
                         {"long_range_edges", n.long_range_edges},
                         {"degenerate_pairs", n.degenerate_pairs},
                         {"hubs", n.hubs},
                         {"graphml", n.graphml},
                         {"dot", n.dot}});
    }
    json skipped = json::array();
    for (const auto& s : r.networks->skipped) {
      skipped.push_back({{"neuron", s.neuron}, {"hits", s.hits}, {"reason", s.reason}});
    }
    doc["networks"] = {{"neurons", neurons}, {"skipped", skipped}};
  }
  doc["warnings"] = r.warnings;
  return doc.dump(1) + "\n";
}

RunReport read_report(std::string_view text) {
  try {
    const json doc = json::parse(text);
    RunReport r;
    r.format_version = doc.at("format_version").get<int>();
    if (r.format_version != kReportFormatVersion) throw ParseError("unsupported report format version");
    r.command = doc.at("command").get<std::string>();
    const auto& cfg = doc.at("config");
    r.config_json = cfg.empty() ? std::string() : cfg.dump();

    const auto& in = doc.at("input");
    r.input.source = in.at("source").get<std::string>();
    r.input.format = in.at("format").get<std::string>();
    r.input.frames_read = in.at("frames_read").get<std::size_t>();
    r.input.frames_used = in.at("frames_used").get<std::size_t>();
    r.input.atoms = in.at("atoms").get<std::size_t>();
    r.input.stride = in.at("stride").get<std::size_t>();
    r.input.superposed = in.at("superposed").get<bool>();
    r.input.reference_frame = in.at("reference_frame").get<std::size_t>();
    r.input.degenerate_frames = in.at("degenerate_frames").get<std::vector<std::size_t>>();

    const auto& t = doc.at("training");
    r.training.rows = t.at("rows").get<std::size_t>();
    r.training.cols = t.at("cols").get<std::size_t>();
    r.training.mode = t.at("mode").get<std::string>();
    r.training.train_len_unit = t.at("train_len_unit").get<std::string>();
    r.training.init_used = t.at("init_used").get<std::string>();
    r.training.quantization_error = t.at("quantization_error").get<double>();
    r.training.topographic_error = t.at("topographic_error").get<double>();
    r.training.bmu = t.at("bmu").get<std::vector<std::size_t>>();
    r.training.hits = t.at("hits").get<std::vector<std::size_t>>();

    if (doc.contains("clustering")) {
      const auto& c = doc.at("clustering");
      ClusteringRecord rec;
      rec.heights = c.at("heights").get<std::vector<double>>();
      const auto& mj = c.at("mojena");
      rec.mojena_k = mj.at("k").get<double>();
      rec.mojena_mean = mj.at("mean").get<double>();
      rec.mojena_sd = mj.at("sd").get<double>();
      rec.mojena_threshold = mj.at("threshold").get<double>();
      rec.fallback = mj.at("fallback").get<bool>();
      rec.undefined = mj.at("undefined").get<bool>();
      rec.clusters = mj.at("clusters").get<std::size_t>();
      rec.cluster_of = c.at("cluster_of").get<std::vector<std::size_t>>();
      for (const auto& s : c.at("clusters")) {
        ClusterRecord cr;
        cr.id = s.at("id").get<std::size_t>();
        cr.neurons = s.at("neurons").get<std::vector<std::size_t>>();
        cr.centroid = s.at("centroid").get<std::vector<double>>();
        cr.won_frames = s.at("won_frames").get<std::size_t>();
        cr.representative_frame = s.at("representative_frame").get<std::size_t>();
        cr.representative_distance = s.at("representative_distance").get<double>();
        cr.searched_all_frames = s.at("searched_all_frames").get<bool>();
        cr.representative_pdb = s.at("representative_pdb").get<std::string>();
        rec.summaries.push_back(std::move(cr));
      }
      r.clustering = std::move(rec);
    }
    if (doc.contains("networks")) {
      NetworksSection sec;
      for (const auto& n : doc.at("networks").at("neurons")) {
        NetworkRecord nr;
        nr.neuron = n.at("neuron").get<std::size_t>();
        nr.frames = n.at("frames").get<std::size_t>();
        nr.measure = n.at("measure").get<std::string>();
        nr.combination = n.at("combination").get<std::string>();
        nr.mode = n.at("mode").get<std::string>();
        nr.tau = opt_get<double>(n, "tau");
        nr.beta = opt_get<double>(n, "beta");
        nr.quantile = opt_get<double>(n, "quantile");
        nr.min_seq_gap = n.at("min_seq_gap").get<std::size_t>();
        nr.seq_gap = n.at("seq_gap").get<std::size_t>();
        nr.nodes = n.at("nodes").get<std::size_t>();
        nr.edges = n.at("edges").get<std::size_t>();
        nr.communities = n.at("communities").get<std::size_t>();
        nr.q = opt_get<double>(n, "modularity");
        nr.long_range_edges = n.at("long_range_edges").get<std::size_t>();
        nr.degenerate_pairs = n.at("degenerate_pairs").get<std::size_t>();
        nr.hubs = n.at("hubs").get<std::vector<std::size_t>>();
        nr.graphml = n.at("graphml").get<std::string>();
        nr.dot = n.at("dot").get<std::string>();
        sec.neurons.push_back(std::move(nr));
      }
      for (const auto& s : doc.at("networks").at("skipped")) {
        sec.skipped.push_back({s.at("neuron").get<std::size_t>(), s.at("hits").get<std::size_t>(),
                               s.at("reason").get<std::string>()});
      }
      r.networks = std::move(sec);
    }
    r.warnings = doc.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid report document: ") + e.what());
  }
}

}  // namespace confsom
