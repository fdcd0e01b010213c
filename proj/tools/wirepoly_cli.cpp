#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wirepoly/enumerate.hpp"
#include "wirepoly/matching.hpp"
#include "wirepoly/metrics.hpp"
#include "wirepoly/optimize.hpp"
#include "wirepoly/render.hpp"
#include "wirepoly/scene_io.hpp"
#include "wirepoly/synth.hpp"
#include "wirepoly/wireframe.hpp"

namespace {

using namespace wirepoly;

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// {"scores": [{"<line id>": score, ...}, ...]}, one object per anchor
std::vector<std::map<int, double>> parse_score_file(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("scores") || !doc["scores"].is_array()) {
    throw ParseError(path.string() + ": missing 'scores' array");
  }
  std::vector<std::map<int, double>> out;
  for (const auto& anchor : doc["scores"]) {
    if (!anchor.is_object()) throw ParseError(path.string() + ": each anchor entry must be an object");
    std::map<int, double> scores;
    for (const auto& [key, value] : anchor.items()) {
      if (!value.is_number()) throw ParseError(path.string() + ": scores must be numeric");
      try {
        scores[std::stoi(key)] = value.get<double>();
      } catch (const std::exception&) {
        throw ParseError(path.string() + ": line id key '" + key + "' is not an integer");
      }
    }
    out.push_back(std::move(scores));
  }
  return out;
}

void run_enumerate(const std::string& scene_path, const std::string& out_path, int max_polygons,
                   int max_subset) {
  Scene scene = load_scene(scene_path);
  PlaneGraph graph = build_graph(scene.wireframe);
  PositionMap positions = junction_positions(scene.wireframe);
  EnumerationLimits limits;
  limits.max_polygons = max_polygons;
  limits.max_basis_subset_size = max_subset;

  std::vector<Polygon> all;
  for (const PlaneGraph& comp : connected_subgraphs(graph)) {
    std::vector<Polygon> polys = enumerate_polygons(comp, positions, limits);
    for (Polygon& p : polys) {
      all.push_back(std::move(p));
      if (static_cast<int>(all.size()) > max_polygons) {
        throw LimitExceeded("enumerate: polygon count limit exceeded",
                            static_cast<std::int64_t>(all.size()));
      }
    }
  }
  write_text(out_path, serialize_polygons(all));
}

void run_propose(const std::string& scene_path, const std::string& scores_path, bool oracle,
                 double kappa, int iterations, const std::string& out_path,
                 const std::string& detections_path) {
  Scene scene = load_scene(scene_path);
  std::vector<std::map<int, double>> scores;
  if (oracle) {
    scores = oracle_scores(scene.wireframe, plane_annotations(scene), anchor_grid());
  } else if (!scores_path.empty()) {
    scores = parse_score_file(scores_path);
  } else {
    throw ParseError("propose: provide --scores FILE or --oracle");
  }

  ProposalConfig config;
  config.kappa = kappa;
  if (iterations > 0) config.iterations = iterations;
  std::vector<std::optional<Proposal>> proposals = propose_all(scene.wireframe, scores, config);
  write_text(out_path, serialize_proposals(proposals));

  if (!detections_path.empty()) {
    if (!oracle) throw ParseError("propose: --detections requires --oracle (labels come from planes)");
    write_text(detections_path, serialize_detections(oracle_detections(scene, config)));
  }
}

void run_eval(const std::string& gt_dir, const std::string& pred_dir, int resolution,
              double nms_threshold, const std::string& report_path) {
  EvalConfig config;
  config.resolution = resolution;
  config.nms_iou = nms_threshold;
  EvalReport report = run_evaluation(gt_dir, pred_dir, config);

  auto pct = [](double v) { return v * 100.0; };
  std::printf("%10s %10s %10s %10s %10s %10s\n", "pAP^m wall", "floor", "ceiling", "mpAP^m",
              "eps[IoU]", "eps[PE]");
  std::printf("%10.2f %10.2f %10.2f %10.2f %10.2f %10.2f\n", pct(report.ap.pap_m.at(PlaneLabel::Wall)),
              pct(report.ap.pap_m.at(PlaneLabel::Floor)), pct(report.ap.pap_m.at(PlaneLabel::Ceiling)),
              pct(report.ap.mpap_m), pct(report.eps_iou_mean), pct(report.eps_pe_mean));
  if (!report_path.empty()) write_text(report_path, serialize_report(report));
}

void run_synth(const std::string& scene_path, double sigma, double drop, double spurious,
               std::uint64_t seed, const std::string& out_path) {
  Scene scene = load_scene(scene_path);
  SynthConfig config;
  config.sigma = sigma;
  config.drop_prob = drop;
  config.spurious_prob = spurious;
  config.seed = seed;
  Scene out;
  out.wireframe = generate_synthetic(scene.wireframe, config);
  write_text(out_path, serialize_scene(out));
}

void run_render(const std::string& scene_path, const std::string& pred_path,
                const std::string& out_path) {
  Scene scene = load_scene(scene_path);
  std::vector<ScoredDetection> dets;
  if (!pred_path.empty()) dets = load_detections(pred_path);
  write_text(out_path, render_svg(scene, dets));
}

void run_convert(const std::string& input_path, const std::string& out_path) {
  ConvertResult result = convert_structured3d(read_text(input_path));
  for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
  write_text(out_path, serialize_scene(result.scene));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wireframe room-layout polygon toolkit"};
  app.require_subcommand(1);

  std::string scene_path, out_path, scores_path, detections_path, pred_path, report_path;
  std::string gt_dir, pred_dir, input_path;
  int max_polygons = 10000, max_subset = 12, iterations = 0, resolution = 512;
  double kappa = 0.5, nms_threshold = 0.05, sigma = 0.005, drop = 0.0, spurious = 0.0;
  std::uint64_t seed = 0;
  bool oracle = false;

  CLI::App* cmd_enum = app.add_subcommand("enumerate", "Enumerate all simple polygons of a scene");
  cmd_enum->add_option("--scene", scene_path, "Scene JSON")->required();
  cmd_enum->add_option("--out", out_path, "Output polygon JSON")->required();
  cmd_enum->add_option("--max-polygons", max_polygons, "Polygon count limit");
  cmd_enum->add_option("--max-subset", max_subset, "Cycle-basis subset size limit");
  cmd_enum->callback([&] { run_enumerate(scene_path, out_path, max_polygons, max_subset); });

  CLI::App* cmd_prop = app.add_subcommand("propose", "Per-anchor polygon proposals from line scores");
  cmd_prop->add_option("--scene", scene_path, "Scene JSON")->required();
  cmd_prop->add_option("--scores", scores_path, "Per-anchor line score JSON");
  cmd_prop->add_flag("--oracle", oracle, "Derive scores from the scene's plane annotations");
  cmd_prop->add_option("--kappa", kappa, "Line score threshold in (0,1)");
  cmd_prop->add_option("--iterations", iterations, "Search iterations per component (default |E|)");
  cmd_prop->add_option("--out", out_path, "Output proposal JSON")->required();
  cmd_prop->add_option("--detections", detections_path,
                       "Also write labeled detections (oracle mode only)");
  cmd_prop->callback(
      [&] { run_propose(scene_path, scores_path, oracle, kappa, iterations, out_path, detections_path); });

  CLI::App* cmd_eval = app.add_subcommand("eval", "Evaluate detection directories against ground truth");
  cmd_eval->add_option("--gt", gt_dir, "Ground-truth scene directory")->required();
  cmd_eval->add_option("--pred", pred_dir, "Detection directory")->required();
  cmd_eval->add_option("--resolution", resolution, "Rasterization resolution");
  cmd_eval->add_option("--nms-threshold", nms_threshold, "NMS IoU threshold");
  cmd_eval->add_option("--report", report_path, "Write report JSON here");
  cmd_eval->callback([&] { run_eval(gt_dir, pred_dir, resolution, nms_threshold, report_path); });

  CLI::App* cmd_synth = app.add_subcommand("synth", "Generate a synthetic wireframe detection");
  cmd_synth->add_option("--scene", scene_path, "Annotated scene JSON")->required();
  cmd_synth->add_option("--sigma", sigma, "Junction jitter std");
  cmd_synth->add_option("--drop", drop, "Per-line drop probability");
  cmd_synth->add_option("--spurious", spurious, "Per-line spurious segment probability");
  cmd_synth->add_option("--seed", seed, "RNG seed");
  cmd_synth->add_option("--out", out_path, "Output wireframe scene JSON")->required();
  cmd_synth->callback([&] { run_synth(scene_path, sigma, drop, spurious, seed, out_path); });

  CLI::App* cmd_render = app.add_subcommand("render", "Render a scene (and detections) to SVG");
  cmd_render->add_option("--scene", scene_path, "Scene JSON")->required();
  cmd_render->add_option("--pred", pred_path, "Detection JSON overlay");
  cmd_render->add_option("--out", out_path, "Output SVG path")->required();
  cmd_render->callback([&] { run_render(scene_path, pred_path, out_path); });

  CLI::App* cmd_conv = app.add_subcommand("convert", "Convert raw layout annotations to a scene");
  cmd_conv->add_option("--input", input_path, "Raw annotation JSON")->required();
  cmd_conv->add_option("--out", out_path, "Output scene JSON")->required();
  cmd_conv->callback([&] { run_convert(input_path, out_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const LimitExceeded& e) {
    std::cerr << "error: " << e.what() << " (count " << e.count << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
