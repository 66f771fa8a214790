#include "mapstruct/report.hpp"

#include <cmath>
#include <fstream>

#include "mapstruct/error.hpp"

namespace mapstruct::report {

namespace {

ordered_json tool_json() {
  return ordered_json{{"name", kToolName}, {"version", kToolVersion}};
}

ordered_json input_json(const std::string& input, const BinaryMap& map) {
  return ordered_json{{"path", input},
                      {"width", map.width()},
                      {"height", map.height()},
                      {"occupied", count_occupied(map)}};
}

ordered_json score_json(const Analysis& a) {
  ordered_json j;
  j["w"] = number(a.score.w, 3);
  j["trust"] = std::string(to_string(a.score.trust()));
  j["no_structure"] = a.directions.empty();
  j["peak_bins"] = a.score.n_peaks;
  return j;
}

ordered_json gmm_json(const DeclutterResult& r) {
  if (!r.gmm) return nullptr;
  const GmmFit& g = *r.gmm;
  ordered_json j;
  j["means"] = {number(g.structure.mean, 6), number(g.clutter.mean, 6)};
  j["variances"] = {number(g.structure.variance, 8), number(g.clutter.variance, 8)};
  j["tau"] = number(g.tau, 6);
  j["s"] = r.threshold ? number(*r.threshold, 6) : ordered_json(nullptr);
  j["iterations"] = g.iterations;
  j["converged"] = g.converged;
  return j;
}

double required(const nlohmann::json& entry, const char* key) {
  const auto it = entry.find(key);
  if (it == entry.end() || !it->is_number()) {
    throw Error(ErrorCode::kFormat, std::string("ground truth entry lacks numeric '") + key + "'");
  }
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw Error(ErrorCode::kFormat, "ground truth value is not finite");
  return v;
}

}  // namespace

ordered_json number(double value, int decimals) {
  if (!std::isfinite(value)) return nullptr;
  const double scale = std::pow(10.0, decimals);
  double r = std::round(value * scale) / scale;
  if (r == 0.0) r = 0.0;  // no negative zero in reports
  return r;
}

ordered_json config_json(const PipelineConfig& config) {
  ordered_json j;
  j["occupied_threshold"] = config.occupied_threshold;
  j["angle_bins"] = config.angle_bins;
  j["radius_bins"] = config.radius_bins;
  j["prominence_threshold"] = config.directions.threshold;
  j["prominence_mode"] =
      config.directions.mode == ProminenceMode::kCircular ? "circular" : "linear";
  j["mask_half_width_deg"] = config.effective_half_width_deg();
  j["em_tolerance"] = config.em.tolerance;
  j["em_max_iterations"] = config.em.max_iterations;
  j["threshold_override"] =
      config.threshold_override ? ordered_json(*config.threshold_override) : ordered_json(nullptr);
  return j;
}

ordered_json directions_json(const DominantDirections& directions) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : directions.peaks) {
    arr.push_back({{"spectral_angle_deg", number(p.spectral_angle_deg, 2)},
                   {"wall_angle_deg", number(p.wall_angle_deg(), 2)},
                   {"prominence", number(p.prominence, 4)},
                   {"paired", p.paired()}});
  }
  return arr;
}

ordered_json analysis_report(const std::string& input, const BinaryMap& map,
                             const Analysis& analysis, const PipelineConfig& config) {
  ordered_json j;
  j["tool"] = tool_json();
  j["input"] = input_json(input, map);
  j["config"] = config_json(config);
  j["directions"] = directions_json(analysis.directions);
  j["score"] = score_json(analysis);
  j["gmm"] = nullptr;
  j["pixels"] = nullptr;
  j["flags"] = ordered_json::array();
  if (analysis.directions.empty()) j["flags"].push_back(kFlagNoStructure);
  j["walls"] = nullptr;
  return j;
}

ordered_json declutter_report(const std::string& input, const BinaryMap& map,
                              const DeclutterResult& result, const PipelineConfig& config) {
  ordered_json j = analysis_report(input, map, result.analysis, config);
  j["gmm"] = gmm_json(result);
  j["pixels"] = {{"occupied", result.occupied},
                 {"kept", result.kept},
                 {"removed", result.removed},
                 {"threshold", result.threshold ? number(*result.threshold, 6)
                                                : ordered_json(nullptr)}};
  j["flags"] = result.flags;
  return j;
}

ordered_json wall_line_json(const WallLine& line) {
  double length = 0.0;
  for (const auto& s : line.support) length += s.length();
  return ordered_json{{"angle_deg", number(line.angle_deg, 4)},
                      {"offset_cells", number(line.offset, 4)},
                      {"segments", line.support.size()},
                      {"support_length", number(length, 3)}};
}

ordered_json walls_report(const std::string& input, const BinaryMap& map,
                          const WallExtraction& walls, const WallConfig& wall_config,
                          const PipelineConfig& config,
                          const std::optional<WallEvalResult>& eval) {
  ordered_json j;
  if (walls.declutter) {
    j = declutter_report(input, map, *walls.declutter, config);
  } else {
    j["tool"] = tool_json();
    j["input"] = input_json(input, map);
    j["config"] = config_json(config);
    j["directions"] = nullptr;
    j["score"] = nullptr;
    j["gmm"] = nullptr;
    j["pixels"] = nullptr;
    j["flags"] = ordered_json::array();
  }
  ordered_json w;
  w["filtered"] = walls.filtered;
  w["hough"] = {{"votes", wall_config.hough.votes},
                {"min_length", wall_config.hough.min_length},
                {"max_gap", wall_config.hough.max_gap},
                {"seed", wall_config.hough.seed}};
  w["angle_tol_deg"] = wall_config.angle_tol_deg;
  w["offset_tol"] = wall_config.offset_tol;
  w["snap_tol_deg"] = wall_config.snap_tol_deg;
  w["segment_count"] = walls.segments.size();
  ordered_json lines = ordered_json::array();
  for (const auto& l : walls.lines) lines.push_back(wall_line_json(l));
  w["lines"] = std::move(lines);
  if (eval) {
    ordered_json per = ordered_json::array();
    for (const auto& c : eval->per_line) {
      per.push_back({{"cost", number(c.cost, 6)},
                     {"theta_rad", number(c.theta, 6)},
                     {"translation", number(c.translation, 4)},
                     {"reference", c.reference},
                     {"degenerate", c.degenerate}});
    }
    w["eval"] = {{"mean_cost", number(eval->mean_cost, 6)},
                 {"per_line", std::move(per)},
                 {"unmatched_reference_count", eval->unmatched_reference_count}};
  } else {
    w["eval"] = nullptr;
  }
  j["walls"] = std::move(w);
  return j;
}

std::vector<WallLine> parse_ground_truth(const nlohmann::json& doc, Point2 center) {
  const nlohmann::json* list = &doc;
  if (doc.is_object()) {
    const auto it = doc.find("lines");
    if (it == doc.end()) throw Error(ErrorCode::kFormat, "ground truth object lacks 'lines'");
    list = &*it;
  }
  if (!list->is_array()) throw Error(ErrorCode::kFormat, "ground truth lines must be an array");
  std::vector<WallLine> out;
  for (const auto& e : *list) {
    if (!e.is_object()) throw Error(ErrorCode::kFormat, "ground truth entry must be an object");
    if (e.contains("angle_deg")) {
      WallLine l;
      l.angle_deg = axial_deg(required(e, "angle_deg"));
      l.offset = required(e, "offset_cells");
      out.push_back(std::move(l));
    } else {
      const Point2 a{required(e, "x1"), required(e, "y1")};
      const Point2 b{required(e, "x2"), required(e, "y2")};
      if (a == b) throw Error(ErrorCode::kFormat, "ground truth segment has zero length");
      out.push_back(line_through(a, b, center));
    }
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "ground truth contains no lines");
  return out;
}

std::vector<WallLine> read_ground_truth(const std::filesystem::path& path, Point2 center) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, path.string() + ": " + e.what());
  }
  return parse_ground_truth(doc, center);
}

ordered_json ground_truth_json(const std::vector<WallLine>& lines) {
  ordered_json arr = ordered_json::array();
  for (const auto& l : lines) {
    arr.push_back({{"angle_deg", number(l.angle_deg, 6)}, {"offset_cells", number(l.offset, 6)}});
  }
  return ordered_json{{"lines", std::move(arr)}};
}

ordered_json sweep_row_json(const SweepRow& row) {
  return ordered_json{
      {"map", row.map},
      {"shape", std::string(to_string(row.shape))},
      {"size", row.size},
      {"count", row.count},
      {"seed", row.seed},
      {"precision", row.precision ? number(*row.precision, 6) : ordered_json(nullptr)},
      {"recall", number(row.recall, 6)},
      {"w", number(row.w, 6)},
      {"s", row.s ? number(*row.s, 6) : ordered_json(nullptr)},
      {"flags", row.flags}};
}

ordered_json sweep_json(const std::vector<SweepRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) arr.push_back(sweep_row_json(r));
  return ordered_json{{"tool", tool_json()}, {"rows", std::move(arr)}};
}

ordered_json correlation_json(const CorrelationReport& report) {
  ordered_json by = ordered_json::array();
  for (const auto& [count, r] : report.by_count) {
    by.push_back({{"count", count}, {"r", r ? number(*r, 6) : ordered_json(nullptr)}});
  }
  return ordered_json{{"tool", tool_json()},
                      {"r", number(report.r, 6)},
                      {"n", report.n},
                      {"by_count", std::move(by)}};
}

}  // namespace mapstruct::report
