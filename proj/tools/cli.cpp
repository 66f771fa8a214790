#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "mapstruct/error.hpp"
#include "mapstruct/evalharness.hpp"
#include "mapstruct/grid_map.hpp"
#include "mapstruct/pipeline.hpp"
#include "mapstruct/report.hpp"
#include "mapstruct/synthetic.hpp"

namespace mapstruct::cli {

namespace fs = std::filesystem;
using report::ordered_json;

namespace {

struct MapOptions {
  std::string meta;
  std::optional<double> occupied_threshold;
  int angle_bins = 720;
  int radius_bins = 0;
  double prominence = 0.5;
  std::string prominence_mode = "circular";
  double mask_half_width = 0.0;
  std::string json;
};

void add_pipeline_options(CLI::App* sub, MapOptions& o) {
  sub->add_option("--angle-bins", o.angle_bins, "Angular bins of the polar unfold")
      ->check(CLI::Range(4, 1 << 16))
      ->capture_default_str();
  sub->add_option("--radius-bins", o.radius_bins, "Radius samples; 0 uses every integer radius")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--prominence", o.prominence, "Peak threshold on the scaled profile")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sub->add_option("--prominence-mode", o.prominence_mode, "circular or linear")
      ->check(CLI::IsMember({"circular", "linear"}))
      ->capture_default_str();
  sub->add_option("--mask-half-width", o.mask_half_width,
                  "Angular half width of the structure mask in degrees; 0 uses one bin")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

void add_map_options(CLI::App* sub, MapOptions& o) {
  sub->add_option("--meta", o.meta, "YAML sidecar with resolution and thresholds")
      ->check(CLI::ExistingFile);
  sub->add_option("--occupied-threshold", o.occupied_threshold,
                  "Occupancy at or above which a cell is occupied (default: sidecar or 0.65)")
      ->check(CLI::Range(0.0, 1.0));
  sub->add_option("--json", o.json, "Write the JSON report to a file, or '-' for stdout");
  add_pipeline_options(sub, o);
}

PipelineConfig make_config(const MapOptions& o, double occupied_threshold) {
  PipelineConfig c;
  c.occupied_threshold = occupied_threshold;
  c.angle_bins = o.angle_bins;
  c.radius_bins = o.radius_bins;
  c.directions.threshold = o.prominence;
  c.directions.mode =
      o.prominence_mode == "linear" ? ProminenceMode::kLinear : ProminenceMode::kCircular;
  c.mask_half_width_deg = o.mask_half_width;
  return c;
}

struct LoadedMap {
  BinaryMap map;
  PipelineConfig config;
};

LoadedMap load_input(const std::string& path, const MapOptions& o) {
  std::optional<fs::path> meta;
  if (!o.meta.empty()) meta = o.meta;
  const OccupancyGrid grid = load_map(path, meta);
  double threshold = 0.65;
  if (o.occupied_threshold) {
    threshold = *o.occupied_threshold;
  } else if (meta) {
    threshold = load_metadata(*meta).occupied_thresh;
  }
  return {binarize(grid, threshold), make_config(o, threshold)};
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path);
  f << text;
  if (!f) throw Error(ErrorCode::kIo, "write failed for " + path);
}

void write_json(const ordered_json& j, const std::string& path, std::ostream& out) {
  write_text(j.dump(2) + "\n", path, out);
}

Raster<std::uint8_t> profile_image(const std::vector<double>& scaled, int bins, int height) {
  Raster<std::uint8_t> img(bins, height, 255);
  for (int b = 0; b < static_cast<int>(scaled.size()); ++b) {
    const int h = static_cast<int>(std::lround(scaled[b] * (height - 1)));
    for (int y = height - 1 - h; y < height; ++y) img(b, y) = 0;
  }
  return img;
}

Raster<std::uint8_t> label_image(const LabeledMap& labeled) {
  Raster<std::uint8_t> img(labeled.bits.width(), labeled.bits.height(), 255);
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (labeled.truth[i] == CellLabel::kStructure) img[i] = 0;
    if (labeled.truth[i] == CellLabel::kClutter) img[i] = 128;
  }
  return img;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string direction_summary(const DominantDirections& d) {
  std::string s;
  for (const auto& p : d.peaks) {
    if (!s.empty()) s += ", ";
    s += fixed(p.spectral_angle_deg, 2) + " (wall " + fixed(p.wall_angle_deg(), 2) + ")";
  }
  return s.empty() ? "none" : s;
}

int exit_for(const std::vector<std::string>& flags) {
  auto has = [&](const char* f) { return std::find(flags.begin(), flags.end(), f) != flags.end(); };
  if (has(kFlagNoStructure)) return kExitNoStructure;
  if (has(kFlagNoSeparation)) return kExitNoSeparation;
  return kExitOk;
}

// ---- analyze ----

struct AnalyzeArgs {
  std::string input;
  MapOptions map;
  std::string spectrum_out;
  std::string polar_out;
  std::string profile_out;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const LoadedMap in = load_input(a.input, a.map);
  const Analysis analysis = analyze_map(in.map, in.config);
  if (!a.spectrum_out.empty()) save_map(log_amplitude(analysis.spectrum), a.spectrum_out);
  if (!a.polar_out.empty()) save_map(log_polar(analysis.polar), a.polar_out);
  if (!a.profile_out.empty()) {
    write_gray_image(profile_image(analysis.scaled, analysis.profile.bins(), 256), a.profile_out,
                     format_from_path(a.profile_out));
  }
  const ordered_json j = report::analysis_report(a.input, in.map, analysis, in.config);
  if (!a.map.json.empty()) {
    write_json(j, a.map.json, out);
  } else {
    out << "directions: " << direction_summary(analysis.directions) << "\n"
        << "w: " << fixed(analysis.score.w, 3) << " " << to_string(analysis.score.trust())
        << "\n";
  }
  return analysis.directions.empty() ? kExitNoStructure : kExitOk;
}

// ---- declutter ----

struct DeclutterArgs {
  std::string input;
  std::string output;
  std::string score_out;
  std::optional<double> threshold;
  MapOptions map;
};

int cmd_declutter(const DeclutterArgs& a, std::ostream& out) {
  LoadedMap in = load_input(a.input, a.map);
  in.config.threshold_override = a.threshold;
  const DeclutterResult r = declutter_map(in.map, in.config);
  save_map(r.decluttered, a.output);
  if (!a.score_out.empty()) {
    if (r.nominal) {
      save_map(r.nominal->normalized, a.score_out);
    } else {
      save_map(RealField(in.map.width(), in.map.height(), 0.0), a.score_out);
    }
  }
  const ordered_json j = report::declutter_report(a.input, in.map, r, in.config);
  if (!a.map.json.empty()) {
    write_json(j, a.map.json, out);
  } else {
    out << "kept " << r.kept << " of " << r.occupied << " occupied cells";
    if (r.threshold) out << " (s = " << fixed(*r.threshold, 4) << ")";
    out << "\n";
    for (const auto& f : r.flags) out << "flag: " << f << "\n";
  }
  return exit_for(r.flags);
}

// ---- walls ----

struct WallsArgs {
  std::string input;
  std::string gt;
  bool no_filter = false;
  WallConfig walls;
  std::optional<double> threshold;
  MapOptions map;
};

int cmd_walls(const WallsArgs& a, std::ostream& out) {
  LoadedMap in = load_input(a.input, a.map);
  in.config.threshold_override = a.threshold;
  std::optional<std::vector<WallLine>> gt;
  const Point2 center = grid_center(in.map.width(), in.map.height());
  if (!a.gt.empty()) gt = report::read_ground_truth(a.gt, center);
  const WallExtraction w = extract_walls(in.map, !a.no_filter, in.config, a.walls);
  std::optional<WallEvalResult> eval;
  if (gt) eval = wall_error(w.lines, *gt, w.center);
  const ordered_json j = report::walls_report(a.input, in.map, w, a.walls, in.config, eval);
  if (!a.map.json.empty()) {
    write_json(j, a.map.json, out);
  } else {
    out << w.lines.size() << " wall lines from " << w.segments.size() << " segments\n";
    for (const auto& l : w.lines) {
      out << "  angle " << fixed(l.angle_deg, 2) << " offset " << fixed(l.offset, 2) << "\n";
    }
    if (eval) {
      out << "mean_cost: " << fixed(eval->mean_cost, 6)
          << " unmatched: " << eval->unmatched_reference_count << "\n";
    }
  }
  return w.declutter ? exit_for(w.declutter->flags) : kExitOk;
}

// ---- inject ----

struct InjectArgs {
  std::string input;
  std::string output;
  std::string labels_out;
  std::string shape = "square";
  int count = 20;
  int size = 5;
  std::uint64_t seed = 0;
  MapOptions map;
};

int cmd_inject(const InjectArgs& a, std::ostream& out) {
  const LoadedMap in = load_input(a.input, a.map);
  ClutterSpec spec;
  spec.shape = parse_clutter_shape(a.shape);
  spec.count = a.count;
  spec.size = a.size;
  spec.seed = a.seed;
  const LabeledMap labeled = inject_clutter(in.map, spec);
  save_map(labeled.bits, a.output);
  if (!a.labels_out.empty()) {
    write_gray_image(label_image(labeled), a.labels_out, format_from_path(a.labels_out));
  }
  ordered_json j;
  j["tool"] = {{"name", report::kToolName}, {"version", report::kToolVersion}};
  j["input"] = {{"path", a.input}, {"width", in.map.width()}, {"height", in.map.height()}};
  j["clutter"] = {{"shape", a.shape}, {"count", a.count}, {"size", a.size}, {"seed", a.seed}};
  j["cells"] = {{"structure", labeled.count(CellLabel::kStructure)},
                {"clutter", labeled.count(CellLabel::kClutter)}};
  j["output"] = a.output;
  if (!a.map.json.empty()) {
    write_json(j, a.map.json, out);
  } else {
    out << "added " << labeled.count(CellLabel::kClutter) << " clutter cells\n";
  }
  return kExitOk;
}

// ---- sweep ----

struct SweepArgs {
  std::vector<std::string> maps{"office", "apartment30", "multiangle"};
  int map_size = 200;
  std::vector<std::string> shapes{"square", "rectangle", "random"};
  std::vector<int> sizes{2, 6, 10, 14, 18, 22, 26, 30, 34, 38};
  std::vector<int> counts{20, 50, 80, 120, 160};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::string csv;
  std::string json;
  bool resume = false;
  MapOptions map;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  std::vector<SweepMap> maps;
  for (const auto& m : a.maps) {
    if (fs::exists(m)) {
      maps.push_back({m, load_input(m, a.map).map});
    } else {
      maps.push_back({m, synthetic::by_name(m, a.map_size).map});
    }
  }
  SweepGrid grid;
  for (const auto& s : a.shapes) grid.shapes.push_back(parse_clutter_shape(s));
  grid.sizes = a.sizes;
  grid.counts = a.counts;
  grid.seeds = a.seeds;

  std::map<std::string, SweepRow> done;
  if (a.resume && !a.csv.empty() && a.csv != "-" && fs::exists(a.csv)) {
    for (auto& row : read_csv(a.csv)) done.emplace(row.key(), std::move(row));
  }
  const PipelineConfig config = make_config(a.map, a.map.occupied_threshold.value_or(0.65));
  const std::vector<SweepRow> rows = run_sweep(maps, grid, config, done);

  if (!a.csv.empty()) write_text(to_csv(rows), a.csv, out);
  if (!a.json.empty()) write_json(report::sweep_json(rows), a.json, out);
  if (a.csv.empty() && a.json.empty()) write_text(to_csv(rows), "-", out);
  return kExitOk;
}

// ---- correlate ----

struct CorrelateArgs {
  std::string input;
  std::string json;
};

int cmd_correlate(const CorrelateArgs& a, std::ostream& out) {
  const CorrelationReport rep = correlation(read_csv(a.input));
  if (!a.json.empty()) {
    write_json(report::correlation_json(rep), a.json, out);
  } else {
    out << "r = " << fixed(rep.r, 4) << " over " << rep.n << " rows\n";
    for (const auto& [count, r] : rep.by_count) {
      out << "  count " << count << ": " << (r ? fixed(*r, 4) : std::string("n/a")) << "\n";
    }
  }
  return kExitOk;
}

// ---- corpus ----

struct CorpusArgs {
  std::string out_dir = "data";
  int size = 200;
};

int cmd_corpus(const CorpusArgs& a, std::ostream& out) {
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  for (const auto& m : synthetic::corpus(a.size)) {
    save_map(m.map, dir / (m.name + ".pgm"));
    write_json(report::ground_truth_json(m.ground_truth), (dir / (m.name + ".gt.json")).string(),
               out);
  }
  write_gray_image(synthetic::room_image(64), dir / "room64.pgm", ImageFormat::kPgm);
  out << "wrote corpus to " << dir.string() << "\n";
  return kExitOk;
}

int exit_for_error(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kNoStructure:
      return kExitNoStructure;
    case ErrorCode::kNoSeparation:
      return kExitNoSeparation;
    default:
      return kExitInput;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structure analysis and clutter removal for occupancy grid maps", "mapstruct"};
  app.require_subcommand(1);
  app.set_version_flag("--version", report::kToolVersion);
  // One file can configure every command: keys go under a [command] section
  // and use the long flag names. Flags given on the command line win.
  app.set_config("--config", "", "TOML/INI file with per-command sections");
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Detect dominant directions and score the map");
  an->add_option("map", analyze.input, "Input PGM or PNG")->required();
  add_map_options(an, analyze.map);
  an->add_option("--spectrum-out", analyze.spectrum_out, "Log-amplitude spectrum image");
  an->add_option("--polar-out", analyze.polar_out, "Unfolded log-amplitude image");
  an->add_option("--profile-out", analyze.profile_out, "Directional profile plot");

  DeclutterArgs declutter;
  auto* de = app.add_subcommand("declutter", "Remove clutter and keep structural cells");
  de->add_option("map", declutter.input, "Input PGM or PNG")->required();
  de->add_option("-o,--output", declutter.output, "Decluttered map (PGM or PNG)")->required();
  de->add_option("--score-out", declutter.score_out, "Normalized structure score image");
  de->add_option("--threshold", declutter.threshold, "Score threshold overriding the mixture fit")
      ->check(CLI::Range(0.0, 1.0));
  add_map_options(de, declutter.map);

  WallsArgs walls;
  auto* wa = app.add_subcommand("walls", "Extract wall lines, optionally scored against ground truth");
  wa->add_option("map", walls.input, "Input PGM or PNG")->required();
  wa->add_option("--gt", walls.gt, "Ground-truth wall lines (JSON)")->check(CLI::ExistingFile);
  wa->add_flag("--no-filter", walls.no_filter, "Detect on the raw map without decluttering");
  wa->add_option("--threshold", walls.threshold, "Score threshold overriding the mixture fit")
      ->check(CLI::Range(0.0, 1.0));
  wa->add_option("--seed", walls.walls.hough.seed, "Hough sampling seed")->capture_default_str();
  wa->add_option("--votes", walls.walls.hough.votes, "Accumulator votes for a line")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  wa->add_option("--min-length", walls.walls.hough.min_length, "Minimum segment length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  wa->add_option("--max-gap", walls.walls.hough.max_gap, "Largest gap bridged inside a segment")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  wa->add_option("--angle-tol", walls.walls.angle_tol_deg, "Clustering angle tolerance (deg)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  wa->add_option("--offset-tol", walls.walls.offset_tol, "Clustering offset tolerance (cells)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  wa->add_option("--snap-tol", walls.walls.snap_tol_deg, "Alignment tolerance (deg)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_map_options(wa, walls.map);

  InjectArgs inject;
  auto* in = app.add_subcommand("inject", "Add labelled artificial clutter to a map");
  in->add_option("map", inject.input, "Input PGM or PNG")->required();
  in->add_option("-o,--output", inject.output, "Cluttered map")->required();
  in->add_option("--labels-out", inject.labels_out,
                 "Label image: structure 0, clutter 128, free 255");
  in->add_option("--shape", inject.shape, "square, rectangle or random")
      ->check(CLI::IsMember({"square", "rectangle", "random"}))
      ->capture_default_str();
  in->add_option("--count", inject.count, "Obstacles to place")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  in->add_option("--size", inject.size, "Obstacle size in cells")
      ->check(CLI::Range(2, 1 << 12))
      ->capture_default_str();
  in->add_option("--seed", inject.seed, "Placement seed")->capture_default_str();
  in->add_option("--meta", inject.map.meta, "YAML sidecar")->check(CLI::ExistingFile);
  in->add_option("--occupied-threshold", inject.map.occupied_threshold, "Occupied threshold")
      ->check(CLI::Range(0.0, 1.0));
  in->add_option("--json", inject.map.json, "Write a JSON summary, or '-' for stdout");

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "Clutter-injection sweep over maps and obstacle specs");
  sw->add_option("--maps", sweep.maps, "Map files or built-in names (office, apartment30, multiangle)")
      ->capture_default_str();
  sw->add_option("--map-size", sweep.map_size, "Side of the built-in maps")
      ->check(CLI::Range(32, 4096))
      ->capture_default_str();
  sw->add_option("--shapes", sweep.shapes, "Obstacle shapes")
      ->check(CLI::IsMember({"square", "rectangle", "random"}))
      ->capture_default_str();
  sw->add_option("--sizes", sweep.sizes, "Obstacle sizes")
      ->check(CLI::Range(2, 1 << 12))
      ->capture_default_str();
  sw->add_option("--counts", sweep.counts, "Obstacle counts")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sw->add_option("--seeds", sweep.seeds, "Base seeds")->capture_default_str();
  sw->add_option("--csv", sweep.csv, "CSV output, or '-' for stdout");
  sw->add_option("--json", sweep.json, "JSON output, or '-' for stdout");
  sw->add_flag("--resume", sweep.resume, "Reuse rows already present in the CSV output");
  sw->add_option("--occupied-threshold", sweep.map.occupied_threshold, "Occupied threshold")
      ->check(CLI::Range(0.0, 1.0));
  add_pipeline_options(sw, sweep.map);

  CorrelateArgs corr;
  auto* co = app.add_subcommand("correlate", "Pearson correlation between w and precision");
  co->add_option("rows", corr.input, "Sweep CSV")->required()->check(CLI::ExistingFile);
  co->add_option("--json", corr.json, "Write the JSON report, or '-' for stdout");

  CorpusArgs corpus;
  auto* cp = app.add_subcommand("corpus", "Write the built-in synthetic maps and their wall lines");
  cp->add_option("-d,--out-dir", corpus.out_dir, "Output directory")->capture_default_str();
  cp->add_option("--size", corpus.size, "Map side")
      ->check(CLI::Range(32, 4096))
      ->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*an) return cmd_analyze(analyze, out);
    if (*de) return cmd_declutter(declutter, out);
    if (*wa) return cmd_walls(walls, out);
    if (*in) return cmd_inject(inject, out);
    if (*sw) return cmd_sweep(sweep, out);
    if (*co) return cmd_correlate(corr, out);
    if (*cp) return cmd_corpus(corpus, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for_error(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitInput;
}

}  // namespace mapstruct::cli
