#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mapstruct/geometry.hpp"
#include "mapstruct/pipeline.hpp"
#include "mapstruct/random.hpp"
#include "mapstruct/raster.hpp"

namespace mapstruct {

enum class ClutterShape { kSquare, kRectangle, kRandom };
// Concrete outlines drawn for a single obstacle.
enum class Outline { kSquare, kRectangle, kCircle, kDiamond, kStar };

std::string_view to_string(ClutterShape shape);
ClutterShape parse_clutter_shape(std::string_view text);

struct ClutterSpec {
  ClutterShape shape = ClutterShape::kSquare;
  int count = 20;
  int size = 5;
  std::uint64_t seed = 0;
};

enum class CellLabel : std::uint8_t { kFree = 0, kStructure = 1, kClutter = 2 };

struct LabeledMap {
  BinaryMap bits;
  Raster<CellLabel> truth;

  std::size_t count(CellLabel label) const;
};

// Cells (dx, dy) relative to the obstacle's top-left corner covered by an
// outline of the given size. Stars use rotation_deg; other outlines ignore it.
std::vector<std::pair<int, int>> rasterize_outline(Outline outline, int size,
                                                   double rotation_deg = 0.0);

// Places spec.count filled obstacles centered on uniformly drawn free cells.
// Cells already occupied keep their structure label. Throws
// kPlacementExhausted when 1000 draws find no free cell.
LabeledMap inject_clutter(const BinaryMap& map, const ClutterSpec& spec);

struct PrecisionRecall {
  std::optional<double> precision;  // undefined when nothing was kept
  double recall = 0.0;
  double clutter_removal = 0.0;  // removed clutter / all clutter, 1 without clutter
  std::size_t true_structure_kept = 0;
  std::size_t clutter_kept = 0;
  std::size_t structure_removed = 0;
  std::size_t clutter_removed = 0;
};

// Positive class: cells kept as structure by the pipeline.
PrecisionRecall precision_recall(const LabeledMap& truth, const BinaryMap& decluttered);

struct SweepMap {
  std::string id;
  BinaryMap map;
};

struct SweepGrid {
  std::vector<ClutterShape> shapes;
  std::vector<int> sizes;
  std::vector<int> counts;
  std::vector<std::uint64_t> seeds;
};

struct SweepRow {
  std::string map;
  ClutterShape shape = ClutterShape::kSquare;
  int size = 0;
  int count = 0;
  std::uint64_t seed = 0;
  std::optional<double> precision;
  double recall = 0.0;
  double w = 1.0;
  std::optional<double> s;
  std::vector<std::string> flags;

  std::string key() const;
};

// Seed used for the clutter of one row; a function of the row key only.
std::uint64_t row_seed(const std::string& map, ClutterShape shape, int size, int count,
                       std::uint64_t seed);

SweepRow evaluate_row(const SweepMap& map, ClutterShape shape, int size, int count,
                      std::uint64_t seed, const PipelineConfig& config = {});

// Full factorial over maps x shapes x sizes x counts x seeds, in that nesting
// order. Rows whose key appears in `done` are taken from there unchanged.
// Per-row failures are recorded in the row's flags.
std::vector<SweepRow> run_sweep(const std::vector<SweepMap>& maps, const SweepGrid& grid,
                                const PipelineConfig& config = {},
                                const std::map<std::string, SweepRow>& done = {});

std::string sweep_csv_header();
std::string to_csv_line(const SweepRow& row);
std::string to_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_csv(const std::string& text);
std::vector<SweepRow> read_csv(const std::filesystem::path& path);

struct CorrelationReport {
  double r = 0.0;
  std::size_t n = 0;
  // Clutter count -> coefficient over that count's rows; absent when the
  // subset is degenerate.
  std::map<int, std::optional<double>> by_count;
};

// Pearson coefficient between w and precision over rows with a defined
// precision. Throws kDegenerate for fewer than 3 rows or zero variance.
double pearson(const std::vector<double>& a, const std::vector<double>& b);
CorrelationReport correlation(const std::vector<SweepRow>& rows);

}  // namespace mapstruct
