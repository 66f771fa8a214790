#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mapstruct/evalharness.hpp"
#include "mapstruct/pipeline.hpp"
#include "mapstruct/wall_lines.hpp"

namespace mapstruct::report {

using nlohmann::ordered_json;

inline constexpr const char* kToolName = "mapstruct";
inline constexpr const char* kToolVersion = "0.1.0";

// Rounds to the given number of decimals; non-finite values become null.
ordered_json number(double value, int decimals);

ordered_json config_json(const PipelineConfig& config);
ordered_json directions_json(const DominantDirections& directions);

// Report skeleton shared by analyze and declutter. Every key is always
// present; stages that did not run are null.
ordered_json analysis_report(const std::string& input, const BinaryMap& map,
                             const Analysis& analysis, const PipelineConfig& config);
ordered_json declutter_report(const std::string& input, const BinaryMap& map,
                              const DeclutterResult& result, const PipelineConfig& config);

ordered_json wall_line_json(const WallLine& line);
ordered_json walls_report(const std::string& input, const BinaryMap& map,
                          const WallExtraction& walls, const WallConfig& wall_config,
                          const PipelineConfig& config,
                          const std::optional<WallEvalResult>& eval);

// Ground-truth lines: an array, or an object with a "lines" array, of
// {"angle_deg", "offset_cells"} or {"x1", "y1", "x2", "y2"} entries. Offsets
// are relative to `center`. Throws kFormat on malformed input and
// kInvalidArgument when no line is given.
std::vector<WallLine> parse_ground_truth(const nlohmann::json& doc, Point2 center);
std::vector<WallLine> read_ground_truth(const std::filesystem::path& path, Point2 center);
ordered_json ground_truth_json(const std::vector<WallLine>& lines);

ordered_json sweep_row_json(const SweepRow& row);
ordered_json sweep_json(const std::vector<SweepRow>& rows);
ordered_json correlation_json(const CorrelationReport& report);

}  // namespace mapstruct::report
