#include "mapstruct/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace mapstruct {

std::string_view to_string(ClutterShape shape) {
  switch (shape) {
    case ClutterShape::kSquare: return "square";
    case ClutterShape::kRectangle: return "rectangle";
    case ClutterShape::kRandom: return "random";
  }
  return "square";
}

ClutterShape parse_clutter_shape(std::string_view text) {
  if (text == "square") return ClutterShape::kSquare;
  if (text == "rectangle") return ClutterShape::kRectangle;
  if (text == "random") return ClutterShape::kRandom;
  throw Error(ErrorCode::kInvalidArgument, "unknown clutter shape '" + std::string(text) + "'");
}

std::size_t LabeledMap::count(CellLabel label) const {
  return static_cast<std::size_t>(
      std::count(truth.values().begin(), truth.values().end(), label));
}

namespace {

// Even-odd rule at point p.
bool inside_polygon(const std::vector<Point2>& poly, Point2 p) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2 a = poly[i];
    const Point2 b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

std::vector<std::pair<int, int>> rasterize_outline(Outline outline, int size,
                                                   double rotation_deg) {
  if (size < 2) throw Error(ErrorCode::kInvalidArgument, "obstacle size must be >= 2");
  std::vector<std::pair<int, int>> cells;
  const double c = (size - 1) / 2.0;
  const double radius = size / 2.0;

  switch (outline) {
    case Outline::kSquare:
      for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) cells.emplace_back(x, y);
      break;
    case Outline::kRectangle: {
      const int h = (size + 1) / 2;
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < size; ++x) cells.emplace_back(x, y);
      break;
    }
    case Outline::kCircle:
      for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
          if ((x - c) * (x - c) + (y - c) * (y - c) <= radius * radius) cells.emplace_back(x, y);
      break;
    case Outline::kDiamond:
      for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
          if (std::abs(x - c) + std::abs(y - c) <= radius) cells.emplace_back(x, y);
      break;
    case Outline::kStar: {
      std::vector<Point2> poly;
      for (int k = 0; k < 10; ++k) {
        const double r = (k % 2 == 0) ? radius : 0.4 * radius;
        const double a = deg2rad(rotation_deg + 36.0 * k);
        poly.push_back({c + r * std::cos(a), c + r * std::sin(a)});
      }
      for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
          if (inside_polygon(poly, {double(x), double(y)})) cells.emplace_back(x, y);
      if (cells.empty()) {
        const int x = static_cast<int>(std::floor(c));
        cells.emplace_back(x, x);
      }
      break;
    }
  }
  return cells;
}

LabeledMap inject_clutter(const BinaryMap& map, const ClutterSpec& spec) {
  if (spec.count < 0) throw Error(ErrorCode::kInvalidArgument, "clutter count must be >= 0");
  if (spec.size < 2) throw Error(ErrorCode::kInvalidArgument, "clutter size must be >= 2");

  LabeledMap out{map, Raster<CellLabel>(map.width(), map.height(), CellLabel::kFree)};
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i]) out.truth[i] = CellLabel::kStructure;
  }

  Rng rng(spec.seed);
  constexpr int kMaxAttempts = 1000;
  for (int n = 0; n < spec.count; ++n) {
    int cx = -1;
    int cy = -1;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      const int x = static_cast<int>(rng.below(static_cast<std::uint64_t>(map.width())));
      const int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(map.height())));
      if (!out.bits(x, y)) {
        cx = x;
        cy = y;
        break;
      }
    }
    if (cx < 0) {
      throw Error(ErrorCode::kPlacementExhausted, "no free cell found for obstacle " +
                                                      std::to_string(n));
    }

    Outline outline = Outline::kSquare;
    double rotation = 0.0;
    bool transpose = false;
    switch (spec.shape) {
      case ClutterShape::kSquare: break;
      case ClutterShape::kRectangle:
        outline = Outline::kRectangle;
        transpose = rng.below(2) == 1;
        break;
      case ClutterShape::kRandom: {
        static constexpr Outline kPool[] = {Outline::kCircle, Outline::kDiamond, Outline::kStar};
        outline = kPool[rng.below(3)];
        if (outline == Outline::kStar) rotation = 72.0 * rng.uniform();
        break;
      }
    }

    auto cells = rasterize_outline(outline, spec.size, rotation);
    int extent_x = 0;
    int extent_y = 0;
    for (auto& [dx, dy] : cells) {
      if (transpose) std::swap(dx, dy);
      extent_x = std::max(extent_x, dx);
      extent_y = std::max(extent_y, dy);
    }
    const int left = cx - extent_x / 2;
    const int top = cy - extent_y / 2;
    for (const auto& [dx, dy] : cells) {
      const int x = left + dx;
      const int y = top + dy;
      if (!out.bits.contains(x, y) || out.bits(x, y)) continue;
      out.bits(x, y) = 1;
      out.truth(x, y) = CellLabel::kClutter;
    }
  }
  return out;
}

PrecisionRecall precision_recall(const LabeledMap& truth, const BinaryMap& decluttered) {
  if (decluttered.width() != truth.bits.width() || decluttered.height() != truth.bits.height()) {
    throw Error(ErrorCode::kInvalidArgument, "decluttered map does not match labeled map");
  }
  PrecisionRecall pr;
  for (std::size_t i = 0; i < decluttered.size(); ++i) {
    const CellLabel label = truth.truth[i];
    const bool kept = decluttered[i] != 0;
    if (label == CellLabel::kStructure) {
      (kept ? pr.true_structure_kept : pr.structure_removed)++;
    } else if (label == CellLabel::kClutter) {
      (kept ? pr.clutter_kept : pr.clutter_removed)++;
    }
  }
  const std::size_t kept = pr.true_structure_kept + pr.clutter_kept;
  if (kept > 0) pr.precision = static_cast<double>(pr.true_structure_kept) / kept;
  const std::size_t structure = pr.true_structure_kept + pr.structure_removed;
  pr.recall = structure > 0 ? static_cast<double>(pr.true_structure_kept) / structure : 1.0;
  const std::size_t clutter = pr.clutter_kept + pr.clutter_removed;
  pr.clutter_removal = clutter > 0 ? static_cast<double>(pr.clutter_removed) / clutter : 1.0;
  return pr;
}

std::string SweepRow::key() const {
  return map + "|" + std::string(to_string(shape)) + "|" + std::to_string(size) + "|" +
         std::to_string(count) + "|" + std::to_string(seed);
}

std::uint64_t row_seed(const std::string& map, ClutterShape shape, int size, int count,
                       std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a over the map id
  for (unsigned char ch : map) h = (h ^ ch) * 1099511628211ULL;
  h = mix_seed(h, static_cast<std::uint64_t>(shape));
  h = mix_seed(h, static_cast<std::uint64_t>(size));
  h = mix_seed(h, static_cast<std::uint64_t>(count));
  return mix_seed(h, seed);
}

SweepRow evaluate_row(const SweepMap& map, ClutterShape shape, int size, int count,
                      std::uint64_t seed, const PipelineConfig& config) {
  SweepRow row{map.id, shape, size, count, seed, std::nullopt, 0.0, 1.0, std::nullopt, {}};
  try {
    const LabeledMap labeled =
        inject_clutter(map.map, {shape, count, size, row_seed(map.id, shape, size, count, seed)});
    const DeclutterResult result = declutter_map(labeled.bits, config);
    const PrecisionRecall pr = precision_recall(labeled, result.decluttered);
    row.precision = pr.precision;
    row.recall = pr.recall;
    row.w = result.analysis.score.w;
    row.s = result.threshold;
    row.flags = result.flags;
    if (!pr.precision) row.flags.emplace_back("NO_KEPT");
  } catch (const Error& e) {
    row.flags.emplace_back(to_string(e.code()));
  }
  return row;
}

std::vector<SweepRow> run_sweep(const std::vector<SweepMap>& maps, const SweepGrid& grid,
                                const PipelineConfig& config,
                                const std::map<std::string, SweepRow>& done) {
  if (maps.empty() || grid.shapes.empty() || grid.sizes.empty() || grid.counts.empty() ||
      grid.seeds.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "sweep grid has an empty axis");
  }
  std::vector<SweepRow> rows;
  for (const auto& m : maps)
    for (auto shape : grid.shapes)
      for (int size : grid.sizes)
        for (int count : grid.counts)
          for (auto seed : grid.seeds) {
            SweepRow probe;
            probe.map = m.id;
            probe.shape = shape;
            probe.size = size;
            probe.count = count;
            probe.seed = seed;
            if (auto it = done.find(probe.key()); it != done.end()) {
              rows.push_back(it->second);
            } else {
              rows.push_back(evaluate_row(m, shape, size, count, seed, config));
            }
          }
  return rows;
}

namespace {

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> parse_records(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        fields.push_back(std::move(field));
        records.push_back(std::move(fields));
      }
      fields.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error(ErrorCode::kFormat, "unterminated quoted CSV field");
  if (any || !field.empty()) {
    fields.push_back(std::move(field));
    records.push_back(std::move(fields));
  }
  return records;
}

std::optional<double> optional_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kFormat, "bad CSV number '" + s + "'");
  }
}

}  // namespace

std::string sweep_csv_header() { return "map,shape,size,count,seed,precision,recall,w,s,flags"; }

std::string to_csv_line(const SweepRow& row) {
  std::string flags;
  for (const auto& f : row.flags) flags += (flags.empty() ? "" : "|") + f;
  std::string line = csv_field(row.map);
  line += "," + std::string(to_string(row.shape));
  line += "," + std::to_string(row.size);
  line += "," + std::to_string(row.count);
  line += "," + std::to_string(row.seed);
  line += "," + (row.precision ? fixed(*row.precision) : "");
  line += "," + fixed(row.recall);
  line += "," + fixed(row.w);
  line += "," + (row.s ? fixed(*row.s) : "");
  line += "," + csv_field(flags);
  return line;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = sweep_csv_header() + "\n";
  for (const auto& r : rows) out += to_csv_line(r) + "\n";
  return out;
}

std::vector<SweepRow> parse_csv(const std::string& text) {
  const auto records = parse_records(text);
  if (records.empty()) throw Error(ErrorCode::kFormat, "empty CSV");
  std::vector<SweepRow> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i];
    if (f.size() != 10) {
      throw Error(ErrorCode::kFormat, "CSV row " + std::to_string(i) + " has " +
                                          std::to_string(f.size()) + " fields, expected 10");
    }
    SweepRow row;
    try {
      row.map = f[0];
      row.shape = parse_clutter_shape(f[1]);
      row.size = std::stoi(f[2]);
      row.count = std::stoi(f[3]);
      row.seed = std::stoull(f[4]);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw Error(ErrorCode::kFormat, "bad CSV key fields in row " + std::to_string(i));
    }
    row.precision = optional_number(f[5]);
    row.recall = optional_number(f[6]).value_or(0.0);
    row.w = optional_number(f[7]).value_or(1.0);
    row.s = optional_number(f[8]);
    std::stringstream flags(f[9]);
    for (std::string flag; std::getline(flags, flag, '|');) {
      if (!flag.empty()) row.flags.push_back(flag);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kInvalidArgument, "length mismatch");
  const std::size_t n = a.size();
  if (n < 3) throw Error(ErrorCode::kDegenerate, "correlation needs at least 3 rows");
  // Tested on the range: a rounded mean leaves a tiny spread on constant input.
  const auto [alo, ahi] = std::minmax_element(a.begin(), a.end());
  const auto [blo, bhi] = std::minmax_element(b.begin(), b.end());
  if (*alo == *ahi || *blo == *bhi) {
    throw Error(ErrorCode::kDegenerate, "zero variance in correlation input");
  }
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) {
    throw Error(ErrorCode::kDegenerate, "zero variance in correlation input");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

CorrelationReport correlation(const std::vector<SweepRow>& rows) {
  std::vector<double> w, p;
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : rows) {
    if (!r.precision) continue;
    w.push_back(r.w);
    p.push_back(*r.precision);
    groups[r.count].first.push_back(r.w);
    groups[r.count].second.push_back(*r.precision);
  }
  CorrelationReport out;
  out.r = pearson(w, p);
  out.n = w.size();
  for (const auto& [count, xy] : groups) {
    try {
      out.by_count[count] = pearson(xy.first, xy.second);
    } catch (const Error&) {
      out.by_count[count] = std::nullopt;
    }
  }
  return out;
}

}  // namespace mapstruct
