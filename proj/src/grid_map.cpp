#include "mapstruct/grid_map.hpp"

#include <png.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

namespace mapstruct {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kIo: return "IO";
    case ErrorCode::kFormat: return "FORMAT";
    case ErrorCode::kNoStructure: return "NO_STRUCTURE";
    case ErrorCode::kNoSeparation: return "NO_SEPARATION";
    case ErrorCode::kDegenerate: return "DEGENERATE";
    case ErrorCode::kPlacementExhausted: return "PLACEMENT_EXHAUSTED";
  }
  return "UNKNOWN";
}

namespace {

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class PnmCursor {
 public:
  explicit PnmCursor(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  // Next whitespace-delimited header token, skipping '#' comments.
  std::string token() {
    skip_space_and_comments();
    std::string out;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#') {
      out.push_back(static_cast<char>(bytes_[pos_++]));
    }
    if (out.empty()) throw Error(ErrorCode::kFormat, "truncated PGM header");
    return out;
  }

  int integer() {
    const std::string t = token();
    try {
      std::size_t used = 0;
      const int v = std::stoi(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::kFormat, "bad PGM integer '" + t + "'");
    }
  }

  // The single whitespace byte that separates the header from raster data.
  void skip_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::kFormat, "malformed PGM header terminator");
    }
    ++pos_;
  }

  std::size_t position() const { return pos_; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 0;
};

Raster<std::uint8_t> parse_pgm(const std::vector<unsigned char>& bytes) {
  PnmCursor cur(bytes);
  const std::string magic = cur.token();
  if (magic != "P2" && magic != "P5") {
    throw Error(ErrorCode::kFormat, "unsupported PNM variant " + magic);
  }
  const int width = cur.integer();
  const int height = cur.integer();
  const int maxval = cur.integer();
  if (width <= 0 || height <= 0) throw Error(ErrorCode::kFormat, "bad PGM dimensions");
  if (maxval <= 0 || maxval > 255) {
    throw Error(ErrorCode::kFormat,
                "unsupported bit depth (maxval " + std::to_string(maxval) + ")");
  }

  Raster<std::uint8_t> img(width, height);
  auto rescale = [maxval](int v) {
    if (v < 0 || v > maxval) throw Error(ErrorCode::kFormat, "PGM sample out of range");
    return static_cast<std::uint8_t>(maxval == 255 ? v : std::lround(v * 255.0 / maxval));
  };

  if (magic == "P5") {
    cur.skip_single_space();
    const std::size_t start = cur.position();
    if (bytes.size() - start < img.size()) throw Error(ErrorCode::kFormat, "truncated PGM raster");
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = rescale(bytes[start + i]);
  } else {
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = rescale(cur.integer());
  }
  return img;
}

Raster<std::uint8_t> read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    throw Error(ErrorCode::kFormat, "cannot decode PNG " + path.string() + ": " + image.message);
  }
  if (image.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&image);
    throw Error(ErrorCode::kFormat, "unsupported PNG bit depth in " + path.string());
  }
  image.format = PNG_FORMAT_GRAY;
  Raster<std::uint8_t> img(static_cast<int>(image.width), static_cast<int>(image.height));
  if (!png_image_finish_read(&image, nullptr, img.values().data(), 0, nullptr)) {
    png_image_free(&image);
    throw Error(ErrorCode::kFormat, "PNG read failed: " + std::string(image.message));
  }
  return img;
}

bool is_png_signature(const std::vector<unsigned char>& bytes) {
  static constexpr unsigned char kSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return bytes.size() >= 8 && std::equal(std::begin(kSig), std::end(kSig), bytes.begin());
}

}  // namespace

MapMetadata load_metadata(const std::filesystem::path& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::BadFile&) {
    throw Error(ErrorCode::kIo, "cannot open metadata " + path.string());
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kFormat, "bad metadata " + path.string() + ": " + e.what());
  }
  MapMetadata meta;
  try {
    if (root["resolution"]) meta.resolution = root["resolution"].as<double>();
    if (root["occupied_thresh"]) meta.occupied_thresh = root["occupied_thresh"].as<double>();
    if (root["free_thresh"]) meta.free_thresh = root["free_thresh"].as<double>();
    if (root["negate"]) meta.negate = root["negate"].as<int>() != 0;
    if (root["width"]) meta.width = root["width"].as<int>();
    if (root["height"]) meta.height = root["height"].as<int>();
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kFormat, "bad metadata value in " + path.string() + ": " + e.what());
  }
  if (!(meta.resolution > 0.0) || !(meta.free_thresh >= 0.0) ||
      !(meta.occupied_thresh <= 1.0) || meta.free_thresh > meta.occupied_thresh) {
    throw Error(ErrorCode::kFormat, "inconsistent thresholds in " + path.string());
  }
  return meta;
}

OccupancyGrid::OccupancyGrid(int width, int height, double resolution)
    : cells_(width, height, kUnknown), resolution_(resolution) {}

OccupancyGrid::OccupancyGrid(Raster<double> cells, double resolution)
    : cells_(std::move(cells)), resolution_(resolution) {
  if (cells_.empty()) throw Error(ErrorCode::kInvalidArgument, "empty occupancy grid");
  for (double v : cells_.values()) {
    if (!std::isnan(v) && (v < 0.0 || v > 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "occupancy outside [0,1]");
    }
  }
}

bool OccupancyGrid::is_unknown(int x, int y) const { return std::isnan(cells_(x, y)); }

void OccupancyGrid::set(int x, int y, double occupancy) {
  if (!std::isnan(occupancy) && (occupancy < 0.0 || occupancy > 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "occupancy outside [0,1]");
  }
  cells_(x, y) = occupancy;
}

Raster<std::uint8_t> read_gray_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (is_png_signature(bytes)) return read_png(path);
  return parse_pgm(bytes);
}

OccupancyGrid load_map(const std::filesystem::path& path,
                       const std::optional<std::filesystem::path>& meta_path) {
  const MapMetadata meta = meta_path ? load_metadata(*meta_path) : MapMetadata{};
  const auto pixels = read_gray_image(path);
  if ((meta.width && *meta.width != pixels.width()) ||
      (meta.height && *meta.height != pixels.height())) {
    throw Error(ErrorCode::kFormat, "metadata dimensions disagree with " + path.string());
  }

  Raster<double> cells(pixels.width(), pixels.height());
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const double v = pixels[i];
    const double p = meta.negate ? v / 255.0 : (255.0 - v) / 255.0;
    cells[i] = (p > meta.free_thresh && p < meta.occupied_thresh) ? OccupancyGrid::kUnknown : p;
  }
  return OccupancyGrid(std::move(cells), meta.resolution);
}

BinaryMap binarize(const OccupancyGrid& grid, double occupied_threshold) {
  if (!(occupied_threshold > 0.0 && occupied_threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "occupied threshold must lie in (0,1)");
  }
  BinaryMap out(grid.width(), grid.height());
  const auto cells = grid.cells().values();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    // NaN compares false, so unknown cells stay free.
    out[i] = cells[i] >= occupied_threshold ? 1 : 0;
  }
  return out;
}

PaddedMap pad_to_square(const BinaryMap& map) {
  const int side = std::max(map.width(), map.height());
  PaddedMap out;
  out.source_width = map.width();
  out.source_height = map.height();
  out.offset_x = (side - map.width()) / 2;
  out.offset_y = (side - map.height()) / 2;
  out.map = BinaryMap(side, side);
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      out.map(x + out.offset_x, y + out.offset_y) = map(x, y);
    }
  }
  return out;
}

ImageFormat format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" ? ImageFormat::kPng : ImageFormat::kPgm;
}

void write_gray_image(const Raster<std::uint8_t>& pixels, const std::filesystem::path& path,
                      ImageFormat format) {
  if (format == ImageFormat::kPng) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(pixels.width());
    image.height = static_cast<png_uint_32>(pixels.height());
    image.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, pixels.values().data(), 0,
                                 nullptr)) {
      throw Error(ErrorCode::kIo, "cannot write " + path.string() + ": " + image.message);
    }
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << "P5\n" << pixels.width() << ' ' << pixels.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.values().data()),
            static_cast<std::streamsize>(pixels.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

Raster<std::uint8_t> scale_to_gray(const RealField& field) {
  Raster<std::uint8_t> pixels(field.width(), field.height(), 0);
  const auto [lo, hi] = std::minmax_element(field.values().begin(), field.values().end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return pixels;
  for (std::size_t i = 0; i < field.size(); ++i) {
    pixels[i] = static_cast<std::uint8_t>(std::lround(255.0 * (field[i] - *lo) / range));
  }
  return pixels;
}

void save_map(const BinaryMap& map, const std::filesystem::path& path,
              std::optional<ImageFormat> format) {
  Raster<std::uint8_t> pixels(map.width(), map.height());
  for (std::size_t i = 0; i < map.size(); ++i) pixels[i] = map[i] ? 0 : 255;
  write_gray_image(pixels, path, format.value_or(format_from_path(path)));
}

void save_map(const RealField& field, const std::filesystem::path& path,
              std::optional<ImageFormat> format) {
  write_gray_image(scale_to_gray(field), path, format.value_or(format_from_path(path)));
}

}  // namespace mapstruct
