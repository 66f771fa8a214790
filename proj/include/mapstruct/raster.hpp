#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mapstruct/error.hpp"

namespace mapstruct {

// Row-major 2D array addressed as (x = column, y = row).
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
      throw Error(ErrorCode::kInvalidArgument, "raster dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  bool operator==(const Raster&) const = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

// 1 = occupied, 0 = free.
using BinaryMap = Raster<std::uint8_t>;
using RealField = Raster<double>;

inline std::size_t count_occupied(const BinaryMap& map) {
  std::size_t n = 0;
  for (auto v : map.values()) n += v != 0;
  return n;
}

}  // namespace mapstruct
