#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gaitlab/error.hpp"

namespace gaitlab {

/// Dense row-major 2D grid with value semantics.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(checked_area(width, height)), fill) {}
  Grid(int width, int height, std::vector<T> data) : width_(width), height_(height), data_(std::move(data)) {
    if (static_cast<long long>(data_.size()) != checked_area(width, height)) {
      throw Error(ErrorKind::Dimension, "grid data size does not match width*height");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t size() const noexcept { return data_.size(); }

  T& operator()(int row, int col) {
    assert(row >= 0 && row < height_ && col >= 0 && col < width_);
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }
  const T& operator()(int row, int col) const {
    assert(row >= 0 && row < height_ && col >= 0 && col < width_);
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }

  std::span<T> row(int r) { return {data_.data() + static_cast<std::size_t>(r) * width_, static_cast<std::size_t>(width_)}; }
  std::span<const T> row(int r) const {
    return {data_.data() + static_cast<std::size_t>(r) * width_, static_cast<std::size_t>(width_)};
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  /// Copy of rows [begin, end).
  Grid rows(int begin, int end) const {
    assert(0 <= begin && begin <= end && end <= height_);
    return Grid(width_, end - begin,
                std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(begin) * width_,
                               data_.begin() + static_cast<std::ptrdiff_t>(end) * width_));
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  static long long checked_area(int width, int height) {
    if (width < 0 || height < 0) throw Error(ErrorKind::Dimension, "negative grid dimension");
    return static_cast<long long>(width) * height;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using RealGrid = Grid<double>;

/// Binary foreground mask; elements are 0 or 1.
using BinaryMask = Grid<std::uint8_t>;

/// Rotates a grid by 90 degrees counter-clockwise.
template <typename T>
Grid<T> rotate90(const Grid<T>& g) {
  Grid<T> out(g.height(), g.width());
  for (int r = 0; r < g.height(); ++r)
    for (int c = 0; c < g.width(); ++c) out(g.width() - 1 - c, r) = g(r, c);
  return out;
}

inline RealGrid to_real(const BinaryMask& mask) {
  RealGrid out(mask.width(), mask.height());
  auto src = mask.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
  return out;
}

}  // namespace gaitlab
