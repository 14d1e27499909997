#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace mrt {

/// Row-major raster over the square [-1, 1]^2. Row 0 is the top edge (y = +1),
/// column 0 the left edge (x = -1); pixel values are sampled at pixel centers.
class ImageGrid {
 public:
  ImageGrid(std::size_t width, std::size_t height);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }

  /// Center of pixel (row, col) in [-1, 1]^2.
  std::pair<double, double> center(std::size_t row, std::size_t col) const noexcept {
    return {-1.0 + (2.0 * static_cast<double>(col) + 1.0) / static_cast<double>(width_),
            1.0 - (2.0 * static_cast<double>(row) + 1.0) / static_cast<double>(height_)};
  }

  double& at(std::size_t row, std::size_t col) { return pixels_[row * width_ + col]; }
  double at(std::size_t row, std::size_t col) const { return pixels_[row * width_ + col]; }

  std::vector<double>& pixels() noexcept { return pixels_; }
  const std::vector<double>& pixels() const noexcept { return pixels_; }

  bool same_shape(const ImageGrid& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<double> pixels_;
};

}  // namespace mrt
