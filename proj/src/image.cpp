#include "mrt/image.hpp"

#include "mrt/errors.hpp"

namespace mrt {

ImageGrid::ImageGrid(std::size_t width, std::size_t height)
    : width_(width), height_(height), pixels_(width * height, 0.0) {
  if (width == 0 || height == 0) throw DomainError("image grid must be at least 1x1");
}

}  // namespace mrt
