#pragma once

#include <iosfwd>
#include <vector>

#include "mrt/image.hpp"

namespace mrt {

/// Uniform-density ellipse. Semi-axis `a` lies along the direction given by
/// `rotation` (radians, counter-clockwise from +x), `b` is perpendicular.
struct Ellipse {
  double cx = 0.0;
  double cy = 0.0;
  double a = 1.0;
  double b = 1.0;
  double rotation = 0.0;
  double intensity = 1.0;

  friend bool operator==(const Ellipse&, const Ellipse&) = default;
};

/// Throws DomainError unless both semi-axes are positive and the ellipse lies
/// inside the closed unit disk.
void validate(const Ellipse& e);

/// Additive superposition of ellipses, all supported in the unit disk.
class Phantom {
 public:
  Phantom() = default;
  explicit Phantom(std::vector<Ellipse> ellipses);

  const std::vector<Ellipse>& ellipses() const noexcept { return ellipses_; }
  bool empty() const noexcept { return ellipses_.empty(); }

  Phantom scaled(double factor) const;
  /// The same object rotated counter-clockwise by `angle` radians.
  Phantom rotated(double angle) const;

 private:
  std::vector<Ellipse> ellipses_;
};

/// Modified-contrast Shepp-Logan head phantom (10 ellipses, gray levels in
/// [0, 1]). The table, in (cx, cy, a, b, rotation in degrees, intensity):
///
///      0       0      0.69    0.92     0    1.0
///      0      -0.0184 0.6624  0.874    0   -0.8
///      0.22    0      0.11    0.31   -18   -0.2
///     -0.22    0      0.16    0.41    18   -0.2
///      0       0.35   0.21    0.25     0    0.1
///      0       0.1    0.046   0.046    0    0.1
///      0      -0.1    0.046   0.046    0    0.1
///     -0.08   -0.605  0.046   0.023    0    0.1
///      0      -0.606  0.023   0.023    0    0.1
///      0.06   -0.605  0.023   0.046    0    0.1
Phantom shepp_logan();

/// Ellipse stand-in for a walnut cross-section (shell, air gap, two kernel
/// halves and a septum), used when the measured walnut data is not available.
Phantom walnut_standin();

/// Line integral of e over {x : <x, (cos theta, sin theta)> = t}.
double radon_ellipse(const Ellipse& e, double theta, double t);

double radon_phantom(const Phantom& p, double theta, double t);

/// Pixel value = sum of intensities of the ellipses containing the pixel center.
ImageGrid rasterize(const Phantom& p, ImageGrid grid);

/// Plain-text table, one ellipse per line: cx cy a b rot_deg intensity.
/// Blank lines and lines starting with '#' are ignored.
Phantom read_phantom_table(std::istream& in);
void write_phantom_table(std::ostream& out, const Phantom& p);

}  // namespace mrt
