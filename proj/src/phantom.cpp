#include "mrt/phantom.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "mrt/errors.hpp"

namespace mrt {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Ellipse make(double cx, double cy, double a, double b, double rot_deg, double intensity) {
  return Ellipse{cx, cy, a, b, rot_deg * kDeg, intensity};
}

}  // namespace

void validate(const Ellipse& e) {
  if (!(e.a > 0.0) || !(e.b > 0.0)) throw DomainError("ellipse semi-axes must be positive");
  if (!std::isfinite(e.cx) || !std::isfinite(e.cy) || !std::isfinite(e.rotation) ||
      !std::isfinite(e.intensity)) {
    throw DomainError("ellipse parameters must be finite");
  }
  // Support function check: the farthest boundary point from the origin.
  const double c = std::cos(e.rotation);
  const double s = std::sin(e.rotation);
  constexpr int kSteps = 4096;
  for (int i = 0; i < kSteps; ++i) {
    const double tau = 2.0 * std::numbers::pi * i / kSteps;
    const double u = e.a * std::cos(tau);
    const double v = e.b * std::sin(tau);
    const double x = e.cx + c * u - s * v;
    const double y = e.cy + s * u + c * v;
    if (x * x + y * y > 1.0 + 1e-9) {
      throw DomainError("ellipse not contained in the unit disk");
    }
  }
}

Phantom::Phantom(std::vector<Ellipse> ellipses) : ellipses_(std::move(ellipses)) {
  for (const auto& e : ellipses_) validate(e);
}

Phantom Phantom::scaled(double factor) const {
  auto out = ellipses_;
  for (auto& e : out) e.intensity *= factor;
  return Phantom(std::move(out));
}

Phantom Phantom::rotated(double angle) const {
  auto out = ellipses_;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  for (auto& e : out) {
    const double x = e.cx;
    const double y = e.cy;
    e.cx = c * x - s * y;
    e.cy = s * x + c * y;
    e.rotation += angle;
  }
  return Phantom(std::move(out));
}

Phantom shepp_logan() {
  return Phantom({
      make(0.0, 0.0, 0.69, 0.92, 0.0, 1.0),
      make(0.0, -0.0184, 0.6624, 0.874, 0.0, -0.8),
      make(0.22, 0.0, 0.11, 0.31, -18.0, -0.2),
      make(-0.22, 0.0, 0.16, 0.41, 18.0, -0.2),
      make(0.0, 0.35, 0.21, 0.25, 0.0, 0.1),
      make(0.0, 0.1, 0.046, 0.046, 0.0, 0.1),
      make(0.0, -0.1, 0.046, 0.046, 0.0, 0.1),
      make(-0.08, -0.605, 0.046, 0.023, 0.0, 0.1),
      make(0.0, -0.606, 0.023, 0.023, 0.0, 0.1),
      make(0.06, -0.605, 0.023, 0.046, 0.0, 0.1),
  });
}

Phantom walnut_standin() {
  const double rot = 10.0;
  const double c = std::cos(rot * kDeg);
  const double s = std::sin(rot * kDeg);
  const double lobe = 0.33;
  return Phantom({
      make(0.0, 0.0, 0.80, 0.66, rot, 1.0),          // shell
      make(0.0, 0.0, 0.72, 0.58, rot, -1.0),         // air gap
      make(lobe * c, lobe * s, 0.30, 0.46, rot, 0.6),   // kernel halves
      make(-lobe * c, -lobe * s, 0.30, 0.46, rot, 0.6),
      make(0.0, 0.0, 0.035, 0.52, rot, 0.8),         // septum
      make(0.40 * c, 0.40 * s + 0.05, 0.08, 0.16, rot + 20.0, -0.35),
      make(-0.40 * c, -0.40 * s - 0.05, 0.08, 0.16, rot - 20.0, -0.35),
      make(0.24 * c - 0.20 * s, 0.24 * s + 0.20 * c, 0.05, 0.09, rot, -0.3),
      make(-0.24 * c + 0.20 * s, -0.24 * s - 0.20 * c, 0.05, 0.09, rot, -0.3),
  });
}

double radon_ellipse(const Ellipse& e, double theta, double t) {
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const double shifted = t - (e.cx * ct + e.cy * st);
  const double alpha = theta - e.rotation;
  const double ca = std::cos(alpha);
  const double sa = std::sin(alpha);
  const double w2 = e.a * e.a * ca * ca + e.b * e.b * sa * sa;
  const double gap = w2 - shifted * shifted;
  if (gap <= 0.0) return 0.0;
  return 2.0 * e.intensity * e.a * e.b * std::sqrt(gap) / w2;
}

double radon_phantom(const Phantom& p, double theta, double t) {
  double sum = 0.0;
  for (const auto& e : p.ellipses()) sum += radon_ellipse(e, theta, t);
  return sum;
}

ImageGrid rasterize(const Phantom& p, ImageGrid grid) {
  for (std::size_t r = 0; r < grid.height(); ++r) {
    for (std::size_t c = 0; c < grid.width(); ++c) {
      const auto [x, y] = grid.center(r, c);
      double v = 0.0;
      for (const auto& e : p.ellipses()) {
        const double dx = x - e.cx;
        const double dy = y - e.cy;
        const double cr = std::cos(e.rotation);
        const double sr = std::sin(e.rotation);
        const double u = (dx * cr + dy * sr) / e.a;
        const double w = (-dx * sr + dy * cr) / e.b;
        if (u * u + w * w <= 1.0) v += e.intensity;
      }
      grid.at(r, c) = v;
    }
  }
  return grid;
}

Phantom read_phantom_table(std::istream& in) {
  std::vector<Ellipse> ellipses;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    double v[6];
    for (int i = 0; i < 6; ++i) {
      if (!(fields >> v[i])) {
        throw ParseError("phantom table line " + std::to_string(line_no) + ": column " +
                         std::to_string(i + 1) + " missing or not numeric");
      }
    }
    std::string extra;
    if (fields >> extra) {
      throw ParseError("phantom table line " + std::to_string(line_no) +
                       ": expected 6 columns, found more");
    }
    ellipses.push_back(make(v[0], v[1], v[2], v[3], v[4], v[5]));
  }
  return Phantom(std::move(ellipses));
}

void write_phantom_table(std::ostream& out, const Phantom& p) {
  out << "# cx cy a b rot_deg intensity\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& e : p.ellipses()) {
    out << e.cx << ' ' << e.cy << ' ' << e.a << ' ' << e.b << ' ' << e.rotation / kDeg << ' '
        << e.intensity << '\n';
  }
}

}  // namespace mrt
