#include "rbfcv/geometry.hpp"

#include "rbfcv/errors.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace rbfcv {

double distance(const Point2& a, const Point2& b) { return std::hypot(a.x1 - b.x1, a.x2 - b.x2); }

std::string_view to_string(PointRole role) {
  switch (role) {
    case PointRole::Interior:
      return "interior";
    case PointRole::Boundary:
      return "boundary";
    case PointRole::ExteriorCenter:
      return "exterior";
  }
  return "unknown";
}

PointRole parse_point_role(std::string_view text) {
  if (text == "interior") return PointRole::Interior;
  if (text == "boundary") return PointRole::Boundary;
  if (text == "exterior") return PointRole::ExteriorCenter;
  throw InvalidArgument("unknown point role '" + std::string(text) + "'");
}

void PointSet::add(Point2 p, PointRole role) {
  if (!std::isfinite(p.x1) || !std::isfinite(p.x2)) {
    throw InvalidArgument("point coordinates must be finite");
  }
  points_.push_back(p);
  roles_.push_back(role);
}

void PointSet::append(const PointSet& other) {
  points_.insert(points_.end(), other.points_.begin(), other.points_.end());
  roles_.insert(roles_.end(), other.roles_.begin(), other.roles_.end());
}

std::size_t PointSet::count(PointRole role) const {
  std::size_t n = 0;
  for (auto r : roles_) n += (r == role);
  return n;
}

double radical_inverse(std::size_t index, unsigned base) {
  double result = 0.0;
  double scale = 1.0 / base;
  while (index > 0) {
    result += scale * static_cast<double>(index % base);
    index /= base;
    scale /= base;
  }
  return result;
}

PointSet halton2d(std::size_t count) {
  PointSet out;
  for (std::size_t i = 1; i <= count; ++i) {
    out.add({radical_inverse(i, 2), radical_inverse(i, 3)}, PointRole::Interior);
  }
  return out;
}

PointSet boundary_equispaced(std::size_t count) {
  if (count < 1) throw InvalidCount("boundary point count must be at least 1");
  PointSet out;
  const double n = static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Arclength 4i/count split into edge number and an exact in-edge fraction.
    const std::size_t edge = (4 * i) / count;
    const double t = static_cast<double>(4 * i - edge * count) / n;
    Point2 p;
    switch (edge) {
      case 0:
        p = {t, 0.0};
        break;
      case 1:
        p = {1.0, t};
        break;
      case 2:
        p = {1.0 - t, 1.0};
        break;
      default:
        p = {0.0, 1.0 - t};
        break;
    }
    out.add(p, PointRole::Boundary);
  }
  return out;
}

PointSet exterior_centers(const PointSet& boundary, double offset) {
  PointSet out;
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    const Point2& p = boundary.point(i);
    const double nx = p.x1 == 0.0 ? -1.0 : (p.x1 == 1.0 ? 1.0 : 0.0);
    const double ny = p.x2 == 0.0 ? -1.0 : (p.x2 == 1.0 ? 1.0 : 0.0);
    if (nx == 0.0 && ny == 0.0) {
      throw InvalidArgument("exterior_centers: point is not on the boundary of the unit square");
    }
    const double len = std::hypot(nx, ny);
    out.add({p.x1 + offset * nx / len, p.x2 + offset * ny / len}, PointRole::ExteriorCenter);
  }
  return out;
}

double default_exterior_offset(std::size_t boundary_count) {
  return 4.0 / static_cast<double>(boundary_count);
}

std::size_t exact_sqrt(std::size_t value) {
  auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(value))));
  return root * root == value ? root : 0;
}

PointSet collocation_points(std::size_t mu) {
  const std::size_t root = exact_sqrt(mu);
  if (mu == 0 || root == 0) {
    throw InvalidCount("mu must be a positive perfect square, got " + std::to_string(mu));
  }
  PointSet x = halton2d(mu);
  x.append(boundary_equispaced(root));
  return x;
}

void write_points_csv(std::ostream& out, const PointSet& points) {
  out << "x1,x2,role\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << points.point(i).x1 << ',' << points.point(i).x2 << ',' << to_string(points.role(i))
        << '\n';
  }
}

PointSet read_points_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "x1,x2,role") {
    throw InvalidArgument("point CSV must start with the header x1,x2,role");
  }
  PointSet out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b, role;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, role)) {
      throw InvalidArgument("malformed point row: " + line);
    }
    out.add({std::stod(a), std::stod(b)}, parse_point_role(role));
  }
  return out;
}

}  // namespace rbfcv
