#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace rbfcv {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

double distance(const Point2& a, const Point2& b);

enum class PointRole { Interior, Boundary, ExteriorCenter };

std::string_view to_string(PointRole role);
PointRole parse_point_role(std::string_view text);

/// Points with a parallel list of roles.
class PointSet {
 public:
  PointSet() = default;

  void add(Point2 p, PointRole role);
  void append(const PointSet& other);

  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] bool empty() const noexcept { return points_.empty(); }
  [[nodiscard]] const Point2& point(std::size_t i) const { return points_.at(i); }
  [[nodiscard]] PointRole role(std::size_t i) const { return roles_.at(i); }
  [[nodiscard]] const std::vector<Point2>& points() const noexcept { return points_; }
  [[nodiscard]] const std::vector<PointRole>& roles() const noexcept { return roles_; }
  [[nodiscard]] std::size_t count(PointRole role) const;

 private:
  std::vector<Point2> points_;
  std::vector<PointRole> roles_;
};

/// Radical inverse of `index` in the given base (van der Corput).
double radical_inverse(std::size_t index, unsigned base);

/// Halton points with indices 1..count in bases (2, 3), all tagged Interior.
PointSet halton2d(std::size_t count);

/// `count` points on the boundary of the unit square, starting at the origin
/// and walking counterclockwise with arclength spacing 4/count.
/// Throws InvalidCount when count < 1.
PointSet boundary_equispaced(std::size_t count);

/// One center per boundary point, moved by `offset` along the outward edge
/// normal; corners move along the outward diagonal.
PointSet exterior_centers(const PointSet& boundary, double offset);

/// Default exterior offset: one boundary spacing, 4 / boundary_count.
double default_exterior_offset(std::size_t boundary_count);

/// X = H_mu followed by B_sqrt(mu): Halton interior points first, then the
/// boundary ring. mu must be a perfect square (InvalidCount otherwise).
PointSet collocation_points(std::size_t mu);

/// Integer square root when `value` is a perfect square, 0 otherwise.
std::size_t exact_sqrt(std::size_t value);

/// CSV with header x1,x2,role.
void write_points_csv(std::ostream& out, const PointSet& points);
PointSet read_points_csv(std::istream& in);

}  // namespace rbfcv
