#pragma once

#include <cmath>
#include <utility>
#include <variant>
#include <vector>

namespace perfolab {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Point&, const Point&) = default;
};

inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

/// Axis-aligned rectangle [x0, x1] x [y0, y1]. Membership flavour is chosen
/// by the caller: half-open boxes follow the lattice cube convention.
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  double diameter() const { return std::hypot(width(), height()); }
  Point center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  bool empty() const { return !(x1 > x0 && y1 > y0); }

  bool contains_half_open(Point p) const {
    return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1;
  }
  bool contains_closed(Point p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
  bool contains_open(Point p) const {
    return p.x > x0 && p.x < x1 && p.y > y0 && p.y < y1;
  }
  /// Closure of `other` lies in the interior of this rectangle.
  bool compactly_contains(const Rect& other) const {
    return other.x0 > x0 && other.x1 < x1 && other.y0 > y0 && other.y1 < y1;
  }
  bool contains(const Rect& other) const {
    return other.x0 >= x0 && other.x1 <= x1 && other.y0 >= y0 && other.y1 <= y1;
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

inline Rect intersect(const Rect& a, const Rect& b) {
  return {std::max(a.x0, b.x0), std::max(a.y0, b.y0), std::min(a.x1, b.x1),
          std::min(a.y1, b.y1)};
}

/// Square of half-side `half` centred at `c`.
inline Rect square_around(Point c, double half) {
  return {c.x - half, c.y - half, c.x + half, c.y + half};
}

struct Disk {
  Point center;
  double radius = 0.0;

  bool contains_closed(Point p) const { return distance(p, center) <= radius; }
  bool contains_open(Point p) const { return distance(p, center) < radius; }
  Rect bbox() const { return square_around(center, radius); }

  friend bool operator==(const Disk&, const Disk&) = default;
};

/// Closed parameter intervals [t0, t1] within [0, 1].
using Intervals = std::vector<std::pair<double, double>>;

Intervals clip_segment(const Rect& r, Point p0, Point p1);
Intervals clip_segment(const Disk& d, Point p0, Point p1);

/// A planar set used as condenser plate, container or integration window:
/// a rectangle, a disk, or a finite union of disks (possibly empty).
class Region {
 public:
  Region() : shape_(std::vector<Disk>{}) {}
  Region(Rect r) : shape_(r) {}                     // NOLINT
  Region(Disk d) : shape_(d) {}                     // NOLINT
  Region(std::vector<Disk> ds) : shape_(std::move(ds)) {}  // NOLINT

  static Region empty_set() { return Region(std::vector<Disk>{}); }

  bool is_empty() const;
  bool contains_closed(Point p) const;
  bool contains_open(Point p) const;
  Rect bbox() const;
  /// Parameter intervals of the segment p0->p1 lying in the closed region,
  /// merged and sorted.
  Intervals clip(Point p0, Point p1) const;
  /// Closure of this region lies inside the open `outer` region.
  bool compactly_inside(const Region& outer) const;

  const Rect* as_rect() const { return std::get_if<Rect>(&shape_); }
  const Disk* as_disk() const { return std::get_if<Disk>(&shape_); }
  const std::vector<Disk>* as_union() const { return std::get_if<std::vector<Disk>>(&shape_); }

 private:
  std::variant<Rect, Disk, std::vector<Disk>> shape_;
};

/// Merge overlapping intervals in place and return them sorted.
Intervals merge_intervals(Intervals iv);

}  // namespace perfolab
