#include "perfolab/geometry.hpp"

#include <algorithm>

namespace perfolab {

Intervals merge_intervals(Intervals iv) {
  std::sort(iv.begin(), iv.end());
  Intervals out;
  for (const auto& [a, b] : iv) {
    if (b < a) continue;
    if (!out.empty() && a <= out.back().second) {
      out.back().second = std::max(out.back().second, b);
    } else {
      out.emplace_back(a, b);
    }
  }
  return out;
}

Intervals clip_segment(const Rect& r, Point p0, Point p1) {
  // Liang-Barsky against the closed rectangle.
  double t0 = 0.0, t1 = 1.0;
  const double dx = p1.x - p0.x, dy = p1.y - p0.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {p0.x - r.x0, r.x1 - p0.x, p0.y - r.y0, r.y1 - p0.y};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return {};
      continue;
    }
    const double t = q[k] / p[k];
    if (p[k] < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
  }
  if (t0 > t1) return {};
  return {{t0, t1}};
}

Intervals clip_segment(const Disk& d, Point p0, Point p1) {
  const Point dir = p1 - p0;
  const Point rel = p0 - d.center;
  const double a = dir.x * dir.x + dir.y * dir.y;
  const double b = 2.0 * (rel.x * dir.x + rel.y * dir.y);
  const double c = rel.x * rel.x + rel.y * rel.y - d.radius * d.radius;
  if (a == 0.0) {
    if (c <= 0.0) return {{0.0, 1.0}};
    return {};
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  const double sq = std::sqrt(disc);
  const double ta = std::max(0.0, (-b - sq) / (2.0 * a));
  const double tb = std::min(1.0, (-b + sq) / (2.0 * a));
  if (ta > tb) return {};
  return {{ta, tb}};
}

bool Region::is_empty() const {
  if (const auto* u = as_union()) {
    return std::none_of(u->begin(), u->end(), [](const Disk& d) { return d.radius > 0.0; });
  }
  if (const auto* r = as_rect()) return r->empty();
  return as_disk()->radius <= 0.0;
}

bool Region::contains_closed(Point p) const {
  if (const auto* r = as_rect()) return r->contains_closed(p);
  if (const auto* d = as_disk()) return d->contains_closed(p);
  const auto& u = *as_union();
  return std::any_of(u.begin(), u.end(), [&](const Disk& d) { return d.contains_closed(p); });
}

bool Region::contains_open(Point p) const {
  if (const auto* r = as_rect()) return r->contains_open(p);
  if (const auto* d = as_disk()) return d->contains_open(p);
  const auto& u = *as_union();
  return std::any_of(u.begin(), u.end(), [&](const Disk& d) { return d.contains_open(p); });
}

Rect Region::bbox() const {
  if (const auto* r = as_rect()) return *r;
  if (const auto* d = as_disk()) return d->bbox();
  const auto& u = *as_union();
  if (u.empty()) return {0.0, 0.0, 0.0, 0.0};
  Rect box = u.front().bbox();
  for (const auto& d : u) {
    const Rect b = d.bbox();
    box = {std::min(box.x0, b.x0), std::min(box.y0, b.y0), std::max(box.x1, b.x1),
           std::max(box.y1, b.y1)};
  }
  return box;
}

Intervals Region::clip(Point p0, Point p1) const {
  if (const auto* r = as_rect()) return clip_segment(*r, p0, p1);
  if (const auto* d = as_disk()) return clip_segment(*d, p0, p1);
  Intervals all;
  for (const auto& d : *as_union()) {
    for (const auto& iv : clip_segment(d, p0, p1)) all.push_back(iv);
  }
  return merge_intervals(std::move(all));
}

namespace {

bool rect_inside(const Rect& inner, const Region& outer) {
  if (const auto* r = outer.as_rect()) return r->compactly_contains(inner);
  if (const auto* d = outer.as_disk()) {
    const Point corners[4] = {{inner.x0, inner.y0}, {inner.x1, inner.y0}, {inner.x0, inner.y1},
                              {inner.x1, inner.y1}};
    return std::all_of(std::begin(corners), std::end(corners),
                       [&](Point c) { return d->contains_open(c); });
  }
  return false;
}

bool disk_inside(const Disk& inner, const Region& outer) {
  if (inner.radius <= 0.0) return outer.contains_open(inner.center);
  if (const auto* r = outer.as_rect()) return r->compactly_contains(inner.bbox());
  if (const auto* d = outer.as_disk()) {
    return distance(inner.center, d->center) + inner.radius < d->radius;
  }
  return false;
}

}  // namespace

bool Region::compactly_inside(const Region& outer) const {
  if (const auto* r = as_rect()) return rect_inside(*r, outer);
  if (const auto* d = as_disk()) return disk_inside(*d, outer);
  const auto& u = *as_union();
  return std::all_of(u.begin(), u.end(), [&](const Disk& d) { return disk_inside(d, outer); });
}

}  // namespace perfolab
