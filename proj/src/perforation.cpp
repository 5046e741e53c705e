#include "perfolab/perforation.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "perfolab/capacity.hpp"
#include "perfolab/errors.hpp"
#include "perfolab/parallel.hpp"

namespace perfolab {

GridLevel interior_cubes(const Rect& domain, int h) {
  if (h < 1) throw ValidationError("interior_cubes: h must be at least 1");
  GridLevel level{h, {}};
  const double hd = static_cast<double>(h);
  const int i0 = static_cast<int>(std::floor(domain.x0 * hd)), i1 = static_cast<int>(std::ceil(domain.x1 * hd));
  const int j0 = static_cast<int>(std::floor(domain.y0 * hd)), j1 = static_cast<int>(std::ceil(domain.y1 * hd));
  for (int i = i0; i <= i1; ++i) {
    for (int j = j0; j <= j1; ++j) {
      if (domain.compactly_contains(Box{h, i, j}.rect())) level.interior_indices.push_back({i, j});
    }
  }
  return level;
}

HoleFamily build_holes(const Rect& domain, const MeasureSpec& mu, const EllipticOperator& op, int h) {
  static RadiusCache cache;
  const GridLevel level = interior_cubes(domain, h);
  HoleFamily family{h, std::vector<Hole>(level.interior_indices.size()), op.fingerprint()};
  const double r = family.reference_radius();
  parallel_for(family.holes.size(), [&](std::size_t k) {
    const auto [i1, i2] = level.interior_indices[k];
    const Box box{h, i1, i2};
    Hole& hole = family.holes[k];
    hole.index = {i1, i2};
    hole.center = box.center();
    hole.mass = mass_on_box(mu, box);
    if (std::isinf(hole.mass)) throw ValidationError("build_holes: cube mass is infinite");
    hole.radius = hole.mass > 0.0 ? cache.radius(hole.mass, r, op, 1e-6, hole.center) : 0.0;
    if (!(hole.radius < r)) throw NumericalError("build_holes: hole radius does not fit its reference ball");
  });
  return family;
}

HolesReport holes_report(const HoleFamily& family, double mesh_spacing) {
  HolesReport rep;
  rep.cubes = family.holes.size();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& hole : family.holes) {
    rep.total_capacity += hole.mass;
    if (hole.radius <= 0.0) continue;
    ++rep.perforating;
    lo = std::min(lo, hole.radius);
    hi = std::max(hi, hole.radius);
    if (hole.radius < 2.0 * mesh_spacing) rep.resolvable = false;
  }
  rep.min_radius = rep.perforating > 0 ? lo : 0.0;
  rep.max_radius = hi;
  return rep;
}

std::string holes_to_json(const HoleFamily& family) {
  nlohmann::json j;
  j["h"] = family.h;
  j["operator"] = family.op_fingerprint;
  j["holes"] = nlohmann::json::array();
  for (const auto& hole : family.holes) {
    j["holes"].push_back({{"i", {hole.index[0], hole.index[1]}},
                          {"center", {hole.center.x, hole.center.y}},
                          {"radius", hole.radius},
                          {"mass", hole.mass}});
  }
  return j.dump(2) + "\n";
}

HoleFamily holes_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    HoleFamily family;
    family.h = j.at("h").get<int>();
    family.op_fingerprint = j.value("operator", std::string{});
    for (const auto& e : j.at("holes")) {
      Hole hole;
      hole.index = {e.at("i").at(0).get<int>(), e.at("i").at(1).get<int>()};
      hole.center = {e.at("center").at(0).get<double>(), e.at("center").at(1).get<double>()};
      hole.radius = e.at("radius").get<double>();
      hole.mass = e.at("mass").get<double>();
      family.holes.push_back(hole);
    }
    return family;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("hole family JSON: ") + e.what());
  }
}

}  // namespace perfolab
