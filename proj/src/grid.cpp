#include "perfolab/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "perfolab/errors.hpp"

namespace perfolab {

Grid::Grid(Point origin, double spacing, std::size_t nx, std::size_t ny, int parity)
    : origin_(origin), spacing_(spacing), nx_(nx), ny_(ny), parity_(((parity % 2) + 2) % 2) {
  if (!(spacing > 0.0) || nx < 2 || ny < 2) {
    throw ValidationError("grid needs a positive spacing and at least 2x2 nodes");
  }
}

Grid Grid::on_rect(const Rect& r, double spacing) {
  if (!(spacing > 0.0) || r.empty()) throw ValidationError("invalid rectangle or spacing for mesh");
  const double cx = r.width() / spacing, cy = r.height() / spacing;
  const double rx = std::round(cx), ry = std::round(cy);
  if (std::abs(cx - rx) > 1e-9 * std::max(1.0, cx) || std::abs(cy - ry) > 1e-9 * std::max(1.0, cy) ||
      rx < 1.0 || ry < 1.0) {
    std::ostringstream os;
    os << "mesh spacing " << spacing << " does not divide the rectangle sides " << r.width() << " x "
       << r.height();
    throw ValidationError(os.str());
  }
  return Grid({r.x0, r.y0}, spacing, static_cast<std::size_t>(rx) + 1, static_cast<std::size_t>(ry) + 1, 0);
}

Grid Grid::covering(const Rect& box, double spacing, Point anchor) {
  if (!(spacing > 0.0)) throw ValidationError("spacing must be positive");
  const auto lo_x = static_cast<long long>(std::floor((box.x0 - anchor.x) / spacing + 1e-9));
  const auto hi_x = static_cast<long long>(std::ceil((box.x1 - anchor.x) / spacing - 1e-9));
  const auto lo_y = static_cast<long long>(std::floor((box.y0 - anchor.y) / spacing + 1e-9));
  const auto hi_y = static_cast<long long>(std::ceil((box.y1 - anchor.y) / spacing - 1e-9));
  const Point origin{anchor.x + static_cast<double>(lo_x) * spacing,
                     anchor.y + static_cast<double>(lo_y) * spacing};
  return Grid(origin, spacing, static_cast<std::size_t>(std::max(1LL, hi_x - lo_x)) + 1,
              static_cast<std::size_t>(std::max(1LL, hi_y - lo_y)) + 1, static_cast<int>(((lo_x + lo_y) % 2 + 2) % 2));
}

Rect Grid::extent() const {
  const Point hi = node(nx_ - 1, ny_ - 1);
  return {origin_.x, origin_.y, hi.x, hi.y};
}

std::array<std::array<std::size_t, 3>, 2> Grid::cell_triangles(std::size_t ci, std::size_t cj) const {
  const std::size_t a = index(ci, cj), b = index(ci + 1, cj), c = index(ci + 1, cj + 1),
                    d = index(ci, cj + 1);
  if (rising_diagonal(ci, cj)) return {{{a, b, c}, {a, c, d}}};
  return {{{a, b, d}, {b, c, d}}};
}

Grid::Location Grid::locate(Point p) const {
  const double fx = (p.x - origin_.x) / spacing_;
  const double fy = (p.y - origin_.y) / spacing_;
  const auto cx = static_cast<double>(nx_ - 2), cy = static_cast<double>(ny_ - 2);
  const double ci_f = std::clamp(std::floor(fx), 0.0, cx);
  const double cj_f = std::clamp(std::floor(fy), 0.0, cy);
  const double u = std::clamp(fx - ci_f, 0.0, 1.0);
  const double v = std::clamp(fy - cj_f, 0.0, 1.0);
  const auto ci = static_cast<std::size_t>(ci_f), cj = static_cast<std::size_t>(cj_f);
  const std::size_t a = index(ci, cj), b = index(ci + 1, cj), c = index(ci + 1, cj + 1),
                    d = index(ci, cj + 1);
  if (rising_diagonal(ci, cj)) {
    if (u >= v) return {{a, b, c}, {1.0 - u, u - v, v}};
    return {{a, c, d}, {1.0 - v, u, v - u}};
  }
  if (u + v <= 1.0) return {{a, b, d}, {1.0 - u - v, u, v}};
  return {{b, c, d}, {1.0 - v, u + v - 1.0, 1.0 - u}};
}

double Field::at(Point p) const {
  const auto loc = grid.locate(p);
  return loc.weights[0] * values[loc.nodes[0]] + loc.weights[1] * values[loc.nodes[1]] +
         loc.weights[2] * values[loc.nodes[2]];
}

// Field files ------------------------------------------------------------------

void write_field_csv(const Field& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  out << std::setprecision(17);
  out << f.grid.nx() << ',' << f.grid.ny() << ',' << f.grid.spacing() << ',' << f.grid.origin().x << ','
      << f.grid.origin().y << '\n';
  for (std::size_t j = 0; j < f.grid.ny(); ++j) {
    for (std::size_t i = 0; i < f.grid.nx(); ++i) {
      if (i > 0) out << ',';
      out << f.values[f.grid.index(i, j)];
    }
    out << '\n';
  }
  if (!out) throw IoError(path, "write failed");
}

Field read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open for reading");
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) parts.push_back(tok);
    return parts;
  };
  if (!std::getline(in, line)) throw IoError(path, "missing header");
  const auto head = split(line);
  if (head.size() != 5) throw IoError(path, "malformed header");
  const auto nx = static_cast<std::size_t>(std::stoull(head[0]));
  const auto ny = static_cast<std::size_t>(std::stoull(head[1]));
  Field f(Grid({std::stod(head[3]), std::stod(head[4])}, std::stod(head[2]), nx, ny));
  for (std::size_t j = 0; j < ny; ++j) {
    if (!std::getline(in, line)) throw IoError(path, "truncated field");
    const auto row = split(line);
    if (row.size() != nx) throw IoError(path, "row has wrong length");
    for (std::size_t i = 0; i < nx; ++i) f.values[f.grid.index(i, j)] = std::stod(row[i]);
  }
  return f;
}

namespace {

template <class T>
void put_le(std::ostream& out, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get_le(std::istream& in, const std::string& path) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) throw IoError(path, "truncated binary field");
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

constexpr char kMagic[4] = {'P', 'L', 'F', 'D'};

}  // namespace

void write_field_binary(const Field& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  out.write(kMagic, 4);
  put_le<std::uint32_t>(out, 1);
  put_le<std::uint64_t>(out, f.grid.nx());
  put_le<std::uint64_t>(out, f.grid.ny());
  put_le<double>(out, f.grid.spacing());
  put_le<double>(out, f.grid.origin().x);
  put_le<double>(out, f.grid.origin().y);
  for (double v : f.values) put_le<double>(out, v);
  if (!out) throw IoError(path, "write failed");
}

Field read_field_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw IoError(path, "not a field file");
  if (get_le<std::uint32_t>(in, path) != 1) throw IoError(path, "unsupported field version");
  const auto nx = get_le<std::uint64_t>(in, path);
  const auto ny = get_le<std::uint64_t>(in, path);
  const double s = get_le<double>(in, path);
  const double ox = get_le<double>(in, path);
  const double oy = get_le<double>(in, path);
  Field f(Grid({ox, oy}, s, nx, ny));
  for (double& v : f.values) v = get_le<double>(in, path);
  return f;
}

}  // namespace perfolab
