#include "perfolab/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "perfolab/grid.hpp"

namespace perfolab {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

/// Decimal number or fraction a/b.
double number(const std::string& text) {
  const std::string s = trim(text);
  auto plain = [](const std::string& t) {
    std::size_t pos = 0;
    const double v = std::stod(t, &pos);
    if (pos != t.size()) throw std::invalid_argument(t);
    return v;
  };
  try {
    if (const auto slash = s.find('/'); slash != std::string::npos) {
      const double den = plain(trim(s.substr(slash + 1)));
      if (den == 0.0) throw std::invalid_argument(s);
      return plain(trim(s.substr(0, slash))) / den;
    }
    return plain(s);
  } catch (const std::exception&) {
    throw ValidationError("not a number: '" + s + "'");
  }
}

std::vector<double> numbers(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(number(part));
  return out;
}

/// name(arg, ...) or bare name.
std::pair<std::string, std::vector<double>> call(const std::string& text) {
  const std::string s = trim(text);
  const auto open = s.find('(');
  if (open == std::string::npos) return {lower(s), {}};
  if (s.back() != ')') throw ValidationError("unbalanced parentheses in '" + s + "'");
  return {lower(trim(s.substr(0, open))), numbers(s.substr(open + 1, s.size() - open - 2))};
}

/// (a, b, ...); (a, b, ...) with a fixed arity.
std::vector<std::vector<double>> tuples(const std::string& text, std::size_t arity) {
  std::vector<std::vector<double>> out;
  for (const auto& part : split(text, ';')) {
    if (part.empty()) continue;
    if (part.front() != '(' || part.back() != ')') throw ValidationError("expected a tuple '(...)', got '" + part + "'");
    auto v = numbers(part.substr(1, part.size() - 2));
    if (v.size() != arity) {
      std::ostringstream os;
      os << "tuple '" << part << "' has " << v.size() << " entries, expected " << arity;
      throw ValidationError(os.str());
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::string fmt_point(double x, double y) {
  std::ostringstream os;
  os << "(" << x << ", " << y << ")";
  return os.str();
}

const std::map<std::string, std::vector<std::string>>& grammar() {
  static const std::map<std::string, std::vector<std::string>> g = {
      {"domain", {"rect"}},
      {"operator", {"type", "a11", "a12", "a22", "value", "a", "b", "k", "base", "slope", "center", "exponent", "alpha"}},
      {"measure", {"density", "cap", "atoms", "segments"}},
      {"load", {"f"}},
      {"sweep", {"h", "spacing", "spacings", "mode", "seed", "rel_tol", "pin_nearest"}},
  };
  return g;
}

class Parser {
 public:
  explicit Parser(const std::string& text) { read(text); }

  ScenarioConfig build() {
    ScenarioConfig cfg;
    domain(cfg);
    op(cfg);
    measure(cfg);
    load(cfg);
    sweep(cfg);
    if (!errors_.empty()) throw ConfigError(errors_);
    return cfg;
  }

 private:
  void read(const std::string& text) {
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const std::string s = trim(raw);
      if (s.empty() || s[0] == '#' || s[0] == ';') continue;
      if (s.front() == '[') {
        if (s.back() != ']') {
          error(line, "malformed section header '" + s + "'");
          continue;
        }
        section = lower(trim(s.substr(1, s.size() - 2)));
        if (!grammar().count(section)) error(line, "unknown section [" + section + "]");
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        error(line, "expected 'key = value', got '" + s + "'");
        continue;
      }
      if (section.empty()) {
        error(line, "key outside of any section");
        continue;
      }
      if (!grammar().count(section)) continue;
      const std::string key = lower(trim(s.substr(0, eq)));
      const auto& keys = grammar().at(section);
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        error(line, "unknown key '" + key + "' in [" + section + "]");
        continue;
      }
      auto& sec = sections_[section];
      if (sec.count(key)) {
        error(line, "duplicate key '" + key + "' in [" + section + "]");
        continue;
      }
      sec[key] = Entry{trim(s.substr(eq + 1)), line, false};
    }
  }

  void error(int line, const std::string& what) {
    std::ostringstream os;
    if (line > 0) os << "line " << line << ": ";
    os << what;
    errors_.push_back(os.str());
  }

  Entry* find(const std::string& section, const std::string& key) {
    auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    auto e = s->second.find(key);
    return e == s->second.end() ? nullptr : &e->second;
  }

  template <class Fn>
  void with(const std::string& section, const std::string& key, Fn&& fn) {
    if (Entry* e = find(section, key)) {
      try {
        fn(*e);
      } catch (const ValidationError& ex) {
        error(e->line, key + ": " + ex.what());
      }
    }
  }

  int line_of(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    return e ? e->line : 0;
  }

  void domain(ScenarioConfig& cfg) {
    with("domain", "rect", [&](Entry& e) {
      const auto v = numbers(e.value);
      if (v.size() != 4) throw ValidationError("expected x0, y0, x1, y1");
      if (!(v[2] > v[0] && v[3] > v[1])) throw ValidationError("rectangle must have x1 > x0 and y1 > y0");
      cfg.domain = Rect{v[0], v[1], v[2], v[3]};
    });
  }

  double get(const std::string& key, double fallback) {
    double out = fallback;
    with("operator", key, [&](Entry& e) { out = number(e.value); });
    return out;
  }

  void op(ScenarioConfig& cfg) {
    std::string type = "laplace";
    with("operator", "type", [&](Entry& e) { type = lower(e.value); });
    const double alpha = get("alpha", 1.0);
    Point center{0.5, 0.5};
    with("operator", "center", [&](Entry& e) {
      const auto v = numbers(e.value);
      if (v.size() != 2) throw ValidationError("expected x, y");
      center = {v[0], v[1]};
    });
    try {
      if (type == "laplace") {
        cfg.op = EllipticOperator(LaplaceCoefficient{}, alpha, cfg.domain);
      } else if (type == "matrix") {
        cfg.op = EllipticOperator(MatrixCoefficient{Sym2{get("a11", 1.0), get("a12", 0.0), get("a22", 1.0)}}, alpha,
                                  cfg.domain);
      } else if (type == "scalar") {
        cfg.op = EllipticOperator(ScalarConstant{get("value", 1.0)}, alpha, cfg.domain);
      } else if (type == "checkerboard") {
        cfg.op = EllipticOperator(
            ScalarCheckerboard{get("a", 1.0), get("b", 1.0), static_cast<int>(get("k", 1.0))}, alpha, cfg.domain);
      } else if (type == "radial") {
        cfg.op = EllipticOperator(ScalarRadial{get("base", 1.0), get("slope", 0.0), center, get("exponent", 1.0)},
                                  alpha, cfg.domain);
      } else {
        error(line_of("operator", "type"), "unknown operator type '" + type + "'");
      }
    } catch (const ValidationError& ex) {
      const int line = line_of("operator", "alpha") ? line_of("operator", "alpha") : line_of("operator", "type");
      error(line, std::string("operator: ") + ex.what());
    }
  }

  void measure(ScenarioConfig& cfg) {
    MeasureSpec mu = MeasureSpec::zero(cfg.domain);
    with("measure", "density", [&](Entry& e) {
      const auto [name, a] = call(e.value);
      auto need = [&](std::size_t n) {
        if (a.size() != n) throw ValidationError(name + " takes " + std::to_string(n) + " arguments");
      };
      if (name == "zero") {
        need(0);
      } else if (name == "constant") {
        need(1);
        mu.density.kind = ConstantDensity{a[0]};
      } else if (name == "radial") {
        need(4);
        mu.density.kind = RadialDensity{a[0], {a[1], a[2]}, a[3]};
      } else if (name == "checkerboard") {
        need(3);
        mu.density.kind = CheckerboardDensity{a[0], a[1], static_cast<int>(a[2])};
      } else {
        throw ValidationError("unknown density '" + name + "'");
      }
    });
    with("measure", "cap", [&](Entry& e) {
      mu.density.cap = number(e.value);
      if (!(mu.density.cap > 0.0)) throw ValidationError("truncation level must be positive");
    });
    with("measure", "atoms", [&](Entry& e) {
      for (const auto& t : tuples(e.value, 3)) {
        if (!cfg.domain.contains_open({t[0], t[1]})) {
          error(e.line, "atom outside Ω: " + fmt_point(t[0], t[1]));
          continue;
        }
        if (!(t[2] >= 0.0)) {
          error(e.line, "atom mass must be nonnegative at " + fmt_point(t[0], t[1]));
          continue;
        }
        mu.atoms.push_back({{t[0], t[1]}, t[2]});
      }
    });
    with("measure", "segments", [&](Entry& e) {
      for (const auto& t : tuples(e.value, 5)) {
        if (!cfg.domain.contains_open({t[0], t[1]}) || !cfg.domain.contains_open({t[2], t[3]})) {
          error(e.line, "segment outside Ω: " + fmt_point(t[0], t[1]) + " - " + fmt_point(t[2], t[3]));
          continue;
        }
        mu.segments.push_back({{t[0], t[1]}, {t[2], t[3]}, t[4]});
      }
    });
    try {
      mu.validate();
    } catch (const ValidationError& ex) {
      error(line_of("measure", "density"), std::string("measure: ") + ex.what());
    }
    cfg.measure = mu;
  }

  void load(ScenarioConfig& cfg) {
    cfg.load = LoadSpec::product_sine(cfg.domain, 1.0);
    with("load", "f", [&](Entry& e) {
      const auto [name, a] = call(e.value);
      if (name == "constant" && a.size() == 1) {
        cfg.load = LoadSpec::constant(a[0]);
      } else if ((name == "product_sine" || name == "product-sine") && a.size() <= 1) {
        cfg.load = LoadSpec::product_sine(cfg.domain, a.empty() ? 1.0 : a[0]);
      } else if (name == "bump" && a.size() == 4) {
        if (!(a[3] > 0.0)) throw ValidationError("bump radius must be positive");
        cfg.load = LoadSpec::bump({a[1], a[2]}, a[3], a[0]);
      } else {
        throw ValidationError("expected constant(v), product_sine(a) or bump(a, cx, cy, R), got '" + e.value + "'");
      }
    });
  }

  void sweep(ScenarioConfig& cfg) {
    with("sweep", "h", [&](Entry& e) {
      for (double v : numbers(e.value)) {
        if (v != std::floor(v) || v < 1.0) throw ValidationError("h values must be positive integers");
        cfg.h_list.push_back(static_cast<int>(v));
      }
      for (std::size_t i = 1; i < cfg.h_list.size(); ++i) {
        if (cfg.h_list[i] <= cfg.h_list[i - 1]) throw ValidationError("h-list must be strictly increasing");
      }
    });
    if (!find("sweep", "h")) error(0, "[sweep] h is required");
    if (find("sweep", "spacing") && find("sweep", "spacings")) {
      error(line_of("sweep", "spacings"), "give either spacing or spacings, not both");
    }
    double global = 1.0 / 256.0;
    with("sweep", "spacing", [&](Entry& e) { global = number(e.value); });
    cfg.spacings.assign(cfg.h_list.size(), global);
    with("sweep", "spacings", [&](Entry& e) {
      cfg.spacings = numbers(e.value);
      if (cfg.spacings.size() != cfg.h_list.size()) throw ValidationError("need one spacing per h");
    });
    for (double s : cfg.spacings) {
      try {
        (void)Grid::on_rect(cfg.domain, s);
      } catch (const ValidationError& ex) {
        const int line = line_of("sweep", "spacings") ? line_of("sweep", "spacings") : line_of("sweep", "spacing");
        error(line, ex.what());
        break;
      }
    }
    with("sweep", "mode", [&](Entry& e) {
      const std::string m = lower(e.value);
      if (m == "classic") {
        cfg.mode = SweepMode::kClassic;
      } else if (m == "singular") {
        cfg.mode = SweepMode::kSingular;
      } else if (m == "corrector-only" || m == "corrector_only") {
        cfg.mode = SweepMode::kCorrectorOnly;
      } else {
        throw ValidationError("mode must be classic, singular or corrector-only");
      }
    });
    with("sweep", "seed", [&](Entry& e) {
      try {
        std::size_t pos = 0;
        cfg.seed = std::stoull(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument(e.value);
      } catch (const std::exception&) {
        throw ValidationError("seed must be a nonnegative integer");
      }
    });
    with("sweep", "rel_tol", [&](Entry& e) {
      cfg.rel_tol = number(e.value);
      if (!(cfg.rel_tol > 0.0 && cfg.rel_tol < 1.0)) throw ValidationError("rel_tol must lie in (0, 1)");
    });
    with("sweep", "pin_nearest", [&](Entry& e) {
      const std::string v = lower(e.value);
      if (v == "true" || v == "1" || v == "yes") {
        cfg.pin_nearest = true;
      } else if (v == "false" || v == "0" || v == "no") {
        cfg.pin_nearest = false;
      } else {
        throw ValidationError("expected true or false");
      }
    });
  }

  std::map<std::string, Section> sections_;
  std::vector<std::string> errors_;
};

std::string join(const std::vector<std::string>& errors) {
  std::string out = "invalid config";
  for (const auto& e : errors) out += "\n  " + e;
  return out;
}

}  // namespace

double parse_number(const std::string& text) { return number(text); }

std::string mode_name(SweepMode m) {
  switch (m) {
    case SweepMode::kClassic:
      return "classic";
    case SweepMode::kSingular:
      return "singular";
    case SweepMode::kCorrectorOnly:
      return "corrector-only";
  }
  return "classic";
}

double ScenarioConfig::finest_spacing() const {
  return spacings.empty() ? 1.0 / 256.0 : *std::min_element(spacings.begin(), spacings.end());
}

ConfigError::ConfigError(std::vector<std::string> errors) : ValidationError(join(errors)), errors_(std::move(errors)) {}

ScenarioConfig parse_config(const std::string& text) { return Parser(text).build(); }

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

}  // namespace perfolab
