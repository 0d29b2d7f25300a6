#include "glspace/exponent_grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "glspace/error.hpp"
#include "glspace/numeric.hpp"

namespace glspace {

std::string to_string(Spacing s) {
  switch (s) {
    case Spacing::geometric: return "geometric";
    case Spacing::log: return "log";
    case Spacing::linear: return "linear";
  }
  return "?";
}

Spacing spacing_from_string(const std::string& s) {
  if (s == "geometric") return Spacing::geometric;
  if (s == "log") return Spacing::log;
  if (s == "linear") return Spacing::linear;
  throw ConfigError("unknown grid spacing '" + s + "'");
}

namespace {

// Offsets d_k from d_min to d_max, geometric.
std::vector<double> offsets(double d_min, double d_max, std::size_t n) {
  if (n < 2) return {d_max};
  return logspace(d_min, d_max, n);
}

}  // namespace

std::vector<double> ExponentGrid::points() const {
  if (!(start >= 0.0) || !(stop > start)) throw ConfigError("exponent grid: need start < stop");
  if (count == 0) throw ConfigError("exponent grid: count must be positive");
  if (!(infinity_cap > start)) throw ConfigError("exponent grid: infinity cap must exceed start");
  const double top = std::min(stop, infinity_cap);
  std::vector<double> pts;
  switch (spacing) {
    case Spacing::linear:
      pts = linspace(start, top, count);
      break;
    case Spacing::log:
      if (start <= 0.0) throw ConfigError("log grid needs a positive start");
      pts = logspace(start, top, count);
      break;
    case Spacing::geometric: {
      if (count == 1) {
        pts = {std::isfinite(stop) ? 0.5 * (start + stop) : start + 1.0};
        break;
      }
      const std::size_t half = (count + 1) / 2;
      if (std::isfinite(stop) && stop <= infinity_cap) {
        const double width = stop - start;
        for (double d : offsets(endpoint_offset * width, 0.5 * width, half)) {
          pts.push_back(start + d);
          pts.push_back(stop - d);
        }
      } else {
        const double mid = start + 1.0;
        for (double d : offsets(endpoint_offset, 1.0, half)) pts.push_back(start + d);
        if (mid < infinity_cap)
          for (double p : logspace(mid, infinity_cap, count - half + 1)) pts.push_back(p);
      }
      break;
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

ExponentGrid parse_exponent_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() < 3 || parts.size() > 4)
    throw ConfigError("grid spec must be start:stop:count[:spacing], got '" + text + "'");
  ExponentGrid g;
  try {
    g.start = std::stod(parts[0]);
    g.stop = (parts[1] == "inf") ? kInf : std::stod(parts[1]);
    const long n = std::stol(parts[2]);
    if (n <= 0) throw ConfigError("grid count must be positive");
    g.count = static_cast<std::size_t>(n);
  } catch (const std::logic_error&) {
    throw ConfigError("malformed grid spec '" + text + "'");
  }
  if (parts.size() == 4) g.spacing = spacing_from_string(parts[3]);
  return g;
}

}  // namespace glspace
