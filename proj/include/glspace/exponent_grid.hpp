#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace glspace {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Spacing { geometric, log, linear };

std::string to_string(Spacing s);
Spacing spacing_from_string(const std::string& s);

// Exponent sampling of an interval (start, stop).
//  geometric: open interval, clustered geometrically toward every finite endpoint and
//             log-spaced toward an infinite one (truncated at infinity_cap).
//  log, linear: closed interval with both endpoints included.
struct ExponentGrid {
  double start = 1.0;
  double stop = kInf;
  std::size_t count = 64;
  Spacing spacing = Spacing::geometric;
  double infinity_cap = 1e3;
  double endpoint_offset = 1e-6;  // closest approach, relative to the interval width

  std::vector<double> points() const;
};

// Parses "start:stop:count:spacing" (spacing optional, "inf" accepted for stop).
ExponentGrid parse_exponent_grid(const std::string& text);

}  // namespace glspace
