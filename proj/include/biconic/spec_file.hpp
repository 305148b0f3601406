#pragma once

// Surface spec files: flat "key: value" lines, '#' comments.
//
//   name: paper-dp2
//   q:  1, 2, 0, 0, 0, 0      coefficients of x^2, y^2, z^2, xy, xz, yz
//   r1: 0, -2, 1, 0, 0, 0
//   r2: 0, 2, 1, 0, 0, 0
//   seed: 0, 1, 1, -1         optional point [x:y:z:w]

#include <array>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "biconic/surface.hpp"

namespace biconic {

struct SurfaceSpec {
  std::string name;
  TernaryQuadraticForm q, r1, r2;
  std::optional<std::array<Rational, 4>> seed;

  BiConicSurface surface() const { return build_surface(q, r1, r2, name); }

  /// The seed as a surface point; it must satisfy the equation.
  SurfacePoint seed_point() const {
    require(seed.has_value(), ErrorKind::InvalidArgument, "spec '" + name + "' has no seed point");
    const auto& s = *seed;
    SurfacePoint P = SurfacePoint::from_rationals(s[0], s[1], s[2], s[3]);
    require(surface().contains(P), ErrorKind::PointNotOnSurface, "seed " + P.to_string() + " of '" + name + "' is not on the surface");
    return P;
  }
};

namespace detail {

inline std::string trim(const std::string& s, size_t& offset) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) {
    offset = s.size();
    return "";
  }
  size_t b = s.find_last_not_of(" \t\r");
  offset = a;
  return s.substr(a, b - a + 1);
}

/// Comma-separated rationals starting at 1-based column col.
inline std::vector<Rational> parse_list(const std::string& field, const std::string& text, int line, int col,
                                        size_t expected) {
  std::vector<Rational> out;
  size_t pos = 0;
  for (;;) {
    size_t comma = text.find(',', pos);
    std::string raw = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    size_t off = 0;
    std::string tok = trim(raw, off);
    int c = col + static_cast<int>(pos + off);
    if (tok.empty()) throw ParseError(line, c, "field '" + field + "': empty entry");
    auto r = parse_rational(tok);
    if (!r) throw ParseError(line, c, "field '" + field + "': '" + tok + "' is not a rational number");
    out.push_back(*r);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() != expected)
    throw ParseError(line, col, "field '" + field + "' expects " + std::to_string(expected) + " values, got " +
                                    std::to_string(out.size()));
  return out;
}

}  // namespace detail

inline SurfaceSpec parse_spec(const std::string& text) {
  SurfaceSpec spec;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    size_t hash = raw.find('#');
    std::string body = raw.substr(0, hash);
    size_t off = 0;
    std::string content = detail::trim(body, off);
    if (content.empty()) continue;
    int col = static_cast<int>(off) + 1;
    size_t colon = body.find(':', off);
    if (colon == std::string::npos) throw ParseError(line, col, "expected 'key: value'");
    size_t koff = 0;
    std::string key = detail::trim(body.substr(off, colon - off), koff);
    std::string rest = body.substr(colon + 1);
    size_t voff = 0;
    std::string value = detail::trim(rest, voff);
    int vcol = static_cast<int>(colon + 1 + voff) + 1;
    if (!seen.insert(key).second) throw ParseError(line, col, "duplicate key '" + key + "'");
    if (key == "name") {
      if (value.empty()) throw ParseError(line, vcol, "field 'name' is empty");
      spec.name = value;
    } else if (key == "q" || key == "r1" || key == "r2") {
      auto v = detail::parse_list(key, value, line, vcol, 6);
      TernaryQuadraticForm& Q = key == "q" ? spec.q : key == "r1" ? spec.r1 : spec.r2;
      for (size_t i = 0; i < 6; ++i) Q.c[i] = v[i];
    } else if (key == "seed") {
      auto v = detail::parse_list(key, value, line, vcol, 4);
      spec.seed = std::array<Rational, 4>{v[0], v[1], v[2], v[3]};
    } else {
      throw ParseError(line, col, "unknown key '" + key + "'");
    }
  }
  for (const char* k : {"q", "r1", "r2"})
    if (!seen.count(k)) throw ParseError(line + 1, 1, std::string("missing field '") + k + "'");
  if (spec.name.empty()) spec.name = "unnamed";
  return spec;
}

inline SurfaceSpec load_spec(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::InvalidArgument, "cannot read spec file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_spec(ss.str());
}

inline std::string coefficient_list(const TernaryQuadraticForm& Q) {
  std::string out;
  for (size_t i = 0; i < 6; ++i) out += (i ? ", " : "") + Q.c[i].get_str();
  return out;
}

inline std::string format_spec(const SurfaceSpec& s) {
  std::string out = "name: " + s.name + "\n";
  out += "q: " + coefficient_list(s.q) + "\n";
  out += "r1: " + coefficient_list(s.r1) + "\n";
  out += "r2: " + coefficient_list(s.r2) + "\n";
  if (s.seed) {
    out += "seed: ";
    for (size_t i = 0; i < 4; ++i) out += (i ? ", " : "") + (*s.seed)[i].get_str();
    out += "\n";
  }
  return out;
}

}  // namespace biconic
