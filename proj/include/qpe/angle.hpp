#pragma once

#include <optional>
#include <string>

#include "qpe/precision.hpp"

namespace qpe {

// Angle stored as an exact rational multiple of pi radians, so trig values can
// be re-evaluated at any precision from a context-precision pi constant.
struct PiRational {
  Rational coeff;  // angle = coeff * pi radians

  PiRational() : coeff(0) {}
  explicit PiRational(Rational c) : coeff(std::move(c)) {}
  PiRational(long num, long den) : coeff(num, den) { coeff.canonicalize(); }

  Real radians(const PrecisionContext& ctx) const {
    return Real(coeff, ctx) * Real::pi(ctx);
  }
  // one revolution = 2 pi radians
  Rational turns() const { return coeff / 2; }
  static PiRational from_turns(const Rational& t) { return PiRational(t * 2); }

  PiRational operator+(const PiRational& o) const { return PiRational(coeff + o.coeff); }
  PiRational operator-(const PiRational& o) const { return PiRational(coeff - o.coeff); }
  PiRational half() const { return PiRational(coeff / 2); }
  bool operator==(const PiRational& o) const { return coeff == o.coeff; }

  std::string to_string() const;
};

// Parses "7/16pi", "pi/8", "3pi/16", "2pi", "0".
std::optional<PiRational> parse_pi_angle(const std::string& text);

// p_x(alpha) = (1 + cos(alpha))/2 or p_y(alpha) = (1 + sin(alpha))/2.
enum class Component { kCos, kSin };

Real p_from_angle(const Real& alpha_radians, Component component);
inline Real p_from_angle(const PiRational& alpha, Component c, const PrecisionContext& ctx) {
  return p_from_angle(alpha.radians(ctx), c);
}

}  // namespace qpe
