#include "qpe/angle.hpp"

namespace qpe {

std::string PiRational::to_string() const {
  if (coeff == 0) return "0";
  const Integer num = coeff.get_num();
  const Integer den = coeff.get_den();
  std::string s;
  if (num == 1)
    s = "pi";
  else if (num == -1)
    s = "-pi";
  else
    s = num.get_str() + "pi";
  if (den != 1) s += "/" + den.get_str();
  return s;
}

std::optional<PiRational> parse_pi_angle(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(c));
  if (s.empty()) return std::nullopt;
  if (s == "0") return PiRational(0, 1);

  auto pip = s.find("pi");
  if (pip == std::string::npos) return std::nullopt;
  std::string before = s.substr(0, pip);   // "7/16", "3", "", "-"
  std::string after = s.substr(pip + 2);   // "", "/8"

  Rational num(1);
  if (before == "-")
    num = -1;
  else if (!before.empty()) {
    if (before.back() == '*') before.pop_back();
    try {
      num = parse_rational(before);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  Rational den(1);
  if (!after.empty()) {
    if (after.front() != '/') return std::nullopt;
    try {
      den = parse_rational(after.substr(1));
    } catch (const std::exception&) {
      return std::nullopt;
    }
    if (den == 0) return std::nullopt;
  }
  return PiRational(num / den);
}

Real p_from_angle(const Real& alpha_radians, Component component) {
  Real t = component == Component::kCos ? cos(alpha_radians) : sin(alpha_radians);
  return (t + 1L) / 2L;
}

}  // namespace qpe
