#include "qpe/precision.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <vector>

namespace qpe {

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw std::invalid_argument("empty rational");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational q(s);
    q.canonicalize();
    return q;
  }

  // decimal with optional exponent: [-]ddd[.ddd][e[-]dd]
  long exp10 = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    exp10 = std::stol(s.substr(epos + 1));
    s = s.substr(0, epos);
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    exp10 -= static_cast<long>(s.size() - dot - 1);
    s.erase(dot, 1);
  }
  if (s.empty() || s == "-" || s == "+") throw std::invalid_argument("bad rational: " + text);
  Rational q(Integer(s, 10));
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(exp10)));
  if (exp10 >= 0)
    q *= Rational(scale);
  else
    q /= Rational(scale);
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& q) {
  return q.get_str();
}

std::string Real::to_string(int significant_digits) const {
  if (significant_digits <= 0) {
    // round-trip digits for this precision
    significant_digits = static_cast<int>(bits() * 0.30103) + 2;
  }
  char fmt[32];
  std::snprintf(fmt, sizeof fmt, "%%.%dRg", significant_digits);
  char* out = nullptr;
  mpfr_asprintf(&out, fmt, v_);
  std::string s(out);
  mpfr_free_str(out);
  return s;
}

}  // namespace qpe
