#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace qpe {

using Rational = mpq_class;
using Integer = mpz_class;

// Parses decimal ("0.025", "1e-3") or fractional ("1/400") input exactly.
Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& q);

// Significand precision shared by all Real values created under it.
//
// Threshold comparisons made through the guarded helpers re-evaluate at
// doubled precision whenever the two sides differ by less than the guard
// band 2^-(bits/2).
class PrecisionContext {
 public:
  static constexpr int kDefaultBits = 256;
  static constexpr int kMinBits = 64;
  static constexpr int kMaxDoublings = 4;

  explicit PrecisionContext(int bits = kDefaultBits) : bits_(bits) {
    if (bits < kMinBits) throw std::invalid_argument("PrecisionContext: bits must be >= 64");
  }

  int bits() const { return bits_; }
  PrecisionContext doubled() const { return PrecisionContext(bits_ * 2); }

 private:
  int bits_;
};

// Arbitrary-precision real bound to the precision it was created with.
// Binary operations round to the wider operand's precision.
class Real {
 public:
  explicit Real(const PrecisionContext& ctx) { mpfr_init2(v_, ctx.bits()); }
  Real(long value, const PrecisionContext& ctx) {
    mpfr_init2(v_, ctx.bits());
    mpfr_set_si(v_, value, MPFR_RNDN);
  }
  Real(const Rational& value, const PrecisionContext& ctx) {
    mpfr_init2(v_, ctx.bits());
    mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
  }

  Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  Real(Real&& other) noexcept {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_swap(v_, other.v_);
  }
  Real& operator=(const Real& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  static Real from_double(double value, const PrecisionContext& ctx) {
    Real r(ctx);
    mpfr_set_d(r.v_, value, MPFR_RNDN);
    return r;
  }
  static Real from_integer(const Integer& value, const PrecisionContext& ctx) {
    Real r(ctx);
    mpfr_set_z(r.v_, value.get_mpz_t(), MPFR_RNDN);
    return r;
  }
  static Real pi(const PrecisionContext& ctx) {
    Real r(ctx);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  // 2^e at minimal precision; exact.
  static Real pow2(long e, const PrecisionContext& ctx) {
    Real r(ctx);
    mpfr_set_si_2exp(r.v_, 1, e, MPFR_RNDN);
    return r;
  }

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }
  int bits() const { return static_cast<int>(mpfr_get_prec(v_)); }
  PrecisionContext context() const { return PrecisionContext(bits()); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  // Exact comparisons (no rounding of the rational side).
  int cmp(const Real& other) const { return mpfr_cmp(v_, other.v_); }
  int cmp(const Rational& q) const { return mpfr_cmp_q(v_, q.get_mpq_t()); }
  int cmp(long value) const { return mpfr_cmp_si(v_, value); }

  bool operator<(const Real& o) const { return cmp(o) < 0; }
  bool operator<=(const Real& o) const { return cmp(o) <= 0; }
  bool operator>(const Real& o) const { return cmp(o) > 0; }
  bool operator>=(const Real& o) const { return cmp(o) >= 0; }
  bool operator==(const Real& o) const { return cmp(o) == 0; }

  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  friend Real operator+(Real a, const Real& b) { binop(a, b, mpfr_add); return a; }
  friend Real operator-(Real a, const Real& b) { binop(a, b, mpfr_sub); return a; }
  friend Real operator*(Real a, const Real& b) { binop(a, b, mpfr_mul); return a; }
  friend Real operator/(Real a, const Real& b) { binop(a, b, mpfr_div); return a; }
  friend Real operator-(Real a) { mpfr_neg(a.v_, a.v_, MPFR_RNDN); return a; }

  friend Real operator*(Real a, long b) { mpfr_mul_si(a.v_, a.v_, b, MPFR_RNDN); return a; }
  friend Real operator/(Real a, long b) { mpfr_div_si(a.v_, a.v_, b, MPFR_RNDN); return a; }
  friend Real operator+(Real a, long b) { mpfr_add_si(a.v_, a.v_, b, MPFR_RNDN); return a; }
  friend Real operator-(Real a, long b) { mpfr_sub_si(a.v_, a.v_, b, MPFR_RNDN); return a; }
  friend Real operator-(long a, Real b) { mpfr_si_sub(b.v_, a, b.v_, MPFR_RNDN); return b; }
  friend Real operator/(long a, Real b) { mpfr_si_div(b.v_, a, b.v_, MPFR_RNDN); return b; }

  friend Real abs(Real a) { mpfr_abs(a.v_, a.v_, MPFR_RNDN); return a; }
  friend Real sqrt(Real a) { mpfr_sqrt(a.v_, a.v_, MPFR_RNDN); return a; }
  friend Real exp(Real a) { mpfr_exp(a.v_, a.v_, MPFR_RNDN); return a; }
  friend Real log(Real a) { mpfr_log(a.v_, a.v_, MPFR_RNDN); return a; }
  friend Real log2(Real a) { mpfr_log2(a.v_, a.v_, MPFR_RNDN); return a; }
  friend Real sin(Real a) { mpfr_sin(a.v_, a.v_, MPFR_RNDN); return a; }
  friend Real cos(Real a) { mpfr_cos(a.v_, a.v_, MPFR_RNDN); return a; }
  friend Real pow_ui(Real a, unsigned long e) { mpfr_pow_ui(a.v_, a.v_, e, MPFR_RNDN); return a; }
  friend Real atan2(Real y, const Real& x) {
    binop(y, x, mpfr_atan2);
    return y;
  }
  friend Real min(const Real& a, const Real& b) { return a <= b ? a : b; }
  friend Real max(const Real& a, const Real& b) { return a >= b ? a : b; }

  Real at_precision(const PrecisionContext& ctx) const {
    Real r(ctx);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  // Decimal string that parses back to the same value at this precision.
  std::string to_string(int significant_digits = 0) const;

 private:
  using BinFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
  static void binop(Real& a, const Real& b, BinFn fn) {
    if (mpfr_get_prec(b.v_) > mpfr_get_prec(a.v_)) {
      mpfr_t tmp;
      mpfr_init2(tmp, mpfr_get_prec(b.v_));
      fn(tmp, a.v_, b.v_, MPFR_RNDN);
      mpfr_swap(a.v_, tmp);
      mpfr_clear(tmp);
    } else {
      fn(a.v_, a.v_, b.v_, MPFR_RNDN);
    }
  }

  mpfr_t v_;
};

// Outcome metadata for a guarded threshold comparison.
struct GuardInfo {
  int bits_used = 0;
  bool guard_exhausted = false;  // margin stayed inside the band after max doublings
  double margin = 0.0;           // value - threshold at the deciding precision
};

// True iff eval(ctx) <= threshold, re-evaluating at doubled precision while the
// margin lies inside the guard band 2^-(bits/2). After kMaxDoublings the
// comparison is decided by the last evaluation and flagged.
template <typename EvalFn>
bool guarded_leq(EvalFn&& eval, const Rational& threshold, PrecisionContext ctx,
                 GuardInfo* info = nullptr) {
  for (int round = 0;; ++round) {
    Real value = eval(ctx);
    Real margin = value - Real(threshold, ctx);
    Real band = Real::pow2(-(ctx.bits() / 2), ctx);
    bool inside_band = abs(margin).cmp(band) < 0 && !margin.is_zero();
    if (!inside_band || round >= PrecisionContext::kMaxDoublings) {
      if (info) {
        info->bits_used = ctx.bits();
        info->guard_exhausted = inside_band;
        info->margin = margin.to_double();
      }
      return margin.sign() <= 0;
    }
    ctx = ctx.doubled();
  }
}

// Largest integer <= eval(ctx), re-evaluating when the value sits within the
// guard band of an integer boundary.
template <typename EvalFn>
long guarded_floor(EvalFn&& eval, PrecisionContext ctx, GuardInfo* info = nullptr) {
  for (int round = 0;; ++round) {
    Real value = eval(ctx);
    Real f(ctx);
    mpfr_floor(f.raw(), value.raw());
    Real band = Real::pow2(-(ctx.bits() / 2), ctx);
    Real dist_down = value - f;
    Real dist_up = (f + 1) - value;
    bool risky = (dist_down.cmp(band) < 0 && !dist_down.is_zero()) || dist_up.cmp(band) < 0;
    if (!risky || round >= PrecisionContext::kMaxDoublings) {
      if (info) {
        info->bits_used = ctx.bits();
        info->guard_exhausted = risky;
        info->margin = dist_down.to_double();
      }
      return mpfr_get_si(f.raw(), MPFR_RNDN);
    }
    ctx = ctx.doubled();
  }
}

template <typename EvalFn>
long guarded_ceil(EvalFn&& eval, PrecisionContext ctx, GuardInfo* info = nullptr) {
  return -guarded_floor([&](const PrecisionContext& c) { return -eval(c); }, ctx, info);
}

}  // namespace qpe
