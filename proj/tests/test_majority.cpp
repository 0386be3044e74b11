#include <doctest.h>

#include "qpe/schemes.hpp"

using namespace qpe;

namespace {
const PrecisionContext ctx;
}

TEST_CASE("majority_quantize corners and case order") {
  for (long n : {1L, 3L, 4L, 9L}) {
    CHECK(majority_quantize(n, n, n) == MajorityLabel::k00);
    CHECK(majority_quantize(0, 0, n) == MajorityLabel::k10);
    CHECK(majority_quantize(0, n, n) == MajorityLabel::k01);
    CHECK(majority_quantize(n, 0, n) == MajorityLabel::k11);
  }
  // even n: the central count pair falls through to .11
  CHECK(majority_quantize(2, 2, 4) == MajorityLabel::k11);
}

TEST_CASE("quantization partitions rotate by quarter turns") {
  // (n_x, n_y) -> (n_y, n - n_x) advances the label by one quarter turn
  auto next = [](MajorityLabel l) {
    return static_cast<MajorityLabel>((static_cast<int>(l) + 1) & 3);
  };
  for (long n : {3L, 4L}) {
    for (long i = 0; i <= n; ++i)
      for (long j = 0; j <= n; ++j)
        CHECK(majority_quantize(j, n - i, n) == next(majority_quantize(i, j, n)));
  }
}

TEST_CASE("majority_error at alpha = 0 is exactly 2^-n") {
  for (long n : {1L, 2L, 5L, 12L}) {
    Real err = majority_error(n, PiRational(0, 1), MajoritySetKind::kReduced, ctx);
    CHECK(err.cmp(Rational(1, Integer(1) << n)) == 0);
  }
}

TEST_CASE("reduced error stays below 2^(1-n); full below reduced") {
  for (long n = 1; n <= 12; ++n) {
    Rational cap(2, Integer(1) << n);
    for (int g = 0; g <= 100; ++g) {
      Real alpha = Real::pi(ctx) / 2L * g / 100L;
      Real reduced = majority_error(n, alpha, MajoritySetKind::kReduced);
      Real full = majority_error(n, alpha, MajoritySetKind::kFull);
      CHECK(reduced.cmp(cap) <= 0);
      CHECK(full.cmp(reduced) <= 0);
    }
  }
}

TEST_CASE("majority_error n=1 closed form at pi/4") {
  // K_1 = {(1,1)}: error = 1 - p_x p_y
  Real err = majority_error(1, PiRational(1, 4), MajoritySetKind::kReduced, ctx);
  Real px = p_from_angle(PiRational(1, 4), Component::kCos, ctx);
  Real py = p_from_angle(PiRational(1, 4), Component::kSin, ctx);
  CHECK(abs(err - (Real(1, ctx) - px * py)).to_double() < 1e-70);
  CHECK(std::fabs(err.to_double() - 0.271446609407) < 1e-12);
}

TEST_CASE("reduced error is symmetric about pi/4") {
  for (long n : {2L, 7L, 15L}) {
    for (int g = 1; g < 10; ++g) {
      PiRational a(g, 40);               // g*pi/40 in (0, pi/4)
      PiRational b = PiRational(1, 2) - a;  // pi/2 - a
      Real ea = majority_error(n, a, MajoritySetKind::kReduced, ctx);
      Real eb = majority_error(n, b, MajoritySetKind::kReduced, ctx);
      CHECK(abs(ea - eb).to_double() < 1e-30);
    }
  }
}

TEST_CASE("diagonal-sum bounds from the Theorem proof") {
  // d_k(alpha) = sum_{i+j=k} B(i)B(j) over the complement diagonals
  auto diag = [&](long n, long k, const std::vector<Real>& wx, const std::vector<Real>& wy) {
    Real acc(0, ctx);
    for (long i = 0; i <= k; ++i) {
      long j = k - i;
      if (i > n || j > n) continue;
      acc += wx[static_cast<size_t>(i)] * wy[static_cast<size_t>(j)];
    }
    return acc;
  };
  for (long n : {3L, 5L, 8L}) {
    for (double av : {0.1, 0.5, 0.785398, 1.2, 1.5}) {
      Real alpha = Real::from_double(av, ctx);
      Real px = p_from_angle(alpha, Component::kCos);
      Real py = p_from_angle(alpha, Component::kSin);
      auto wx = binomial_pmf_row(n, px);
      auto wy = binomial_pmf_row(n, py);
      Real one(1, ctx);
      Real dn = diag(n, n, wx, wy);
      CHECK(dn.cmp(Rational(1, Integer(1) << n)) <= 0);
      Real ratio_sum = (one - px) / px + (one - py) / py;
      CHECK(diag(n, n - 1, wx, wy).cmp(dn * ratio_sum) <= 0);
      Real tau = (one - px) * (one - py) / (px * py);
      for (long k = 2; k <= n; ++k)
        CHECK(diag(n, k - 2, wx, wy).cmp(diag(n, k, wx, wy) * tau) <= 0);
    }
  }
}

TEST_CASE("majority_bound_n") {
  CHECK(majority_bound_n(Rational(1, 20)) == 6);
  CHECK(majority_bound_n(Rational(1, 60)) == 7);
  CHECK(majority_bound_n(Rational(1)) == 1);
  // definition: smallest n with 2/2^n <= eps
  CHECK(Rational(2, Integer(1) << 6) <= Rational(1, 20));
  CHECK(Rational(2, Integer(1) << 5) > Rational(1, 20));
}

TEST_CASE("angle_from_counts") {
  auto t0 = angle_from_counts(8, 4, 8, ctx);
  CHECK(t0.turn.cmp(0L) == 0);
  CHECK_FALSE(t0.degenerate);
  CHECK(abs(angle_from_counts(4, 8, 8, ctx).turn - Real(Rational(1, 4), ctx)).to_double() < 1e-70);
  CHECK(abs(angle_from_counts(0, 4, 8, ctx).turn - Real(Rational(1, 2), ctx)).to_double() < 1e-70);
  auto deg = angle_from_counts(4, 4, 8, ctx);
  CHECK(deg.degenerate);
  CHECK(deg.turn.cmp(0L) == 0);
}
