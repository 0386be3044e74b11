#include <doctest.h>

#include <random>

#include "oracle_helpers.hpp"
#include "qpe/numerics.hpp"

using namespace qpe;

namespace {
const PrecisionContext ctx;

Real p_pi4() { return p_from_angle(PiRational(1, 4), Component::kCos, ctx); }
}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("0.025") == Rational(1, 40));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("2.5e-3") == Rational(1, 400));
  CHECK(parse_rational("1/400") == Rational(1, 400));
  CHECK(parse_rational("-0.5") == Rational(-1, 2));
  CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("binomial coefficients are exact") {
  CHECK(binomial_coeff(5, 2) == 10);
  for (long n : {0L, 1L, 7L, 100L}) CHECK(binomial_coeff(n, 0) == 1);
  CHECK(binomial_coeff(21, 10) == 352716);
  auto pascal = qpe_test::pascal_rows(30);
  for (int n = 0; n <= 30; ++n)
    for (int k = 0; k <= n; ++k)
      CHECK(binomial_coeff(n, k) == Integer(std::to_string(pascal[n][k])));
  CHECK_THROWS_AS(binomial_coeff(5, 6), std::domain_error);
  CHECK_THROWS_AS(binomial_coeff(5, -1), std::domain_error);
  CHECK_THROWS_AS(binomial_coeff(100001, 2), std::domain_error);
}

TEST_CASE("success_prob_1d basics") {
  Real half(Rational(1, 2), ctx);
  CHECK(success_prob_1d(SuccessSet1D::full(6), half).cmp(1L) == 0);
  CHECK(success_prob_1d(SuccessSet1D(6, {}), half).cmp(0L) == 0);
  // n=3, K={2,3}, p=1/2: 4 of 8 outcomes
  CHECK(success_prob_1d(SuccessSet1D(3, {2, 3}), half).cmp(Rational(1, 2)) == 0);
}

TEST_CASE("success_prob_1d matches exhaustive enumeration, n <= 10") {
  std::mt19937 gen(7);
  for (int n = 1; n <= 10; ++n) {
    for (int rep = 0; rep < 8; ++rep) {
      std::vector<long> members;
      for (long k = 0; k <= n; ++k)
        if (gen() & 1) members.push_back(k);
      double p = std::uniform_real_distribution<>(0.01, 0.99)(gen);
      double want = qpe_test::enumerate_prob_1d(n, members, p);
      double got = success_prob_1d(SuccessSet1D(n, members), Real::from_double(p, ctx)).to_double();
      CHECK(std::fabs(got - want) <= 1e-12 * std::max(1e-30, std::fabs(want)));
    }
  }
}

TEST_CASE("complement identity at working precision") {
  std::mt19937 gen(11);
  for (int n : {3, 8, 17}) {
    std::vector<long> members;
    for (long k = 0; k <= n; ++k)
      if (gen() & 1) members.push_back(k);
    SuccessSet1D set(n, members);
    Real p = Real::from_double(0.37, ctx);
    Real total = success_prob_1d(set, p) + success_prob_1d(set.complement(), p);
    Real residual = abs(total - Real(1, ctx));
    CHECK(residual.cmp(Real::pow2(-(ctx.bits() - 10), ctx)) < 0);
  }
}

TEST_CASE("success_prob_2d basics and enumeration") {
  Real one(1, ctx), half(Rational(1, 2), ctx);
  // full square
  std::vector<std::pair<long, long>> all;
  for (long i = 0; i <= 3; ++i)
    for (long j = 0; j <= 3; ++j) all.emplace_back(i, j);
  CHECK(success_prob_2d(SuccessSet2D(3, all), Real::from_double(0.3, ctx),
                        Real::from_double(0.8, ctx))
            .cmp(1L) == 0);
  // {(n,0)} at p_x = 1, p_y = 1/2 -> 2^-n
  for (long n : {1L, 4L, 9L}) {
    SuccessSet2D corner(n, {{n, 0}});
    Real got = success_prob_2d(corner, one, half);
    CHECK(got.cmp(Rational(1, Integer(1) << n)) == 0);
  }
  // n=2 random sets vs enumeration over all 2^(2n) sequence pairs
  std::mt19937 gen(3);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<std::pair<long, long>> members;
    for (long i = 0; i <= 2; ++i)
      for (long j = 0; j <= 2; ++j)
        if (gen() & 1) members.emplace_back(i, j);
    double px = 0.31, py = 0.77;
    double want = qpe_test::enumerate_prob_2d(2, members, px, py);
    double got = success_prob_2d(SuccessSet2D(2, members), Real::from_double(px, ctx),
                                 Real::from_double(py, ctx))
                     .to_double();
    CHECK(std::fabs(got - want) <= 1e-12);
  }
}

TEST_CASE("binom_tail_leq values") {
  CHECK(binom_tail_leq(9, 9, Real::from_double(0.4, ctx)).cmp(1L) == 0);
  // frozen oracle values at alpha = pi/4 (q^3 + 3pq^2 expansion and 256-bit sums)
  Real t31 = binom_tail_leq(3, 1, p_pi4());
  CHECK(std::fabs(t31.to_double() - 0.0580582617584) < 1e-12);
  Real t52 = binom_tail_leq(5, 2, p_pi4());
  CHECK(std::fabs(t52.to_double() - 0.0249126313903) < 1e-12);
  // the borderline comparison the precision layer must resolve
  CHECK(t52.cmp(Rational(1, 40)) < 0);
  CHECK(binom_tail_leq(5, 2, p_pi4().at_precision(ctx.doubled())).cmp(Rational(1, 40)) < 0);
}

TEST_CASE("binom_tail_leq is nonincreasing in p") {
  for (long n : {5L, 12L}) {
    for (long k = 0; k < n; ++k) {
      Real prev(1, ctx);
      for (double p : {0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95}) {
        Real cur = binom_tail_leq(n, k, Real::from_double(p, ctx));
        CHECK(cur.cmp(prev) <= 0);
        prev = cur;
      }
    }
  }
}

TEST_CASE("rel_entropy") {
  Real p = Real::from_double(0.37, ctx);
  CHECK(rel_entropy(p, p).cmp(0L) == 0);
  // D(1/2 || p) = -(1/2) log(4 p (1-p))
  Real half(Rational(1, 2), ctx);
  for (double pv : {0.6, 0.853553, 0.99}) {
    Real pp = Real::from_double(pv, ctx);
    Real lhs = rel_entropy(half, pp);
    Real rhs = -(log(Real(4, ctx) * pp * (Real(1, ctx) - pp)) / 2L);
    CHECK(abs(lhs - rhs).to_double() < 1e-70);
  }
  // at p = p_x(pi/4): D = (1/2) log 2
  Real d = rel_entropy(half, p_pi4());
  CHECK(abs(d - log(Real(2, ctx)) / 2L).to_double() < 1e-70);
  CHECK_THROWS_AS(rel_entropy(Real(0, ctx), p), std::domain_error);
  CHECK_THROWS_AS(rel_entropy(p, Real(1, ctx)), std::domain_error);
}

TEST_CASE("chernoff_sample_bound") {
  auto r = chernoff_sample_bound(Rational(1, 2), Rational(1, 10), ctx);
  CHECK(r.n == 24);
  CHECK_FALSE(r.degenerate);
  auto deg = chernoff_sample_bound(Rational(1), Rational(2), ctx);
  CHECK(deg.n == 0);
  CHECK(deg.degenerate);
  CHECK(chernoff_sample_bound(Rational(1, 4), Rational(1, 20), ctx).n == 119);
  CHECK_THROWS_AS(chernoff_sample_bound(Rational(0), Rational(1, 10), ctx), std::domain_error);
}

TEST_CASE("chernoff_tail_bound dominates the exact tail") {
  for (long n : {5L, 9L, 20L}) {
    for (double pv : {0.6, 0.8535533905932737, 0.95}) {
      Real p = Real::from_double(pv, ctx);
      for (long k = 0; k < n; ++k) {
        if (static_cast<double>(k) >= n * pv) continue;
        Real bound = chernoff_tail_bound(n, k, p);
        CHECK(bound.cmp(binom_tail_leq(n, k, p)) >= 0);
      }
    }
  }
  // (5, 2, p(pi/4)): bound ~ 0.1768 vs exact ~ 0.0249
  Real bound = chernoff_tail_bound(5, 2, p_pi4());
  CHECK(std::fabs(bound.to_double() - 0.176776695) < 1e-6);
  CHECK_THROWS_AS(chernoff_tail_bound(4, 2, Real(Rational(1, 2), ctx)), std::domain_error);
}

TEST_CASE("chernoff bound at k = n/2 equals sin^n(alpha)") {
  for (long n : {4L, 10L, 16L}) {
    Real bound = chernoff_tail_bound(n, n / 2, p_pi4());
    Real sinn = pow_ui(sin(PiRational(1, 4).radians(ctx)), static_cast<unsigned long>(n));
    CHECK(abs(bound - sinn).to_double() < 1e-60);
  }
}

TEST_CASE("guarded comparisons re-evaluate inside the band") {
  // value 2^-200 above the threshold at 256 bits: margin below 2^-128 band
  int calls = 0;
  bool le = guarded_leq(
      [&](const PrecisionContext& c) {
        ++calls;
        return Real(Rational(1, 3), c) + Real::pow2(-200, c);
      },
      Rational(1, 3), PrecisionContext(256));
  CHECK_FALSE(le);
  CHECK(calls > 1);  // needed at least one doubling
  GuardInfo info;
  guarded_leq([&](const PrecisionContext& c) { return Real(1, c); }, Rational(2),
              PrecisionContext(256), &info);
  CHECK(info.bits_used == 256);
}

TEST_CASE("p_from_angle") {
  CHECK(p_from_angle(PiRational(0, 1), Component::kCos, ctx).cmp(1L) == 0);
  CHECK(p_from_angle(PiRational(1, 2), Component::kCos, ctx).cmp(Rational(1, 2)) == 0);
  // (2 + sqrt(2))/4
  Real want = (Real(2, ctx) + sqrt(Real(2, ctx))) / 4L;
  CHECK(abs(p_pi4() - want).to_double() < 1e-70);
}
