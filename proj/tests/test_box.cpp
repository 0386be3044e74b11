#include <doctest.h>

#include "oracle_helpers.hpp"
#include "qpe/schemes.hpp"

using namespace qpe;

namespace {
const PrecisionContext ctx;

Real real_of(double v) { return Real::from_double(v, ctx); }
}  // namespace

TEST_CASE("delta_of_eta") {
  CHECK(delta_of_eta(PiRational(0, 1), ctx).cmp(0L) == 0);
  CHECK(abs(delta_of_eta(PiRational(1, 4), ctx) - Real(Rational(1, 2), ctx)).to_double() < 1e-70);
  CHECK(abs(delta_of_eta(PiRational(1, 2), ctx) - sqrt(Real(2, ctx)) / 2L).to_double() < 1e-70);
  CHECK_THROWS_AS(delta_of_eta(PiRational(3, 4), ctx), std::domain_error);
}

TEST_CASE("box_success_set") {
  // delta >= 2: every count accepted
  CHECK(box_success_set(8, Real(Rational(21, 10), ctx), real_of(0.5)).members().size() == 9);
  auto s = box_success_set(8, real_of(0.3), Real(1, ctx));
  CHECK(s.members() == std::vector<long>{7, 8});
  // closed boundary: p = k/n + delta/2 keeps the touching k
  // n=10, delta=1/5, k=3: p = 3/10 + 1/10 = 2/5
  auto touch = box_success_set(10, Real(Rational(1, 5), ctx), Real(Rational(2, 5), ctx));
  CHECK(touch.members().front() == 3);
  // and the point k leaves for p slightly above
  auto above = box_success_set(10, Real(Rational(1, 5), ctx),
                               Real(Rational(2, 5), ctx) + Real::pow2(-80, ctx));
  CHECK(above.members().front() == 4);
}

TEST_CASE("box_breakpoints") {
  auto bp2 = box_breakpoints(2, Real(1, ctx));
  REQUIRE(bp2.size() == 3);
  CHECK(bp2[0].cmp(0L) == 0);
  CHECK(bp2[1].cmp(Rational(1, 2)) == 0);
  CHECK(bp2[2].cmp(1L) == 0);
  for (long n : {3L, 8L, 17L}) {
    auto bps = box_breakpoints(n, real_of(0.3));
    CHECK(bps.size() <= static_cast<size_t>(2 * (n + 1)));
  }
  auto bp8 = box_breakpoints(8, real_of(0.3));
  CHECK(bp8.size() == 16);
  CHECK(bp8.front().cmp(0L) > 0);
  CHECK(bp8.back().cmp(1L) < 0);
}

TEST_CASE("box set changes by one element across breakpoints") {
  const long n = 8;
  Real delta = real_of(0.3);
  auto bps = box_breakpoints(n, delta);
  std::vector<Real> walls = bps;
  walls.insert(walls.begin(), Real(0, ctx));
  walls.push_back(Real(1, ctx));
  std::vector<std::vector<long>> sets;
  for (size_t i = 0; i + 1 < walls.size(); ++i)
    sets.push_back(box_success_set(n, delta, (walls[i] + walls[i + 1]) / 2L).members());
  for (size_t i = 0; i + 1 < sets.size(); ++i) {
    long diff = std::labs(static_cast<long>(sets[i].size()) -
                          static_cast<long>(sets[i + 1].size()));
    CHECK(diff == 1);
  }
}

TEST_CASE("box_worst_error") {
  CHECK(box_worst_error(9, Real(Rational(21, 10), ctx), ctx).worst_error.cmp(0L) == 0);

  auto res = box_worst_error(8, real_of(0.3), ctx);
  // frozen dense-grid + breakpoint oracle value
  CHECK(std::fabs(res.worst_error.to_double() - 0.489919034031) < 1e-9);
  CHECK(std::fabs(res.witness.to_double() - 0.475) < 1e-9);
  CHECK_FALSE(res.convexity_verified);  // 8 < 1 + 1/0.09
  // dominates a dense closed-set scan and stays close to it
  double grid_max = qpe_test::box_dense_grid_max(8, 0.3, 10000);
  CHECK(res.worst_error.to_double() >= grid_max - 1e-12);
  CHECK(res.worst_error.to_double() - grid_max < 2e-3);

  CHECK(box_worst_error(13, real_of(0.3), ctx).convexity_verified);
}

TEST_CASE("box_min_n table-backed values") {
  Real d1 = delta_of_eta(PiRational(1, 8), ctx);
  CHECK(box_min_n(d1, Rational(1, 20), ctx).n == 56);
  Real half(Rational(1, 2), ctx);
  CHECK(box_min_n(half, Rational(1, 30), ctx).n == 20);
  // the spec sketch guessed 21 for (1/2, 0.025); the exact worst error at
  // n = 21 is 0.02748... > 0.025, so the first passing n is 22
  CHECK(box_min_n(half, Rational(1, 40), ctx).n == 22);
  CHECK(box_min_n(Real(2, ctx), Rational(1, 2), ctx).n == 1);
}

TEST_CASE("transition region below the first passing n stays visible") {
  auto res = box_min_n(real_of(0.1), Rational(3, 10), ctx, true);
  CHECK(res.n == 110);
  CHECK(res.unstable_above == std::vector<long>{113, 114, 115, 116, 117, 118, 119});
}

TEST_CASE("box_joint_worst_error") {
  CHECK(box_joint_worst_error(5, Real(Rational(21, 10), ctx), ctx).worst_error.cmp(0L) == 0);
  auto res = box_joint_worst_error(4, real_of(0.6), ctx);
  CHECK(std::fabs(res.worst_error.to_double() - 0.333012554893) < 1e-9);
  double grid_max = qpe_test::joint_dense_grid_max(4, 0.6, 10000);
  CHECK(res.worst_error.to_double() >= grid_max - 1e-12);
  CHECK(res.worst_error.to_double() - grid_max < 2e-3);
}

TEST_CASE("joint minimum matches the paper column") {
  Real d1 = delta_of_eta(PiRational(1, 8), ctx);
  CHECK(box_joint_min_n(d1, Rational(1, 10), ctx).n == 41);
  // no smaller than the per-component search with the undivided budget
  CHECK(box_joint_min_n(d1, Rational(1, 10), ctx).n >= box_min_n(d1, Rational(1, 10), ctx).n);
}
