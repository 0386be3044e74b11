#include <doctest.h>

#include "qpe/planner.hpp"

using namespace qpe;

namespace {
const PrecisionContext ctx;

Rational eps10(int t) {
  Rational e(1);
  for (int i = 0; i < t; ++i) e /= 10;
  return e;
}
}  // namespace

TEST_CASE("k_eps columns") {
  const long exact[] = {3, 5, 7, 9, 10, 12, 14, 16, 17, 19};
  const long bound[] = {4, 6, 7, 9, 11, 12, 14, 16, 17, 19};
  for (int t = 1; t <= 10; ++t) {
    CHECK(k_eps_exact(eps10(t), ctx) == exact[t - 1]);
    CHECK(k_eps_bound(eps10(t), ctx) == bound[t - 1]);
    CHECK(k_eps_exact(eps10(t), ctx) <= k_eps_bound(eps10(t), ctx));
  }
  CHECK(k_eps_bound(Rational(1), ctx) >= 2);
}

TEST_CASE("n_eps totals and decompositions") {
  CHECK(n_eps(eps10(1), FirstStage::kTripleSign, ctx).total == 24);
  auto row_s = n_eps(eps10(3), FirstStage::kTripleSign, ctx);
  CHECK(row_s.total == 84);
  REQUIRE(row_s.steps.size() == 6);  // first stage + iterations 2..6
  CHECK(row_s.steps[0].count == 21);
  CHECK(row_s.steps[0].repeats == 3);
  const long tail_s[] = {7, 5, 3, 3, 3};
  for (int i = 0; i < 5; ++i) CHECK(row_s.steps[i + 1].count == tail_s[i]);

  auto row_m = n_eps(eps10(3), FirstStage::kMajority, ctx);
  CHECK(row_m.total == 72);
  REQUIRE(row_m.steps.size() == 7);
  CHECK(row_m.steps[0].count == 15);  // majority block, two components
  CHECK(row_m.steps[0].repeats == 2);
  CHECK(row_m.steps[1].count == 21);  // its sign step
}

TEST_CASE("n_eps_bound rows") {
  CHECK(n_eps_bound(eps10(1), FirstStage::kTripleSign, ctx) == 44);
  CHECK(n_eps_bound(eps10(5), FirstStage::kMajority, ctx) == 158);
  CHECK(n_eps_bound(eps10(10), FirstStage::kTripleSign, ctx) == 394);
  for (int t = 1; t <= 10; ++t) {
    CHECK(n_eps(eps10(t), FirstStage::kTripleSign, ctx).total <=
          n_eps_bound(eps10(t), FirstStage::kTripleSign, ctx));
    CHECK(n_eps(eps10(t), FirstStage::kMajority, ctx).total <=
          n_eps_bound(eps10(t), FirstStage::kMajority, ctx));
  }
}

TEST_CASE("m-table entries and the dash rule") {
  CHECK(m_table_entry(eps10(1), 3, FirstStage::kTripleSign, ctx)->total == 19);
  CHECK(m_table_entry(eps10(5), 10, FirstStage::kTripleSign, ctx)->total == 130);
  CHECK(m_table_entry(eps10(5), 10, FirstStage::kMajority, ctx)->total == 122);
  CHECK_FALSE(m_table_entry(eps10(1), 4, FirstStage::kTripleSign, ctx).has_value());
  CHECK_FALSE(m_table_entry(eps10(1), 4, FirstStage::kMajority, ctx).has_value());
}

TEST_CASE("the two borderline cells force larger sign counts") {
  CHECK(sign_min_n(PiRational(1, 8), eps10(6), ctx).n == 13);   // 1.19e-6 > 1e-6
  CHECK(sign_min_n(PiRational(1, 64), eps10(6), ctx).n == 5);   // 1.088e-6 > 1e-6
}

TEST_CASE("total_measurements across the single-shot boundary") {
  CHECK(total_measurements(eps10(1), 3, FirstStage::kTripleSign, ctx) == 19);
  CHECK(total_measurements(eps10(1), 23, FirstStage::kTripleSign, ctx) == 45);  // 24 + 21
  const long k = k_eps_exact(eps10(2), ctx);
  for (long m = k; m < k + 5; ++m) {
    long diff = total_measurements(eps10(2), m + 1, FirstStage::kTripleSign, ctx) -
                total_measurements(eps10(2), m, FirstStage::kTripleSign, ctx);
    CHECK(diff == 1);
  }
}

TEST_CASE("last in-table increment stays positive") {
  for (int t : {1, 2, 3}) {
    const long k = k_eps_exact(eps10(t), ctx);
    for (auto fs : {FirstStage::kTripleSign, FirstStage::kMajority}) {
      long last = m_table_entry(eps10(t), k, fs, ctx)->total;
      long prev = m_table_entry(eps10(t), k - 1, fs, ctx)->total;
      CHECK(last - prev >= 1);
    }
  }
}

TEST_CASE("simulation plans extend the table policy") {
  auto row = simulation_plan(eps10(1), 8, FirstStage::kTripleSign, ctx);
  CHECK(row.k_eps == 3);
  CHECK(row.total == n_eps(eps10(1), FirstStage::kTripleSign, ctx).total + (8 - 3 + 1));
  // single-measurement tail
  for (size_t i = row.steps.size() - 6; i < row.steps.size(); ++i)
    CHECK(row.steps[i].count == 1);
  auto in_table = simulation_plan(eps10(2), 4, FirstStage::kMajority, ctx);
  CHECK(in_table.total == m_table_entry(eps10(2), 4, FirstStage::kMajority, ctx)->total);
}

TEST_CASE("single_shot_tail") {
  auto t22 = single_shot_tail(2, 2, ctx);
  CHECK(std::fabs(t22.exact.to_double() - 0.0380602337444) < 1e-12);
  // k = m: exact equals sin^2(pi/2^(k+2))
  for (long k : {2L, 5L, 11L}) {
    auto t = single_shot_tail(k, k, ctx);
    Real s = sin(PiRational(1, 1L << (k + 2)).radians(ctx));
    CHECK(abs(t.exact - s * s).to_double() < 1e-60);
  }
  // exact <= bound everywhere probed
  for (long k = 2; k <= 30; k += 3) {
    auto t = single_shot_tail(k, 60, ctx);
    CHECK(t.exact.cmp(t.bound) <= 0);
  }
  CHECK_THROWS_AS(single_shot_tail(1, 5, ctx), std::domain_error);
}
