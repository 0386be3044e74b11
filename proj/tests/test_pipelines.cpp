#include <doctest.h>

#include "qpe/pipelines.hpp"

using namespace qpe;

namespace {
const PrecisionContext ctx;

Rational eps10(int t) {
  Rational e(1);
  for (int i = 0; i < t; ++i) e /= 10;
  return e;
}
}  // namespace

TEST_CASE("triple-sign totals and bound") {
  CHECK(triple_sign_total(eps10(1), ctx).total == 15);
  CHECK(triple_sign_total(eps10(3), ctx).total == 51);
  CHECK(triple_sign_total(eps10(10), ctx).total == 183);
  CHECK(triple_sign_bound(eps10(1), ctx) == 28);
  CHECK(triple_sign_bound(eps10(5), ctx) == 108);
  CHECK(triple_sign_bound(eps10(10), ctx) == 208);
}

TEST_CASE("majority-and-sign totals and bound") {
  CHECK(majority_sign_total(eps10(1), ctx).total == 17);
  CHECK(majority_sign_total(eps10(3), ctx).total == 41);
  CHECK(majority_sign_bound(eps10(1), ctx) == 22);
  CHECK(majority_sign_bound(eps10(4), ctx) == 62);
}

TEST_CASE("box pipeline totals") {
  CHECK(box_pipeline_total(1, RefMode::kExact, eps10(1), ctx).total == 112);
  CHECK(box_pipeline_total(2, RefMode::kExact, eps10(1), ctx).total == 43);
  CHECK(box_pipeline_total(2, RefMode::kBits2, eps10(1), ctx).total == 45);
  CHECK(box_pipeline_total(2, RefMode::kBits3, eps10(1), ctx).total == 43);
  CHECK(box_pipeline_total(3, RefMode::kExact, eps10(1), ctx).total == 32);
  CHECK(box_pipeline_total(3, RefMode::kBits3, eps10(4), ctx).total == 126);
}

TEST_CASE("joint pipeline totals") {
  CHECK(box_joint_pipeline_total(eps10(1), ctx).total == 82);
  // stated lower bound: no smaller than twice the per-component search with
  // the undivided budget
  auto joint = box_joint_pipeline_total(eps10(1), ctx);
  Real d1 = delta_of_eta(PiRational(1, 8), ctx);
  CHECK(joint.total >= 2 * box_min_n(d1, eps10(1), ctx).n);
}

TEST_CASE("wedge pipeline totals") {
  CHECK(wedge_pipeline_total(1, RefMode::kExact, eps10(1), ctx).total == 40);
  CHECK(wedge_pipeline_total(2, RefMode::kExact, eps10(1), ctx).total == 15);
  CHECK(wedge_pipeline_total(2, RefMode::kBits2, eps10(1), ctx).total == 19);
  CHECK(wedge_pipeline_total(2, RefMode::kBits3, eps10(1), ctx).total == 17);
  CHECK(wedge_pipeline_total(3, RefMode::kExact, eps10(1), ctx).total == 14);
  CHECK(wedge_pipeline_total(3, RefMode::kExact, eps10(5), ctx).total == 70);
}

TEST_CASE("sign-stage angles per reference mode") {
  auto exact2 = pipeline_sign_angles(2, RefMode::kExact);
  REQUIRE(exact2.size() == 1);
  CHECK(exact2[0] == PiRational(1, 8));
  auto bits2 = pipeline_sign_angles(2, RefMode::kBits2);
  CHECK(bits2[0] == PiRational(1, 8) + PiRational(1, 8));  // pi/8 + pi/2^(k+1)
  auto bits3_three = pipeline_sign_angles(3, RefMode::kBits3);
  REQUIRE(bits3_three.size() == 2);
  CHECK(bits3_three[0] == PiRational(1, 4) + PiRational(1, 16));
  CHECK(bits3_three[1] == PiRational(1, 8) + PiRational(1, 32));
}

TEST_CASE("parity bookkeeping: two-component stages even, sign stages odd") {
  for (int stages : {1, 2, 3}) {
    auto res = box_pipeline_total(stages, RefMode::kExact, eps10(1), ctx);
    long sum = 0;
    for (const auto& s : res.stages) {
      if (s.components == 2) CHECK(s.total() % 2 == 0);
      if (s.role == "sign") CHECK(s.count % 2 == 1);
      sum += s.total();
    }
    CHECK(sum == res.total);
  }
}

TEST_CASE("orderings within and across families") {
  for (int t : {1, 2}) {
    Rational eps = eps10(t);
    long box_exact = box_pipeline_total(2, RefMode::kExact, eps, ctx).total;
    long box_3 = box_pipeline_total(2, RefMode::kBits3, eps, ctx).total;
    long box_2 = box_pipeline_total(2, RefMode::kBits2, eps, ctx).total;
    CHECK(box_exact <= box_3);
    CHECK(box_3 <= box_2);
    long wedge_exact = wedge_pipeline_total(2, RefMode::kExact, eps, ctx).total;
    CHECK(wedge_exact <= box_exact);
    CHECK(wedge_pipeline_total(1, RefMode::kExact, eps, ctx).total <=
          box_pipeline_total(1, RefMode::kExact, eps, ctx).total);
  }
}

TEST_CASE("bound rows only overshoot by rounding slack") {
  for (int t : {1, 2, 3}) {
    Rational eps = eps10(t);
    CHECK(triple_sign_total(eps, ctx).total <= triple_sign_bound(eps, ctx) + 3);
    CHECK(majority_sign_total(eps, ctx).total <= majority_sign_bound(eps, ctx) + 3);
  }
}
