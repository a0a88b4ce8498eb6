#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pdmp/estimators.hpp"
#include "pdmp/types.hpp"

using namespace pdmp;

namespace {

EventRecord rec(double t, Vec x, Vec v, int region = 0, std::vector<std::uint8_t> frozen = {}) {
  EventRecord r;
  r.t = t;
  r.z.x = std::move(x);
  r.z.v = std::move(v);
  r.z.region = region;
  r.z.frozen = std::move(frozen);
  return r;
}

}  // namespace

TEST_CASE("time average is exact for polynomial integrands") {
  // x(t) = t on [0,2]
  Skeleton skel;
  skel.clock = 2.0;
  skel.records.push_back(rec(0.0, {0.0}, {1.0}));
  skel.records.push_back(rec(2.0, {2.0}, {1.0}));
  auto fx = [](const PhasePoint& z) { return z.x[0]; };
  auto fx2 = [](const PhasePoint& z) { return z.x[0] * z.x[0]; };
  auto fx3 = [](const PhasePoint& z) { return z.x[0] * z.x[0] * z.x[0]; };
  CHECK(time_average(skel, fx) == doctest::Approx(1.0).epsilon(1e-14));
  // (1/2) int_0^2 t^2 dt = 4/3; two Gauss points integrate cubics exactly
  CHECK(time_average(skel, fx2) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(time_average(skel, fx3) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("frozen coordinates do not move inside a segment") {
  Skeleton skel;
  skel.clock = 1.0;
  skel.records.push_back(rec(0.0, {0.25, 0.0}, {1.0, 1.0}, 0, {1, 0}));
  skel.records.push_back(rec(1.0, {0.25, 1.0}, {1.0, 1.0}, 0, {1, 0}));
  auto f0 = [](const PhasePoint& z) { return z.x[0]; };
  auto f1 = [](const PhasePoint& z) { return z.x[1]; };
  CHECK(time_average(skel, f0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(time_average(skel, f1) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("reweighting divides by the region speed") {
  // region 0 at speed 1 for one time unit (x: 0 -> 1), then region 1 at
  // speed 2 for another (x: 1 -> 3)
  Skeleton skel;
  skel.clock = 2.0;
  skel.speed = SpeedFunction({1.0, 2.0});
  skel.records.push_back(rec(0.0, {0.0}, {1.0}, 0));
  skel.records.push_back(rec(1.0, {1.0}, {1.0}, 1));
  skel.records.push_back(rec(2.0, {3.0}, {1.0}, 1));
  auto fx = [](const PhasePoint& z) { return z.x[0]; };
  // plain: (1/2 + 2) / 2;  weighted: (1/2 + 2/2) / (1 + 1/2)
  CHECK(time_average(skel, fx) == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(reweighted_average(skel, fx) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("unit speed makes the two averages identical") {
  Skeleton skel;
  skel.clock = 3.0;
  skel.records.push_back(rec(0.0, {0.0}, {1.0}));
  skel.records.push_back(rec(1.5, {1.5}, {-1.0}));
  skel.records.push_back(rec(3.0, {0.0}, {-1.0}));
  auto f = [](const PhasePoint& z) { return std::exp(z.x[0]); };
  CHECK(time_average(skel, f) == reweighted_average(skel, f));
}

TEST_CASE("batch means: periodic path gives zero se and the exact mean") {
  // 50 saw-tooth periods, one per batch
  Skeleton skel;
  skel.clock = 100.0;
  for (int k = 0; k <= 50; ++k) {
    skel.records.push_back(rec(2.0 * k, {0.0}, {1.0}));
    if (k < 50) skel.records.push_back(rec(2.0 * k + 1.0, {1.0}, {-1.0}));
  }
  auto fx = [](const PhasePoint& z) { return z.x[0]; };
  MeanSe ms = weighted_mean_se(skel, fx, false, 50);
  CHECK(ms.mean == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ms.se == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)weighted_mean_se(skel, fx, false, 1), std::invalid_argument);
}

TEST_CASE("occupation histogram books exact segment clippings") {
  Skeleton skel;
  skel.clock = 4.0;
  // 0 -> 1 over one unit: 0.25 in each of 4 bins
  skel.records.push_back(rec(0.0, {0.0}, {1.0}));
  // 0.1 -> 0.3 over one unit: 0.75 in bin 0, 0.25 in bin 1
  skel.records.push_back(rec(1.0, {0.1}, {0.2}));
  // frozen at 0.25 for one unit
  skel.records.push_back(rec(2.0, {0.25}, {1.0}, 0, {1}));
  // -0.5 -> 0.5 over one unit: half below, 0.25 in each of bins 0 and 1
  skel.records.push_back(rec(3.0, {-0.5}, {1.0}));
  skel.records.push_back(rec(4.0, {0.5}, {1.0}));

  Histogram h = occupation_histogram(skel, 0, 0.0, 1.0, 4);
  CHECK(h.total == doctest::Approx(4.0));
  CHECK(h.mass[0] == doctest::Approx(0.25 + 0.75 + 0.25).epsilon(1e-12));
  CHECK(h.mass[1] == doctest::Approx(0.25 + 0.25 + 0.25).epsilon(1e-12));
  CHECK(h.mass[2] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(h.mass[3] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(h.below == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(h.above == 0.0);
  REQUIRE(h.atoms.count(0.25) == 1);
  CHECK(h.atoms.at(0.25) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS((void)occupation_histogram(skel, 0, 1.0, 0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS((void)occupation_histogram(skel, 0, 0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("empty paths are rejected") {
  Skeleton skel;
  skel.clock = 0.0;
  skel.records.push_back(rec(0.0, {0.0}, {1.0}));
  auto fx = [](const PhasePoint& z) { return z.x[0]; };
  CHECK_THROWS_AS((void)time_average(skel, fx), std::runtime_error);
}
