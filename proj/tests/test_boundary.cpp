#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pdmp/boundary.hpp"
#include "pdmp/rng.hpp"

using namespace pdmp;

TEST_CASE("acceptance ratio: frozen values") {
  // min(1, exp(psi_x - psi_y) * s_y / s_x)
  CHECK(acceptance_ratio(0.0, 1.0, 1.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(acceptance_ratio(1.0, 0.0, 1.0, 1.0) == 1.0);
  CHECK(acceptance_ratio(0.5, 0.5, 1.0, 1.0) == 1.0);
  // hard wall: never crossed
  CHECK(acceptance_ratio(3.0, kInf, 1.0, 1.0) == 0.0);
  // speed factor enters as s_y / s_x
  CHECK(acceptance_ratio(0.0, 0.0, 2.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(acceptance_ratio(0.0, 0.0, 1.0, 2.0) == 1.0);
  // both effects together: exp(-1) * 2 < 1
  CHECK(acceptance_ratio(0.0, 1.0, 1.0, 2.0) ==
        doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
}

namespace {

FacetGeometry flat_geometry(int d, int coord, double dir) {
  FacetGeometry geo;
  geo.normal.assign(static_cast<std::size_t>(d), 0.0);
  geo.normal[static_cast<std::size_t>(coord)] = dir;
  return geo;
}

BoundaryPolicy flip_policy() {
  // crossing keeps v, rejection flips the component along the normal
  BoundaryPolicy p;
  p.r1 = [](const Vec& v, const FacetGeometry&) { return v; };
  p.r2 = [](const Vec& v, const Vec& n) {
    Vec out = v;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (n[i] != 0.0) out[i] = -out[i];
    return out;
  };
  return p;
}

}  // namespace

TEST_CASE("hard wall always reflects") {
  PhasePoint z;
  z.x = {0.0, 0.3};
  z.v = {-1.0, 1.0};
  FacetGeometry geo = flat_geometry(2, 0, -1.0);
  geo.psi_far = kInf;
  RngStream rng(99, 4);
  for (int rep = 0; rep < 50; ++rep) {
    BoundaryOutcome out = resolve_boundary(z, geo, flip_policy(), false, rng);
    CHECK(out.tag == EventTag::BoundaryReflect);
    CHECK(!out.crossed);
    CHECK(out.z.v[0] == 1.0);
    CHECK(out.z.v[1] == 1.0);
  }
}

TEST_CASE("downhill jumps always cross and carry the region label") {
  PhasePoint z;
  z.x = {0.5};
  z.v = {1.0};
  z.region = 0;
  FacetGeometry geo = flat_geometry(1, 0, 1.0);
  geo.psi_near = 2.0;
  geo.psi_far = 1.0;  // lower potential behind the facet: alpha = 1
  geo.region_target = 1;
  RngStream rng(7, 4);
  for (int rep = 0; rep < 50; ++rep) {
    BoundaryOutcome out = resolve_boundary(z, geo, flip_policy(), false, rng);
    CHECK(out.tag == EventTag::BoundaryCross);
    CHECK(out.crossed);
    CHECK(out.z.region == 1);
    CHECK(out.z.v[0] == 1.0);
  }
}

TEST_CASE("uphill jump acceptance frequency matches the ratio") {
  PhasePoint z;
  z.x = {0.5};
  z.v = {1.0};
  FacetGeometry geo = flat_geometry(1, 0, 1.0);
  geo.psi_near = 0.0;
  geo.psi_far = 1.0;  // alpha = exp(-1)
  RngStream rng(1234, 4);
  int crossed = 0;
  const int n = 200000;
  for (int rep = 0; rep < n; ++rep) {
    BoundaryOutcome out = resolve_boundary(z, geo, flip_policy(), false, rng);
    crossed += out.crossed ? 1 : 0;
  }
  double p = static_cast<double>(crossed) / n;
  double alpha = std::exp(-1.0);
  // 5 sigma band around the binomial mean
  double band = 5.0 * std::sqrt(alpha * (1.0 - alpha) / n);
  CHECK(std::abs(p - alpha) < band);
}

TEST_CASE("teleport moves the position and tags the record") {
  PhasePoint z;
  z.x = {1.0, 2.0};
  z.v = {1.0, 0.0};
  FacetGeometry geo = flat_geometry(2, 0, 1.0);
  geo.psi_near = 1.0;
  geo.psi_far = 0.0;
  geo.x_target = {-1.0, 5.0};
  RngStream rng(5, 4);
  BoundaryOutcome out = resolve_boundary(z, geo, flip_policy(), false, rng);
  CHECK(out.tag == EventTag::Teleport);
  CHECK(out.z.x[0] == -1.0);
  CHECK(out.z.x[1] == 5.0);
}

TEST_CASE("corner flip reverses moving components only") {
  PhasePoint z;
  z.x = {0.2, 0.4, 0.6};
  z.v = {1.0, -1.0, 1.0};
  z.frozen = {0, 0, 1};  // coordinate 2 is stuck; its stored velocity is the
                         // release direction and must survive the flip
  FacetGeometry geo = flat_geometry(3, 0, 1.0);
  RngStream rng(11, 4);
  BoundaryOutcome out = resolve_boundary(z, geo, flip_policy(), true, rng);
  CHECK(out.tag == EventTag::CornerFlip);
  CHECK(out.z.v[0] == -1.0);
  CHECK(out.z.v[1] == 1.0);
  CHECK(out.z.v[2] == 1.0);

  // applying the flip twice restores the state
  BoundaryOutcome out2 = resolve_boundary(out.z, geo, flip_policy(), true, rng);
  CHECK(out2.z.v[0] == z.v[0]);
  CHECK(out2.z.v[1] == z.v[1]);
  CHECK(out2.z.v[2] == z.v[2]);
}

TEST_CASE("speed-up factor shifts the crossing probability") {
  // equal psi on both sides, s_near=2, s_far=1: alpha = 1/2
  PhasePoint z;
  z.x = {0.5};
  z.v = {1.0};
  FacetGeometry geo = flat_geometry(1, 0, 1.0);
  geo.s_near = 2.0;
  geo.s_far = 1.0;
  RngStream rng(321, 4);
  int crossed = 0;
  const int n = 200000;
  for (int rep = 0; rep < n; ++rep)
    crossed += resolve_boundary(z, geo, flip_policy(), false, rng).crossed ? 1 : 0;
  double p = static_cast<double>(crossed) / n;
  CHECK(std::abs(p - 0.5) < 5.0 * std::sqrt(0.25 / n));
}
