#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pdmp/boundary.hpp"
#include "pdmp/bps.hpp"
#include "pdmp/rng.hpp"
#include "pdmp/zigzag.hpp"

using namespace pdmp;

namespace {

Vec random_vec(RngStream& rng, int d, bool signs_only = false) {
  Vec v(static_cast<std::size_t>(d));
  for (double& vi : v) vi = signs_only ? rng.sign() : rng.normal();
  return v;
}

Vec random_unit(RngStream& rng, int d) {
  Vec n = random_vec(rng, d);
  double q = 0.0;
  for (double ni : n) q += ni * ni;
  double inv = 1.0 / std::sqrt(q);
  for (double& ni : n) ni *= inv;
  return n;
}

double norm2(const Vec& v) {
  double q = 0.0;
  for (double vi : v) q += vi * vi;
  return std::sqrt(q);
}

double max_abs_diff(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("gradient bounce is an involutive isometry") {
  RngStream rng(2024, 1);
  for (int rep = 0; rep < 1000; ++rep) {
    int d = 1 + static_cast<int>(rng.next_u64() % 8);
    Vec v = random_vec(rng, d);
    Vec g = random_vec(rng, d);
    Vec w = bps_bounce(v, g);
    CHECK(std::abs(norm2(w) - norm2(v)) < 1e-12);
    CHECK(max_abs_diff(bps_bounce(w, g), v) < 1e-12);
    // the component along g is exactly reversed
    double vg = 0.0, wg = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      vg += v[i] * g[i];
      wg += w[i] * g[i];
    }
    CHECK(std::abs(vg + wg) < 1e-10);
  }
}

TEST_CASE("facet-normal bounce is an involutive isometry") {
  RngStream rng(2025, 1);
  for (int rep = 0; rep < 1000; ++rep) {
    int d = 1 + static_cast<int>(rng.next_u64() % 8);
    Vec v = random_vec(rng, d);
    Vec n = random_unit(rng, d);
    Vec w = bps_boundary_bounce(v, n);
    CHECK(std::abs(norm2(w) - norm2(v)) < 1e-12);
    CHECK(max_abs_diff(bps_boundary_bounce(w, n), v) < 1e-12);
  }
}

TEST_CASE("zig-zag boundary reflection is an involution on sign vectors") {
  RngStream rng(2026, 1);
  for (int rep = 0; rep < 1000; ++rep) {
    int d = 1 + static_cast<int>(rng.next_u64() % 8);
    Vec v = random_vec(rng, d, true);
    // normal supported on a random subset, as the facet normals are
    Vec n(static_cast<std::size_t>(d), 0.0);
    int support = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(d));
    for (int k = 0; k < support; ++k)
      n[rng.next_u64() % static_cast<std::uint64_t>(d)] = rng.normal();
    Vec w = zz_boundary_r2(v, n);
    CHECK(max_abs_diff(zz_boundary_r2(w, n), v) < 1e-12);
    // component magnitudes are preserved exactly
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(w[i]) == std::abs(v[i]));
  }
}

TEST_CASE("zig-zag crossing keeps the velocity, flips negate one component") {
  RngStream rng(2027, 1);
  for (int rep = 0; rep < 1000; ++rep) {
    int d = 1 + static_cast<int>(rng.next_u64() % 8);
    Vec v = random_vec(rng, d, true);
    CHECK(max_abs_diff(zz_boundary_r1(v), v) == 0.0);
    PhasePoint z;
    z.x.assign(static_cast<std::size_t>(d), 0.0);
    z.v = v;
    int k = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(d));
    PhasePoint z2 = zz_flip(zz_flip(z, k), k);
    CHECK(max_abs_diff(z2.v, v) == 0.0);
  }
}

TEST_CASE("corner flip is an involution preserving frozen components") {
  RngStream rng(2028, 1);
  RngStream boundary(2028, 4);
  BoundaryPolicy pol = zz_policy();
  for (int rep = 0; rep < 1000; ++rep) {
    int d = 2 + static_cast<int>(rng.next_u64() % 7);
    PhasePoint z;
    z.x = random_vec(rng, d);
    z.v = random_vec(rng, d, true);
    z.frozen.assign(static_cast<std::size_t>(d), 0);
    z.frozen[static_cast<std::size_t>(rng.next_u64() % static_cast<std::uint64_t>(d))] = 1;
    FacetGeometry geo;
    geo.normal.assign(static_cast<std::size_t>(d), 0.0);
    geo.normal[0] = 1.0;
    PhasePoint once = resolve_boundary(z, geo, pol, true, boundary).z;
    PhasePoint twice = resolve_boundary(once, geo, pol, true, boundary).z;
    CHECK(max_abs_diff(twice.v, z.v) == 0.0);
    for (int i = 0; i < d; ++i) {
      auto ii = static_cast<std::size_t>(i);
      if (z.is_frozen(i))
        CHECK(once.v[ii] == z.v[ii]);
      else
        CHECK(once.v[ii] == -z.v[ii]);
    }
  }
}

TEST_CASE("teleport exit velocity points inward at the image facet") {
  RngStream rng(2029, 1);
  int ok_count = 0, throw_count = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    int d = 2 + static_cast<int>(rng.next_u64() % 7);
    Vec n_x = random_unit(rng, d);
    Vec n_y = random_unit(rng, d);
    Vec v = random_vec(rng, d);
    double vny = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) vny += v[i] * n_y[i];
    if (vny < 0.0) {
      // reflecting -v in the image facet lands inside: <w, n_y> = <v, n_y>
      Vec w = bps_teleport_velocity(v, n_x, n_y);
      double wn = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) wn += w[i] * n_y[i];
      CHECK(wn < 0.0);
      CHECK(std::abs(wn - vny) < 1e-12);
      CHECK(std::abs(norm2(w) - norm2(v)) < 1e-12);
      ok_count++;
    } else {
      // geometry that would exit outward is a model bug and must not pass
      // silently
      CHECK_THROWS_AS((void)bps_teleport_velocity(v, n_x, n_y), std::logic_error);
      throw_count++;
    }
  }
  CHECK(ok_count > 300);
  CHECK(throw_count > 300);
}
