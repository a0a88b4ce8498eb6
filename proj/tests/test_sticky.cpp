#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pdmp/boundary.hpp"
#include "pdmp/engine.hpp"
#include "pdmp/estimators.hpp"
#include "pdmp/models/box.hpp"
#include "pdmp/rng.hpp"
#include "pdmp/sampler.hpp"
#include "pdmp/sticky.hpp"

using namespace pdmp;

namespace {

StickySpec make_spec(int coord, double c, double kappa, bool one_sided) {
  StickySpec s;
  s.coordinate = coord;
  s.c = c;
  s.kappa = [kappa](const PhasePoint&) { return kappa; };
  s.one_sided = one_sided;
  return s;
}

}  // namespace

TEST_CASE("stick freezes at the atom and keeps the stored velocity") {
  PhasePoint z;
  z.x = {0.2499999999, 0.7};
  z.v = {1.0, -1.0};
  StickySpec spec = make_spec(0, 0.25, 1.0, false);
  PhasePoint s = stick(z, spec);
  CHECK(s.x[0] == 0.25);
  CHECK(s.is_frozen(0));
  CHECK(!s.is_frozen(1));
  CHECK(s.v[0] == 1.0);
  CHECK(s.veff(0) == 0.0);

  // interior atom: leaves in the stored direction
  PhasePoint r = unstick(s, spec);
  CHECK(!r.is_frozen(0));
  CHECK(r.x[0] == 0.25);
  CHECK(r.v[0] == 1.0);
}

TEST_CASE("one-sided release departs into the support") {
  PhasePoint z;
  z.x = {1.0};
  z.v = {1.0};  // arrived moving up at the upper end of the support
  StickySpec spec = make_spec(0, 1.0, 1.0, true);
  PhasePoint s = stick(z, spec);
  PhasePoint r = unstick(s, spec);
  CHECK(r.v[0] == -1.0);

  // a corner flip somewhere else while stuck must not corrupt the release
  // direction (frozen components are skipped by the flip)
  FacetGeometry geo;
  geo.normal = {1.0};
  RngStream rng(3, 4);
  PhasePoint flipped = resolve_boundary(s, geo, zz_policy(), true, rng).z;
  CHECK(flipped.v[0] == 1.0);
  PhasePoint r2 = unstick(flipped, spec);
  CHECK(r2.v[0] == -1.0);
}

TEST_CASE("release rate is |v|/kappa, halved for one-sided atoms") {
  PhasePoint z;
  z.x = {0.25};
  z.v = {1.0};
  PhasePoint s = stick(z, make_spec(0, 0.25, 2.0, false));
  CHECK(unstick_rate(s, make_spec(0, 0.25, 2.0, false)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(unstick_rate(s, make_spec(0, 0.25, 2.0, true)) == doctest::Approx(0.25).epsilon(1e-14));
  // exponential holding time with the exact rate
  RngStream rng(17, 3);
  double total = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) total += unstick_clock(s, make_spec(0, 0.25, 2.0, false), rng);
  // mean 1/rate = 2, sd 2/sqrt(n)
  CHECK(std::abs(total / n - 2.0) < 5.0 * 2.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("guard rails: unstick requires a frozen coordinate, bad kappa throws") {
  PhasePoint z;
  z.x = {0.25};
  z.v = {1.0};
  StickySpec spec = make_spec(0, 0.25, 1.0, false);
  CHECK_THROWS_AS((void)unstick(z, spec), std::logic_error);
  PhasePoint s = stick(z, spec);
  StickySpec bad = make_spec(0, 0.25, 0.0, false);
  CHECK_THROWS_AS((void)unstick_rate(s, bad), std::logic_error);
}

// Uniform density on [0,1] with an atom of weight kappa at a: the dominated
// measure gives the atom mass kappa / (kappa + 1).  Time fractions of a long
// run must converge to it.
TEST_CASE("stuck-time fraction matches the closed-form atom mass") {
  auto run_fraction = [](double kappa, bool one_sided) {
    BoxConfig cfg;
    cfg.d = 1;
    cfg.coords.resize(1);
    cfg.coords[0].atom = true;
    cfg.coords[0].atom_kappa = kappa;
    if (one_sided) {
      cfg.coords[0].atom_pos = 1.0;
      cfg.coords[0].atom_one_sided = true;
    } else {
      cfg.coords[0].atom_pos = 0.25;
    }
    BoxModel model(cfg);
    PhasePoint z0;
    z0.x = {0.5};
    z0.v = {1.0};
    z0.ensure_frozen_mask();
    RngBundle rng(91);
    ZigZag zz;
    Skeleton skel = run_sampler(model, zz.boundary_policy(), zz, z0, 4000.0, rng);
    Histogram h = occupation_histogram(skel, 0, 0.0, 1.0, 4);
    double atom_time = 0.0;
    for (const auto& [pos, mass] : h.atoms) atom_time += mass;
    return atom_time / h.total;
  };
  CHECK(std::abs(run_fraction(1.0, false) - 0.5) < 0.05);
  CHECK(std::abs(run_fraction(1.0, true) - 0.5) < 0.05);
  // kappa = 3: atom mass 3/4
  CHECK(std::abs(run_fraction(3.0, false) - 0.75) < 0.05);
}

TEST_CASE("stick events appear as record pairs and freeze exactly at the atom") {
  BoxConfig cfg;
  cfg.d = 1;
  cfg.coords.resize(1);
  cfg.coords[0].atom = true;
  cfg.coords[0].atom_pos = 0.25;
  BoxModel model(cfg);
  PhasePoint z0;
  z0.x = {0.5};
  z0.v = {-1.0};
  z0.ensure_frozen_mask();
  RngBundle rng(7);
  ZigZag zz;
  Skeleton skel = run_sampler(model, zz.boundary_policy(), zz, z0, 200.0, rng);
  int sticks = 0;
  for (std::size_t i = 0; i < skel.records.size(); ++i) {
    const EventRecord& r = skel.records[i];
    if (r.tag != EventTag::Stick) continue;
    sticks++;
    CHECK(r.z.x[0] == 0.25);
    // the companion record shares the timestamp
    bool paired = (i + 1 < skel.records.size() && skel.records[i + 1].tag == EventTag::Stick &&
                   skel.records[i + 1].t == r.t) ||
                  (i > 0 && skel.records[i - 1].tag == EventTag::Stick &&
                   skel.records[i - 1].t == r.t);
    CHECK(paired);
  }
  CHECK(sticks > 0);
  CHECK(sticks % 2 == 0);
  // frozen stretches start frozen and end with an unstick at the same spot
  for (std::size_t i = 0; i + 1 < skel.records.size(); ++i) {
    if (skel.records[i].tag == EventTag::Unstick) {
      CHECK(skel.records[i].z.x[0] == 0.25);
      CHECK(!skel.records[i].z.is_frozen(0));
    }
  }
}
