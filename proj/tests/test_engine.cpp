#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "pdmp/engine.hpp"
#include "pdmp/estimators.hpp"
#include "pdmp/models/box.hpp"
#include "pdmp/models/gaussian.hpp"
#include "pdmp/rng.hpp"
#include "pdmp/sampler.hpp"

using namespace pdmp;

TEST_CASE("flow advances unfrozen coordinates by v * s * dt") {
  PhasePoint z;
  z.x = {1.0, 2.0, 3.0};
  z.v = {1.0, -2.0, 0.5};
  z.frozen = {0, 1, 0};
  SpeedFunction s({2.0});
  flow_advance(z, 0.25, s);
  CHECK(z.x[0] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(z.x[1] == 2.0);
  CHECK(z.x[2] == doctest::Approx(3.25).epsilon(1e-15));
}

TEST_CASE("clock race: deterministic tie-breaking order") {
  // boundary beats everything at equal times
  ClockOutcome o = race_clocks(1.0, {1.0, 2.0}, {1.0}, 1.0);
  CHECK(o.winner == ClockType::BoundaryHit);
  // unstick beats reflection, lowest index wins inside a type
  o = race_clocks(2.0, {1.5, 1.5}, {1.5}, 1.5);
  CHECK(o.winner == ClockType::Unstick);
  CHECK(o.index == 0);
  o = race_clocks(kInf, {kInf}, {3.0, 2.0, 2.0}, 2.5);
  CHECK(o.winner == ClockType::Reflection);
  CHECK(o.index == 1);
  o = race_clocks(kInf, {}, {kInf}, 4.0);
  CHECK(o.winner == ClockType::Refreshment);
  // nothing pending
  o = race_clocks(kInf, {}, {kInf}, kInf);
  CHECK(o.winner == ClockType::None);
}

TEST_CASE("gaussian zig-zag: skeleton structure and exact interpolation") {
  IsoGaussian model(2);
  PhasePoint z0;
  z0.x = {0.3, -0.4};
  z0.v = {1.0, -1.0};
  z0.ensure_frozen_mask();
  RngBundle rng(5);
  ZigZag zz;
  RunStats stats;
  Skeleton skel = run_sampler(model, zz.boundary_policy(), zz, z0, 200.0, rng, {}, &stats);

  REQUIRE(skel.records.size() > 10);
  CHECK(skel.records.front().tag == EventTag::Init);
  CHECK(skel.records.back().tag == EventTag::Final);
  CHECK(skel.records.back().t == doctest::Approx(200.0).epsilon(1e-12));

  // monotone times; states connected by straight flight between records
  for (std::size_t k = 0; k + 1 < skel.records.size(); ++k) {
    const EventRecord& a = skel.records[k];
    const EventRecord& b = skel.records[k + 1];
    CHECK(b.t >= a.t);
    double dt = b.t - a.t;
    for (int i = 0; i < 2; ++i) {
      auto ii = static_cast<std::size_t>(i);
      CHECK(b.z.x[ii] == doctest::Approx(a.z.x[ii] + a.z.veff(i) * dt).epsilon(1e-10));
    }
  }

  // reflections flip exactly one velocity component
  int reflects = 0;
  for (std::size_t k = 1; k < skel.records.size(); ++k) {
    if (skel.records[k].tag != EventTag::Reflect) continue;
    reflects++;
    const Vec& before = skel.records[k - 1].z.v;
    const Vec& after = skel.records[k].z.v;
    int changed = 0;
    for (std::size_t i = 0; i < before.size(); ++i)
      if (before[i] != after[i]) changed++;
    CHECK(changed == 1);
  }
  CHECK(reflects > 10);

  // the linear gaussian envelope is exact: no thinning rejections
  CHECK(stats.thin_rejections == 0);
  CHECK(stats.tag_counts[static_cast<std::size_t>(EventTag::Reflect)] ==
        static_cast<std::uint64_t>(reflects));
}

TEST_CASE("same seed reproduces the skeleton bit for bit") {
  IsoGaussian model(3);
  PhasePoint z0;
  z0.x = {0.0, 0.1, -0.2};
  z0.v = {1.0, 1.0, -1.0};
  z0.ensure_frozen_mask();
  ZigZag zz(0.5);
  RngBundle r1(42), r2(42);
  Skeleton a = run_sampler(model, zz.boundary_policy(), zz, z0, 50.0, r1);
  Skeleton b = run_sampler(model, zz.boundary_policy(), zz, z0, 50.0, r2);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].t == b.records[k].t);
    CHECK(a.records[k].tag == b.records[k].tag);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(a.records[k].z.x[i] == b.records[k].z.x[i]);
      CHECK(a.records[k].z.v[i] == b.records[k].z.v[i]);
    }
  }
}

TEST_CASE("bps on the gaussian: bounces preserve speed, refreshes redraw it") {
  IsoGaussian model(3);
  PhasePoint z0;
  z0.x = {0.5, 0.0, -0.5};
  z0.v = {1.0, 0.3, -0.2};
  z0.ensure_frozen_mask();
  RngBundle rng(11);
  Bps bps(0.7);
  RunStats stats;
  Skeleton skel = run_sampler(model, bps.boundary_policy(), bps, z0, 300.0, rng, {}, &stats);
  int bounces = 0, refreshes = 0;
  for (std::size_t k = 1; k < skel.records.size(); ++k) {
    const EventRecord& r = skel.records[k];
    if (r.tag == EventTag::Reflect) {
      bounces++;
      double na = 0.0, nb = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        na += skel.records[k - 1].z.v[i] * skel.records[k - 1].z.v[i];
        nb += r.z.v[i] * r.z.v[i];
      }
      CHECK(std::sqrt(nb) == doctest::Approx(std::sqrt(na)).epsilon(1e-12));
    } else if (r.tag == EventTag::Refresh) {
      refreshes++;
    }
  }
  CHECK(bounces > 20);
  CHECK(refreshes > 20);
  CHECK(stats.thin_rejections == 0);
}

TEST_CASE("thinning path: repelling wall rates are dominated, never violated") {
  // 1/x blows up near zero: envelopes are inexact and horizons get capped
  BoxConfig cfg;
  cfg.d = 1;
  cfg.coords.resize(1);
  cfg.coords[0].repelling = true;
  BoxModel model(cfg);
  PhasePoint z0;
  z0.x = {0.5};
  z0.v = {-1.0};
  z0.ensure_frozen_mask();
  RngBundle rng(23);
  ZigZag zz;
  RunStats stats;
  Skeleton skel = run_sampler(model, zz.boundary_policy(), zz, z0, 500.0, rng, {}, &stats);
  CHECK(stats.thin_rejections > 0);
  CHECK(stats.horizon_advances > 0);
  double minx = kInf;
  for (const EventRecord& r : skel.records) minx = std::min(minx, r.z.x[0]);
  CHECK(minx > 0.0);
}

TEST_CASE("boundary records come in same-time pairs around the kernel") {
  BoxConfig cfg;  // plain hard box, uniform density
  cfg.d = 1;
  cfg.coords.resize(1);
  BoxModel model(cfg);
  PhasePoint z0;
  z0.x = {0.5};
  z0.v = {1.0};
  z0.ensure_frozen_mask();
  RngBundle rng(2);
  ZigZag zz;
  Skeleton skel = run_sampler(model, zz.boundary_policy(), zz, z0, 25.0, rng);
  int walls = 0;
  for (std::size_t k = 0; k + 1 < skel.records.size(); ++k) {
    if (skel.records[k].tag != EventTag::BoundaryReflect) continue;
    if (skel.records[k + 1].tag == EventTag::BoundaryReflect &&
        skel.records[k + 1].t == skel.records[k].t) {
      walls++;
      // arrival state sits exactly on a wall, resolution reverses the velocity
      double x = skel.records[k].z.x[0];
      CHECK((x == 0.0 || x == 1.0));
      CHECK(skel.records[k + 1].z.v[0] == -skel.records[k].z.v[0]);
      ++k;
    }
  }
  // flat density, unit speed: one wall hit per unit of clock
  CHECK(walls == 25);
}

TEST_CASE("full and incremental gradient caching agree exactly") {
  BoxConfig cfg;
  cfg.d = 3;
  cfg.coords.resize(3);
  for (auto& c : cfg.coords) {
    c.jump = true;
    c.jump_c = 0.7;
  }
  cfg.gamma = {{0.4, 0.1, 0.0}, {0.0, 0.3, 0.1}, {0.1, 0.0, 0.5}};
  BoxModel model(cfg);
  PhasePoint z0;
  z0.x = {0.3, 0.6, 0.4};
  z0.v = {1.0, -1.0, 1.0};
  z0.ensure_frozen_mask();
  ZigZag zz;
  EngineOptions full, incr;
  full.full_gradient_recompute = true;
  incr.full_gradient_recompute = false;
  RngBundle r1(77), r2(77);
  Skeleton a = run_sampler(model, zz.boundary_policy(), zz, z0, 100.0, r1, full);
  Skeleton b = run_sampler(model, zz.boundary_policy(), zz, z0, 100.0, r2, incr);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].t == b.records[k].t);
    for (std::size_t i = 0; i < 3; ++i) CHECK(a.records[k].z.x[i] == b.records[k].z.x[i]);
  }
}
