#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pdmp/boundary.hpp"
#include "pdmp/model.hpp"
#include "pdmp/rng.hpp"
#include "pdmp/sampler.hpp"
#include "pdmp/types.hpp"

namespace pdmp {

// Advance the deterministic flow: x += v * s(region) * dt on unfrozen
// coordinates.
void flow_advance(PhasePoint& z, double dt, const SpeedFunction& s);

enum class ClockType : int { None = 0, BoundaryHit, Unstick, Reflection, Refreshment };

struct ClockOutcome {
  ClockType winner = ClockType::None;
  int index = -1;  // coordinate / clock id where applicable
  double tau = kInf;
};

// Deterministic race; ties resolved boundary < unstick < reflection <
// refreshment, then by lowest index.
ClockOutcome race_clocks(double boundary_tau, const std::vector<double>& unstick_taus,
                         const std::vector<double>& reflect_taus, double refresh_tau);

struct EngineOptions {
  double corner_tol = 1e-9;
  double max_events_per_unit_time = 1e6;
  bool full_gradient_recompute = false;  // disable local gradient updates
};

struct FacetClassStats {
  std::uint64_t hits = 0;
  std::uint64_t crossings = 0;
};

struct RunStats {
  std::array<std::uint64_t, kTagCount> tag_counts{};
  std::vector<FacetClassStats> facet;  // indexed by model stat class
  std::uint64_t thin_rejections = 0;
  std::uint64_t horizon_advances = 0;
  std::uint64_t iterations = 0;
};

// Algorithm main loop: race boundary hit / unstick / reflection / refreshment
// clocks over thinning horizons, resolve the winner, record the skeleton.
Skeleton run_sampler(const ModelSpec& model, const BoundaryPolicy& policy,
                     const SamplerKernel& sampler, PhasePoint z0, double clock, RngBundle& rng,
                     const EngineOptions& opts = {}, RunStats* stats = nullptr);

}  // namespace pdmp
