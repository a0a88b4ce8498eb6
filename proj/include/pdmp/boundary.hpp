#pragma once

#include <functional>

#include "pdmp/rng.hpp"
#include "pdmp/types.hpp"

namespace pdmp {

enum class FacetKind : int {
  HardWall,    // density vanishes discontinuously behind it: always reflect
  SoftJump,    // density jump: Metropolis cross-or-reflect
  Teleport,    // involutive relocation map
  StickyAtom,  // handled by the sticky layer, never by the kernel
  Vanishing,   // density -> 0 continuously: reflection fires first a.s.
};

// Identity of the earliest facet along the flow, as reported by a model.
struct FacetHit {
  double tau = kInf;             // flow time to the hit
  int facet = -1;                // model-defined facet id
  FacetKind kind = FacetKind::HardWall;
  bool corner = false;           // >=2 facets within corner tolerance
  int a = -1, b = -1;            // model payload (coordinate, pair indices, ...)
};

// Geometry and one-sided data at a resolved hit point.  psi values may share
// an arbitrary common shift (only the difference enters the acceptance).
struct FacetGeometry {
  Vec normal;              // outward unit normal at the hit point
  double psi_near = 0.0;   // one-sided limit on the arrival side
  double psi_far = 0.0;    // one-sided limit behind the facet (+inf = hard wall)
  double s_near = 1.0;
  double s_far = 1.0;
  Vec x_target;            // teleport image; empty = same position
  Vec normal_target;       // outward normal at the image; empty = -normal
  int region_target = 0;   // region label after an accepted crossing
  int stat_class = 0;      // model's facet class for acceptance statistics
};

// min(1, exp(psi_x - psi_y) * s_y / s_x); psi_y = +inf gives 0 (hard wall).
double acceptance_ratio(double psi_x, double psi_y, double s_x, double s_y);

struct BoundaryOutcome {
  PhasePoint z;
  EventTag tag = EventTag::BoundaryReflect;
  bool crossed = false;
};

// Velocity rules are sampler-specific; the kernel itself is sampler-agnostic.
struct BoundaryPolicy {
  // velocity after an accepted crossing/teleport
  std::function<Vec(const Vec& v, const FacetGeometry&)> r1;
  // velocity after a rejection (reflection off the facet normal)
  std::function<Vec(const Vec& v, const Vec& n)> r2;
  double corner_tol = 1e-9;
};

// Algorithm: corner -> full velocity reversal; otherwise propose the image,
// accept with min(1,R) using one u-draw, place the velocity with r1 (accept)
// or r2 (reject).
BoundaryOutcome resolve_boundary(const PhasePoint& at_hit, const FacetGeometry& geo,
                                 const BoundaryPolicy& policy, bool corner, RngStream& rng);

}  // namespace pdmp
