#include "pdmp/boundary.hpp"

#include <cmath>
#include <stdexcept>

namespace pdmp {

double acceptance_ratio(double psi_x, double psi_y, double s_x, double s_y) {
  if (!std::isfinite(psi_x)) throw std::invalid_argument("acceptance_ratio: non-finite near-side psi");
  if (!(s_x > 0.0) || !(s_y > 0.0)) throw std::invalid_argument("acceptance_ratio: speeds must be > 0");
  if (std::isinf(psi_y)) return 0.0;
  double r = std::exp(psi_x - psi_y) * (s_y / s_x);
  return r < 1.0 ? r : 1.0;
}

BoundaryOutcome resolve_boundary(const PhasePoint& at_hit, const FacetGeometry& geo,
                                 const BoundaryPolicy& policy, bool corner, RngStream& rng) {
  BoundaryOutcome out;
  out.z = at_hit;
  if (corner) {
    // frozen coordinates keep their stored arrival velocity; one-sided
    // unsticking negates it to leave the support, so it must not be
    // disturbed while the coordinate is stuck
    for (std::size_t i = 0; i < out.z.v.size(); ++i)
      if (!out.z.is_frozen(static_cast<int>(i))) out.z.v[i] = -out.z.v[i];
    out.tag = EventTag::CornerFlip;
    return out;
  }

  double alpha = acceptance_ratio(geo.psi_near, geo.psi_far, geo.s_near, geo.s_far);
  double u = rng.uniform();
  if (alpha > u) {
    bool moved = !geo.x_target.empty();
    if (moved) out.z.x = geo.x_target;
    out.z.region = geo.region_target;
    out.z.v = policy.r1(at_hit.v, geo);
    out.tag = moved ? EventTag::Teleport : EventTag::BoundaryCross;
    out.crossed = true;
  } else {
    out.z.v = policy.r2(at_hit.v, geo.normal);
    out.tag = EventTag::BoundaryReflect;
  }
  return out;
}

}  // namespace pdmp
