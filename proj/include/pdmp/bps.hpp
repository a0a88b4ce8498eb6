#pragma once

#include "pdmp/boundary.hpp"
#include "pdmp/model.hpp"
#include "pdmp/types.hpp"

namespace pdmp {

// Global switching intensity (s <v, grad Psi>)^+ over unfrozen coordinates.
double bps_rate(const PhasePoint& z, const ModelSpec& model);

// Specular reflection of v in the hyperplane orthogonal to g.
Vec bps_bounce(const Vec& v, const Vec& g);

// Same map with the facet normal.
Vec bps_boundary_bounce(const Vec& v, const Vec& n);

// Teleport exit velocity w = R_{n_y}(-v); checks that w points inward at the
// arrival facet (<n_y, w> < 0).
Vec bps_teleport_velocity(const Vec& v, const Vec& n_x, const Vec& n_y);

BoundaryPolicy bps_policy(double corner_tol = 1e-9);

}  // namespace pdmp
