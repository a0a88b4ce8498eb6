#pragma once

#include "pdmp/boundary.hpp"
#include "pdmp/model.hpp"
#include "pdmp/types.hpp"

namespace pdmp {

// Per-coordinate switching intensities (v_i s dPsi_i)^+; frozen coordinates
// get rate 0.
Vec zz_rates(const PhasePoint& z, const ModelSpec& model);

// negate one velocity component
PhasePoint zz_flip(const PhasePoint& z, int k);

// crossing keeps the velocity
Vec zz_boundary_r1(const Vec& v);

// reflection negates every component not orthogonal to the facet normal
Vec zz_boundary_r2(const Vec& v, const Vec& n, double tol = 1e-12);

BoundaryPolicy zz_policy(double corner_tol = 1e-9);

}  // namespace pdmp
