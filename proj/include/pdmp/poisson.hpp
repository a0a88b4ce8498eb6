#pragma once

#include <functional>

#include "pdmp/rng.hpp"

namespace pdmp {

// First arrival of an inhomogeneous Poisson process, parametrized by the
// uniform draw u (equivalently the unit-exponential budget -log u) so the
// inversions are testable with frozen inputs.

// rate constant >= 0; +inf when rate == 0
double ipp_sample_constant(double rate, double u);

// rate t -> (a + b t)^+ ; smallest tau with integrated rate = -log u,
// +inf when the total mass never reaches -log u
double ipp_sample_linear(double a, double b, double u);

// Same inversions driven by an explicit exponential budget e = -log u.
double first_arrival_constant(double rate, double e);
double first_arrival_linear(double a, double b, double e);

// Thinning against a dominating envelope t -> (a + b t)^+ valid for all
// t >= 0.  rate_fn must be \le the envelope; a detected violation beyond
// rel. tolerance 1e-9 throws (it would silently bias the sampler).
double ipp_sample_thinned(const std::function<double(double)>& rate_fn, double a, double b,
                          RngStream& rng);

}  // namespace pdmp
