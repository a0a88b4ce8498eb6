#pragma once

#include <functional>
#include <map>

#include "pdmp/types.hpp"

namespace pdmp {

using StateFn = std::function<double(const PhasePoint&)>;

// Exact path integral (1/T) int f(Z_t) dt along the skeleton; per-segment
// Gauss-Legendre with quad_points nodes (2 is exact for f affine in x).
double time_average(const Skeleton& skel, const StateFn& f, int quad_points = 2);

// Self-normalized importance-weighted average with weights 1/s(region):
// int f/s dt / int 1/s dt.  With a unit speed this is bit-identical to
// time_average.
double reweighted_average(const Skeleton& skel, const StateFn& f, int quad_points = 2);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

// Batch-means Monte Carlo standard error of the (re)weighted time average.
MeanSe weighted_mean_se(const Skeleton& skel, const StateFn& f, bool inverse_speed_weights,
                        int batches = 50, int quad_points = 2);

struct Histogram {
  double lo = 0.0, hi = 1.0;
  int nbins = 0;
  Vec mass;                           // occupation time per bin (continuous part)
  std::map<double, double> atoms;     // atom location -> frozen occupation time
  double below = 0.0, above = 0.0;    // continuous mass outside [lo,hi]
  double total = 0.0;                 // total elapsed time
};

// Exact segment-clipped occupation times of one coordinate; frozen stretches
// are booked under their atom location.
Histogram occupation_histogram(const Skeleton& skel, int coordinate, double lo, double hi,
                               int nbins);

}  // namespace pdmp
