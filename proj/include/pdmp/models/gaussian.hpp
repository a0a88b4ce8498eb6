#pragma once

#include <cmath>

#include "pdmp/model.hpp"

namespace pdmp {

// Psi(x) = ||x||^2 / 2 on R^d: no boundaries, exact linear clocks.
class IsoGaussian final : public ModelSpec {
 public:
  explicit IsoGaussian(int d) : d_(d) {}

  int dim() const override { return d_; }

  double psi(const PhasePoint& z) const override {
    double q = 0.0;
    for (double xi : z.x) q += xi * xi;
    return 0.5 * q;
  }

  void grad_psi(const PhasePoint& z, Vec& g) const override { g = z.x; }

  double grad_component(const PhasePoint& z, int k) const override {
    return z.x[static_cast<std::size_t>(k)];
  }

  RateBound drift_bound_coord(const PhasePoint& z, int i, double) const override {
    auto ii = static_cast<std::size_t>(i);
    double s = speed()(z.region);
    double vi = z.veff(i);
    // v_i * x_i(t) is linear in t: the envelope is exact
    return RateBound{vi * s * z.x[ii], vi * s * s * vi, true};
  }

  FacetHit next_boundary_hit(const PhasePoint&, double) const override { return FacetHit{}; }

  FacetGeometry facet_geometry(const PhasePoint&, const FacetHit&) const override {
    throw std::logic_error("IsoGaussian has no boundaries");
  }

 private:
  int d_;
};

}  // namespace pdmp
