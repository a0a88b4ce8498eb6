#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdmp/boundary.hpp"
#include "pdmp/types.hpp"

namespace pdmp {

// Linear-in-time envelope a + b t for a signed rate integrand along the flow,
// valid on the horizon it was requested for.  exact means the envelope equals
// the integrand (no thinning test needed).
struct RateBound {
  double a = 0.0;
  double b = 0.0;
  bool exact = true;
};

// Atom of the reference measure on one coordinate.  kappa is the atom weight
// relative to Lebesgue; the release rate while stuck is |v_i|/kappa (interior)
// or |v_i|/(2 kappa) when the atom sits on the support boundary.
struct StickySpec {
  int coordinate = 0;
  double c = 0.0;
  std::function<double(const PhasePoint&)> kappa;
  bool one_sided = false;
};

// A target distribution plus its boundary geometry.  Everything the engine
// and the sampler kernels need goes through this interface.
class ModelSpec {
 public:
  virtual ~ModelSpec() = default;

  virtual int dim() const = 0;
  virtual const SpeedFunction& speed() const { return unit_speed_; }
  virtual int region_of(const Vec&) const { return 0; }

  // potential Psi (continuous part; one-sided conventions resolved by
  // velocity where it matters) and its gradient
  virtual double psi(const PhasePoint& z) const = 0;
  virtual void grad_psi(const PhasePoint& z, Vec& g) const = 0;
  virtual double grad_component(const PhasePoint& z, int k) const {
    Vec g(static_cast<std::size_t>(dim()));
    grad_psi(z, g);
    return g[static_cast<std::size_t>(k)];
  }

  // Envelope of t -> v_i s dPsi_i(x(t)) on [0, horizon] (ZZ per-coordinate
  // clock) and of t -> s <v, grad Psi(x(t))> (BPS clock).
  virtual RateBound drift_bound_coord(const PhasePoint& z, int i, double horizon) const = 0;
  virtual RateBound drift_bound_dir(const PhasePoint& z, double horizon) const;

  // Earliest facet along the flow from z (strictly positive time).
  virtual FacetHit next_boundary_hit(const PhasePoint& z, double corner_tol) const = 0;
  // Largest horizon over which drift bounds are trustworthy, given the next
  // hit time.  Models with blowing-up rates cap this below tau_star.
  virtual double thin_horizon(const PhasePoint&, double tau_star) const { return tau_star; }
  // Put the flowed state exactly onto the facet (kill roundoff drift).
  virtual void snap_to_facet(PhasePoint&, const FacetHit&) const {}
  virtual FacetGeometry facet_geometry(const PhasePoint& z, const FacetHit& hit) const = 0;

  virtual int sticky_count() const { return 0; }
  virtual const StickySpec& sticky_spec(int) const {
    throw std::logic_error("model has no sticky atoms");
  }
  // index into sticky specs for a coordinate, -1 if none (clamped coordinates
  // are frozen with no spec and never release)
  virtual int sticky_index_of(int) const { return -1; }

  // piecewise-constant gradients admit engine-side caching with local updates
  virtual bool gradient_piecewise_constant() const { return false; }
  // Which gradient components may have changed across an event.  all=true
  // forces a full recompute (default, always safe).
  virtual void gradient_dirty_after(EventTag, const FacetHit*, const PhasePoint&, bool& all,
                                    std::vector<int>& coords) const {
    (void)coords;
    all = true;
  }

  virtual int stat_class_count() const { return 1; }
  virtual std::string stat_class_name(int) const { return "facet"; }

 private:
  SpeedFunction unit_speed_;
};

}  // namespace pdmp
