#pragma once

#include <cstdint>
#include <vector>

#include "pdmp/model.hpp"

namespace pdmp {

// Product-form target on the unit box with optional quadratic coupling:
//
//   Psi(x) = x' Gamma x  -  sum_j 1(x_j > mid_j) jump_j  -  sum_{repelling j} log x_j
//
// per-coordinate reference measure dx_j (+ kappa_j * atom), hard walls at 0/1
// unless the lower wall repels (density vanishes there) or the upper end
// carries a one-sided atom.  Covers the 1D wall/soft-jump/sticky/repelling
// scenarios and the high-dimensional showcase; optionally two speed regions
// split at coordinate 0's jump facet.
struct BoxCoordSpec {
  bool repelling = false;
  bool jump = false;
  double jump_c = 0.0;
  double mid = 0.5;
  bool atom = false;
  double atom_pos = 0.25;
  double atom_kappa = 1.0;
  bool atom_one_sided = false;  // atom at the upper support end (pos must be 1)
};

struct BoxConfig {
  int d = 1;
  std::vector<BoxCoordSpec> coords;            // size d (default-filled if empty)
  std::vector<std::vector<double>> gamma;      // d x d coupling, empty = none
  Vec speeds;                                  // empty = unit; else {s_low, s_high}
};

class BoxModel final : public ModelSpec {
 public:
  explicit BoxModel(BoxConfig cfg);

  int dim() const override { return cfg_.d; }
  const SpeedFunction& speed() const override { return speed_; }
  int region_of(const Vec& x) const override;

  double psi(const PhasePoint& z) const override;
  void grad_psi(const PhasePoint& z, Vec& g) const override;
  double grad_component(const PhasePoint& z, int k) const override;

  RateBound drift_bound_coord(const PhasePoint& z, int i, double horizon) const override;
  double thin_horizon(const PhasePoint& z, double tau_star) const override;

  FacetHit next_boundary_hit(const PhasePoint& z, double corner_tol) const override;
  void snap_to_facet(PhasePoint& z, const FacetHit& hit) const override;
  FacetGeometry facet_geometry(const PhasePoint& z, const FacetHit& hit) const override;

  int sticky_count() const override { return static_cast<int>(sticky_.size()); }
  const StickySpec& sticky_spec(int k) const override {
    return sticky_[static_cast<std::size_t>(k)];
  }
  int sticky_index_of(int coordinate) const override {
    return sticky_lookup_[static_cast<std::size_t>(coordinate)];
  }

  int stat_class_count() const override { return 3; }
  std::string stat_class_name(int c) const override;

  const BoxConfig& config() const { return cfg_; }

 private:
  // facet ids: coordinate * 4 + {0: lower end, 1: upper end, 2: mid, 3: atom}
  enum Which { LowerEnd = 0, UpperEnd = 1, Mid = 2, Atom = 3 };
  double facet_value(int i, int which) const;
  FacetKind facet_kind(int i, int which) const;

  BoxConfig cfg_;
  SpeedFunction speed_;
  std::vector<std::vector<double>> gsym_;  // Gamma + Gamma^T, empty if no coupling
  std::vector<StickySpec> sticky_;
  std::vector<int> sticky_lookup_;
  bool two_region_ = false;
};

// Coupled showcase target: d coordinates on [0,1], soft jump c at 1/2 and a
// unit-weight atom at 1/4 in every coordinate, log-repelling lower walls on
// x_1, x_3, x_5, ... (1-based odd), coupling Gamma = 1.3 I + 0.5 C with
// C_ij ~ N(0,1) w.p. 0.1 else 0, drawn from the given seed.
BoxConfig make_showcase_config(int d, double c, std::uint64_t gamma_seed);

}  // namespace pdmp
