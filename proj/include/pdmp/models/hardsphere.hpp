#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pdmp/model.hpp"

namespace pdmp {

enum class TeleportRule { None, Swap, MoveSmall, Weighted };

const char* teleport_rule_name(TeleportRule rule);
TeleportRule teleport_rule_from(const std::string& name);

// N spheres in R^dim, confined by a smooth potential summed per sphere and
// conditioned on pairwise non-overlap.  The shipped potential is
// psi0(c) = ||c||^2 / 4 whose flight rates are exactly linear in time; a
// custom psi0/grad0 pair can be plugged in for density evaluation, but then
// no generic thinning envelope is available.
struct SphereConfig {
  int N = 6;
  int dim = 2;
  Vec radii;
  TeleportRule rule = TeleportRule::None;
  std::function<double(const Vec& center)> psi0;
  std::function<Vec(const Vec& center)> grad_psi0;
};

// smallest positive root of ||dx + dv t|| = r_i + r_j, +inf when the pair
// never meets; throws if the pair already overlaps beyond tolerance
double collision_time(const Vec& x, const Vec& v, int i, int j, const Vec& radii, int dim);

// unit outward normal (pointing into the overlap region) supported on the
// blocks of i and j
Vec facet_normal(const Vec& x, int i, int j, int dim);

Vec kappa_swap(const Vec& x, int i, int j, int dim);
// reflects sphere i through the center of sphere j (i should be the smaller)
Vec kappa_move_small(const Vec& x, int i, int j, int dim);
Vec kappa_weighted(const Vec& x, int i, int j, int dim, const Vec& radii);

// every pairwise gap >= -tol
bool overlap_check(const Vec& x, const Vec& radii, int dim, double tol = 1e-12);

class HardSphereModel final : public ModelSpec {
 public:
  explicit HardSphereModel(SphereConfig cfg);

  int dim() const override { return cfg_.N * cfg_.dim; }

  double psi(const PhasePoint& z) const override;
  void grad_psi(const PhasePoint& z, Vec& g) const override;
  double grad_component(const PhasePoint& z, int k) const override;

  RateBound drift_bound_coord(const PhasePoint& z, int i, double horizon) const override;

  FacetHit next_boundary_hit(const PhasePoint& z, double corner_tol) const override;
  void snap_to_facet(PhasePoint& z, const FacetHit& hit) const override;
  FacetGeometry facet_geometry(const PhasePoint& z, const FacetHit& hit) const override;

  int stat_class_count() const override { return 1; }
  std::string stat_class_name(int) const override { return "sphere-contact"; }

  // proposal image for the colliding pair under the configured rule
  Vec teleport_image(const Vec& x, int i, int j) const;

  const SphereConfig& config() const { return cfg_; }

 private:
  Vec sphere(const Vec& x, int i) const;
  SphereConfig cfg_;
  bool custom_potential_ = false;
};

// radii 2.0 + 1.5 U(0,1) from the seed, centers spread on a ring wide enough
// that all gaps start positive
SphereConfig make_sphere_config(int N, int dim, TeleportRule rule, std::uint64_t seed);
Vec initial_sphere_configuration(const SphereConfig& cfg);

// indices of the largest and second-largest radius (the traced pair)
std::pair<int, int> largest_pair(const Vec& radii);

// smallest signed pair gap anywhere along the path, including the interior
// minimum of every linear segment (negative = overlap violation)
double min_path_gap(const Skeleton& skel, const Vec& radii, int dim);

}  // namespace pdmp
