#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdmp/model.hpp"
#include "pdmp/rng.hpp"

namespace pdmp {

// Latent infection-time target for a partially observed epidemic.  Each
// individual moves S -> I -> N -> R; notification times tau_star and removal
// times tau_circ are observed (infinite when past the horizon T), infection
// times x_i are latent on [0, tau_star_i] for notified individuals and on
// [0, T] with an atom at T (still susceptible) for the others.
struct SirData {
  int d = 0;
  double T = 0.0;
  Vec tau_star;                        // kInf = not notified before T
  Vec tau_circ;                        // kInf = not removed before T
  std::vector<std::vector<double>> C;  // infectivity of i towards j, zero diagonal
  double gamma = 0.5;                  // infectivity reduction after notification
  double delay_beta = 1.0;             // Exp rate of the infection -> notification delay

  bool notified(int i) const { return tau_star[static_cast<std::size_t>(i)] < T; }
  void validate() const;
};

// Strict "a comes before b" infinitesimally after now.  Resolves on-facet
// states (exact ties) by where the flow is about to put them.
inline bool flow_below(double a, double va, double b, double vb) {
  if (a != b) return a < b;
  return va < vb;
}

// pairwise rate of i infecting j, total pressure on j, and the pressure
// integrated over [0, T] along x_j's history (closed form, piecewise linear)
double sir_beta_ij(const SirData& data, const Vec& x, int i, int j);
double sir_pressure(const SirData& data, const Vec& x, int j);
double sir_B(const SirData& data, const Vec& x, int j);

// pressure with on-facet states resolved by velocity
double sir_pressure_directed(const SirData& data, const PhasePoint& z, int j);

// d/dx_k of the negative log-likelihood: sum of the per-pair piecewise
// constants minus the delay rate; plain version compares positions directly,
// the directed one resolves exact ties by velocity
double sir_grad_neglog(const SirData& data, const Vec& x, int k);
double sir_grad_neglog_directed(const SirData& data, const PhasePoint& z, int k);

// Unnormalized log density with respect to (Lebesgue on the continuous
// coordinates) x (counting measure on the flagged atoms).  Atom coordinates
// must sit exactly at T and be non-notified.  Returns -inf off support.
double sir_logdensity(const SirData& data, const Vec& x, const std::vector<std::uint8_t>& at_atom);

struct SirClamp {
  int coordinate = 0;
  double value = 0.0;
};

class SirModel final : public ModelSpec {
 public:
  explicit SirModel(SirData data, std::vector<SirClamp> clamps = {});

  int dim() const override { return data_.d; }

  double psi(const PhasePoint& z) const override;
  void grad_psi(const PhasePoint& z, Vec& g) const override;
  double grad_component(const PhasePoint& z, int k) const override;

  RateBound drift_bound_coord(const PhasePoint& z, int i, double horizon) const override;

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

  bool gradient_piecewise_constant() const override { return true; }
  void gradient_dirty_after(EventTag tag, const FacetHit* hit, const PhasePoint& z, bool& all,
                            std::vector<int>& coords) const override;

  int stat_class_count() const override { return 6; }
  std::string stat_class_name(int c) const override;

  // facet ids: code * d^2 + a * d + b; a is the moving coordinate, b the
  // collision partner / threshold owner (b = a for single-coordinate facets)
  enum FacetCode {
    WallZero = 0,     // (x_a, v_a) = (0, -1)
    WallNotify,       // (x_a, v_a) = (tau_star_a, +1), notified a
    AtomT,            // x_a = T, non-notified a
    Collision,        // x_a = x_b, both moving
    CrossNotify,      // x_a = tau_star_b, b != a
    CrossRemoval,     // x_a = tau_circ_b, b != a
    CrossFrozen,      // x_a = x_b with b frozen at an interior value
  };
  static int facet_code(int facet, int d) { return facet / (d * d); }

  double crossing_probability(const PhasePoint& z_at_facet, const FacetHit& hit) const;

  // feasible starting point: notified coordinates are placed inside windows
  // where some already-placed individual exerts pressure on them (recruiting
  // an occult helper when needed); everyone else starts at the atom
  PhasePoint initial_state(RngStream& rng) const;

  const SirData& data() const { return data_; }
  const std::vector<SirClamp>& clamps() const { return clamps_; }
  bool clamped(int i) const { return clamped_[static_cast<std::size_t>(i)] != 0; }

 private:
  int pack(int code, int a, int b) const { return code * data_.d * data_.d + a * data_.d + b; }

  SirData data_;
  std::vector<SirClamp> clamps_;
  std::vector<std::uint8_t> clamped_;
  std::vector<StickySpec> sticky_;
  std::vector<int> sticky_lookup_;
};

// Forward simulation of the epidemic (Gillespie over the piecewise-constant
// pressures).  params supplies d, T, C, gamma, delay_beta; the observation
// vectors in params are ignored.  Notification delays are Exp(delay_beta),
// removal delays Exp(removal_beta).
struct SirSimOutcome {
  SirData data;  // tau_star / tau_circ filled in, truncated to kInf past T
  Vec x_true;    // infection times capped at T
  int infected = 0;
  int notified_count = 0;
  int removed = 0;
};

SirSimOutcome sir_forward_simulate(const SirData& params, int seed_case, double removal_beta,
                                   RngStream& rng);

// Banded experiment family: C_{i,j} = dist_value * 1(|i-j| <= dist_band) *
// theta_i * xi_j with theta, xi ~ 0.9 U(0,1) + 0.7 drawn from baseline_seed.
struct SirParams {
  int d = 50;
  double T = 5.0;
  double gamma = 0.5;
  double delay_beta = 0.3;
  double removal_beta = 0.5;
  int dist_band = 5;
  double dist_value = 0.4;
  std::uint64_t baseline_seed = 1;
  std::vector<SirClamp> clamps;
};

SirData sir_params_to_data(const SirParams& p);

// key = value parameter file (d, T, gamma, delay_beta, removal_beta,
// dist_band, dist_value, baseline_seed, clamp = "i:value[,j:value...]")
SirParams sir_read_params(const std::string& path);

// "i:value[,j:value...]"
std::vector<SirClamp> sir_parse_clamps(const std::string& text);

// dataset CSV: header id,tau_star,tau_circ; empty fields mean infinity
void sir_write_dataset_csv(const std::string& path, const SirData& data);
void sir_read_dataset_csv(const std::string& path, SirData& data);

}  // namespace pdmp
