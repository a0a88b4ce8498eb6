#include "pdmp/models/hardsphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "pdmp/rng.hpp"

namespace pdmp {

namespace {

inline std::size_t blk(int sphere, int dim, int k) {
  return static_cast<std::size_t>(sphere * dim + k);
}

inline std::size_t su(int i) { return static_cast<std::size_t>(i); }

double pair_dist2(const Vec& x, int i, int j, int dim) {
  double d2 = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double dx = x[blk(i, dim, k)] - x[blk(j, dim, k)];
    d2 += dx * dx;
  }
  return d2;
}

}  // namespace

const char* teleport_rule_name(TeleportRule rule) {
  switch (rule) {
    case TeleportRule::None: return "none";
    case TeleportRule::Swap: return "swap";
    case TeleportRule::MoveSmall: return "move-small";
    case TeleportRule::Weighted: return "weighted";
  }
  return "?";
}

TeleportRule teleport_rule_from(const std::string& name) {
  if (name == "none") return TeleportRule::None;
  if (name == "swap") return TeleportRule::Swap;
  if (name == "move-small") return TeleportRule::MoveSmall;
  if (name == "weighted") return TeleportRule::Weighted;
  throw std::invalid_argument("unknown teleport rule: " + name);
}

double collision_time(const Vec& x, const Vec& v, int i, int j, const Vec& radii, int dim) {
  const double R = radii[su(i)] + radii[su(j)];
  double c = -R * R, b = 0.0, a = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double dx = x[blk(i, dim, k)] - x[blk(j, dim, k)];
    const double dv = v[blk(i, dim, k)] - v[blk(j, dim, k)];
    c += dx * dx;
    b += 2.0 * dx * dv;
    a += dv * dv;
  }
  if (c < -1e-9 * R * R)
    throw std::runtime_error("hard-sphere overlap between spheres " + std::to_string(i) +
                             " and " + std::to_string(j));
  // Exactly at contact (up to snap roundoff): a receding pair never meets
  // again, an approaching one should have been turned by the kernel.  Return
  // 0 so the engine fails loudly instead of flowing into the overlap.
  if (c <= 0.0) return b < 0.0 ? 0.0 : kInf;
  if (b >= 0.0) return kInf;
  const double disc = b * b - 4.0 * a * c;
  if (disc <= 0.0) return kInf;
  // smaller root of a t^2 + b t + c; this form has no cancellation for b < 0
  return 2.0 * c / (-b + std::sqrt(disc));
}

Vec facet_normal(const Vec& x, int i, int j, int dim) {
  Vec n(x.size(), 0.0);
  const double dist = std::sqrt(pair_dist2(x, i, j, dim));
  if (!(dist > 0.0)) throw std::logic_error("facet_normal: coincident sphere centers");
  // unit vector supported on the two blocks; moving along it shrinks the gap
  const double inv = 1.0 / (dist * std::numbers::sqrt2);
  for (int k = 0; k < dim; ++k) {
    const double dx = x[blk(i, dim, k)] - x[blk(j, dim, k)];
    n[blk(i, dim, k)] = -dx * inv;
    n[blk(j, dim, k)] = dx * inv;
  }
  return n;
}

Vec kappa_swap(const Vec& x, int i, int j, int dim) {
  Vec y = x;
  for (int k = 0; k < dim; ++k) {
    y[blk(i, dim, k)] = x[blk(j, dim, k)];
    y[blk(j, dim, k)] = x[blk(i, dim, k)];
  }
  return y;
}

Vec kappa_move_small(const Vec& x, int i, int j, int dim) {
  Vec y = x;
  for (int k = 0; k < dim; ++k)
    y[blk(i, dim, k)] = 2.0 * x[blk(j, dim, k)] - x[blk(i, dim, k)];
  return y;
}

Vec kappa_weighted(const Vec& x, int i, int j, int dim, const Vec& radii) {
  const double w = (radii[su(i)] - radii[su(j)]) / (radii[su(i)] + radii[su(j)]);
  // both centers land at the swapped position plus the same shift, so the
  // separation vector is exactly negated and the pair stays at contact
  Vec y = x;
  for (int k = 0; k < dim; ++k) {
    const double shift = (x[blk(i, dim, k)] - x[blk(j, dim, k)]) * w;
    y[blk(i, dim, k)] = x[blk(j, dim, k)] + shift;
    y[blk(j, dim, k)] = x[blk(i, dim, k)] + shift;
  }
  return y;
}

bool overlap_check(const Vec& x, const Vec& radii, int dim, double tol) {
  const int N = static_cast<int>(radii.size());
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      const double R = radii[su(i)] + radii[su(j)];
      if (std::sqrt(pair_dist2(x, i, j, dim)) - R < -tol) return false;
    }
  return true;
}

HardSphereModel::HardSphereModel(SphereConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.N < 2) throw std::invalid_argument("HardSphereModel: need at least two spheres");
  if (cfg_.dim < 1) throw std::invalid_argument("HardSphereModel: dim must be positive");
  if (static_cast<int>(cfg_.radii.size()) != cfg_.N)
    throw std::invalid_argument("HardSphereModel: radii size mismatch");
  for (double r : cfg_.radii)
    if (!(r > 0.0)) throw std::invalid_argument("HardSphereModel: radii must be positive");

  const bool has_psi = static_cast<bool>(cfg_.psi0);
  if (has_psi != static_cast<bool>(cfg_.grad_psi0))
    throw std::invalid_argument("HardSphereModel: psi0 and grad_psi0 go together");
  custom_potential_ = has_psi;
  if (!has_psi) {
    cfg_.psi0 = [](const Vec& c) {
      double q = 0.0;
      for (double ck : c) q += ck * ck;
      return 0.25 * q;
    };
    cfg_.grad_psi0 = [](const Vec& c) {
      Vec g(c.size());
      for (std::size_t k = 0; k < c.size(); ++k) g[k] = 0.5 * c[k];
      return g;
    };
  }
}

Vec HardSphereModel::sphere(const Vec& x, int i) const {
  Vec c(su(cfg_.dim));
  for (int k = 0; k < cfg_.dim; ++k) c[su(k)] = x[blk(i, cfg_.dim, k)];
  return c;
}

double HardSphereModel::psi(const PhasePoint& z) const {
  double total = 0.0;
  for (int i = 0; i < cfg_.N; ++i) total += cfg_.psi0(sphere(z.x, i));
  return total;
}

void HardSphereModel::grad_psi(const PhasePoint& z, Vec& g) const {
  g.assign(su(dim()), 0.0);
  for (int i = 0; i < cfg_.N; ++i) {
    const Vec gi = cfg_.grad_psi0(sphere(z.x, i));
    for (int k = 0; k < cfg_.dim; ++k) g[blk(i, cfg_.dim, k)] = gi[su(k)];
  }
}

double HardSphereModel::grad_component(const PhasePoint& z, int k) const {
  const Vec gi = cfg_.grad_psi0(sphere(z.x, k / cfg_.dim));
  return gi[su(k % cfg_.dim)];
}

RateBound HardSphereModel::drift_bound_coord(const PhasePoint& z, int i, double) const {
  if (custom_potential_)
    throw std::runtime_error(
        "HardSphereModel: no generic thinning envelope for a custom potential");
  // v_i (x_i + v_i t) / 2 is exactly linear in t
  const double vi = z.veff(i);
  return RateBound{0.5 * vi * z.x[su(i)], 0.5 * vi * vi, true};
}

FacetHit HardSphereModel::next_boundary_hit(const PhasePoint& z, double corner_tol) const {
  FacetHit best;
  int hits_near_min = 0;

  for (int i = 0; i < cfg_.N; ++i)
    for (int j = i + 1; j < cfg_.N; ++j) {
      const double tau = collision_time(z.x, z.v, i, j, cfg_.radii, cfg_.dim);
      if (tau == kInf) continue;
      if (tau < best.tau - corner_tol) {
        best.tau = tau;
        best.facet = i * cfg_.N + j;
        best.a = i;
        best.b = j;
        hits_near_min = 1;
      } else if (tau <= best.tau + corner_tol) {
        hits_near_min++;
        if (tau < best.tau) {
          best.tau = tau;
          best.facet = i * cfg_.N + j;
          best.a = i;
          best.b = j;
        }
      }
    }

  best.kind = cfg_.rule == TeleportRule::None ? FacetKind::HardWall : FacetKind::Teleport;
  if (hits_near_min > 1) best.corner = true;
  return best;
}

void HardSphereModel::snap_to_facet(PhasePoint& z, const FacetHit& hit) const {
  const int i = hit.a, j = hit.b;
  const double R = cfg_.radii[su(i)] + cfg_.radii[su(j)];
  const double dist = std::sqrt(pair_dist2(z.x, i, j, cfg_.dim));
  if (!(dist > 0.0)) throw std::logic_error("snap_to_facet: coincident sphere centers");
  // recenter the pair about its midpoint with the gap forced to exactly R
  const double scale = 0.5 * R / dist;
  for (int k = 0; k < cfg_.dim; ++k) {
    const double xi = z.x[blk(i, cfg_.dim, k)];
    const double xj = z.x[blk(j, cfg_.dim, k)];
    const double mid = 0.5 * (xi + xj);
    const double half = (xi - xj) * scale;
    z.x[blk(i, cfg_.dim, k)] = mid + half;
    z.x[blk(j, cfg_.dim, k)] = mid - half;
  }
}

Vec HardSphereModel::teleport_image(const Vec& x, int i, int j) const {
  switch (cfg_.rule) {
    case TeleportRule::Swap:
      return kappa_swap(x, i, j, cfg_.dim);
    case TeleportRule::MoveSmall:
      // reflect the smaller sphere through the center of the larger
      return cfg_.radii[su(i)] <= cfg_.radii[su(j)]
                 ? kappa_move_small(x, i, j, cfg_.dim)
                 : kappa_move_small(x, j, i, cfg_.dim);
    case TeleportRule::Weighted:
      return kappa_weighted(x, i, j, cfg_.dim, cfg_.radii);
    case TeleportRule::None:
      break;
  }
  throw std::logic_error("teleport_image: no teleportation rule configured");
}

FacetGeometry HardSphereModel::facet_geometry(const PhasePoint& z, const FacetHit& hit) const {
  const int i = hit.a, j = hit.b;
  FacetGeometry geo;
  geo.normal = facet_normal(z.x, i, j, cfg_.dim);
  if (cfg_.rule == TeleportRule::None) {
    geo.psi_far = kInf;
    return geo;
  }

  const Vec y = teleport_image(z.x, i, j);
  int moved[2] = {i, j};
  int moved_count = 2;
  if (cfg_.rule == TeleportRule::MoveSmall) {
    moved[0] = cfg_.radii[su(i)] <= cfg_.radii[su(j)] ? i : j;
    moved_count = 1;
  }

  // Only the moved blocks enter the density ratio; everything else cancels.
  geo.psi_near = 0.0;
  for (int m = 0; m < moved_count; ++m) geo.psi_near += cfg_.psi0(sphere(z.x, moved[m]));

  // The image must keep every third sphere strictly clear.  The colliding
  // pair itself stays at contact by construction and is skipped.
  for (int m = 0; m < moved_count; ++m)
    for (int other = 0; other < cfg_.N; ++other) {
      if (other == i || other == j) continue;
      const double R = cfg_.radii[su(moved[m])] + cfg_.radii[su(other)];
      if (pair_dist2(y, moved[m], other, cfg_.dim) <= R * R) {
        geo.psi_far = kInf;
        return geo;
      }
    }

  geo.psi_far = 0.0;
  for (int m = 0; m < moved_count; ++m) geo.psi_far += cfg_.psi0(sphere(y, moved[m]));
  geo.x_target = y;
  geo.normal_target = facet_normal(y, i, j, cfg_.dim);
  return geo;
}

SphereConfig make_sphere_config(int N, int dim, TeleportRule rule, std::uint64_t seed) {
  SphereConfig cfg;
  cfg.N = N;
  cfg.dim = dim;
  cfg.rule = rule;
  RngStream rng(seed, 9);
  cfg.radii.resize(su(N));
  for (int i = 0; i < N; ++i) cfg.radii[su(i)] = 2.0 + 1.5 * rng.uniform();
  return cfg;
}

Vec initial_sphere_configuration(const SphereConfig& cfg) {
  if (cfg.dim < 2) throw std::invalid_argument("ring placement needs dim >= 2");
  const int N = cfg.N;
  // ring radius such that every chord clears the corresponding radii sum
  double rho = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      const int sep = std::min(j - i, N - (j - i));
      const double chord = 2.0 * std::sin(std::numbers::pi * sep / N);
      rho = std::max(rho, (cfg.radii[su(i)] + cfg.radii[su(j)]) / chord);
    }
  rho *= 1.1;

  Vec x(su(N * cfg.dim), 0.0);
  for (int i = 0; i < N; ++i) {
    const double th = 2.0 * std::numbers::pi * i / N;
    x[blk(i, cfg.dim, 0)] = rho * std::cos(th);
    x[blk(i, cfg.dim, 1)] = rho * std::sin(th);
  }
  if (!overlap_check(x, cfg.radii, cfg.dim)) throw std::logic_error("ring placement failed");
  return x;
}

double min_path_gap(const Skeleton& skel, const Vec& radii, int dim) {
  const int N = static_cast<int>(radii.size());
  double min_gap = kInf;

  auto gaps_at = [&](const Vec& x) {
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) {
        const double R = radii[su(i)] + radii[su(j)];
        min_gap = std::min(min_gap, std::sqrt(pair_dist2(x, i, j, dim)) - R);
      }
  };

  for (std::size_t r = 0; r < skel.records.size(); ++r) {
    const Vec& x0 = skel.records[r].z.x;
    gaps_at(x0);
    if (r + 1 == skel.records.size()) break;
    const double dt = skel.records[r + 1].t - skel.records[r].t;
    if (!(dt > 0.0)) continue;
    const Vec& x1 = skel.records[r + 1].z.x;
    // interior minimum of each pair's quadratic distance along the segment
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) {
        double q = 0.0, qd = 0.0, dd = 0.0;
        for (int k = 0; k < dim; ++k) {
          const double dx = x0[blk(i, dim, k)] - x0[blk(j, dim, k)];
          const double dx1 = x1[blk(i, dim, k)] - x1[blk(j, dim, k)];
          const double dv = dx1 - dx;  // per unit of segment fraction
          q += dx * dx;
          qd += dx * dv;
          dd += dv * dv;
        }
        if (!(dd > 0.0)) continue;
        const double tstar = -qd / dd;
        if (tstar <= 0.0 || tstar >= 1.0) continue;
        const double d2 = q + 2.0 * qd * tstar + dd * tstar * tstar;
        const double R = radii[su(i)] + radii[su(j)];
        min_gap = std::min(min_gap, std::sqrt(std::max(d2, 0.0)) - R);
      }
  }
  return min_gap;
}

std::pair<int, int> largest_pair(const Vec& radii) {
  const int N = static_cast<int>(radii.size());
  if (N < 2) throw std::invalid_argument("largest_pair: need at least two radii");
  int a = 0;
  for (int i = 1; i < N; ++i)
    if (radii[su(i)] > radii[su(a)]) a = i;
  int b = a == 0 ? 1 : 0;
  for (int i = 0; i < N; ++i) {
    if (i == a) continue;
    if (radii[su(i)] > radii[su(b)]) b = i;
  }
  return {a, b};
}

}  // namespace pdmp
