#include "pdmp/models/sir.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pdmp {

void SirData::validate() const {
  auto n = static_cast<std::size_t>(d);
  if (d <= 0) throw std::invalid_argument("SirData: d must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("SirData: T must be positive");
  if (tau_star.size() != n || tau_circ.size() != n)
    throw std::invalid_argument("SirData: observation vectors must have length d");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("SirData: gamma must be in (0,1)");
  if (!(delay_beta > 0.0)) throw std::invalid_argument("SirData: delay_beta must be positive");
  if (C.size() != n) throw std::invalid_argument("SirData: C must be d x d");
  for (std::size_t i = 0; i < n; ++i) {
    if (C[i].size() != n) throw std::invalid_argument("SirData: C must be d x d");
    if (C[i][i] != 0.0) throw std::invalid_argument("SirData: C diagonal must be zero");
    for (double c : C[i])
      if (!(c >= 0.0) || !std::isfinite(c))
        throw std::invalid_argument("SirData: C entries must be finite and nonnegative");
    if (!(tau_star[i] > 0.0) || !(tau_circ[i] > 0.0))
      throw std::invalid_argument("SirData: observed times must be positive");
    if (std::isfinite(tau_star[i]) && tau_star[i] >= T)
      throw std::invalid_argument("SirData: notification at or past T must be stored as infinity");
    if (std::isfinite(tau_circ[i])) {
      if (tau_circ[i] >= T)
        throw std::invalid_argument("SirData: removal at or past T must be stored as infinity");
      if (!std::isfinite(tau_star[i]) || tau_circ[i] <= tau_star[i])
        throw std::invalid_argument("SirData: removal requires an earlier notification");
    }
  }
}

double sir_beta_ij(const SirData& data, const Vec& x, int i, int j) {
  auto ii = static_cast<std::size_t>(i);
  auto jj = static_cast<std::size_t>(j);
  if (!(x[ii] < x[jj])) return 0.0;
  if (x[jj] <= data.tau_star[ii]) return data.C[ii][jj];
  if (x[jj] <= data.tau_circ[ii]) return data.gamma * data.C[ii][jj];
  return 0.0;
}

double sir_pressure(const SirData& data, const Vec& x, int j) {
  double total = 0.0;
  for (int i = 0; i < data.d; ++i)
    if (i != j) total += sir_beta_ij(data, x, i, j);
  return total;
}

double sir_B(const SirData& data, const Vec& x, int j) {
  auto jj = static_cast<std::size_t>(j);
  double xj = x[jj];
  double total = 0.0;
  for (int i = 0; i < data.d; ++i) {
    if (i == j) continue;
    auto ii = static_cast<std::size_t>(i);
    double c = data.C[ii][jj];
    if (c == 0.0) continue;
    double full = std::min(data.tau_star[ii], xj) - std::min(x[ii], xj);
    double reduced = std::min(data.tau_circ[ii], xj) - std::min(data.tau_star[ii], xj);
    total += c * (full + data.gamma * reduced);
  }
  return total;
}

double sir_pressure_directed(const SirData& data, const PhasePoint& z, int j) {
  auto jj = static_cast<std::size_t>(j);
  double xj = z.x[jj], vj = z.veff(j);
  double total = 0.0;
  for (int i = 0; i < data.d; ++i) {
    if (i == j) continue;
    auto ii = static_cast<std::size_t>(i);
    if (data.C[ii][jj] == 0.0) continue;
    if (!flow_below(z.x[ii], z.veff(i), xj, vj)) continue;
    if (!flow_below(data.tau_star[ii], 0.0, xj, vj))
      total += data.C[ii][jj];
    else if (!flow_below(data.tau_circ[ii], 0.0, xj, vj))
      total += data.gamma * data.C[ii][jj];
  }
  return total;
}

double sir_grad_neglog_directed(const SirData& data, const PhasePoint& z, int k) {
  auto kk = static_cast<std::size_t>(k);
  double xk = z.x[kk], vk = z.veff(k);
  double g = -data.delay_beta;
  for (int i = 0; i < data.d; ++i) {
    if (i == k) continue;
    auto ii = static_cast<std::size_t>(i);
    if (flow_below(xk, vk, z.x[ii], z.veff(i)))
      g -= data.C[kk][ii];
    else if (flow_below(xk, vk, data.tau_star[ii], 0.0))
      g += data.C[ii][kk];
    else if (flow_below(xk, vk, data.tau_circ[ii], 0.0))
      g += data.gamma * data.C[ii][kk];
  }
  return g;
}

double sir_grad_neglog(const SirData& data, const Vec& x, int k) {
  auto kk = static_cast<std::size_t>(k);
  double g = -data.delay_beta;
  for (int i = 0; i < data.d; ++i) {
    if (i == k) continue;
    auto ii = static_cast<std::size_t>(i);
    if (x[kk] < x[ii])
      g -= data.C[kk][ii];
    else if (x[kk] < data.tau_star[ii])
      g += data.C[ii][kk];
    else if (x[kk] < data.tau_circ[ii])
      g += data.gamma * data.C[ii][kk];
  }
  return g;
}

double sir_logdensity(const SirData& data, const Vec& x,
                      const std::vector<std::uint8_t>& at_atom) {
  auto n = static_cast<std::size_t>(data.d);
  if (x.size() != n || at_atom.size() != n)
    throw std::invalid_argument("sir_logdensity: size mismatch");
  double l = 0.0;
  for (int j = 0; j < data.d; ++j) l -= sir_B(data, x, j);
  for (int j = 0; j < data.d; ++j) {
    auto jj = static_cast<std::size_t>(j);
    if (at_atom[jj]) {
      if (data.notified(j) || x[jj] != data.T)
        throw std::invalid_argument("sir_logdensity: atom flag on an invalid coordinate");
      continue;  // kappa cancels the pressure factor; only exp(-B) remains
    }
    if (x[jj] < 0.0) return -kInf;
    double b = sir_pressure(data, x, j);
    if (!(b > 0.0)) return -kInf;
    l += std::log(b);
    if (data.notified(j)) {
      if (x[jj] > data.tau_star[jj]) return -kInf;
      l += std::log(data.delay_beta) - data.delay_beta * (data.tau_star[jj] - x[jj]);
    } else {
      if (x[jj] > data.T) return -kInf;
      l += -data.delay_beta * (data.T - x[jj]);
    }
  }
  return l;
}

namespace {

// beta_target with the relation of one coordinate to one facet value forced.
// fkind 0: coord vs x_owner; 1: coord vs tau_star_owner; 2: coord vs
// tau_circ_owner.  fside -1 puts coord below the facet value, +1 above.
double pressure_forced(const SirData& D, const PhasePoint& z, int target, int fcoord, int fowner,
                       int fkind, int fside) {
  auto tt = static_cast<std::size_t>(target);
  double xt = z.x[tt], vt = z.veff(target);
  double total = 0.0;
  for (int i = 0; i < D.d; ++i) {
    if (i == target) continue;
    auto ii = static_cast<std::size_t>(i);
    if (D.C[ii][tt] == 0.0) continue;
    bool infector_first;
    if (fkind == 0 && ((fcoord == target && fowner == i) || (fcoord == i && fowner == target)))
      infector_first = (fcoord == target) ? (fside > 0) : (fside < 0);
    else
      infector_first = flow_below(z.x[ii], z.veff(i), xt, vt);
    if (!infector_first) continue;
    bool past_star;
    if (fkind == 1 && fcoord == target && fowner == i)
      past_star = fside > 0;
    else
      past_star = flow_below(D.tau_star[ii], 0.0, xt, vt);
    if (!past_star) {
      total += D.C[ii][tt];
      continue;
    }
    bool past_circ;
    if (fkind == 2 && fcoord == target && fowner == i)
      past_circ = fside > 0;
    else
      past_circ = flow_below(D.tau_circ[ii], 0.0, xt, vt);
    if (!past_circ) total += D.gamma * D.C[ii][tt];
  }
  return total;
}

double neg_log_or_inf(double p) { return p > 0.0 ? -std::log(p) : kInf; }

}  // namespace

SirModel::SirModel(SirData data, std::vector<SirClamp> clamps)
    : data_(std::move(data)), clamps_(std::move(clamps)) {
  data_.validate();
  auto n = static_cast<std::size_t>(data_.d);
  clamped_.assign(n, 0);
  for (const SirClamp& c : clamps_) {
    if (c.coordinate < 0 || c.coordinate >= data_.d)
      throw std::invalid_argument("SirModel: clamp coordinate out of range");
    auto cc = static_cast<std::size_t>(c.coordinate);
    if (clamped_[cc]) throw std::invalid_argument("SirModel: duplicate clamp");
    double upper = data_.notified(c.coordinate) ? data_.tau_star[cc] : data_.T;
    if (!(c.value >= 0.0) || c.value > upper)
      throw std::invalid_argument("SirModel: clamp value outside the coordinate's support");
    clamped_[cc] = 1;
  }
  sticky_lookup_.assign(n, -1);
  for (int i = 0; i < data_.d; ++i) {
    auto ii = static_cast<std::size_t>(i);
    if (data_.notified(i) || clamped_[ii]) continue;
    StickySpec spec;
    spec.coordinate = i;
    spec.c = data_.T;
    spec.one_sided = true;
    const SirData* D = &data_;
    spec.kappa = [D, i](const PhasePoint& z) {
      double b = sir_pressure_directed(*D, z, i);
      return b > 0.0 ? 1.0 / b : kInf;
    };
    sticky_lookup_[ii] = static_cast<int>(sticky_.size());
    sticky_.push_back(std::move(spec));
  }
}

double SirModel::psi(const PhasePoint& z) const {
  // conditioning on the clamped coordinates drops their own likelihood
  // factors (infection pressure, notification delay, B_j); they still act
  // as infectors inside everyone else's pressure terms
  double l = 0.0;
  for (int j = 0; j < data_.d; ++j) {
    if (clamped_[static_cast<std::size_t>(j)]) continue;
    l -= sir_B(data_, z.x, j);
  }
  for (int j = 0; j < data_.d; ++j) {
    auto jj = static_cast<std::size_t>(j);
    if (clamped_[jj]) continue;
    bool at_atom = z.is_frozen(j) && !data_.notified(j) && z.x[jj] == data_.T;
    if (at_atom) continue;
    double b = sir_pressure_directed(data_, z, j);
    if (!(b > 0.0)) return kInf;
    l += std::log(b);
    if (data_.notified(j))
      l += std::log(data_.delay_beta) - data_.delay_beta * (data_.tau_star[jj] - z.x[jj]);
    else
      l += -data_.delay_beta * (data_.T - z.x[jj]);
  }
  return -l;
}

double SirModel::grad_component(const PhasePoint& z, int k) const {
  auto kk = static_cast<std::size_t>(k);
  if (clamped_[kk]) return 0.0;
  const SirData& D = data_;
  double xk = z.x[kk], vk = z.veff(k);
  double g = -D.delay_beta;
  for (int i = 0; i < D.d; ++i) {
    if (i == k) continue;
    auto ii = static_cast<std::size_t>(i);
    if (flow_below(xk, vk, z.x[ii], z.veff(i))) {
      // slope of B_i in x_k; gone when i's factors are conditioned away
      if (!clamped_[ii]) g -= D.C[kk][ii];
    } else if (flow_below(xk, vk, D.tau_star[ii], 0.0)) {
      g += D.C[ii][kk];
    } else if (flow_below(xk, vk, D.tau_circ[ii], 0.0)) {
      g += D.gamma * D.C[ii][kk];
    }
  }
  return g;
}

void SirModel::grad_psi(const PhasePoint& z, Vec& g) const {
  g.resize(static_cast<std::size_t>(data_.d));
  for (int k = 0; k < data_.d; ++k) g[static_cast<std::size_t>(k)] = grad_component(z, k);
}

RateBound SirModel::drift_bound_coord(const PhasePoint& z, int i, double) const {
  double vi = z.veff(i);
  if (vi == 0.0) return RateBound{0.0, 0.0, true};
  // rates are constant between facets, so the envelope is flat and exact
  return RateBound{vi * grad_component(z, i), 0.0, true};
}

FacetHit SirModel::next_boundary_hit(const PhasePoint& z, double corner_tol) const {
  const int d = data_.d;
  FacetHit best;
  int near_min = 0;

  auto consider = [&](double tau, int code, int a, int b, FacetKind kind) {
    if (!(tau > 0.0) || tau == kInf) return;
    if (tau < best.tau - corner_tol) {
      best.tau = tau;
      best.facet = pack(code, a, b);
      best.kind = kind;
      best.a = a;
      best.b = b;
      near_min = 1;
    } else if (tau <= best.tau + corner_tol) {
      near_min++;
      if (tau < best.tau) {
        best.tau = tau;
        best.facet = pack(code, a, b);
        best.kind = kind;
        best.a = a;
        best.b = b;
      }
    }
  };

  for (int k = 0; k < d; ++k) {
    if (z.is_frozen(k)) continue;
    auto kk = static_cast<std::size_t>(k);
    double v = z.v[kk];
    if (v == 0.0) continue;
    double xk = z.x[kk];
    double up = data_.notified(k) ? data_.tau_star[kk] : data_.T;
    if (v > 0.0) {
      if (data_.notified(k))
        consider(up - xk, WallNotify, k, k, FacetKind::HardWall);
      else
        consider(up - xk, AtomT, k, k, FacetKind::StickyAtom);
      for (int j = 0; j < d; ++j) {
        if (j == k) continue;
        auto jj = static_cast<std::size_t>(j);
        if (z.is_frozen(j)) {
          double c = z.x[jj];
          if (c > xk && c < up) consider(c - xk, CrossFrozen, k, j, FacetKind::SoftJump);
        }
        double ts = data_.tau_star[jj];
        if (ts > xk && ts < up) consider(ts - xk, CrossNotify, k, j, FacetKind::SoftJump);
        double tc = data_.tau_circ[jj];
        if (tc > xk && tc < up) consider(tc - xk, CrossRemoval, k, j, FacetKind::SoftJump);
      }
    } else {
      consider(xk, WallZero, k, k, FacetKind::HardWall);
      for (int j = 0; j < d; ++j) {
        if (j == k) continue;
        auto jj = static_cast<std::size_t>(j);
        if (z.is_frozen(j)) {
          double c = z.x[jj];
          if (c > 0.0 && c < xk) consider(xk - c, CrossFrozen, k, j, FacetKind::SoftJump);
        }
        double ts = data_.tau_star[jj];
        if (ts > 0.0 && ts < xk) consider(xk - ts, CrossNotify, k, j, FacetKind::SoftJump);
        double tc = data_.tau_circ[jj];
        if (std::isfinite(tc) && tc < xk) consider(xk - tc, CrossRemoval, k, j, FacetKind::SoftJump);
      }
    }
  }

  for (int k = 0; k < d; ++k) {
    if (z.is_frozen(k)) continue;
    for (int j = k + 1; j < d; ++j) {
      if (z.is_frozen(j)) continue;
      double dv = z.v[static_cast<std::size_t>(k)] - z.v[static_cast<std::size_t>(j)];
      if (dv == 0.0) continue;
      double tau = (z.x[static_cast<std::size_t>(j)] - z.x[static_cast<std::size_t>(k)]) / dv;
      consider(tau, Collision, k, j, FacetKind::SoftJump);
    }
  }

  if (near_min > 1 && best.kind != FacetKind::StickyAtom) best.corner = true;
  return best;
}

void SirModel::snap_to_facet(PhasePoint& z, const FacetHit& hit) const {
  auto aa = static_cast<std::size_t>(hit.a);
  auto bb = static_cast<std::size_t>(hit.b);
  switch (facet_code(hit.facet, data_.d)) {
    case WallZero: z.x[aa] = 0.0; break;
    case WallNotify: z.x[aa] = data_.tau_star[aa]; break;
    case AtomT: z.x[aa] = data_.T; break;
    case CrossNotify: z.x[aa] = data_.tau_star[bb]; break;
    case CrossRemoval: z.x[aa] = data_.tau_circ[bb]; break;
    case CrossFrozen: z.x[aa] = z.x[bb]; break;
    case Collision: {
      double m = 0.5 * (z.x[aa] + z.x[bb]);
      z.x[aa] = m;
      z.x[bb] = m;
      break;
    }
    default: throw std::logic_error("SirModel: bad facet id");
  }
}

FacetGeometry SirModel::facet_geometry(const PhasePoint& z, const FacetHit& hit) const {
  const int d = data_.d;
  int code = facet_code(hit.facet, d);
  int k = hit.a, j = hit.b;
  auto kk = static_cast<std::size_t>(k);
  FacetGeometry geo;
  geo.normal.assign(static_cast<std::size_t>(d), 0.0);
  geo.region_target = z.region;
  double vk = z.veff(k);

  switch (code) {
    case WallZero:
    case WallNotify:
      geo.normal[kk] = vk > 0.0 ? 1.0 : -1.0;
      geo.psi_far = kInf;
      geo.stat_class = code == WallZero ? 0 : 1;
      break;
    case Collision: {
      double vj = z.veff(j);
      int side_far = (vk - vj) > 0.0 ? 1 : -1;  // k relative to j once across
      const double r = 1.0 / std::sqrt(2.0);
      geo.normal[kk] = side_far > 0 ? r : -r;
      geo.normal[static_cast<std::size_t>(j)] = side_far > 0 ? -r : r;
      // only the two pressure factors jump across this facet
      double near_p = pressure_forced(data_, z, k, k, j, 0, -side_far) *
                      pressure_forced(data_, z, j, k, j, 0, -side_far);
      double far_p = pressure_forced(data_, z, k, k, j, 0, side_far) *
                     pressure_forced(data_, z, j, k, j, 0, side_far);
      geo.psi_near = neg_log_or_inf(near_p);
      geo.psi_far = neg_log_or_inf(far_p);
      geo.stat_class = 2;
      break;
    }
    case CrossFrozen: {
      // the owner sits at an interior value, which only happens for a
      // clamped coordinate; its own pressure factor is conditioned away,
      // so only the mover's factor jumps here
      int side_far = vk > 0.0 ? 1 : -1;
      geo.normal[kk] = vk > 0.0 ? 1.0 : -1.0;
      geo.psi_near = neg_log_or_inf(pressure_forced(data_, z, k, k, j, 0, -side_far));
      geo.psi_far = neg_log_or_inf(pressure_forced(data_, z, k, k, j, 0, side_far));
      geo.stat_class = 5;
      break;
    }
    case CrossNotify:
    case CrossRemoval: {
      geo.normal[kk] = vk > 0.0 ? 1.0 : -1.0;
      int side_far = vk > 0.0 ? 1 : -1;
      int fkind = code == CrossNotify ? 1 : 2;
      geo.psi_near = neg_log_or_inf(pressure_forced(data_, z, k, k, j, fkind, -side_far));
      geo.psi_far = neg_log_or_inf(pressure_forced(data_, z, k, k, j, fkind, side_far));
      geo.stat_class = code == CrossNotify ? 3 : 4;
      break;
    }
    default:
      throw std::logic_error("SirModel: geometry queried for a sticky facet");
  }
  return geo;
}

double SirModel::crossing_probability(const PhasePoint& z_at_facet, const FacetHit& hit) const {
  FacetGeometry geo = facet_geometry(z_at_facet, hit);
  return acceptance_ratio(geo.psi_near, geo.psi_far, geo.s_near, geo.s_far);
}

void SirModel::gradient_dirty_after(EventTag tag, const FacetHit* hit, const PhasePoint& z,
                                    bool& all, std::vector<int>& coords) const {
  all = false;
  switch (tag) {
    case EventTag::Reflect:
    case EventTag::Refresh:
      return;  // interior velocity changes leave the piecewise branches alone
    case EventTag::Stick:
    case EventTag::Unstick: {
      if (!hit) { all = true; return; }
      coords.push_back(hit->a);
      for (int i = 0; i < data_.d; ++i)
        if (i != hit->a && z.is_frozen(i)) coords.push_back(i);
      return;
    }
    case EventTag::BoundaryCross:
    case EventTag::BoundaryReflect: {
      if (!hit) { all = true; return; }
      switch (facet_code(hit->facet, data_.d)) {
        case WallZero:
        case WallNotify:
          return;  // bounced without crossing: no branch flipped
        case CrossNotify:
        case CrossRemoval:
          coords.push_back(hit->a);
          return;
        case Collision:
        case CrossFrozen:
          coords.push_back(hit->a);
          coords.push_back(hit->b);
          return;
        default:
          all = true;
          return;
      }
    }
    default:
      all = true;  // corners and anything unforeseen: recompute everything
      return;
  }
}

std::string SirModel::stat_class_name(int c) const {
  switch (c) {
    case 0: return "wall-origin";
    case 1: return "wall-notification";
    case 2: return "pair-collision";
    case 3: return "notify-threshold";
    case 4: return "removal-threshold";
    case 5: return "frozen-collision";
  }
  return "?";
}

PhasePoint SirModel::initial_state(RngStream& rng) const {
  const int d = data_.d;
  auto n = static_cast<std::size_t>(d);
  PhasePoint z;
  z.x.assign(n, data_.T);
  z.v.assign(n, 1.0);
  z.frozen.assign(n, 1);
  for (const SirClamp& c : clamps_) z.x[static_cast<std::size_t>(c.coordinate)] = c.value;

  std::vector<std::uint8_t> placed(n, 0), visiting(n, 0);

  // place(k, nb): make k usable as an infector somewhere strictly below nb,
  // recruiting a whole infection chain for k if it is still on its atom.
  // Helpers placed along a branch that later fails stay placed; an interior
  // occult with an infector of its own has positive density, so that is
  // harmless.
  std::function<bool(int, double)> place = [&](int k, double nb) -> bool {
    auto kk = static_cast<std::size_t>(k);
    double eff = std::min(nb, data_.tau_circ[kk]);
    if (clamped_[kk] || placed[kk]) return z.x[kk] < eff;
    if (visiting[kk]) return false;
    double up = data_.notified(k) ? data_.tau_star[kk] : data_.T;
    double cap = std::min(eff, up);
    if (!(cap > 0.0)) return false;
    visiting[kk] = 1;
    bool ok = false;
    auto try_candidate = [&](int j) {
      if (ok || j == k) return;
      auto jj = static_cast<std::size_t>(j);
      if (data_.C[jj][kk] == 0.0) return;
      if (!place(j, cap)) return;
      double hi = std::min(cap, data_.tau_circ[jj]);
      z.x[kk] = z.x[jj] + 0.5 * (hi - z.x[jj]);
      z.frozen[kk] = 0;
      placed[kk] = 1;
      ok = true;
    };
    // coordinates that already carry a value are free to use
    for (int j = 0; j < d; ++j) {
      auto jj = static_cast<std::size_t>(j);
      if (clamped_[jj] || placed[jj]) try_candidate(j);
    }
    if (!ok) {
      // then notified ones that must come off T anyway, earliest first
      std::vector<int> notis;
      for (int j = 0; j < d; ++j) {
        auto jj = static_cast<std::size_t>(j);
        if (!clamped_[jj] && !placed[jj] && !visiting[jj] && data_.notified(j)) notis.push_back(j);
      }
      std::sort(notis.begin(), notis.end(), [&](int a, int b) {
        return data_.tau_star[static_cast<std::size_t>(a)] <
               data_.tau_star[static_cast<std::size_t>(b)];
      });
      for (int j : notis) try_candidate(j);
    }
    if (!ok) {
      // last resort: pull an occult off its atom
      for (int j = 0; j < d; ++j) {
        auto jj = static_cast<std::size_t>(j);
        if (!clamped_[jj] && !placed[jj] && !visiting[jj] && !data_.notified(j)) try_candidate(j);
      }
    }
    visiting[kk] = 0;
    return ok;
  };

  std::vector<int> targets;
  for (int i = 0; i < d; ++i)
    if (data_.notified(i) && !clamped_[static_cast<std::size_t>(i)]) targets.push_back(i);
  std::sort(targets.begin(), targets.end(), [&](int a, int b) {
    return data_.tau_star[static_cast<std::size_t>(a)] < data_.tau_star[static_cast<std::size_t>(b)];
  });

  for (int k : targets) {
    if (placed[static_cast<std::size_t>(k)]) continue;
    if (!place(k, kInf))
      throw std::runtime_error(
          "SirModel: cannot build a feasible start; notified individual " + std::to_string(k) +
          " has no reachable infector (is a seed clamped?)");
  }

  // break exact ties with observed times, walls, and other coordinates
  for (int k = 0; k < d; ++k) {
    auto kk = static_cast<std::size_t>(k);
    if (z.frozen[kk]) continue;
    for (int pass = 0; pass < 64; ++pass) {
      bool clash = z.x[kk] == 0.0 || z.x[kk] == data_.T;
      for (int j = 0; j < d && !clash; ++j) {
        auto jj = static_cast<std::size_t>(j);
        clash = (j != k && z.x[jj] == z.x[kk]) || data_.tau_star[jj] == z.x[kk] ||
                data_.tau_circ[jj] == z.x[kk];
      }
      if (!clash) break;
      z.x[kk] += 1e-9;
    }
  }

  for (int k = 0; k < d; ++k) {
    auto kk = static_cast<std::size_t>(k);
    if (!z.frozen[kk]) z.v[kk] = rng.sign();
  }
  return z;
}

SirSimOutcome sir_forward_simulate(const SirData& params, int seed_case, double removal_beta,
                                   RngStream& rng) {
  params.validate();
  if (seed_case < 0 || seed_case >= params.d)
    throw std::invalid_argument("sir_forward_simulate: seed case out of range");
  if (!(removal_beta > 0.0))
    throw std::invalid_argument("sir_forward_simulate: removal_beta must be positive");

  const int d = params.d;
  auto n = static_cast<std::size_t>(d);
  enum Status { S, I, N, R };
  std::vector<int> st(n, S);
  Vec tau(n, kInf), ts(n, kInf), tc(n, kInf);

  auto infect = [&](int j, double at) {
    auto jj = static_cast<std::size_t>(j);
    st[jj] = I;
    tau[jj] = at;
    ts[jj] = at + rng.exponential() / params.delay_beta;
    tc[jj] = ts[jj] + rng.exponential() / removal_beta;
  };
  infect(seed_case, 0.0);

  double t = 0.0;
  while (true) {
    Vec lam(n, 0.0);
    double total = 0.0;
    for (int j = 0; j < d; ++j) {
      auto jj = static_cast<std::size_t>(j);
      if (st[jj] != S) continue;
      for (int i = 0; i < d; ++i) {
        auto ii = static_cast<std::size_t>(i);
        if (st[ii] == I)
          lam[jj] += params.C[ii][jj];
        else if (st[ii] == N)
          lam[jj] += params.gamma * params.C[ii][jj];
      }
      total += lam[jj];
    }
    double t_inf = total > 0.0 ? t + rng.exponential() / total : kInf;

    double t_sched = kInf;
    int who = -1;
    bool to_removed = false;
    for (int i = 0; i < d; ++i) {
      auto ii = static_cast<std::size_t>(i);
      if (st[ii] == I && ts[ii] < t_sched) {
        t_sched = ts[ii];
        who = i;
        to_removed = false;
      }
      if (st[ii] == N && tc[ii] < t_sched) {
        t_sched = tc[ii];
        who = i;
        to_removed = true;
      }
    }

    double tn = std::min(t_inf, t_sched);
    if (!(tn < params.T)) break;
    if (t_inf < t_sched) {
      double u = rng.uniform() * total;
      int j = -1;
      for (int m = 0; m < d; ++m) {
        auto mm = static_cast<std::size_t>(m);
        if (st[mm] != S || lam[mm] == 0.0) continue;
        j = m;  // falls back to the last pressured susceptible on roundoff
        u -= lam[mm];
        if (u <= 0.0) break;
      }
      infect(j, t_inf);
      t = t_inf;
    } else {
      st[static_cast<std::size_t>(who)] = to_removed ? R : N;
      t = t_sched;
    }
  }

  SirSimOutcome out;
  out.data = params;
  out.data.tau_star.assign(n, kInf);
  out.data.tau_circ.assign(n, kInf);
  out.x_true.assign(n, params.T);
  for (std::size_t i = 0; i < n; ++i) {
    out.x_true[i] = std::min(tau[i], params.T);
    if (tau[i] < params.T) out.infected++;
    if (ts[i] < params.T) {
      out.data.tau_star[i] = ts[i];
      out.notified_count++;
    }
    if (tc[i] < params.T && ts[i] < params.T) {
      out.data.tau_circ[i] = tc[i];
      out.removed++;
    }
  }
  return out;
}

SirData sir_params_to_data(const SirParams& p) {
  if (p.d <= 0) throw std::invalid_argument("sir params: d must be positive");
  auto n = static_cast<std::size_t>(p.d);
  RngStream rng(p.baseline_seed, 8);
  Vec theta(n), xi(n);
  for (std::size_t i = 0; i < n; ++i) theta[i] = 0.9 * rng.uniform() + 0.7;
  for (std::size_t i = 0; i < n; ++i) xi[i] = 0.9 * rng.uniform() + 0.7;

  SirData data;
  data.d = p.d;
  data.T = p.T;
  data.gamma = p.gamma;
  data.delay_beta = p.delay_beta;
  data.tau_star.assign(n, kInf);
  data.tau_circ.assign(n, kInf);
  data.C.assign(n, Vec(n, 0.0));
  for (int i = 0; i < p.d; ++i)
    for (int j = 0; j < p.d; ++j) {
      if (i == j || std::abs(i - j) > p.dist_band) continue;
      data.C[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          p.dist_value * theta[static_cast<std::size_t>(i)] * xi[static_cast<std::size_t>(j)];
    }
  return data;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<SirClamp> sir_parse_clamps(const std::string& text) {
  std::vector<SirClamp> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("sir params: clamp entries look like index:value");
    out.push_back(SirClamp{std::stoi(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
  }
  return out;
}

SirParams sir_read_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open parameter file: " + path);
  SirParams p;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "d") p.d = std::stoi(val);
    else if (key == "T") p.T = std::stod(val);
    else if (key == "gamma") p.gamma = std::stod(val);
    else if (key == "delay_beta") p.delay_beta = std::stod(val);
    else if (key == "removal_beta") p.removal_beta = std::stod(val);
    else if (key == "dist_band") p.dist_band = std::stoi(val);
    else if (key == "dist_value") p.dist_value = std::stod(val);
    else if (key == "baseline_seed") p.baseline_seed = std::stoull(val);
    else if (key == "clamp") p.clamps = sir_parse_clamps(val);
    else
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return p;
}

void sir_write_dataset_csv(const std::string& path, const SirData& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset: " + path);
  out << "id,tau_star,tau_circ\n";
  out.precision(17);
  for (int i = 0; i < data.d; ++i) {
    auto ii = static_cast<std::size_t>(i);
    out << i << ',';
    if (std::isfinite(data.tau_star[ii])) out << data.tau_star[ii];
    out << ',';
    if (std::isfinite(data.tau_circ[ii])) out << data.tau_circ[ii];
    out << '\n';
  }
}

void sir_read_dataset_csv(const std::string& path, SirData& data) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  auto n = static_cast<std::size_t>(data.d);
  data.tau_star.assign(n, kInf);
  data.tau_circ.assign(n, kInf);
  std::vector<std::uint8_t> seen(n, 0);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (first && line.rfind("id", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    std::stringstream ss(line);
    std::string f0, f1, f2;
    std::getline(ss, f0, ',');
    std::getline(ss, f1, ',');
    std::getline(ss, f2, ',');
    int id = std::stoi(trim(f0));
    if (id < 0 || id >= data.d) throw std::runtime_error("dataset id out of range: " + f0);
    auto ii = static_cast<std::size_t>(id);
    if (seen[ii]) throw std::runtime_error("dataset repeats id " + f0);
    seen[ii] = 1;
    f1 = trim(f1);
    f2 = trim(f2);
    if (!f1.empty()) {
      double v = std::stod(f1);
      data.tau_star[ii] = v < data.T ? v : kInf;
    }
    if (!f2.empty()) {
      double v = std::stod(f2);
      data.tau_circ[ii] = v < data.T ? v : kInf;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!seen[i])
      throw std::runtime_error("dataset is missing id " + std::to_string(i));
}

}  // namespace pdmp
