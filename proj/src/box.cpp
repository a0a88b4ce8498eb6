#include "pdmp/models/box.hpp"

#include <cmath>
#include <stdexcept>

#include "pdmp/rng.hpp"

namespace pdmp {

BoxModel::BoxModel(BoxConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.d <= 0) throw std::invalid_argument("BoxModel: d must be positive");
  if (cfg_.coords.empty()) cfg_.coords.resize(static_cast<std::size_t>(cfg_.d));
  if (static_cast<int>(cfg_.coords.size()) != cfg_.d)
    throw std::invalid_argument("BoxModel: coords size mismatch");

  for (const BoxCoordSpec& c : cfg_.coords) {
    if (c.jump && !(c.mid > 0.0 && c.mid < 1.0))
      throw std::invalid_argument("BoxModel: jump mid must be interior");
    if (c.atom) {
      if (c.atom_one_sided) {
        if (c.atom_pos != 1.0)
          throw std::invalid_argument("BoxModel: one-sided atom must sit at 1");
      } else if (!(c.atom_pos > 0.0 && c.atom_pos < 1.0)) {
        throw std::invalid_argument("BoxModel: interior atom must be inside (0,1)");
      }
      if (!(c.atom_kappa > 0.0)) throw std::invalid_argument("BoxModel: kappa must be > 0");
      if (c.jump && c.atom_pos == c.mid)
        throw std::invalid_argument("BoxModel: atom on the jump facet unsupported");
    }
  }

  if (!cfg_.gamma.empty()) {
    auto n = static_cast<std::size_t>(cfg_.d);
    if (cfg_.gamma.size() != n)
      throw std::invalid_argument("BoxModel: gamma must be d x d");
    gsym_.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      if (cfg_.gamma[i].size() != n)
        throw std::invalid_argument("BoxModel: gamma must be d x d");
      for (std::size_t j = 0; j < n; ++j)
        gsym_[i][j] = cfg_.gamma[i][j] + cfg_.gamma[j][i];
    }
  }

  if (!cfg_.speeds.empty()) {
    if (cfg_.speeds.size() != 2)
      throw std::invalid_argument("BoxModel: speeds must list exactly two regions");
    if (!cfg_.coords[0].jump)
      throw std::invalid_argument("BoxModel: two-region speed needs a jump facet on coordinate 0");
    speed_ = SpeedFunction(cfg_.speeds);
    two_region_ = true;
  }

  sticky_lookup_.assign(static_cast<std::size_t>(cfg_.d), -1);
  for (int i = 0; i < cfg_.d; ++i) {
    const BoxCoordSpec& c = cfg_.coords[static_cast<std::size_t>(i)];
    if (!c.atom) continue;
    StickySpec spec;
    spec.coordinate = i;
    spec.c = c.atom_pos;
    double kappa = c.atom_kappa;
    spec.kappa = [kappa](const PhasePoint&) { return kappa; };
    spec.one_sided = c.atom_one_sided;
    sticky_lookup_[static_cast<std::size_t>(i)] = static_cast<int>(sticky_.size());
    sticky_.push_back(std::move(spec));
  }
}

int BoxModel::region_of(const Vec& x) const {
  if (!two_region_) return 0;
  return x[0] > cfg_.coords[0].mid ? 1 : 0;
}

double BoxModel::psi(const PhasePoint& z) const {
  auto n = static_cast<std::size_t>(cfg_.d);
  double out = 0.0;
  if (!gsym_.empty()) {
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += gsym_[i][j] * z.x[j];
      q += z.x[i] * row;
    }
    out += 0.5 * q;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const BoxCoordSpec& c = cfg_.coords[i];
    if (c.jump) {
      // on-facet states resolved by the motion direction
      bool above = z.x[i] > c.mid ||
                   (z.x[i] == c.mid && !z.is_frozen(static_cast<int>(i)) && z.v[i] > 0.0);
      if (above) out -= c.jump_c;
    }
    if (c.repelling) out -= std::log(z.x[i]);
  }
  return out;
}

double BoxModel::grad_component(const PhasePoint& z, int k) const {
  auto kk = static_cast<std::size_t>(k);
  double g = 0.0;
  if (!gsym_.empty()) {
    // d/dx_k of x' Gamma x = [(Gamma + Gamma') x]_k
    const std::vector<double>& row = gsym_[kk];
    for (std::size_t j = 0; j < row.size(); ++j) g += row[j] * z.x[j];
  }
  if (cfg_.coords[kk].repelling) g -= 1.0 / z.x[kk];
  return g;
}

void BoxModel::grad_psi(const PhasePoint& z, Vec& g) const {
  g.resize(static_cast<std::size_t>(cfg_.d));
  for (int k = 0; k < cfg_.d; ++k) g[static_cast<std::size_t>(k)] = grad_component(z, k);
}

RateBound BoxModel::drift_bound_coord(const PhasePoint& z, int i, double horizon) const {
  auto ii = static_cast<std::size_t>(i);
  double s = speed()(z.region);
  double vi = z.veff(i);
  RateBound rb{0.0, 0.0, true};
  if (vi == 0.0) return rb;
  if (!gsym_.empty()) {
    double gx = 0.0, gv = 0.0;
    const std::vector<double>& row = gsym_[ii];
    for (std::size_t j = 0; j < row.size(); ++j) {
      gx += row[j] * z.x[j];
      gv += row[j] * z.veff(static_cast<int>(j));
    }
    rb.a += vi * s * gx;
    rb.b += vi * s * s * gv;
  }
  if (cfg_.coords[ii].repelling) {
    // -v_i s / x_i(t) increases along the flow; bound by its end-of-horizon
    // value (the horizon is capped before x_i can vanish)
    double xh = z.x[ii] + vi * s * horizon;
    if (!(xh > 0.0)) throw std::logic_error("BoxModel: horizon crosses the repelling wall");
    rb.a += -vi * s / xh;
    rb.exact = false;
  }
  return rb;
}

double BoxModel::thin_horizon(const PhasePoint& z, double tau_star) const {
  double h = tau_star;
  double s = speed()(z.region);
  for (int i = 0; i < cfg_.d; ++i) {
    auto ii = static_cast<std::size_t>(i);
    if (!cfg_.coords[ii].repelling) continue;
    double vi = z.veff(i);
    if (vi * s < 0.0) h = std::min(h, 0.5 * z.x[ii] / (-vi * s));
  }
  return h;
}

double BoxModel::facet_value(int i, int which) const {
  const BoxCoordSpec& c = cfg_.coords[static_cast<std::size_t>(i)];
  switch (which) {
    case LowerEnd: return 0.0;
    case UpperEnd: return 1.0;
    case Mid: return c.mid;
    case Atom: return c.atom_pos;
  }
  throw std::logic_error("BoxModel: bad facet");
}

FacetKind BoxModel::facet_kind(int i, int which) const {
  const BoxCoordSpec& c = cfg_.coords[static_cast<std::size_t>(i)];
  switch (which) {
    case LowerEnd: return c.repelling ? FacetKind::Vanishing : FacetKind::HardWall;
    case UpperEnd:
      return (c.atom && c.atom_one_sided) ? FacetKind::StickyAtom : FacetKind::HardWall;
    case Mid: return FacetKind::SoftJump;
    case Atom: return FacetKind::StickyAtom;
  }
  throw std::logic_error("BoxModel: bad facet");
}

FacetHit BoxModel::next_boundary_hit(const PhasePoint& z, double corner_tol) const {
  double s = speed()(z.region);
  FacetHit best;
  int hits_near_min = 0;

  auto consider = [&](int i, int which, double tau) {
    if (!(tau > 0.0) || tau == kInf) return;
    if (tau < best.tau - corner_tol) {
      best.tau = tau;
      best.facet = i * 4 + which;
      best.kind = facet_kind(i, which);
      best.a = i;
      best.b = which;
      hits_near_min = 1;
    } else if (tau <= best.tau + corner_tol) {
      // near-simultaneous facet on another coordinate
      hits_near_min++;
      if (tau < best.tau) {
        best.tau = tau;
        best.facet = i * 4 + which;
        best.kind = facet_kind(i, which);
        best.a = i;
        best.b = which;
      }
    }
  };

  for (int i = 0; i < cfg_.d; ++i) {
    auto ii = static_cast<std::size_t>(i);
    double vi = z.veff(i);
    if (vi == 0.0) continue;
    const BoxCoordSpec& c = cfg_.coords[ii];
    double w = vi * s;
    auto time_to = [&](double target) { return (target - z.x[ii]) / w; };
    if (vi > 0.0) {
      if (c.atom && !c.atom_one_sided && c.atom_pos > z.x[ii]) consider(i, Atom, time_to(c.atom_pos));
      if (c.jump && c.mid > z.x[ii]) consider(i, Mid, time_to(c.mid));
      consider(i, UpperEnd, time_to(1.0));
    } else {
      if (c.atom && !c.atom_one_sided && c.atom_pos < z.x[ii]) consider(i, Atom, time_to(c.atom_pos));
      if (c.jump && c.mid < z.x[ii]) consider(i, Mid, time_to(c.mid));
      consider(i, LowerEnd, time_to(0.0));
    }
  }

  // corners only make sense for wall/jump facets; atoms are handled by the
  // sticky layer and vanishing walls are never reached
  if (hits_near_min > 1 && best.kind != FacetKind::StickyAtom &&
      best.kind != FacetKind::Vanishing)
    best.corner = true;
  return best;
}

void BoxModel::snap_to_facet(PhasePoint& z, const FacetHit& hit) const {
  z.x[static_cast<std::size_t>(hit.a)] = facet_value(hit.a, hit.b);
}

FacetGeometry BoxModel::facet_geometry(const PhasePoint& z, const FacetHit& hit) const {
  auto ii = static_cast<std::size_t>(hit.a);
  const BoxCoordSpec& c = cfg_.coords[ii];
  FacetGeometry geo;
  geo.normal.assign(static_cast<std::size_t>(cfg_.d), 0.0);
  bool up = z.v[ii] > 0.0;
  geo.normal[ii] = up ? 1.0 : -1.0;
  geo.region_target = z.region;
  double s_here = speed()(z.region);
  geo.s_near = geo.s_far = s_here;

  switch (hit.b) {
    case LowerEnd:
    case UpperEnd:
      geo.psi_far = kInf;
      geo.stat_class = 0;
      break;
    case Mid: {
      // Psi drops by jump_c above mid: crossing up lowers psi
      geo.psi_near = 0.0;
      geo.psi_far = up ? -c.jump_c : c.jump_c;
      geo.stat_class = up ? 1 : 2;
      if (two_region_ && hit.a == 0) {
        int near_region = up ? 0 : 1;
        geo.region_target = 1 - near_region;
        geo.s_near = speed()(near_region);
        geo.s_far = speed()(geo.region_target);
      }
      break;
    }
    default:
      throw std::logic_error("BoxModel: geometry queried for a sticky facet");
  }
  return geo;
}

std::string BoxModel::stat_class_name(int c) const {
  switch (c) {
    case 0: return "hard-wall";
    case 1: return "jump-from-low";
    case 2: return "jump-from-high";
  }
  return "?";
}

BoxConfig make_showcase_config(int d, double c, std::uint64_t gamma_seed) {
  BoxConfig cfg;
  cfg.d = d;
  cfg.coords.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    BoxCoordSpec& spec = cfg.coords[static_cast<std::size_t>(i)];
    spec.jump = true;
    spec.jump_c = c;
    spec.mid = 0.5;
    spec.atom = true;
    spec.atom_pos = 0.25;
    spec.atom_kappa = 1.0;
    spec.repelling = (i % 2 == 0);  // x_1, x_3, ... in 1-based numbering
  }
  RngStream rng(gamma_seed, 6);
  auto n = static_cast<std::size_t>(d);
  cfg.gamma.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double u = rng.uniform();
      double cij = (u < 0.1) ? rng.normal() : 0.0;
      cfg.gamma[i][j] = 0.5 * cij + (i == j ? 1.3 : 0.0);
    }
  }
  return cfg;
}

}  // namespace pdmp
