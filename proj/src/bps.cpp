#include "pdmp/bps.hpp"

#include <cmath>
#include <stdexcept>

#include "pdmp/sampler.hpp"

namespace pdmp {

double bps_rate(const PhasePoint& z, const ModelSpec& model) {
  const int d = model.dim();
  double s = model.speed()(z.region);
  Vec g(static_cast<std::size_t>(d));
  model.grad_psi(z, g);
  double dot = 0.0;
  for (int i = 0; i < d; ++i) {
    if (!std::isfinite(g[static_cast<std::size_t>(i)]))
      throw std::runtime_error("bps_rate: non-finite gradient component");
    dot += z.veff(i) * g[static_cast<std::size_t>(i)];
  }
  double r = s * dot;
  return r > 0.0 ? r : 0.0;
}

Vec bps_bounce(const Vec& v, const Vec& g) {
  double gg = 0.0, vg = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    gg += g[i] * g[i];
    vg += v[i] * g[i];
  }
  if (!(gg > 0.0)) throw std::logic_error("bps_bounce: zero gradient");
  double c = 2.0 * vg / gg;
  Vec out = v;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] -= c * g[i];
  return out;
}

Vec bps_boundary_bounce(const Vec& v, const Vec& n) { return bps_bounce(v, n); }

Vec bps_teleport_velocity(const Vec& v, const Vec& n_x, const Vec& n_y) {
  (void)n_x;  // the concrete rule only needs the arrival normal
  Vec mv(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) mv[i] = -v[i];
  Vec w = bps_bounce(mv, n_y);
  double dot = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) dot += w[i] * n_y[i];
  if (!(dot < 0.0)) throw std::logic_error("bps_teleport_velocity: exit direction not inward");
  return w;
}

BoundaryPolicy bps_policy(double corner_tol) {
  BoundaryPolicy p;
  p.r1 = [](const Vec& v, const FacetGeometry& geo) {
    if (geo.x_target.empty()) return v;  // plain soft-wall crossing
    Vec ny = geo.normal_target;
    if (ny.empty()) {
      ny.resize(geo.normal.size());
      for (std::size_t i = 0; i < ny.size(); ++i) ny[i] = -geo.normal[i];
    }
    return bps_teleport_velocity(v, geo.normal, ny);
  };
  p.r2 = [](const Vec& v, const Vec& n) { return bps_boundary_bounce(v, n); };
  p.corner_tol = corner_tol;
  return p;
}

RateBound Bps::clock_bound(const ModelSpec& model, const PhasePoint& z, int, double horizon,
                           const Vec* grad) const {
  if (grad) {
    double s = model.speed()(z.region);
    double dot = 0.0;
    for (std::size_t i = 0; i < z.v.size(); ++i)
      dot += z.veff(static_cast<int>(i)) * (*grad)[i];
    return RateBound{s * dot, 0.0, true};
  }
  return model.drift_bound_dir(z, horizon);
}

double Bps::clock_rate(const ModelSpec& model, const PhasePoint& z, int) const {
  return bps_rate(z, model);
}

PhasePoint Bps::apply_reflection(const ModelSpec& model, const PhasePoint& z, int,
                                 const Vec* grad) const {
  Vec g;
  if (grad) {
    g = *grad;
  } else {
    g.resize(z.x.size());
    model.grad_psi(z, g);
  }
  PhasePoint out = z;
  out.v = bps_bounce(z.v, g);
  return out;
}

void Bps::refresh_velocity(PhasePoint& z, RngStream& rng) const {
  for (std::size_t i = 0; i < z.v.size(); ++i)
    if (!z.is_frozen(static_cast<int>(i))) z.v[i] = rng.normal();
}

}  // namespace pdmp
