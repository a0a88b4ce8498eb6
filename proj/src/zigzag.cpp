#include "pdmp/zigzag.hpp"

#include <cmath>
#include <stdexcept>

#include "pdmp/sampler.hpp"

namespace pdmp {

Vec zz_rates(const PhasePoint& z, const ModelSpec& model) {
  const int d = model.dim();
  double s = model.speed()(z.region);
  Vec g(static_cast<std::size_t>(d));
  model.grad_psi(z, g);
  Vec rates(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < d; ++i) {
    if (z.is_frozen(i)) continue;
    double gi = g[static_cast<std::size_t>(i)];
    if (!std::isfinite(gi)) throw std::runtime_error("zz_rates: non-finite gradient component");
    double r = z.v[static_cast<std::size_t>(i)] * s * gi;
    rates[static_cast<std::size_t>(i)] = r > 0.0 ? r : 0.0;
  }
  return rates;
}

PhasePoint zz_flip(const PhasePoint& z, int k) {
  PhasePoint out = z;
  out.v[static_cast<std::size_t>(k)] = -out.v[static_cast<std::size_t>(k)];
  return out;
}

Vec zz_boundary_r1(const Vec& v) { return v; }

Vec zz_boundary_r2(const Vec& v, const Vec& n, double tol) {
  Vec out = v;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(n[i]) > tol) out[i] = -out[i];
  return out;
}

BoundaryPolicy zz_policy(double corner_tol) {
  BoundaryPolicy p;
  p.r1 = [](const Vec& v, const FacetGeometry&) { return zz_boundary_r1(v); };
  p.r2 = [](const Vec& v, const Vec& n) { return zz_boundary_r2(v, n); };
  p.corner_tol = corner_tol;
  return p;
}

RateBound ZigZag::clock_bound(const ModelSpec& model, const PhasePoint& z, int c, double horizon,
                              const Vec* grad) const {
  if (z.is_frozen(c)) return RateBound{0.0, 0.0, true};
  if (grad) {
    double s = model.speed()(z.region);
    double a = z.v[static_cast<std::size_t>(c)] * s * (*grad)[static_cast<std::size_t>(c)];
    return RateBound{a, 0.0, true};
  }
  return model.drift_bound_coord(z, c, horizon);
}

double ZigZag::clock_rate(const ModelSpec& model, const PhasePoint& z, int c) const {
  if (z.is_frozen(c)) return 0.0;
  double s = model.speed()(z.region);
  double r = z.v[static_cast<std::size_t>(c)] * s * model.grad_component(z, c);
  return r > 0.0 ? r : 0.0;
}

PhasePoint ZigZag::apply_reflection(const ModelSpec&, const PhasePoint& z, int c,
                                    const Vec*) const {
  return zz_flip(z, c);
}

void ZigZag::refresh_velocity(PhasePoint& z, RngStream& rng) const {
  for (std::size_t i = 0; i < z.v.size(); ++i)
    if (!z.is_frozen(static_cast<int>(i))) z.v[i] = rng.sign();
}

}  // namespace pdmp
