#include "pdmp/sticky.hpp"

#include <stdexcept>

namespace pdmp {

PhasePoint stick(const PhasePoint& z, const StickySpec& spec) {
  auto i = static_cast<std::size_t>(spec.coordinate);
  if (z.is_frozen(spec.coordinate)) throw std::logic_error("stick: coordinate already frozen");
  PhasePoint out = z;
  out.ensure_frozen_mask();
  out.x[i] = spec.c;
  out.frozen[i] = 1;
  return out;
}

double unstick_rate(const PhasePoint& z, const StickySpec& spec) {
  auto i = static_cast<std::size_t>(spec.coordinate);
  double kappa = spec.kappa ? spec.kappa(z) : 1.0;
  if (!(kappa > 0.0)) throw std::logic_error("unstick_rate: kappa must be > 0");
  double r = std::abs(z.v[i]) / kappa;
  return spec.one_sided ? 0.5 * r : r;
}

double unstick_clock(const PhasePoint& z, const StickySpec& spec, RngStream& rng) {
  double r = unstick_rate(z, spec);
  if (r == 0.0) return kInf;
  return rng.exponential() / r;
}

PhasePoint unstick(const PhasePoint& z, const StickySpec& spec) {
  auto i = static_cast<std::size_t>(spec.coordinate);
  if (!z.is_frozen(spec.coordinate)) throw std::logic_error("unstick: coordinate not frozen");
  PhasePoint out = z;
  out.frozen[i] = 0;
  out.x[i] = spec.c;
  if (spec.one_sided) out.v[i] = -out.v[i];
  // interior atom: departs in the stored direction; the boundary-hit solvers
  // only look strictly ahead of the current position, so sitting exactly on
  // the atom is unambiguous
  return out;
}

}  // namespace pdmp
