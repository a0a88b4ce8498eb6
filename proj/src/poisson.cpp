#include "pdmp/poisson.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pdmp/types.hpp"

namespace pdmp {

double first_arrival_constant(double rate, double e) {
  if (rate < 0.0) throw std::invalid_argument("first_arrival_constant: negative rate");
  if (rate == 0.0) return kInf;
  return e / rate;
}

// Smallest t with int_0^t (a + b s)^+ ds = e.  Solved in closed form; the
// rationalized root 2e/(a + sqrt(a^2 + 2be)) avoids cancellation for both
// signs of b.
double first_arrival_linear(double a, double b, double e) {
  if (!(e > 0.0)) return 0.0;
  if (b == 0.0) return first_arrival_constant(a > 0.0 ? a : 0.0, e);
  if (a < 0.0) {
    if (b <= 0.0) return kInf;
    // rate is zero until the hinge -a/b, then a fresh ramp
    return -a / b + std::sqrt(2.0 * e / b);
  }
  double disc = a * a + 2.0 * b * e;
  if (b < 0.0 && disc < 0.0) return kInf;  // total mass a^2/(2|b|) exhausted
  return 2.0 * e / (a + std::sqrt(disc));
}

double ipp_sample_constant(double rate, double u) {
  return first_arrival_constant(rate, -std::log(u));
}

double ipp_sample_linear(double a, double b, double u) {
  return first_arrival_linear(a, b, -std::log(u));
}

double ipp_sample_thinned(const std::function<double(double)>& rate_fn, double a, double b,
                          RngStream& rng) {
  double t = 0.0;
  const int max_iter = 100000000;
  for (int it = 0; it < max_iter; ++it) {
    double tau = first_arrival_linear(a + b * t, b, rng.exponential());
    if (std::isinf(tau)) return kInf;
    t += tau;
    double bound = std::max(0.0, a + b * t);
    double r = rate_fn(t);
    if (r < 0.0) throw std::runtime_error("ipp_sample_thinned: negative rate");
    if (r > bound * (1.0 + 1e-9))
      throw std::runtime_error("ipp_sample_thinned: rate exceeds dominating envelope");
    if (bound > 0.0 && rng.uniform() * bound <= r) return t;
  }
  throw std::runtime_error("ipp_sample_thinned: no acceptance after excessive proposals");
}

const char* tag_name(EventTag t) {
  switch (t) {
    case EventTag::Init: return "init";
    case EventTag::Reflect: return "reflect";
    case EventTag::Refresh: return "refresh";
    case EventTag::BoundaryCross: return "boundary-cross";
    case EventTag::BoundaryReflect: return "boundary-reflect";
    case EventTag::Teleport: return "teleport";
    case EventTag::CornerFlip: return "corner-flip";
    case EventTag::Stick: return "stick";
    case EventTag::Unstick: return "unstick";
    case EventTag::Final: return "final";
  }
  return "?";
}

}  // namespace pdmp
