#include "pdmp/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace pdmp {

namespace {

// Gauss-Legendre nodes/weights on [0,1].
void gauss01(int n, std::vector<double>& xs, std::vector<double>& ws) {
  switch (n) {
    case 1:
      xs = {0.5};
      ws = {1.0};
      break;
    case 2: {
      double r = 0.5 / std::sqrt(3.0);
      xs = {0.5 - r, 0.5 + r};
      ws = {0.5, 0.5};
      break;
    }
    case 3: {
      double r = 0.5 * std::sqrt(0.6);
      xs = {0.5 - r, 0.5, 0.5 + r};
      ws = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
      break;
    }
    case 4: {
      double a = 0.5 * std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(1.2));
      double b = 0.5 * std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(1.2));
      double wa = (18.0 + std::sqrt(30.0)) / 72.0;
      double wb = (18.0 - std::sqrt(30.0)) / 72.0;
      xs = {0.5 - b, 0.5 - a, 0.5 + a, 0.5 + b};
      ws = {wb, wa, wa, wb};
      break;
    }
    default:
      throw std::invalid_argument("quad_points must be in 1..4");
  }
}

// Visit every inter-record flight segment: state at the segment start plus
// its duration.  Zero-length pairs (boundary hit/resolution) are skipped.
template <typename F>
void for_segments(const Skeleton& skel, F&& visit) {
  for (std::size_t k = 0; k + 1 < skel.records.size(); ++k) {
    double dt = skel.records[k + 1].t - skel.records[k].t;
    if (dt <= 0.0) continue;
    visit(skel.records[k].z, dt);
  }
}

struct Accum {
  double num = 0.0, den = 0.0;
};

void accumulate(const Skeleton& skel, const StateFn& f, bool inv_speed, int quad_points,
                double batch_len, std::vector<Accum>& batches) {
  std::vector<double> qx, qw;
  gauss01(quad_points, qx, qw);
  const SpeedFunction& speed = skel.speed;
  double t = 0.0;
  for_segments(skel, [&](const PhasePoint& z0, double dt) {
    double s = speed(z0.region);
    double w = inv_speed ? 1.0 / s : 1.0;
    // split the segment at batch boundaries so batch sums stay exact
    double off = 0.0;
    while (off < dt) {
      auto bi = static_cast<std::size_t>((t + off) / batch_len);
      if (bi >= batches.size()) bi = batches.size() - 1;
      double end = std::min(dt, (static_cast<double>(bi) + 1.0) * batch_len - t);
      if (end <= off) end = dt;  // float guard: batch edge landed exactly on off
      double seg = end - off;
      double favg = 0.0;
      PhasePoint zq = z0;
      for (std::size_t q = 0; q < qx.size(); ++q) {
        double tau = off + qx[q] * seg;
        for (std::size_t i = 0; i < zq.x.size(); ++i)
          zq.x[i] = z0.x[i] + (z0.is_frozen(static_cast<int>(i)) ? 0.0 : z0.v[i] * s * tau);
        favg += qw[q] * f(zq);
      }
      batches[bi].num += w * seg * favg;
      batches[bi].den += w * seg;
      off = end;
    }
    t += dt;
  });
}

}  // namespace

double reweighted_average(const Skeleton& skel, const StateFn& f, int quad_points) {
  std::vector<Accum> acc(1);
  accumulate(skel, f, true, quad_points, kInf, acc);
  if (!(acc[0].den > 0.0)) throw std::runtime_error("reweighted_average: empty path");
  return acc[0].num / acc[0].den;
}

double time_average(const Skeleton& skel, const StateFn& f, int quad_points) {
  std::vector<Accum> acc(1);
  accumulate(skel, f, false, quad_points, kInf, acc);
  if (!(acc[0].den > 0.0)) throw std::runtime_error("time_average: empty path");
  return acc[0].num / acc[0].den;
}

MeanSe weighted_mean_se(const Skeleton& skel, const StateFn& f, bool inverse_speed_weights,
                        int batches, int quad_points) {
  if (batches < 2) throw std::invalid_argument("weighted_mean_se: need >= 2 batches");
  std::vector<Accum> acc(static_cast<std::size_t>(batches));
  accumulate(skel, f, inverse_speed_weights, quad_points, skel.clock / batches, acc);
  double num = 0.0, den = 0.0;
  for (const Accum& a : acc) {
    num += a.num;
    den += a.den;
  }
  MeanSe out;
  out.mean = num / den;
  double var = 0.0;
  int used = 0;
  for (const Accum& a : acc) {
    if (!(a.den > 0.0)) continue;
    double r = a.num / a.den;
    var += (r - out.mean) * (r - out.mean);
    ++used;
  }
  if (used < 2) throw std::runtime_error("weighted_mean_se: too few non-empty batches");
  var /= (used - 1);
  out.se = std::sqrt(var / used);
  return out;
}

Histogram occupation_histogram(const Skeleton& skel, int coordinate, double lo, double hi,
                               int nbins) {
  if (nbins <= 0 || !(hi > lo)) throw std::invalid_argument("occupation_histogram: bad bins");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.nbins = nbins;
  h.mass.assign(static_cast<std::size_t>(nbins), 0.0);
  const double width = (hi - lo) / nbins;
  auto ci = static_cast<std::size_t>(coordinate);

  for_segments(skel, [&](const PhasePoint& z0, double dt) {
    h.total += dt;
    if (z0.is_frozen(coordinate)) {
      h.atoms[z0.x[ci]] += dt;
      return;
    }
    double s = skel.speed(z0.region);
    double a = z0.x[ci];
    double b = a + z0.v[ci] * s * dt;
    if (a > b) std::swap(a, b);
    if (b <= lo) {
      h.below += dt;
      return;
    }
    if (a >= hi) {
      h.above += dt;
      return;
    }
    if (b == a) {
      // zero velocity on this coordinate: all time in one bin
      auto bi = static_cast<std::size_t>(std::min<double>(nbins - 1.0, (a - lo) / width));
      h.mass[bi] += dt;
      return;
    }
    double inv_span = dt / (b - a);
    if (a < lo) {
      h.below += (lo - a) * inv_span;
      a = lo;
    }
    if (b > hi) {
      h.above += (b - hi) * inv_span;
      b = hi;
    }
    int first = std::min(nbins - 1, std::max(0, static_cast<int>((a - lo) / width)));
    int last = std::min(nbins - 1, std::max(0, static_cast<int>((b - lo) / width)));
    for (int k = first; k <= last; ++k) {
      double e0 = std::max(a, lo + k * width);
      double e1 = std::min(b, lo + (k + 1) * width);
      if (e1 > e0) h.mass[static_cast<std::size_t>(k)] += (e1 - e0) * inv_span;
    }
  });
  return h;
}

}  // namespace pdmp
