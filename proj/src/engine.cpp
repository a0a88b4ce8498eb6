#include "pdmp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pdmp/poisson.hpp"
#include "pdmp/sticky.hpp"

namespace pdmp {

RateBound ModelSpec::drift_bound_dir(const PhasePoint& z, double horizon) const {
  RateBound total{0.0, 0.0, true};
  for (int i = 0; i < dim(); ++i) {
    RateBound bi = drift_bound_coord(z, i, horizon);
    total.a += bi.a;
    total.b += bi.b;
    total.exact = total.exact && bi.exact;
  }
  return total;
}

void flow_advance(PhasePoint& z, double dt, const SpeedFunction& s) {
  if (dt < 0.0) throw std::invalid_argument("flow_advance: negative dt");
  if (dt == 0.0) return;
  double sp = s(z.region);
  for (std::size_t i = 0; i < z.x.size(); ++i)
    if (!z.is_frozen(static_cast<int>(i))) z.x[i] += z.v[i] * sp * dt;
}

ClockOutcome race_clocks(double boundary_tau, const std::vector<double>& unstick_taus,
                         const std::vector<double>& reflect_taus, double refresh_tau) {
  ClockOutcome best;
  auto consider = [&best](ClockType type, int index, double tau) {
    if (tau < best.tau) best = ClockOutcome{type, index, tau};
  };
  // scan in priority order so strict < keeps the earlier type on exact ties
  consider(ClockType::BoundaryHit, -1, boundary_tau);
  for (std::size_t i = 0; i < unstick_taus.size(); ++i)
    consider(ClockType::Unstick, static_cast<int>(i), unstick_taus[i]);
  for (std::size_t i = 0; i < reflect_taus.size(); ++i)
    consider(ClockType::Reflection, static_cast<int>(i), reflect_taus[i]);
  consider(ClockType::Refreshment, -1, refresh_tau);
  return best;
}

namespace {

struct GradCache {
  bool active = false;
  Vec g;
  std::vector<int> dirty;

  void full(const ModelSpec& model, const PhasePoint& z) {
    const int d = model.dim();
    g.resize(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) g[static_cast<std::size_t>(k)] = model.grad_component(z, k);
  }

  void after_event(const ModelSpec& model, const PhasePoint& z, EventTag tag,
                   const FacetHit* hit, bool force_full) {
    if (!active) return;
    bool all = false;
    dirty.clear();
    if (force_full) {
      all = true;
    } else {
      model.gradient_dirty_after(tag, hit, z, all, dirty);
    }
    if (all) {
      full(model, z);
    } else {
      for (int k : dirty) g[static_cast<std::size_t>(k)] = model.grad_component(z, k);
    }
  }
};

}  // namespace

Skeleton run_sampler(const ModelSpec& model, const BoundaryPolicy& policy,
                     const SamplerKernel& sampler, PhasePoint z0, double clock, RngBundle& rng,
                     const EngineOptions& opts, RunStats* stats_out) {
  if (!(clock > 0.0)) throw std::invalid_argument("run_sampler: clock must be > 0");
  const int d = model.dim();
  if (z0.dim() != d || static_cast<int>(z0.v.size()) != d)
    throw std::invalid_argument("run_sampler: state dimension mismatch");

  PhasePoint z = std::move(z0);
  z.ensure_frozen_mask();

  Skeleton skel;
  skel.clock = clock;
  skel.speed = model.speed();

  RunStats local_stats;
  RunStats& st = stats_out ? *stats_out : local_stats;
  st = RunStats{};
  st.facet.assign(static_cast<std::size_t>(model.stat_class_count()), FacetClassStats{});

  auto record = [&](double t, EventTag tag) {
    skel.records.push_back(EventRecord{t, z, tag});
    st.tag_counts[static_cast<std::size_t>(tag)]++;
  };

  record(0.0, EventTag::Init);

  // one exponential budget per frozen coordinate with an atom; clamped
  // coordinates (no sticky spec) hold no budget and never release
  std::vector<double> budgets(static_cast<std::size_t>(d), -1.0);
  std::vector<double> urates(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < d; ++i)
    if (z.is_frozen(i) && model.sticky_index_of(i) >= 0)
      budgets[static_cast<std::size_t>(i)] = rng.unstick.exponential();

  GradCache grad;
  grad.active = model.gradient_piecewise_constant();
  if (grad.active) grad.full(model, z);
  const Vec* gptr = grad.active ? &grad.g : nullptr;

  const int nclocks = sampler.clock_count(model);
  std::vector<double> reflect_taus(static_cast<std::size_t>(nclocks), kInf);
  std::vector<RateBound> bounds(static_cast<std::size_t>(nclocks));
  std::vector<double> unstick_taus(static_cast<std::size_t>(d), kInf);
  const double refresh_rate = sampler.refresh_rate();

  double t = 0.0;
  const double max_iters = opts.max_events_per_unit_time * std::max(1.0, clock) * 16.0;

  auto advance = [&](double dt) {
    flow_advance(z, dt, model.speed());
    for (int i = 0; i < d; ++i) {
      auto ii = static_cast<std::size_t>(i);
      if (budgets[ii] >= 0.0) budgets[ii] -= dt * urates[ii];
    }
  };

  while (t < clock) {
    st.iterations++;
    if (static_cast<double>(st.iterations) > max_iters)
      throw std::runtime_error("run_sampler: event cascade guard tripped (iterations)");
    if (static_cast<double>(skel.records.size()) >
        opts.max_events_per_unit_time * std::max(1.0, t))
      throw std::runtime_error("run_sampler: event cascade guard tripped (records)");

    const double remaining = clock - t;
    FacetHit hit = model.next_boundary_hit(z, opts.corner_tol);
    if (!(hit.tau > 0.0))
      throw std::logic_error("run_sampler: boundary hit at non-positive time");
    double h = std::min(model.thin_horizon(z, hit.tau), remaining);
    if (!(h > 0.0)) throw std::logic_error("run_sampler: empty thinning horizon");

    for (int c = 0; c < nclocks; ++c) {
      auto cc = static_cast<std::size_t>(c);
      bounds[cc] = sampler.clock_bound(model, z, c, h, gptr);
      reflect_taus[cc] = first_arrival_linear(bounds[cc].a, bounds[cc].b, rng.reflect.exponential());
    }

    for (int i = 0; i < d; ++i) {
      auto ii = static_cast<std::size_t>(i);
      urates[ii] = 0.0;
      unstick_taus[ii] = kInf;
      if (budgets[ii] >= 0.0) {
        const StickySpec& spec = model.sticky_spec(model.sticky_index_of(i));
        urates[ii] = unstick_rate(z, spec);
        if (urates[ii] > 0.0) unstick_taus[ii] = budgets[ii] / urates[ii];
      }
    }

    double refresh_tau = refresh_rate > 0.0 ? rng.refresh.exponential() / refresh_rate : kInf;
    double boundary_tau = (hit.tau <= h && hit.tau < remaining) ? hit.tau : kInf;

    ClockOutcome win = race_clocks(boundary_tau, unstick_taus, reflect_taus, refresh_tau);

    if (win.winner == ClockType::None || win.tau > h || win.tau >= remaining) {
      // nothing fires inside the horizon: advance and redraw (memoryless)
      if (h >= remaining) {
        advance(remaining);
        t = clock;
        break;
      }
      advance(h);
      t += h;
      st.horizon_advances++;
      continue;
    }

    advance(win.tau);
    t += win.tau;

    switch (win.winner) {
      case ClockType::BoundaryHit: {
        model.snap_to_facet(z, hit);
        if (hit.kind == FacetKind::Vanishing)
          throw std::runtime_error(
              "run_sampler: reached a vanishing-density boundary (rates should reflect first; "
              "check the model's thinning bounds)");
        if (hit.kind == FacetKind::StickyAtom) {
          int si = model.sticky_index_of(hit.a);
          if (si < 0) throw std::logic_error("run_sampler: atom hit without sticky spec");
          const StickySpec& spec = model.sticky_spec(si);
          record(t, EventTag::Stick);  // arrival state
          z = stick(z, spec);
          record(t, EventTag::Stick);  // frozen state
          budgets[static_cast<std::size_t>(hit.a)] = rng.unstick.exponential();
          grad.after_event(model, z, EventTag::Stick, &hit, opts.full_gradient_recompute);
        } else {
          FacetGeometry geo = model.facet_geometry(z, hit);
          BoundaryOutcome out = resolve_boundary(z, geo, policy, hit.corner, rng.boundary);
          if (!hit.corner) {
            auto sc = static_cast<std::size_t>(geo.stat_class);
            st.facet[sc].hits++;
            if (out.crossed) st.facet[sc].crossings++;
          }
          record(t, out.tag);  // hit state
          z = out.z;
          record(t, out.tag);  // post-kernel state
          grad.after_event(model, z, out.tag, &hit, opts.full_gradient_recompute);
        }
        break;
      }
      case ClockType::Unstick: {
        int i = win.index;
        const StickySpec& spec = model.sticky_spec(model.sticky_index_of(i));
        z = unstick(z, spec);
        budgets[static_cast<std::size_t>(i)] = -1.0;
        record(t, EventTag::Unstick);
        FacetHit uh;
        uh.kind = FacetKind::StickyAtom;
        uh.a = i;
        grad.after_event(model, z, EventTag::Unstick, &uh, opts.full_gradient_recompute);
        break;
      }
      case ClockType::Reflection: {
        int c = win.index;
        auto cc = static_cast<std::size_t>(c);
        if (!bounds[cc].exact) {
          double env = std::max(0.0, bounds[cc].a + bounds[cc].b * win.tau);
          double r = sampler.clock_rate(model, z, c);
          if (r > env * (1.0 + 1e-9))
            throw std::runtime_error("run_sampler: rate exceeds its thinning envelope");
          if (rng.reflect.uniform() * env > r) {
            st.thin_rejections++;
            continue;  // rejected proposal: pure advance, no record
          }
        }
        z = sampler.apply_reflection(model, z, c, gptr);
        record(t, EventTag::Reflect);
        grad.after_event(model, z, EventTag::Reflect, nullptr, opts.full_gradient_recompute);
        break;
      }
      case ClockType::Refreshment: {
        sampler.refresh_velocity(z, rng.refresh);
        record(t, EventTag::Refresh);
        grad.after_event(model, z, EventTag::Refresh, nullptr, opts.full_gradient_recompute);
        break;
      }
      case ClockType::None:
        throw std::logic_error("run_sampler: unreachable");
    }
  }

  record(clock, EventTag::Final);
  return skel;
}

}  // namespace pdmp
