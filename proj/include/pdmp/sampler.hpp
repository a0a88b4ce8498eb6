#pragma once

#include "pdmp/boundary.hpp"
#include "pdmp/bps.hpp"
#include "pdmp/model.hpp"
#include "pdmp/rng.hpp"
#include "pdmp/types.hpp"
#include "pdmp/zigzag.hpp"

namespace pdmp {

// What the engine needs from a sampler: how many reflection clocks it races,
// their envelopes/rates, and the reflection/refreshment kernels.
class SamplerKernel {
 public:
  virtual ~SamplerKernel() = default;
  virtual const char* name() const = 0;
  virtual int clock_count(const ModelSpec& model) const = 0;
  // envelope of clock c over [0,horizon]; grad is the cached gradient for
  // piecewise-constant models (null otherwise)
  virtual RateBound clock_bound(const ModelSpec& model, const PhasePoint& z, int c,
                                double horizon, const Vec* grad) const = 0;
  // true rate of clock c at the current state (thinning test)
  virtual double clock_rate(const ModelSpec& model, const PhasePoint& z, int c) const = 0;
  virtual PhasePoint apply_reflection(const ModelSpec& model, const PhasePoint& z, int c,
                                      const Vec* grad) const = 0;
  // resample unfrozen velocity components
  virtual void refresh_velocity(PhasePoint& z, RngStream& rng) const = 0;
  virtual double refresh_rate() const = 0;
  virtual BoundaryPolicy boundary_policy() const = 0;
};

class ZigZag final : public SamplerKernel {
 public:
  explicit ZigZag(double refresh_rate = 0.0) : refresh_rate_(refresh_rate) {}
  const char* name() const override { return "zigzag"; }
  int clock_count(const ModelSpec& model) const override { return model.dim(); }
  RateBound clock_bound(const ModelSpec& model, const PhasePoint& z, int c, double horizon,
                        const Vec* grad) const override;
  double clock_rate(const ModelSpec& model, const PhasePoint& z, int c) const override;
  PhasePoint apply_reflection(const ModelSpec& model, const PhasePoint& z, int c,
                              const Vec* grad) const override;
  void refresh_velocity(PhasePoint& z, RngStream& rng) const override;
  double refresh_rate() const override { return refresh_rate_; }
  BoundaryPolicy boundary_policy() const override { return zz_policy(); }

 private:
  double refresh_rate_;
};

class Bps final : public SamplerKernel {
 public:
  explicit Bps(double refresh_rate) : refresh_rate_(refresh_rate) {}
  const char* name() const override { return "bps"; }
  int clock_count(const ModelSpec&) const override { return 1; }
  RateBound clock_bound(const ModelSpec& model, const PhasePoint& z, int c, double horizon,
                        const Vec* grad) const override;
  double clock_rate(const ModelSpec& model, const PhasePoint& z, int c) const override;
  PhasePoint apply_reflection(const ModelSpec& model, const PhasePoint& z, int c,
                              const Vec* grad) const override;
  void refresh_velocity(PhasePoint& z, RngStream& rng) const override;
  double refresh_rate() const override { return refresh_rate_; }
  BoundaryPolicy boundary_policy() const override { return bps_policy(); }

 private:
  double refresh_rate_;
};

}  // namespace pdmp
