#pragma once

#include "pdmp/model.hpp"
#include "pdmp/types.hpp"

namespace pdmp {

// Freeze coordinate spec.coordinate at exactly spec.c; velocity is retained
// for the release.
PhasePoint stick(const PhasePoint& z, const StickySpec& spec);

// Release rate while stuck: |v_i|/kappa(x), halved for one-sided atoms.
double unstick_rate(const PhasePoint& z, const StickySpec& spec);

// Holding time from the current state (exact: kappa is piecewise constant
// between events in all shipped models, so the caller re-races per segment
// with budget carry-over).
double unstick_clock(const PhasePoint& z, const StickySpec& spec, RngStream& rng);

// Transfer mapping: interior atoms depart in the stored direction from x_i=c;
// one-sided atoms depart with the stored velocity negated.
PhasePoint unstick(const PhasePoint& z, const StickySpec& spec);

}  // namespace pdmp
