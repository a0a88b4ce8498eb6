#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pdmp {

using Vec = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// State of the process: position, velocity, region label (for piecewise
// speed / piecewise densities), and the stuck-coordinate mask.  A frozen
// coordinate keeps its velocity (needed when it is released) but does not
// move under the flow.
struct PhasePoint {
  Vec x;
  Vec v;
  int region = 0;
  std::vector<std::uint8_t> frozen;  // empty = nothing frozen

  int dim() const { return static_cast<int>(x.size()); }
  bool is_frozen(int i) const {
    return !frozen.empty() && frozen[static_cast<std::size_t>(i)];
  }
  void ensure_frozen_mask() {
    if (frozen.empty()) frozen.assign(x.size(), 0);
  }
  double veff(int i) const { return is_frozen(i) ? 0.0 : v[static_cast<std::size_t>(i)]; }
};

enum class EventTag : int {
  Init = 0,
  Reflect,
  Refresh,
  BoundaryCross,
  BoundaryReflect,
  Teleport,
  CornerFlip,
  Stick,
  Unstick,
  Final,
};
inline constexpr int kTagCount = 10;

const char* tag_name(EventTag t);

struct EventRecord {
  double t = 0.0;
  PhasePoint z;
  EventTag tag = EventTag::Init;
};

// Piecewise-constant-by-region speed multiplier of the flow.
class SpeedFunction {
 public:
  SpeedFunction() : values_{1.0}, unit_(true) {}
  explicit SpeedFunction(Vec values) : values_(std::move(values)), unit_(true) {
    if (values_.empty()) throw std::invalid_argument("SpeedFunction: empty value list");
    for (double s : values_) {
      if (!(s > 0.0)) throw std::invalid_argument("SpeedFunction: values must be > 0");
      if (s != 1.0) unit_ = false;
    }
  }
  static SpeedFunction unit() { return SpeedFunction(); }

  double operator()(int region) const {
    if (unit_) return 1.0;
    if (region < 0 || region >= static_cast<int>(values_.size()))
      throw std::out_of_range("SpeedFunction: unknown region");
    return values_[static_cast<std::size_t>(region)];
  }
  bool is_unit() const { return unit_; }

 private:
  Vec values_;
  bool unit_;
};

// Event list of a run.  The continuous path is recovered exactly by linear
// interpolation between consecutive records (scaled by the active speed).
struct Skeleton {
  std::vector<EventRecord> records;
  double clock = 0.0;
  SpeedFunction speed;  // copied from the model so estimators can reweight
};

}  // namespace pdmp
