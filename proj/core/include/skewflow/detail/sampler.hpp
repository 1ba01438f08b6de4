#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "skewflow/ode.hpp"

namespace skewflow::detail {

/// Observer that forwards accepted steps (dt == 0) or dense samples on the
/// grid t0 + j * dt (dt > 0) to `emit(t, state)`. The initial point is not
/// emitted; callers add it themselves.
template <class Emit>
class Sampler {
 public:
  Sampler(double t0, double t1, double dt, std::size_t n, Emit emit)
      : t0_(t0), last_(t0), dir_(t1 >= t0 ? 1.0 : -1.0), dt_(std::abs(dt)), buf_(n), emit_(std::move(emit)) {}

  StepAction operator()(StepView& view) {
    if (dt_ <= 0.0) {
      emit_(view.t(), std::span<const double>(view.state()));
      last_ = view.t();
      return StepAction::Continue;
    }
    while (true) {
      const double ts = t0_ + dir_ * dt_ * static_cast<double>(next_);
      if (dir_ * (ts - view.t()) > 1e-12 * std::max(1.0, std::abs(ts))) break;
      view.dense(ts, buf_);
      emit_(ts, std::span<const double>(buf_));
      last_ = ts;
      ++next_;
    }
    return StepAction::Continue;
  }

  double last_emitted() const { return last_; }

 private:
  double t0_;
  double last_;
  double dir_;
  double dt_;
  std::size_t next_{1};
  std::vector<double> buf_;
  Emit emit_;
};

}  // namespace skewflow::detail
