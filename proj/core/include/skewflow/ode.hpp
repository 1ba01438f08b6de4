#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta pair with PI step-size control
// and the standard fourth-order continuous extension.
//
// The right-hand side is any callable `rhs(double t, const double* y, double* dy)`.
// Integration runs forward or backward depending on the sign of t1 - t0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <type_traits>
#include <vector>

namespace skewflow {

struct StepControl {
  double abs_tol{1e-10};
  double rel_tol{1e-10};
  double initial_step{0.0};  ///< 0 selects a step automatically
  double max_step{0.0};      ///< 0 means unbounded
  std::size_t max_steps{200'000'000};
};

enum class IntegrationStatus {
  Completed,      ///< reached t1
  Stopped,        ///< observer requested stop
  StepUnderflow,  ///< step size fell below roundoff level
  StepLimit,      ///< max_steps exhausted
  NonFinite,      ///< state or error estimate became NaN/inf
};

inline const char* to_string(IntegrationStatus status) {
  switch (status) {
    case IntegrationStatus::Completed: return "completed";
    case IntegrationStatus::Stopped: return "stopped";
    case IntegrationStatus::StepUnderflow: return "step-underflow";
    case IntegrationStatus::StepLimit: return "step-limit";
    case IntegrationStatus::NonFinite: return "non-finite";
  }
  return "unknown";
}

struct IntegrationReport {
  IntegrationStatus status{IntegrationStatus::Completed};
  double t{0.0};  ///< time of the last accepted state
  std::size_t accepted{0};
  std::size_t rejected{0};
  std::size_t rhs_evals{0};

  bool ok() const {
    return status == IntegrationStatus::Completed || status == IntegrationStatus::Stopped;
  }
};

enum class StepAction { Continue, Stop };

/// Access to one accepted step, handed to observers.
///
/// The observer may rewrite `state()`; it must then call `mark_modified()` so
/// the stored first stage is recomputed.
class StepView {
 public:
  double t_prev() const { return t_prev_; }
  double t() const { return t_; }
  std::span<const double> prev_state() const { return {y0_, n_}; }
  std::span<double> state() { return {y1_, n_}; }
  std::span<const double> state() const { return {y1_, n_}; }
  void mark_modified() { modified_ = true; }

  /// Continuous extension inside [t_prev, t].
  void dense(double t, std::span<double> out) const;

 private:
  template <class Rhs>
  friend class DormandPrince;

  double t_prev_{0.0};
  double t_{0.0};
  double h_{0.0};
  std::size_t n_{0};
  const double* y0_{nullptr};
  double* y1_{nullptr};
  const double* k_[7]{};
  bool modified_{false};
};

struct NoObserver {
  StepAction operator()(StepView&) const { return StepAction::Continue; }
};

namespace dp45 {

inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                        a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace dp45

inline void StepView::dense(double t, std::span<double> out) const {
  using namespace dp45;
  const double s = (t - t_prev_) / h_;
  const double s1 = 1.0 - s;
  for (std::size_t i = 0; i < n_; ++i) {
    const double ydiff = y1_[i] - y0_[i];
    const double bspl = h_ * k_[0][i] - ydiff;
    const double r4 = ydiff - h_ * k_[6][i] - bspl;
    const double r5 = h_ * (d1 * k_[0][i] + d3 * k_[2][i] + d4 * k_[3][i] + d5 * k_[4][i] +
                            d6 * k_[5][i] + d7 * k_[6][i]);
    out[i] = y0_[i] + s * (ydiff + s1 * (bspl + s * (r4 + s1 * r5)));
  }
}

template <class Rhs>
class DormandPrince {
 public:
  DormandPrince(Rhs& rhs, std::size_t n, const StepControl& ctl)
      : rhs_(rhs), n_(n), ctl_(ctl), buf_(9 * n) {}

  template <class Observer>
  IntegrationReport run(double t0, double t1, std::span<double> y, Observer& observer) {
    using namespace dp45;
    IntegrationReport rep;
    rep.t = t0;
    if (t0 == t1 || n_ == 0) return rep;

    double* y0 = buf_.data();
    double* ytmp = y0 + n_;
    double* k[7];
    for (int s = 0; s < 7; ++s) k[s] = y0 + (2 + s) * n_;
    std::copy(y.begin(), y.end(), y0);

    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double span_len = std::abs(t1 - t0);
    const double hmax = ctl_.max_step > 0.0 ? ctl_.max_step : span_len;

    double t = t0;
    rhs_(t, y0, k[0]);
    ++rep.rhs_evals;
    double h = ctl_.initial_step > 0.0 ? ctl_.initial_step : initial_step(t, y0, k[0], dir, hmax, ytmp, k[1]);
    rep.rhs_evals += ctl_.initial_step > 0.0 ? 0 : 1;
    h = std::min(h, hmax);

    double facold = 1e-4;
    bool last_rejected = false;
    constexpr double beta = 0.04, expo1 = 0.2 - beta * 0.75, safe = 0.9;
    constexpr double facmin_inv = 5.0, facmax_inv = 0.1;  // 1/0.2, 1/10

    StepView view;
    view.n_ = n_;

    while (true) {
      if (rep.accepted + rep.rejected >= ctl_.max_steps) {
        rep.status = IntegrationStatus::StepLimit;
        break;
      }
      const double remaining = std::abs(t1 - t);
      bool last = false;
      if (h >= remaining * (1.0 - 1e-12)) {
        h = remaining;
        last = true;
      }
      if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
        rep.status = IntegrationStatus::StepUnderflow;
        break;
      }
      const double hs = dir * h;

      for (std::size_t i = 0; i < n_; ++i) ytmp[i] = y0[i] + hs * a21 * k[0][i];
      rhs_(t + c2 * hs, ytmp, k[1]);
      for (std::size_t i = 0; i < n_; ++i) ytmp[i] = y0[i] + hs * (a31 * k[0][i] + a32 * k[1][i]);
      rhs_(t + c3 * hs, ytmp, k[2]);
      for (std::size_t i = 0; i < n_; ++i)
        ytmp[i] = y0[i] + hs * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
      rhs_(t + c4 * hs, ytmp, k[3]);
      for (std::size_t i = 0; i < n_; ++i)
        ytmp[i] = y0[i] + hs * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
      rhs_(t + c5 * hs, ytmp, k[4]);
      for (std::size_t i = 0; i < n_; ++i)
        ytmp[i] = y0[i] + hs * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] +
                                a65 * k[4][i]);
      const double tnew = last ? t1 : t + hs;
      rhs_(t + hs, ytmp, k[5]);
      double* y1 = y.data();
      for (std::size_t i = 0; i < n_; ++i)
        y1[i] = y0[i] + hs * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] +
                              a76 * k[5][i]);
      rhs_(t + hs, y1, k[6]);
      rep.rhs_evals += 6;

      double err = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        const double sc = ctl_.abs_tol + ctl_.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double ei = hs * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                                e6 * k[5][i] + e7 * k[6][i]);
        const double q = ei / sc;
        err += q * q;
      }
      err = std::sqrt(err / static_cast<double>(n_));
      if (!std::isfinite(err)) {
        std::copy(y0, y0 + n_, y1);
        rep.status = IntegrationStatus::NonFinite;
        break;
      }

      const double fac11 = std::pow(err, expo1);
      double fac = fac11 / std::pow(facold, beta);
      fac = std::clamp(fac / safe, facmax_inv, facmin_inv);

      if (err <= 1.0) {
        facold = std::max(err, 1e-4);
        ++rep.accepted;
        view.t_prev_ = t;
        view.t_ = tnew;
        view.h_ = hs;
        view.y0_ = y0;
        view.y1_ = y1;
        for (int s = 0; s < 7; ++s) view.k_[s] = k[s];
        view.modified_ = false;
        const StepAction action = observer(view);

        t = tnew;
        rep.t = t;
        std::copy(y1, y1 + n_, y0);
        if (view.modified_) {
          rhs_(t, y0, k[0]);
          ++rep.rhs_evals;
        } else {
          std::swap(k[0], k[6]);
        }
        if (action == StepAction::Stop) {
          rep.status = IntegrationStatus::Stopped;
          break;
        }
        if (last) {
          rep.status = IntegrationStatus::Completed;
          break;
        }
        double hnew = h / fac;
        if (last_rejected) hnew = std::min(hnew, h);
        h = std::min(hnew, hmax);
        last_rejected = false;
      } else {
        ++rep.rejected;
        h = h / std::min(facmin_inv, fac11 / safe);
        last_rejected = true;
      }
    }
    if (rep.status != IntegrationStatus::Completed && rep.status != IntegrationStatus::Stopped) {
      std::copy(y0, y0 + n_, y.begin());
    }
    return rep;
  }

 private:
  double initial_step(double t, const double* y0, const double* f0, double dir, double hmax,
                      double* ytmp, double* f1) {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = ctl_.abs_tol + ctl_.rel_tol * std::abs(y0[i]);
      dnf += (f0[i] / sk) * (f0[i] / sk);
      dny += (y0[i] / sk) * (y0[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, hmax);
    for (std::size_t i = 0; i < n_; ++i) ytmp[i] = y0[i] + dir * h * f0[i];
    rhs_(t + dir * h, ytmp, f1);
    double der2 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = ctl_.abs_tol + ctl_.rel_tol * std::abs(y0[i]);
      const double q = (f1[i] - f0[i]) / sk;
      der2 += q * q;
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3)
                                     : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, hmax});
  }

  Rhs& rhs_;
  std::size_t n_;
  StepControl ctl_;
  std::vector<double> buf_;
};

/// Integrate y from t0 to t1 in place. On failure `y` holds the last
/// accepted state and `report.t` its time.
template <class Rhs, class Observer>
IntegrationReport integrate(Rhs&& rhs, double t0, double t1, std::span<double> y,
                            const StepControl& ctl, Observer&& observer) {
  using R = std::remove_reference_t<Rhs>;
  DormandPrince<R> stepper(rhs, y.size(), ctl);
  return stepper.run(t0, t1, y, observer);
}

template <class Rhs>
IntegrationReport integrate(Rhs&& rhs, double t0, double t1, std::span<double> y,
                            const StepControl& ctl) {
  NoObserver obs;
  return integrate(rhs, t0, t1, y, ctl, obs);
}

}  // namespace skewflow
