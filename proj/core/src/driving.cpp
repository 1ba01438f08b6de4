#include "skewflow/driving.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

namespace skewflow {

double reduce_angle(double theta, double period) {
  double r = std::fmod(theta, period);
  if (r < 0.0) r += period;
  // fmod of a tiny negative value can round back up to `period`.
  if (r >= period) r = 0.0;
  return r;
}

Frequencies::Frequencies(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("frequencies: at least one frequency required");
  for (double w : values_) {
    if (!std::isfinite(w)) throw std::invalid_argument("frequencies: non-finite value");
  }
}

namespace {

// Convergents of the continued fraction of x, stopping at max_den.
std::pair<std::int64_t, std::int64_t> best_rational(double x, std::int64_t max_den) {
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(v);
    if (std::abs(fl) > 1e15) break;
    const auto a = static_cast<std::int64_t>(fl);
    const std::int64_t q2 = a * q1 + q0;
    if (q2 > max_den) break;
    const std::int64_t p2 = a * p1 + p0;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double frac = v - fl;
    if (frac < 1e-15) break;
    v = 1.0 / frac;
  }
  if (q1 == 0) return {static_cast<std::int64_t>(std::llround(x)), 1};
  return {p1, q1};
}

}  // namespace

std::vector<RatioDiagnostic> frequency_ratio_diagnostics(const Frequencies& freqs,
                                                         std::int64_t max_denominator,
                                                         double rational_tol) {
  std::vector<RatioDiagnostic> out;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    for (std::size_t j = i + 1; j < freqs.size(); ++j) {
      RatioDiagnostic diag;
      diag.i = i;
      diag.j = j;
      if (freqs[i] == 0.0) {
        diag.ratio = std::numeric_limits<double>::infinity();
        diag.near_rational = true;
        out.push_back(diag);
        continue;
      }
      diag.ratio = freqs[j] / freqs[i];
      auto [p, q] = best_rational(diag.ratio, max_denominator);
      diag.numerator = p;
      diag.denominator = q;
      diag.residual = std::abs(diag.ratio - static_cast<double>(p) / static_cast<double>(q));
      diag.near_rational = diag.residual <= rational_tol * std::max(1.0, std::abs(diag.ratio));
      out.push_back(diag);
    }
  }
  return out;
}

TorusPoint::TorusPoint(std::vector<double> phases) : phases_(std::move(phases)) {
  if (phases_.empty()) throw std::invalid_argument("torus point: dimension must be >= 1");
  for (double& ph : phases_) {
    if (!std::isfinite(ph)) throw std::invalid_argument("torus point: non-finite phase");
    ph = reduce_angle(ph);
  }
}

TorusPoint TorusPoint::origin(std::size_t dimension) {
  return TorusPoint(std::vector<double>(dimension, 0.0));
}

TorusPoint advance_base(const TorusPoint& p, const Frequencies& freqs, double t) {
  if (p.dimension() != freqs.size()) {
    throw std::invalid_argument("advance_base: dimension mismatch");
  }
  std::vector<double> next(p.dimension());
  for (std::size_t i = 0; i < next.size(); ++i) {
    // Reduce the increment first so large |t| does not swamp the phase.
    next[i] = p[i] + reduce_angle(freqs[i] * t);
  }
  return TorusPoint(std::move(next));
}

TrigPoly::TrigPoly(double constant, std::vector<Harmonic> terms) : constant_(constant) {
  if (!std::isfinite(constant_)) throw std::invalid_argument("trig poly: non-finite constant");
  for (auto& h : terms) {
    if (!std::isfinite(h.cos_coeff) || !std::isfinite(h.sin_coeff)) {
      throw std::invalid_argument("trig poly: non-finite coefficient");
    }
    bool zero = true;
    for (int ki : h.k) zero = zero && ki == 0;
    if (zero) {
      constant_ += h.cos_coeff;  // sin(0) = 0
      continue;
    }
    terms_.push_back(std::move(h));
  }
}

std::size_t TrigPoly::dimension() const {
  std::size_t dim = 0;
  for (const auto& h : terms_) dim = std::max(dim, h.k.size());
  return dim;
}

namespace {

double dot(const std::vector<int>& k, std::span<const double> x) {
  if (k.size() > x.size()) throw std::invalid_argument("trig poly: multi-index longer than torus dimension");
  double s = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) s += k[i] * x[i];
  return s;
}

}  // namespace

double TrigPoly::eval(std::span<const double> phases) const {
  double v = constant_;
  for (const auto& h : terms_) {
    const double arg = dot(h.k, phases);
    v += h.cos_coeff * std::cos(arg) + h.sin_coeff * std::sin(arg);
  }
  return v;
}

double TrigPoly::orbit_primitive(std::span<const double> phases, std::span<const double> freqs,
                                 double t) const {
  double v = constant_ * t;
  for (const auto& h : terms_) {
    const double arg0 = dot(h.k, phases);
    const double rate = dot(h.k, freqs);
    if (rate == 0.0) {
      v += t * (h.cos_coeff * std::cos(arg0) + h.sin_coeff * std::sin(arg0));
      continue;
    }
    const double arg1 = arg0 + rate * t;
    v += (h.cos_coeff * (std::sin(arg1) - std::sin(arg0)) -
          h.sin_coeff * (std::cos(arg1) - std::cos(arg0))) / rate;
  }
  return v;
}

double TrigPoly::upper_bound() const {
  double v = constant_;
  for (const auto& h : terms_) v += std::hypot(h.cos_coeff, h.sin_coeff);
  return v;
}

double TrigPoly::abs_bound() const {
  double v = std::abs(constant_);
  for (const auto& h : terms_) v += std::hypot(h.cos_coeff, h.sin_coeff);
  return v;
}

TrigPoly TrigPoly::scaled(double s) const {
  std::vector<Harmonic> terms = terms_;
  for (auto& h : terms) {
    h.cos_coeff *= s;
    h.sin_coeff *= s;
  }
  return TrigPoly(constant_ * s, std::move(terms));
}

TrigPoly operator+(const TrigPoly& p, const TrigPoly& q) {
  // like harmonics are merged so the coefficient bounds see cancellations
  std::vector<Harmonic> terms = p.terms_;
  for (const auto& h : q.terms_) {
    auto same = std::find_if(terms.begin(), terms.end(), [&](const Harmonic& g) { return g.k == h.k; });
    if (same == terms.end()) {
      terms.push_back(h);
    } else {
      same->cos_coeff += h.cos_coeff;
      same->sin_coeff += h.sin_coeff;
    }
  }
  return TrigPoly(p.constant_ + q.constant_, std::move(terms));
}

Mat2 CoefficientMatrix::eval(std::span<const double> phases) const {
  return {a.eval(phases), b.eval(phases), c.eval(phases), d.eval(phases)};
}

SystemFamily::SystemFamily(CoefficientMatrix matrix, Frequencies freqs, double epsilon, double rho)
    : matrix_(std::move(matrix)), freqs_(std::move(freqs)), epsilon_(epsilon), rho_(rho) {
  if (!(rho_ > 0.0 && rho_ <= 1.0)) throw std::invalid_argument("system family: rho must lie in (0, 1]");
  if (!std::isfinite(epsilon_)) throw std::invalid_argument("system family: non-finite epsilon");
  for (const TrigPoly* p : {&matrix_.a, &matrix_.b, &matrix_.c, &matrix_.d}) {
    if (p->dimension() > freqs_.size()) {
      throw std::invalid_argument("system family: coefficient multi-index exceeds torus dimension");
    }
  }
}

SystemFamily SystemFamily::with_epsilon(double epsilon) const {
  return SystemFamily(matrix_, freqs_, epsilon, rho_);
}

Mat2 eval_matrix(const SystemFamily& fam, const TorusPoint& p) {
  if (p.dimension() != fam.dimension()) throw std::invalid_argument("eval_matrix: dimension mismatch");
  return fam.matrix().eval(p.phases()) + Mat2::scalar(fam.epsilon());
}

double eval_e(const SystemFamily& fam, const TorusPoint& p) {
  return 0.5 * eval_matrix(fam, p).trace();
}

Mat2 eval_tilde(const SystemFamily& fam, const TorusPoint& p) {
  const Mat2 m = eval_matrix(fam, p);
  const double e = 0.5 * m.trace();
  return {m.a - e, m.b, m.c, m.d - e};
}

OrbitCoefficients::OrbitCoefficients(const SystemFamily& fam, const TorusPoint& origin) {
  if (origin.dimension() != fam.dimension()) {
    throw std::invalid_argument("orbit coefficients: dimension mismatch");
  }
  const auto& m = fam.matrix();
  constant_ = {m.a.constant() + fam.epsilon(), m.b.constant(), m.c.constant(),
               m.d.constant() + fam.epsilon()};

  std::map<std::vector<int>, std::size_t> index;
  auto add = [&](const TrigPoly& poly, int entry) {
    for (const auto& h : poly.terms()) {
      std::vector<int> k = h.k;
      k.resize(fam.dimension(), 0);
      auto [it, inserted] = index.try_emplace(k, modes_.size());
      if (inserted) {
        modes_.push_back({reduce_angle(dot(k, origin.phases())),
                          dot(k, fam.frequencies().values()), Mat2{}, Mat2{}});
      }
      Mode& mode = modes_[it->second];
      double* cs[4] = {&mode.cos_part.a, &mode.cos_part.b, &mode.cos_part.c, &mode.cos_part.d};
      double* ss[4] = {&mode.sin_part.a, &mode.sin_part.b, &mode.sin_part.c, &mode.sin_part.d};
      *cs[entry] += h.cos_coeff;
      *ss[entry] += h.sin_coeff;
    }
  };
  add(m.a, 0);
  add(m.b, 1);
  add(m.c, 2);
  add(m.d, 3);
}

Mat2 OrbitCoefficients::at(double t) const {
  Mat2 out = constant_;
  for (const Mode& mode : modes_) {
    const double arg = mode.phase0 + mode.rate * t;
    const double cs = std::cos(arg);
    const double sn = std::sin(arg);
    out.a += cs * mode.cos_part.a + sn * mode.sin_part.a;
    out.b += cs * mode.cos_part.b + sn * mode.sin_part.b;
    out.c += cs * mode.cos_part.c + sn * mode.sin_part.c;
    out.d += cs * mode.cos_part.d + sn * mode.sin_part.d;
  }
  return out;
}

}  // namespace skewflow
