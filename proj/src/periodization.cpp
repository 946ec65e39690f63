#include "sgl/periodization.hpp"

#include <algorithm>
#include <cmath>

#include "sgl/error.hpp"
#include "sgl/format.hpp"
#include "sgl/parallel.hpp"
#include "sgl/trig.hpp"

namespace sgl {

PiecewiseConstantTransform::PiecewiseConstantTransform(std::vector<Piece> pieces)
    : pieces_(std::move(pieces)) {
  for (const auto& p : pieces_) {
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || !(p.lo < p.hi)) {
      throw Error(ErrorKind::InvalidInterval,
                  "bad piece [" + format_real(p.lo) + "," + format_real(p.hi) + "]");
    }
    if (!std::isfinite(p.value.real()) || !std::isfinite(p.value.imag())) {
      throw Error(ErrorKind::InvalidArgument, "non-finite piece value");
    }
  }
  std::sort(pieces_.begin(), pieces_.end(),
            [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    if (pieces_[i].lo < pieces_[i - 1].hi - kEndpointTolerance) {
      throw Error(ErrorKind::InvalidInterval, "pieces overlap near " + format_real(pieces_[i].lo));
    }
  }
}

SpectrumSet PiecewiseConstantTransform::spectrum() const {
  std::vector<std::pair<double, double>> raw;
  for (const auto& p : pieces_) {
    if (p.value != cplx{}) raw.emplace_back(p.lo, p.hi);
  }
  return normalize(raw);
}

cplx PiecewiseConstantTransform::operator()(double t) const {
  cplx acc{};
  for (const auto& p : pieces_) {
    if (p.lo <= t && t <= p.hi) acc += p.value;
  }
  return acc;
}

PiecewiseConstantTransform PiecewiseConstantTransform::scaled(cplx s) const {
  auto copy = pieces_;
  for (auto& p : copy) p.value *= s;
  return PiecewiseConstantTransform(std::move(copy));
}

cplx inverse_transform_at(const PiecewiseConstantTransform& f, double x) {
  cplx acc{};
  for (const auto& p : f.pieces()) acc += p.value * interval_integral(x, p.lo, p.hi);
  return acc;
}

cplx periodized_coefficient(const PiecewiseConstantTransform& f, double v, Index n) {
  const double theta = v + static_cast<double>(n);
  cplx acc{};
  for (const auto& p : f.pieces()) {
    const auto k_lo = static_cast<Index>(std::floor(p.lo));
    const auto k_hi = static_cast<Index>(std::ceil(p.hi));
    for (Index k = k_lo; k < k_hi; ++k) {
      const double kd = static_cast<double>(k);
      const double a = std::max(p.lo, kd) - kd;
      const double b = std::min(p.hi, kd + 1.0) - kd;
      if (!(b > a)) continue;
      acc += p.value * expi_2pi(v * kd) * interval_integral(theta, a, b);
    }
  }
  return acc;
}

PeriodizedCoefficients periodized_coefficients(const PiecewiseConstantTransform& f, double v,
                                               Index n_range) {
  if (n_range < 0) throw Error(ErrorKind::InvalidArgument, "n_range must be non-negative");
  PeriodizedCoefficients out;
  const auto count = static_cast<std::size_t>(2 * n_range + 1);
  out.n.resize(count);
  out.direct.resize(count);
  out.sampled.resize(count);
  parallel_for(count, [&](std::size_t i) {
    const Index n = static_cast<Index>(i) - n_range;
    out.n[i] = n;
    out.direct[i] = periodized_coefficient(f, v, n);
    out.sampled[i] = inverse_transform_at(f, static_cast<double>(n) + v);
  });
  for (std::size_t i = 0; i < count; ++i) {
    out.max_abs_difference = std::max(out.max_abs_difference, std::abs(out.direct[i] - out.sampled[i]));
  }
  return out;
}

namespace {

// int_lo^hi |t|^p dt
double abs_power_integral(double lo, double hi, double p) {
  auto antiderivative = [p](double t) {
    const double m = std::pow(std::abs(t), p + 1.0) / (p + 1.0);
    return t < 0.0 ? -m : m;
  };
  return antiderivative(hi) - antiderivative(lo);
}

}  // namespace

double sobolev_norm_squared(const PiecewiseConstantTransform& f, double alpha) {
  if (!(alpha > 0.5)) {
    throw Error(ErrorKind::OutOfRange, "Sobolev exponent must exceed 1/2", alpha);
  }
  double acc = 0.0;
  for (const auto& p : f.pieces()) {
    acc += std::norm(p.value) * ((p.hi - p.lo) + abs_power_integral(p.lo, p.hi, 2.0 * alpha));
  }
  return acc;
}

double sobolev_norm(const PiecewiseConstantTransform& f, double alpha) {
  return std::sqrt(sobolev_norm_squared(f, alpha));
}

double periodized_l2(const PiecewiseConstantTransform& f, double v) {
  std::vector<double> cuts{0.0, 1.0};
  for (const auto& p : f.pieces()) {
    for (double e : {p.lo, p.hi}) cuts.push_back(e - std::floor(e));
  }
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double width = cuts[i] - cuts[i - 1];
    if (!(width > 0.0)) continue;
    const double u = 0.5 * (cuts[i] + cuts[i - 1]);
    cplx h{};
    for (const auto& p : f.pieces()) {
      const auto k_lo = static_cast<Index>(std::ceil(p.lo - u));
      const auto k_hi = static_cast<Index>(std::floor(p.hi - u));
      for (Index k = k_lo; k <= k_hi; ++k) h += expi_2pi(v * static_cast<double>(k)) * p.value;
    }
    acc += std::norm(h) * width;
  }
  return acc;
}

double parseval_partial_sum(const PiecewiseConstantTransform& f, double v, Index n_max) {
  double acc = 0.0;
  for (Index n = -n_max; n <= n_max; ++n) {
    acc += std::norm(inverse_transform_at(f, static_cast<double>(n) + v));
  }
  return acc;
}

DecayingSignal::DecayingSignal(SignalKind kind, double lo, double hi, ExpPolynomial p)
    : kind_(kind), lo_(lo), hi_(hi), poly_(std::move(p)) {
  double sup = 0.0;
  const auto steps = static_cast<Index>(std::llround(2.0 * kDecayGridHalfWidth / kDecayGridStep));
  for (Index i = 0; i <= steps; ++i) {
    const double x = -kDecayGridHalfWidth + static_cast<double>(i) * kDecayGridStep;
    sup = std::max(sup, (1.0 + x * x) * std::abs((*this)(x)));
  }
  budget_ = 2.0 * sup;
}

DecayingSignal DecayingSignal::fejer() { return {SignalKind::FejerSinc2, -1.0, 1.0, {}}; }

DecayingSignal DecayingSignal::tent(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw Error(ErrorKind::InvalidInterval, "tent needs lo < hi");
  }
  return {SignalKind::TentTransform, lo, hi, {}};
}

DecayingSignal DecayingSignal::exp_polynomial_times_window(ExpPolynomial p) {
  if (p.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty exponential polynomial");
  return {SignalKind::ExpPolynomialTimesWindow, -1.0, 1.0, std::move(p)};
}

cplx DecayingSignal::operator()(double x) const {
  if (kind_ == SignalKind::ExpPolynomialTimesWindow) {
    const double s = sinc_pi(x);
    return poly_(x) * (s * s);
  }
  const double c = 0.5 * (lo_ + hi_);
  const double h = 0.5 * (hi_ - lo_);
  const double s = sinc_pi(h * x);
  return expi_2pi(c * x) * (h * s * s);
}

cplx DecayingSignal::transform_at(double t) const {
  if (kind_ == SignalKind::ExpPolynomialTimesWindow) {
    cplx acc{};
    for (const auto& term : poly_.terms()) {
      acc += term.coef * std::max(0.0, 1.0 - std::abs(t - term.freq));
    }
    return acc;
  }
  const double c = 0.5 * (lo_ + hi_);
  const double h = 0.5 * (hi_ - lo_);
  return {std::max(0.0, 1.0 - std::abs(t - c) / h), 0.0};
}

SpectrumSet DecayingSignal::spectrum() const {
  if (kind_ == SignalKind::ExpPolynomialTimesWindow) {
    std::vector<std::pair<double, double>> raw;
    for (const auto& term : poly_.terms()) raw.emplace_back(term.freq - 1.0, term.freq + 1.0);
    return normalize(raw);
  }
  return normalize({{lo_, hi_}});
}

PoissonSeries poisson_gap_series(const DecayingSignal& f, double x, double t, Index n_max) {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "N must be at least 1");
  if (!(std::abs(x) <= 1.0)) throw Error(ErrorKind::OutOfRange, "tail bound needs |x| <= 1", x);
  PoissonSeries out;
  out.n = n_max;
  for (Index n = -n_max; n <= n_max; ++n) {
    const double nd = static_cast<double>(n);
    out.value += f(x + nd) * expi_2pi(-nd * t);
  }
  out.tail_bound = 2.0 * f.decay_budget() / static_cast<double>(n_max);
  out.within_budget = std::abs(out.value) <= out.tail_bound;
  out.inconclusive = out.tail_bound >= f.decay_budget();
  return out;
}

std::string UniquenessDiagnostic::csv_header() { return "j,alpha_j,max_abs_sample,residual_norm"; }

std::vector<std::string> UniquenessDiagnostic::csv_rows() const {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    out.push_back(std::to_string(r.j) + "," + format_real(r.alpha) + "," +
                  format_real(r.max_abs_sample) + "," + format_real(r.residual_norm));
  }
  return out;
}

UniquenessDiagnostic uniqueness_diagnostic(const PiecewiseConstantTransform& model,
                                           const LambdaBuild& lam, const SpectrumSet& a) {
  const SpectrumSet support = model.spectrum();
  if (!support.empty() && !a.contains(project(support, 1.0))) {
    throw Error(ErrorKind::SpectrumMismatch,
                "model spectrum projects to " + format_spectrum_literal(project(support, 1.0)) +
                    ", not inside " + format_spectrum_literal(a));
  }
  UniquenessDiagnostic out;
  out.parts = lam.parts;
  out.window = lam.window;
  out.rows.resize(static_cast<std::size_t>(lam.parts));
  parallel_for(out.rows.size(), [&](std::size_t idx) {
    DiagnosticRow& row = out.rows[idx];
    row.j = static_cast<int>(idx) + 1;
    row.alpha = lam.alphas[idx];
    std::vector<ExpTerm> terms;
    for (std::size_t i = 0; i < lam.lambda.size(); ++i) {
      if (lam.origin[i] != row.j) continue;
      const auto n = static_cast<Index>(std::llround(lam.lambda[i] - row.alpha));
      const cplx sample = inverse_transform_at(model, lam.lambda[i]);
      const cplx coefficient = periodized_coefficient(model, row.alpha, n);
      row.max_abs_sample = std::max(row.max_abs_sample, std::abs(sample));
      row.identity_error = std::max(row.identity_error, std::abs(coefficient - sample));
      terms.push_back({-static_cast<double>(n), sample});
      ++row.samples;
    }
    // H_j restricted to the finite section: sum_n c_n e^{-2 pi i n t}.
    const double energy = terms.empty() ? 0.0 : l2_norm_squared(ExpPolynomial(std::move(terms)), a);
    row.residual_norm = std::sqrt(std::max(0.0, energy));
  });
  for (const auto& r : out.rows) out.max_abs_on_lambda = std::max(out.max_abs_on_lambda, r.max_abs_sample);
  return out;
}

}  // namespace sgl
