#pragma once

#include <string>
#include <vector>

#include "sgl/blocks.hpp"
#include "sgl/exp_analysis.hpp"
#include "sgl/spectra.hpp"
#include "sgl/uniqueness.hpp"

namespace sgl {

struct Piece {
  double lo = 0.0;
  double hi = 0.0;
  cplx value{};
};

// F = sum of value * 1_[lo,hi]; pieces pairwise disjoint (touching allowed).
class PiecewiseConstantTransform {
 public:
  PiecewiseConstantTransform() = default;
  explicit PiecewiseConstantTransform(std::vector<Piece> pieces);

  const std::vector<Piece>& pieces() const { return pieces_; }
  // Union of the pieces with nonzero value.
  SpectrumSet spectrum() const;
  cplx operator()(double t) const;
  PiecewiseConstantTransform scaled(cplx s) const;

 private:
  std::vector<Piece> pieces_;
};

// f(x) = int F(t) e^{2 pi i t x} dt
cplx inverse_transform_at(const PiecewiseConstantTransform& f, double x);

// c_n(H_v) = int_0^1 H_v(u) e^{2 pi i n u} du with H_v(u) = sum_k e^{2 pi i v (u+k)} F(u+k),
// computed cell by cell on [k, k+1].
cplx periodized_coefficient(const PiecewiseConstantTransform& f, double v, Index n);

struct PeriodizedCoefficients {
  std::vector<Index> n;
  std::vector<cplx> direct;   // c_n(H_v)
  std::vector<cplx> sampled;  // f(n + v)
  double max_abs_difference = 0.0;
};

PeriodizedCoefficients periodized_coefficients(const PiecewiseConstantTransform& f, double v,
                                               Index n_range);

// int (1 + |t|^{2 alpha}) |F(t)|^2 dt via the antiderivative of |t|^p, any real p.
double sobolev_norm_squared(const PiecewiseConstantTransform& f, double alpha);
double sobolev_norm(const PiecewiseConstantTransform& f, double alpha);

// int_0^1 |H_v|^2, exact (H_v is piecewise constant in modulus).
double periodized_l2(const PiecewiseConstantTransform& f, double v = 0.0);
// sum_{|n| <= N} |f(n + v)|^2
double parseval_partial_sum(const PiecewiseConstantTransform& f, double v, Index n_max);

enum class SignalKind { FejerSinc2, TentTransform, ExpPolynomialTimesWindow };

// Closed-form f with |f(x)| <= A / (1 + x^2). A is twice the sampled sup of
// (1 + x^2)|f| on [-1e3, 1e3].
class DecayingSignal {
 public:
  static DecayingSignal fejer();
  // Transform is the tent of height 1 on [lo, hi].
  static DecayingSignal tent(double lo, double hi);
  // P(x) * sinc^2(x); transform is sum_j c_j tent(t - freq_j) on [freq_j - 1, freq_j + 1].
  static DecayingSignal exp_polynomial_times_window(ExpPolynomial p);

  SignalKind kind() const { return kind_; }
  double decay_budget() const { return budget_; }
  cplx operator()(double x) const;
  cplx transform_at(double t) const;
  SpectrumSet spectrum() const;

 private:
  DecayingSignal(SignalKind kind, double lo, double hi, ExpPolynomial p);

  SignalKind kind_;
  double lo_ = -1.0;
  double hi_ = 1.0;
  ExpPolynomial poly_;
  double budget_ = 0.0;
};

inline constexpr double kDecayGridHalfWidth = 1e3;
inline constexpr double kDecayGridStep = 1e-2;

struct PoissonSeries {
  cplx value{};
  double tail_bound = 0.0;
  bool within_budget = false;  // |value| <= tail_bound
  bool inconclusive = false;   // tail_bound >= A: the bound says nothing
  Index n = 0;
};

// sum_{|n| <= N} f(x + n) e^{-2 pi i n t}, tail bound 2A/N (valid for |x| <= 1).
PoissonSeries poisson_gap_series(const DecayingSignal& f, double x, double t, Index n_max);

struct DiagnosticRow {
  int j = 0;
  double alpha = 0.0;
  std::size_t samples = 0;
  double max_abs_sample = 0.0;
  double residual_norm = 0.0;   // ||sum_n f(alpha_j + n) e^{-2 pi i n t}||_{L^2(A)}
  double identity_error = 0.0;  // max_n |c_n(H_j) - f(n + alpha_j)|
};

struct UniquenessDiagnostic {
  std::vector<DiagnosticRow> rows;
  double max_abs_on_lambda = 0.0;
  int parts = 0;
  Index window = 0;
  bool diagnostic = true;  // finite section, not a proof

  static std::string csv_header();  // j,alpha_j,max_abs_sample,residual_norm
  std::vector<std::string> csv_rows() const;
};

UniquenessDiagnostic uniqueness_diagnostic(const PiecewiseConstantTransform& model,
                                           const LambdaBuild& lam, const SpectrumSet& a);

}  // namespace sgl
