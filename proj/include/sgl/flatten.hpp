#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sgl/blocks.hpp"
#include "sgl/exp_analysis.hpp"
#include "sgl/spectra.hpp"

namespace sgl {

// (1/n) sum_{j<n} e^{2 pi i j q t}
ExpPolynomial dirichlet_poly(Index n, double q);
// Same kernel in closed form; exact 1 on (1/q)Z.
cplx dirichlet_value(Index n, double q, double t);

// q_j = lo + frac(sqrt(p_j)) (hi - lo), p_j the j-th prime.
std::vector<double> choose_steps(int m, double lo, double hi);

// Minimum distance among the nonzero multiples k*s (s in steps) inside
// (-1/eps, 1/eps), and from them to 0, capped at eps.
double separation_rho(std::span<const double> steps, double eps);

struct PropertyCAnchors {
  std::vector<double> steps;    // q_1..q_m
  std::vector<double> anchors;  // a_1..a_m
  Index length = 0;             // progressions a_j + k q_j, k = 1..N

  int m() const { return static_cast<int>(steps.size()); }
  void validate() const;
};

// P(t) = (1/m) sum_j e^{2 pi i s_j t} P_{n,q_j}(t): all coefficients 1/(mn).
class FlatteningKernel {
 public:
  FlatteningKernel() = default;
  FlatteningKernel(std::vector<double> steps, std::vector<double> starts, Index n);

  cplx operator()(double t) const;
  ExpPolynomial polynomial() const;
  // Sorted distinct frequencies (the set Gamma_P).
  std::vector<double> frequencies() const;
  double frequency_radius() const;

  int m() const { return static_cast<int>(steps_.size()); }
  Index n() const { return n_; }
  const std::vector<double>& steps() const { return steps_; }
  const std::vector<double>& starts() const { return starts_; }

 private:
  std::vector<double> steps_;
  std::vector<double> starts_;
  Index n_ = 0;
};

struct SupCertificate {
  double observed_max = 0.0;
  double slack = 0.0;
  double grid_step = 0.0;  // spacing actually used
  std::size_t points = 0;
  bool certified = false;
  // The scan stopped at the first value above bound - slack; observed_max is
  // then only a lower bound for the true grid max.
  bool stopped_early = false;
};

// max |P| over a grid of eps_lo <= |t| <= eps_hi; slack = step * pi * sum|c| * R,
// R the centered frequency radius. Only the positive half is scanned when all
// coefficients are real (|P(-t)| = |P(t)|).
SupCertificate certify_sup(const ExpPolynomial& p, double band_lo, double band_hi, double bound,
                           double grid_step);
SupCertificate certify_sup(const FlatteningKernel& p, double band_lo, double band_hi, double bound,
                           double grid_step, bool stop_early = false);

struct FlatteningCertificate {
  FlatteningKernel kernel;
  double eps = 0.0;
  double band_lo = 0.0;
  double band_hi = 0.0;
  double grid_step = 0.0;
  double observed_max = 0.0;
  double slack = 0.0;
  bool certified = false;
  double rho = 0.0;

  Index n() const { return kernel.n(); }
  int m() const { return kernel.m(); }
  ExpPolynomial polynomial() const { return kernel.polynomial(); }

  static std::string csv_header();  // eps,band_lo,band_hi,grid_step,observed_max,slack,certified,n,m
  std::string csv_row() const;
};

// Certifies |P| <= eps on eps < |t| < 1/eps. Never throws on a failed
// certificate; the flag carries the outcome.
FlatteningCertificate certify_kernel(const FlatteningKernel& kernel, double eps,
                                     bool stop_early = false);

// Smallest n <= min(n_budget, N) whose kernel certifies, by doubling then
// bisection. Frequencies a_j + k q_j, k = 1..n, all lie in gamma.
FlatteningCertificate flattening_poly(const FrequencySet& gamma, const PropertyCAnchors& anchors,
                                      double eps, Index n_budget);

// Phi(t) = (128/35) sin^8(pi t) on [0,1], rescaled to [offset, offset + width]:
// Phi_w(t) = Phi((t - offset)/width)/width, phi_w(x) = e^{2 pi i offset x} phi(width x),
// with phi(x) = int Phi(t) e^{2 pi i x t} dt.
struct WindowPair {
  double offset = 0.0;
  double width = 1.0;
  double peak = 128.0 / 35.0;     // M = max Phi_w
  double decay_constant = 0.0;    // sup_{|x| <= 200} (1 + x^4)|phi_w(x)| on a 0.01 grid

  double Phi(double t) const;
  cplx phi(double x) const;
  SpectrumSet support() const;
};

WindowPair window_pair(double offset = 0.0, double width = 1.0);

struct KernelAnalysis {
  double offdiag_max = 0.0;
  std::size_t worst_row = 0;
  std::optional<double> frame_bound;  // 1/(2M) when offdiag_max < 1/2
  bool kernel_certified = false;      // flag carried from the certificate
  cplx h_at_zero{};
  double separation = 0.0;
  // max (1 + x^2)|h(x)| over delta <= |x| <= 50 on a 1e-3 grid, and the
  // envelope sum it implies; diagnostics only.
  double envelope_constant = 0.0;
  double chain_bound = 0.0;
  SpectrumSet s_delta;  // Gamma_P + window support
};

// Row sums of |h(mu - lambda)|, h = P * phi_w. Pairs with |x| <= 1/eps use
// the exact value; beyond that |P| <= 1 and only |phi_w(x)| is charged.
KernelAnalysis analyze_kernel(const FlatteningCertificate& cert, const WindowPair& w,
                              const FrequencySet& lam);
// As analyze_kernel, but NoCertificate when offdiag_max >= 1/2.
KernelAnalysis interpolator_kernel(const FlatteningCertificate& cert, const WindowPair& w,
                                   const FrequencySet& lam);

inline constexpr double kInterpolationEigenFloor = 1e-8;

struct LeastNormInterpolant {
  FrequencySet lambda;
  SpectrumSet spectrum;
  Eigen::VectorXcd coefficients;  // b
  double min_eigenvalue = 0.0;
  double residual = 0.0;          // max_i |f(lambda_i) - c_i|

  // f(x) = sum_j b_j K_S(x - lambda_j), K_S(u) = int_S e^{2 pi i u t} dt
  cplx operator()(double x) const;
};

LeastNormInterpolant least_norm_interpolant(const FrequencySet& lam, const SpectrumSet& s,
                                            std::span<const cplx> data);

struct DecayProfile {
  std::string name;
  std::function<double(double)> d;  // d(0) = 1

  static DecayProfile exponential(double rate);  // e^{-rate |u|}
  static DecayProfile harmonic();                // 1 / (1 + |u|)
  static DecayProfile point_mass();              // 1 at 0, else 0
};

struct NeumannProblem {
  FrequencySet lambda;
  DecayProfile profile;
  std::vector<cplx> data;
};

// Off-diagonal row sums of |d(lambda_i - lambda_j)|.
std::vector<double> contraction_row_sums(const FrequencySet& lam, const DecayProfile& profile);

struct NeumannResult {
  std::vector<cplx> b;
  int iterations = 0;
  double residual = 0.0;          // max_i |f(lambda_i) - c_i|
  double contraction_norm = 0.0;
  std::vector<double> update_norms;  // sup-norm of b_{k+1} - b_k
  bool converged = false;
};

inline constexpr double kNeumannTolerance = 1e-12;
inline constexpr int kNeumannMaxIterations = 1000;

NeumannResult neumann_interpolate(const NeumannProblem& prob);

}  // namespace sgl
