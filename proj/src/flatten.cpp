#include "sgl/flatten.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>

#include "sgl/error.hpp"
#include "sgl/format.hpp"
#include "sgl/parallel.hpp"
#include "sgl/trig.hpp"

namespace sgl {

ExpPolynomial dirichlet_poly(Index n, double q) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "Dirichlet kernel needs n >= 1");
  if (!(q >= 2.0) || !std::isfinite(q)) {
    throw Error(ErrorKind::InvalidArgument, "Dirichlet kernel needs q >= 2", q);
  }
  std::vector<ExpTerm> terms;
  terms.reserve(static_cast<std::size_t>(n));
  const double c = 1.0 / static_cast<double>(n);
  for (Index j = 0; j < n; ++j) terms.push_back({static_cast<double>(j) * q, {c, 0.0}});
  return ExpPolynomial(std::move(terms));
}

namespace {

// (1/n) sum_{j<n} e^{2 pi i j y} = e^{i pi (n-1) y} * ratio; the ratio
// sin(pi n y) / (n sin(pi y)) is taken at y reduced to [-1/2, 1/2].
cplx dirichlet_at(Index n, double y) {
  const double k = std::round(y);
  const double r = y - k;
  double ratio = 1.0;
  if (r != 0.0) {
    ratio = sin_pi(static_cast<double>(n) * r) / (static_cast<double>(n) * sin_pi(r));
  }
  // sin(pi n (r + k)) / sin(pi (r + k)) = (-1)^{k (n - 1)} sin(pi n r) / sin(pi r)
  if ((n - 1) % 2 != 0 && std::fmod(std::abs(k), 2.0) == 1.0) ratio = -ratio;
  return expi_2pi(0.5 * static_cast<double>(n - 1) * y) * ratio;
}

}  // namespace

cplx dirichlet_value(Index n, double q, double t) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "Dirichlet kernel needs n >= 1");
  return dirichlet_at(n, q * t);
}

std::vector<double> choose_steps(int m, double lo, double hi) {
  if (m < 1) throw Error(ErrorKind::InvalidArity, "need at least one step");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw Error(ErrorKind::InvalidArgument, "step range must satisfy lo < hi");
  }
  std::vector<double> out;
  for (long p = 2; out.size() < static_cast<std::size_t>(m); ++p) {
    bool prime = true;
    for (long d = 2; d * d <= p; ++d) {
      if (p % d == 0) {
        prime = false;
        break;
      }
    }
    if (!prime) continue;
    const double root = std::sqrt(static_cast<double>(p));
    out.push_back(lo + (root - std::floor(root)) * (hi - lo));
  }
  return out;
}

double separation_rho(std::span<const double> steps, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::InvalidArgument, "eps must lie in (0,1)", eps);
  const double reach = 1.0 / eps;
  std::vector<double> pts;
  for (double s : steps) {
    if (!(std::abs(s) > 0.0) || !std::isfinite(s)) {
      throw Error(ErrorKind::InvalidArgument, "steps must be nonzero and finite");
    }
    const double a = std::abs(s);
    for (double k = 1.0; k * a < reach; k += 1.0) {
      pts.push_back(k * a);
      pts.push_back(-k * a);
    }
  }
  double rho = eps;
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    rho = std::min(rho, std::abs(pts[i]));
    if (i == 0) continue;
    const double gap = pts[i] - pts[i - 1];
    if (gap < 1e-12) {
      throw Error(ErrorKind::StepsDependent,
                  "multiples of two steps coincide at " + format_real(pts[i]), pts[i]);
    }
    rho = std::min(rho, gap);
  }
  return rho;
}

void PropertyCAnchors::validate() const {
  if (steps.empty()) throw Error(ErrorKind::InvalidArity, "no steps given");
  if (steps.size() != anchors.size()) {
    throw Error(ErrorKind::InvalidArity, "steps and anchors differ in length");
  }
  if (length < 1) throw Error(ErrorKind::InvalidArgument, "progression length must be >= 1");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(steps[i] > 0.0) || !std::isfinite(steps[i]) || !std::isfinite(anchors[i])) {
      throw Error(ErrorKind::InvalidArgument, "steps must be positive, anchors finite");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (steps[i] == steps[j]) throw Error(ErrorKind::InvalidArgument, "steps must be distinct");
    }
  }
}

FlatteningKernel::FlatteningKernel(std::vector<double> steps, std::vector<double> starts, Index n)
    : steps_(std::move(steps)), starts_(std::move(starts)), n_(n) {
  if (steps_.empty() || steps_.size() != starts_.size()) {
    throw Error(ErrorKind::InvalidArity, "kernel needs one start per step");
  }
  if (n_ < 1) throw Error(ErrorKind::InvalidArgument, "kernel needs n >= 1");
}

cplx FlatteningKernel::operator()(double t) const {
  cplx acc{};
  for (std::size_t j = 0; j < steps_.size(); ++j) {
    acc += expi_2pi(starts_[j] * t) * dirichlet_at(n_, steps_[j] * t);
  }
  return acc / static_cast<double>(steps_.size());
}

ExpPolynomial FlatteningKernel::polynomial() const {
  std::vector<ExpTerm> terms;
  const double c = 1.0 / (static_cast<double>(n_) * static_cast<double>(steps_.size()));
  for (std::size_t j = 0; j < steps_.size(); ++j) {
    for (Index i = 0; i < n_; ++i) {
      terms.push_back({starts_[j] + static_cast<double>(i) * steps_[j], {c, 0.0}});
    }
  }
  return ExpPolynomial(std::move(terms));
}

std::vector<double> FlatteningKernel::frequencies() const {
  const ExpPolynomial p = polynomial();
  std::vector<double> out;
  for (const auto& t : p.terms()) out.push_back(t.freq);
  return out;
}

double FlatteningKernel::frequency_radius() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t j = 0; j < steps_.size(); ++j) {
    const double last = starts_[j] + static_cast<double>(n_ - 1) * steps_[j];
    lo = std::min({lo, starts_[j], last});
    hi = std::max({hi, starts_[j], last});
  }
  return 0.5 * (hi - lo);
}

namespace {

struct ScanResult {
  double max = 0.0;
  double step = 0.0;
  std::size_t points = 0;
  bool stopped = false;
};

// Max of |eval| on an even grid over each [lo, hi] with spacing <= step.
template <class Eval>
ScanResult scan_max(const Eval& eval, std::span<const Interval> pieces, double step,
                    double stop_above) {
  ScanResult out;
  out.step = step;
  constexpr std::size_t kChunk = 4096;
  std::atomic<bool> stop{false};
  for (const auto& iv : pieces) {
    const double length = iv.hi - iv.lo;
    const auto cells = static_cast<std::size_t>(std::max(1.0, std::ceil(length / step)));
    const double h = length / static_cast<double>(cells);
    out.step = std::min(out.step, h);
    const std::size_t count = cells + 1;
    const std::size_t chunks = (count + kChunk - 1) / kChunk;
    std::vector<double> partial(chunks, 0.0);
    parallel_for(chunks, [&](std::size_t c) {
      if (stop.load(std::memory_order_relaxed)) return;
      double local = 0.0;
      const std::size_t end = std::min(count, (c + 1) * kChunk);
      for (std::size_t i = c * kChunk; i < end; ++i) {
        const double t = i + 1 == count ? iv.hi : iv.lo + static_cast<double>(i) * h;
        local = std::max(local, std::abs(eval(t)));
        if (local > stop_above) {
          stop.store(true, std::memory_order_relaxed);
          break;
        }
      }
      partial[c] = local;
    });
    out.points += count;
    for (double v : partial) out.max = std::max(out.max, v);
  }
  out.stopped = stop.load();
  return out;
}

std::vector<Interval> band_pieces(double lo, double hi, bool positive_only) {
  if (!(lo >= 0.0) || !(hi > lo)) {
    throw Error(ErrorKind::InvalidArgument, "band must satisfy 0 <= lo < hi");
  }
  if (positive_only) return {{lo, hi}};
  return {{-hi, -lo}, {lo, hi}};
}

template <class Eval>
SupCertificate certify_core(const Eval& eval, double lo, double hi, double bound, double step,
                            double l1, double radius, bool real_coefficients, bool stop_early) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorKind::InvalidArgument, "grid step must be positive", step);
  }
  const auto pieces = band_pieces(lo, hi, real_coefficients);
  const double planned_slack = step * std::numbers::pi * l1 * radius;
  const double stop_above =
      stop_early ? bound - planned_slack : std::numeric_limits<double>::infinity();
  const auto scan = scan_max(eval, pieces, step, stop_above);
  SupCertificate cert;
  cert.observed_max = scan.max;
  cert.grid_step = scan.step;
  cert.points = scan.points;
  cert.slack = scan.step * std::numbers::pi * l1 * radius;
  cert.stopped_early = scan.stopped;
  cert.certified = !scan.stopped && cert.observed_max + cert.slack <= bound;
  return cert;
}

}  // namespace

SupCertificate certify_sup(const ExpPolynomial& p, double band_lo, double band_hi, double bound,
                           double grid_step) {
  const bool real = std::all_of(p.terms().begin(), p.terms().end(),
                                [](const ExpTerm& t) { return t.coef.imag() == 0.0; });
  return certify_core([&](double t) { return p(t); }, band_lo, band_hi, bound, grid_step,
                      p.coefficient_l1(), p.frequency_radius(), real, false);
}

SupCertificate certify_sup(const FlatteningKernel& p, double band_lo, double band_hi, double bound,
                           double grid_step, bool stop_early) {
  return certify_core(p, band_lo, band_hi, bound, grid_step, 1.0, p.frequency_radius(), true,
                      stop_early);
}

std::string FlatteningCertificate::csv_header() {
  return "eps,band_lo,band_hi,grid_step,observed_max,slack,certified,n,m";
}

std::string FlatteningCertificate::csv_row() const {
  return format_real(eps) + "," + format_real(band_lo) + "," + format_real(band_hi) + "," +
         format_real(grid_step) + "," + format_real(observed_max) + "," + format_real(slack) +
         "," + (certified ? "true" : "false") + "," + std::to_string(n()) + "," +
         std::to_string(m());
}

FlatteningCertificate certify_kernel(const FlatteningKernel& kernel, double eps, bool stop_early) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::InvalidArgument, "eps must lie in (0,1)", eps);
  FlatteningCertificate cert;
  cert.kernel = kernel;
  cert.eps = eps;
  cert.band_lo = eps;
  cert.band_hi = 1.0 / eps;
  // Near a peak of one Dirichlet factor |P| is about 1/m, so half of the
  // remaining margin eps - 1/m goes to the derivative slack.
  const double margin = eps - 1.0 / static_cast<double>(kernel.m());
  const double target_slack = margin > 0.0 ? 0.5 * margin : 0.5 * eps;
  const double radius = kernel.frequency_radius();
  double step = (cert.band_hi - cert.band_lo) / 1024.0;
  if (radius > 0.0) step = std::min(step, target_slack / (std::numbers::pi * radius));
  const auto sup = certify_sup(kernel, cert.band_lo, cert.band_hi, eps, step, stop_early);
  cert.grid_step = sup.grid_step;
  cert.observed_max = sup.observed_max;
  cert.slack = sup.slack;
  cert.certified = sup.certified;
  std::vector<double> periods;
  for (double q : kernel.steps()) periods.push_back(1.0 / q);
  cert.rho = separation_rho(periods, eps);
  return cert;
}

FlatteningCertificate flattening_poly(const FrequencySet& gamma, const PropertyCAnchors& anchors,
                                      double eps, Index n_budget) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::InvalidArgument, "eps must lie in (0,1)", eps);
  anchors.validate();
  if (n_budget < 1) throw Error(ErrorKind::InvalidArgument, "n_budget must be >= 1");
  const int m = anchors.m();
  if (!(static_cast<double>(m) > 1.0 / eps)) {
    throw Error(ErrorKind::HypothesisViolated,
                "need m > 1/eps, got m=" + std::to_string(m) + " eps=" + format_real(eps));
  }
  for (int j = 0; j < m; ++j) {
    for (Index k = 1; k <= anchors.length; ++k) {
      const double x = anchors.anchors[static_cast<std::size_t>(j)] +
                       static_cast<double>(k) * anchors.steps[static_cast<std::size_t>(j)];
      if (!gamma.contains(x, 1e-9)) {
        throw Error(ErrorKind::HypothesisViolated,
                    "progression point " + format_real(x) + " not in gamma", x);
      }
    }
  }

  std::vector<double> starts;
  for (int j = 0; j < m; ++j) {
    starts.push_back(anchors.anchors[static_cast<std::size_t>(j)] +
                     anchors.steps[static_cast<std::size_t>(j)]);
  }
  const Index n_max = std::min(n_budget, anchors.length);
  auto attempt = [&](Index n) {
    return certify_kernel(FlatteningKernel(anchors.steps, starts, n), eps, true);
  };

  Index last_fail = 0;
  std::optional<FlatteningCertificate> best;
  double worst_seen = 0.0;
  for (Index n = 1;; n *= 2) {
    const Index candidate = std::min(n, n_max);
    if (candidate <= last_fail) break;
    auto cert = attempt(candidate);
    if (cert.certified) {
      best = std::move(cert);
      break;
    }
    worst_seen = cert.observed_max;
    last_fail = candidate;
    if (candidate == n_max) break;
  }
  if (!best) {
    throw Error(ErrorKind::BudgetExceeded,
                "no certificate for n <= " + std::to_string(n_max) + " (|P| reached " +
                    format_real(worst_seen) + ")",
                worst_seen);
  }
  while (best->n() - last_fail > 1) {
    const Index mid = last_fail + (best->n() - last_fail) / 2;
    auto cert = attempt(mid);
    if (cert.certified) {
      best = std::move(cert);
    } else {
      last_fail = mid;
    }
  }
  return *best;
}

double WindowPair::Phi(double t) const {
  const double u = (t - offset) / width;
  if (!(u >= 0.0 && u <= 1.0)) return 0.0;
  const double s2 = sin_pi(u) * sin_pi(u);
  const double s8 = (s2 * s2) * (s2 * s2);
  return (128.0 / 35.0) * s8 / width;
}

cplx WindowPair::phi(double x) const {
  // sin^8(pi t) = 2^{-8} sum_{k=-4}^{4} C(8, 4+k) (-1)^k e^{2 pi i k t}; with the
  // 128/35 normalization the weights become C(8, 4+k) (-1)^k / 70.
  static constexpr double kBinom[9] = {1, 8, 28, 56, 70, 56, 28, 8, 1};
  const double y = width * x;
  cplx acc{};
  for (int k = -4; k <= 4; ++k) {
    const double w = (k % 2 == 0 ? 1.0 : -1.0) * kBinom[k + 4];
    acc += w * interval_integral(static_cast<double>(k) + y, 0.0, 1.0);
  }
  return expi_2pi(offset * x) * (acc / 70.0);
}

SpectrumSet WindowPair::support() const { return normalize({{offset, offset + width}}); }

WindowPair window_pair(double offset, double width) {
  if (!std::isfinite(offset) || !std::isfinite(width) || !(width > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "window needs finite offset and positive width");
  }
  WindowPair w;
  w.offset = offset;
  w.width = width;
  w.peak = (128.0 / 35.0) / width;
  for (int i = -20000; i <= 20000; ++i) {
    const double x = 0.01 * i;
    const double x2 = x * x;
    w.decay_constant = std::max(w.decay_constant, (1.0 + x2 * x2) * std::abs(w.phi(x)));
  }
  return w;
}

KernelAnalysis analyze_kernel(const FlatteningCertificate& cert, const WindowPair& w,
                              const FrequencySet& lam) {
  if (lam.empty()) throw Error(ErrorKind::InvalidArgument, "empty point set");
  const auto& kernel = cert.kernel;
  const double reach = 1.0 / cert.eps;
  auto h_abs = [&](double x) {
    const double window = std::abs(w.phi(x));
    return std::abs(x) <= reach ? std::abs(kernel(x)) * window : window;
  };

  KernelAnalysis out;
  out.kernel_certified = cert.certified;
  out.separation = lam.separation();
  out.h_at_zero = kernel(0.0) * w.phi(0.0);

  std::vector<double> rows(lam.size(), 0.0);
  parallel_for(lam.size(), [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < lam.size(); ++j) {
      if (j != i) acc += h_abs(lam[j] - lam[i]);
    }
    rows[i] = acc;
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] > out.offdiag_max) {
      out.offdiag_max = rows[i];
      out.worst_row = i;
    }
  }
  if (out.offdiag_max < 0.5) out.frame_bound = 1.0 / (2.0 * w.peak);

  const double delta = out.separation;
  if (std::isfinite(delta) && delta < 50.0) {
    const auto steps = static_cast<Index>(std::ceil((50.0 - delta) / 1e-3));
    for (Index i = 0; i <= steps; ++i) {
      const double x = delta + 1e-3 * static_cast<double>(i);
      out.envelope_constant =
          std::max(out.envelope_constant, (1.0 + x * x) * std::abs(kernel(x) * w.phi(x)));
    }
    const double a = std::numbers::pi / delta;
    out.chain_bound = out.envelope_constant * (a / std::tanh(a) - 1.0);
  }

  std::vector<std::pair<double, double>> raw;
  for (double g : kernel.frequencies()) raw.emplace_back(g + w.offset, g + w.offset + w.width);
  out.s_delta = normalize(raw);
  return out;
}

KernelAnalysis interpolator_kernel(const FlatteningCertificate& cert, const WindowPair& w,
                                   const FrequencySet& lam) {
  auto out = analyze_kernel(cert, w, lam);
  if (!out.frame_bound) {
    throw Error(ErrorKind::NoCertificate,
                "off-diagonal row sum " + format_real(out.offdiag_max) + " is not below 1/2",
                out.offdiag_max);
  }
  return out;
}

cplx LeastNormInterpolant::operator()(double x) const {
  cplx acc{};
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    acc += coefficients(static_cast<Eigen::Index>(j)) * pair_integral(x - lambda[j], spectrum);
  }
  return acc;
}

LeastNormInterpolant least_norm_interpolant(const FrequencySet& lam, const SpectrumSet& s,
                                            std::span<const cplx> data) {
  if (data.size() != lam.size()) {
    throw Error(ErrorKind::InvalidArgument, "one data value per point required");
  }
  const GramMatrix g = gram(lam, s);
  LeastNormInterpolant out;
  out.lambda = lam;
  out.spectrum = s;
  out.min_eigenvalue = hermitian_eigenvalues(g.entries)(0);
  if (!(out.min_eigenvalue > kInterpolationEigenFloor)) {
    throw Error(ErrorKind::NonInterpolating,
                "Gram min eigenvalue " + format_real(out.min_eigenvalue) + " at or below 1e-8",
                out.min_eigenvalue);
  }
  const Eigen::Map<const Eigen::VectorXcd> c(data.data(), static_cast<Eigen::Index>(data.size()));
  const Eigen::LLT<Eigen::MatrixXcd> llt(g.entries);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NonInterpolating, "Cholesky factorization of the Gram failed");
  }
  Eigen::VectorXcd b = llt.solve(c);
  b += llt.solve((c - g.entries * b).eval());  // one refinement step
  out.coefficients = std::move(b);
  for (std::size_t i = 0; i < lam.size(); ++i) {
    out.residual = std::max(out.residual, std::abs(out(lam[i]) - data[i]));
  }
  return out;
}

DecayProfile DecayProfile::exponential(double rate) {
  if (!(rate > 0.0)) throw Error(ErrorKind::InvalidArgument, "decay rate must be positive", rate);
  return {"exp", [rate](double u) { return std::exp(-rate * std::abs(u)); }};
}

DecayProfile DecayProfile::harmonic() {
  return {"harmonic", [](double u) { return 1.0 / (1.0 + std::abs(u)); }};
}

DecayProfile DecayProfile::point_mass() {
  return {"point", [](double u) { return u == 0.0 ? 1.0 : 0.0; }};
}

std::vector<double> contraction_row_sums(const FrequencySet& lam, const DecayProfile& profile) {
  std::vector<double> rows(lam.size(), 0.0);
  parallel_for(lam.size(), [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < lam.size(); ++j) {
      if (j != i) acc += std::abs(profile.d(lam[i] - lam[j]));
    }
    rows[i] = acc;
  });
  return rows;
}

NeumannResult neumann_interpolate(const NeumannProblem& prob) {
  const auto n = static_cast<Eigen::Index>(prob.lambda.size());
  if (prob.data.size() != prob.lambda.size()) {
    throw Error(ErrorKind::InvalidArgument, "one data value per point required");
  }
  if (!prob.profile.d) throw Error(ErrorKind::InvalidArgument, "missing decay profile");
  NeumannResult out;
  const auto rows = contraction_row_sums(prob.lambda, prob.profile);
  out.contraction_norm = rows.empty() ? 0.0 : *std::max_element(rows.begin(), rows.end());
  if (!(out.contraction_norm < 1.0)) {
    throw Error(ErrorKind::NotContraction,
                "row-sum norm " + format_real(out.contraction_norm) + " is not below 1",
                out.contraction_norm);
  }

  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) {
        t(i, j) = prob.profile.d(prob.lambda[static_cast<std::size_t>(i)] -
                                 prob.lambda[static_cast<std::size_t>(j)]);
      }
    }
  }
  const Eigen::Map<const Eigen::VectorXcd> c(prob.data.data(), n);
  Eigen::VectorXcd b = c;
  for (int it = 1; it <= kNeumannMaxIterations; ++it) {
    Eigen::VectorXcd next = c - t * b;
    const double update = n == 0 ? 0.0 : (next - b).cwiseAbs().maxCoeff();
    b = std::move(next);
    out.update_norms.push_back(update);
    out.iterations = it;
    if (update < kNeumannTolerance) {
      out.converged = true;
      break;
    }
  }
  const Eigen::VectorXcd fitted = b + t * b;
  out.residual = n == 0 ? 0.0 : (fitted - c).cwiseAbs().maxCoeff();
  out.b.assign(b.data(), b.data() + n);
  return out;
}

}  // namespace sgl
