#include "sgl/exp_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgl/error.hpp"
#include "sgl/format.hpp"
#include "sgl/parallel.hpp"
#include "sgl/trig.hpp"

namespace sgl {

FrequencySet::FrequencySet(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "non-finite frequency");
  }
  std::sort(values_.begin(), values_.end());
  separation_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < values_.size(); ++i) {
    const double gap = values_[i] - values_[i - 1];
    if (gap == 0.0) {
      throw Error(ErrorKind::InvalidArgument, "duplicate frequency " + format_real(values_[i]));
    }
    separation_ = std::min(separation_, gap);
  }
}

bool FrequencySet::contains(double x, double tol) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), x - tol);
  return it != values_.end() && *it <= x + tol;
}

ExpPolynomial::ExpPolynomial(std::vector<ExpTerm> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const ExpTerm& a, const ExpTerm& b) { return a.freq < b.freq; });
  for (const auto& t : terms) {
    if (!std::isfinite(t.freq)) throw Error(ErrorKind::InvalidArgument, "non-finite frequency");
    if (!terms_.empty() && terms_.back().freq == t.freq) {
      terms_.back().coef += t.coef;
    } else {
      terms_.push_back(t);
    }
  }
}

cplx ExpPolynomial::operator()(double t) const {
  cplx acc{};
  for (const auto& term : terms_) acc += term.coef * expi_2pi(term.freq * t);
  return acc;
}

double ExpPolynomial::coefficient_l1() const {
  double acc = 0.0;
  for (const auto& term : terms_) acc += std::abs(term.coef);
  return acc;
}

double ExpPolynomial::max_abs_frequency() const {
  double m = 0.0;
  for (const auto& term : terms_) m = std::max(m, std::abs(term.freq));
  return m;
}

double ExpPolynomial::frequency_radius() const {
  if (terms_.empty()) return 0.0;
  return 0.5 * (terms_.back().freq - terms_.front().freq);
}

cplx interval_integral(double theta, double lo, double hi) {
  const double length = hi - lo;
  const double mid = 0.5 * (lo + hi);
  // e^{2 pi i theta mid} * L * sin(pi theta L) / (pi theta L); the sinc
  // switches to its series for |theta L| < 1e-8.
  return expi_2pi(theta * mid) * (length * sinc_pi(theta * length));
}

cplx pair_integral(double theta, const SpectrumSet& s) {
  cplx acc{};
  for (const auto& iv : s.intervals()) acc += interval_integral(theta, iv.lo, iv.hi);
  return acc;
}

double GramMatrix::quadratic_form(std::span<const cplx> c) const {
  if (c.size() != static_cast<std::size_t>(entries.rows())) {
    throw Error(ErrorKind::InvalidArgument, "coefficient vector size mismatch");
  }
  cplx acc{};
  for (Eigen::Index j = 0; j < entries.rows(); ++j) {
    for (Eigen::Index k = 0; k < entries.cols(); ++k) {
      acc += c[j] * std::conj(c[k]) * entries(j, k);
    }
  }
  return acc.real();
}

GramMatrix gram(const FrequencySet& lam, const SpectrumSet& s) {
  if (lam.empty()) throw Error(ErrorKind::InvalidArgument, "gram needs at least one frequency");
  const auto n = static_cast<Eigen::Index>(lam.size());
  GramMatrix g{Eigen::MatrixXcd(n, n), lam, s};
  const double diag = s.measure();
  parallel_for(lam.size(), [&](std::size_t row) {
    const auto j = static_cast<Eigen::Index>(row);
    g.entries(j, j) = cplx(diag, 0.0);
    for (Eigen::Index k = 0; k < j; ++k) {
      g.entries(j, k) = pair_integral(lam[row] - lam[static_cast<std::size_t>(k)], s);
    }
  });
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) g.entries(j, k) = std::conj(g.entries(k, j));
  }
  return g;
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalFailure, "Hermitian eigen-solver did not converge");
  }
  return solver.eigenvalues();
}

std::string FrameReport::csv_header() { return "n,min_eig,claimed,certified"; }

std::string FrameReport::csv_row() const {
  return std::to_string(n) + "," + format_real(min_eigenvalue) + "," +
         (claimed_bound ? format_real(*claimed_bound) : std::string()) + "," +
         (certified ? "true" : "false");
}

FrameReport frame_report(const GramMatrix& g, std::optional<double> claimed_bound) {
  FrameReport report;
  report.n = g.frequencies.size();
  report.min_eigenvalue = hermitian_eigenvalues(g.entries)(0);
  report.claimed_bound = claimed_bound;
  report.certified =
      claimed_bound.has_value() && report.min_eigenvalue >= *claimed_bound - kCertifySlack;
  return report;
}

FrameReport frame_report(const FrequencySet& lam, const SpectrumSet& s,
                         std::optional<double> claimed_bound) {
  return frame_report(gram(lam, s), claimed_bound);
}

double l2_norm_squared(const ExpPolynomial& p, const SpectrumSet& s) {
  const auto& terms = p.terms();
  double acc = 0.0;
  for (std::size_t j = 0; j < terms.size(); ++j) {
    acc += std::norm(terms[j].coef) * s.measure();
    for (std::size_t k = 0; k < j; ++k) {
      const cplx cross = terms[j].coef * std::conj(terms[k].coef) *
                         pair_integral(terms[j].freq - terms[k].freq, s);
      acc += 2.0 * cross.real();
    }
  }
  return acc;
}

}  // namespace sgl
