// Runs the ten acceptance checks; one PASS/FAIL line each, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sgl/blocks.hpp"
#include "sgl/error.hpp"
#include "sgl/exp_analysis.hpp"
#include "sgl/flatten.hpp"
#include "sgl/periodization.hpp"
#include "sgl/random_spectra.hpp"
#include "sgl/spectra.hpp"
#include "oracles.hpp"

using namespace sgl;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  double budget_seconds;
  std::function<void(Outcome&)> run;
};

FrequencySet integers(Index lo, Index hi) {
  std::vector<double> pts;
  for (Index n = lo; n <= hi; ++n) pts.push_back(static_cast<double>(n));
  return FrequencySet(std::move(pts));
}

std::vector<std::pair<double, double>> pairs(const SpectrumSet& s) {
  std::vector<std::pair<double, double>> out;
  for (const auto& iv : s.intervals()) out.emplace_back(iv.lo, iv.hi);
  return out;
}

// Exact Gram of integer frequencies over a union of intervals, written out
// entry by entry.
Eigen::MatrixXcd integer_gram(Index n, const std::vector<std::pair<double, double>>& s) {
  Eigen::MatrixXcd g(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < n; ++k) {
      const double d = static_cast<double>(j - k);
      oracle::cplx sum = 0.0;
      for (const auto& [lo, hi] : s) {
        if (d == 0.0) {
          sum += hi - lo;
        } else {
          const oracle::cplx w(0.0, 2.0 * pi * d);
          sum += (std::exp(w * hi) - std::exp(w * lo)) / w;
        }
      }
      g(j, k) = sum;
    }
  }
  return g;
}

void criterion1(Outcome& o) {
  const auto s = normalize({{0.0, 1.0}});
  const auto g = gram(integers(0, 63), s);
  const double off = (g.entries - Eigen::MatrixXcd::Identity(64, 64)).cwiseAbs().maxCoeff();
  const auto rep = frame_report(integers(0, 63), s, 1.0);
  o.detail << "max|G-I|=" << off << " min_eig=" << rep.min_eigenvalue;
  o.require(off <= 1e-12, "Gram is identity");
  o.require(std::abs(rep.min_eigenvalue - 1.0) <= 1e-12, "min eigenvalue 1");
}

void criterion2(Outcome& o) {
  const auto s = normalize({{0.0, 0.3}, {1.0, 1.3}});
  const auto half = normalize({{0.0, 0.3}});
  double previous = 0.0;
  bool first = true;
  for (Index n : {4, 8, 16, 32, 64}) {
    const auto lam = integers(0, n - 1);
    const double diff =
        (gram(lam, s).entries - 2.0 * gram(lam, half).entries).cwiseAbs().maxCoeff();
    o.require(diff <= 1e-12, "doubling at N=" + std::to_string(n));
    const double e = frame_report(lam, s).min_eigenvalue;
    o.detail << " N=" << n << ":" << e;
    if (!first) o.require(e <= previous, "interlacing at N=" + std::to_string(n));
    previous = e;
    first = false;
    if (n == 32) {
      const double ref = oracle::hermitian_min_eigenvalue(integer_gram(32, pairs(s)));
      o.detail << " (oracle " << ref << ")";
      o.require(std::abs(e - ref) <= 1e-8, "oracle at N=32");
    }
  }
}

void criterion3(Outcome& o) {
  const auto a = normalize({{0.0, 0.6}});
  const int k_max = 6;
  BlockBuild best;
  int reached = 0;
  try {
    best = build_blocks(a, BlockSchedule::geometric(k_max), k_max, 1024);
    reached = k_max;
  } catch (const Error& e) {
    o.detail << e.what();
    if (e.value()) o.detail << " (best residual " << *e.value() << ")";
    o.require(false, "blocks built for every k <= 6");
    // Keep the blocks that did succeed and audit them.
    for (int k = k_max - 1; k >= 1 && reached == 0; --k) {
      try {
        best = build_blocks(a, BlockSchedule::geometric(k), k, 1024);
        reached = k;
      } catch (const Error&) {
      }
    }
  }
  o.detail << " blocks_ok=" << reached;
  double worst_gap = 0.0;
  for (const auto& row : best.table) {
    o.require(row.residual < row.eps_k, "residual below eps_k");
    const auto z = best.blocks[static_cast<std::size_t>(row.k - 1)].members();
    const std::vector<long> zl(z.begin(), z.end());
    worst_gap = std::max(worst_gap,
                         std::abs(row.residual - oracle::grid_least_squares(row.m, zl, pairs(a))));
  }
  o.detail << " rows=" << best.table.size() << " max|r-oracle|=" << worst_gap;
  o.require(worst_gap <= 1e-6, "grid oracle agreement");
}

cplx closed_inverse(const std::vector<Piece>& pieces, double x) {
  cplx sum = 0.0;
  for (const auto& p : pieces) {
    if (x == 0.0) {
      sum += p.value * (p.hi - p.lo);
    } else {
      const cplx w(0.0, 2.0 * pi * x);
      sum += p.value * (std::exp(w * p.hi) - std::exp(w * p.lo)) / w;
    }
  }
  return sum;
}

void criterion4(Outcome& o) {
  oracle::Gen gen(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Piece> pieces;
    for (const auto& [lo, hi] : gen.disjoint_intervals(4, -5.0, 5.0)) {
      pieces.push_back({lo, hi, gen.complex_unit()});
    }
    const PiecewiseConstantTransform f(pieces);
    for (double v : {0.0, 0.25, 0.7}) {
      for (Index n = -20; n <= 20; ++n) {
        const cplx c = periodized_coefficient(f, v, n);
        worst = std::max(worst, std::abs(c - closed_inverse(pieces, static_cast<double>(n) + v)));
      }
    }
  }
  o.detail << "max|c_n - f(n+v)|=" << worst;
  o.require(worst < 1e-8, "identity below 1e-8");
}

void criterion5(Outcome& o) {
  const auto fejer = DecayingSignal::fejer();
  for (Index n : {100, 1000, 10000}) {
    for (double x : {0.0, 0.3, 0.7}) {
      const auto s = poisson_gap_series(fejer, x, 0.0, n);
      o.require(std::abs(s.value - 1.0) <= s.tail_bound,
                "Fejer sum within bound at N=" + std::to_string(n));
    }
  }
  const auto tent = DecayingSignal::tent(0.0, 0.5);
  double first_scaled = 0.0;
  for (Index n : {100, 1000, 10000}) {
    const auto s = poisson_gap_series(tent, 0.4, 0.75, n);
    o.detail << " N=" << n << ":|sum|=" << std::abs(s.value) << " bound=" << s.tail_bound;
    o.require(s.within_budget && std::abs(s.value) <= s.tail_bound, "tent gap series within bound");
    const double scaled = s.tail_bound * static_cast<double>(n);
    if (first_scaled == 0.0) first_scaled = scaled;
    o.require(std::abs(scaled - first_scaled) <= 1e-9 * first_scaled, "bound scales as 1/N");
  }
}

void criterion6(Outcome& o) {
  const int m = 5;
  PropertyCAnchors anchors{choose_steps(m, 3.0, 4.0), std::vector<double>(m, 0.0), 4096};
  std::vector<double> pts;
  for (int j = 0; j < m; ++j) {
    for (Index k = 1; k <= anchors.length; ++k) pts.push_back(static_cast<double>(k) * anchors.steps[j]);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const auto cert = flattening_poly(FrequencySet(pts), anchors, 0.25, 4096);
  o.detail << "n=" << cert.n() << " observed=" << cert.observed_max << " slack=" << cert.slack;
  o.require(cert.certified, "certified");
  o.require(cert.observed_max + cert.slack <= 0.25, "observed + slack <= eps");
  o.require(cert.kernel(0.0) == cplx(1.0, 0.0), "P(0) = 1 exactly");

  // Audit: 100x finer grid over both halves of the band.
  const double step = cert.grid_step / 100.0;
  const auto& kern = cert.kernel;
  const double fine = std::max(
      oracle::kernel_grid_max(kern.steps(), kern.starts(), kern.n(), cert.band_lo, cert.band_hi, step),
      oracle::kernel_grid_max(kern.steps(), kern.starts(), kern.n(), -cert.band_hi, -cert.band_lo, step));
  const auto cells = static_cast<long>(std::ceil((cert.band_hi - cert.band_lo) / step));
  o.detail << " fine_max=" << fine << " (" << 2 * (cells + 1) << " points)";
  o.require(fine <= 0.25, "no violation on the finer grid");
  o.require(fine <= cert.observed_max + cert.slack, "slack covers the finer grid");
}

void criterion7(Outcome& o) {
  const int m = 7;
  const double eps = 0.18;
  PropertyCAnchors anchors{choose_steps(m, 3.0, 4.0), std::vector<double>(m, 0.0), 4096};
  std::vector<double> pts;
  for (int j = 0; j < m; ++j) {
    for (Index k = 1; k <= anchors.length; ++k) pts.push_back(static_cast<double>(k) * anchors.steps[j]);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const auto cert = flattening_poly(FrequencySet(pts), anchors, eps, 4096);
  o.require(cert.certified, "flattening certified at eps=0.18");
  const auto w = window_pair();
  const auto lam = integers(-100, 100);
  const auto k = analyze_kernel(cert, w, lam);
  const double target = 35.0 / 256.0;
  o.detail << "eps=" << eps << " n=" << cert.n() << " offdiag_max=" << k.offdiag_max;
  o.require(k.offdiag_max < 0.5, "offdiag_max < 1/2");
  o.require(k.frame_bound.has_value(), "frame bound emitted");
  const auto rep = frame_report(lam, k.s_delta, target);
  o.detail << " |S(delta)|=" << k.s_delta.measure() << " min_eig=" << rep.min_eigenvalue;
  o.require(rep.min_eigenvalue >= target - 1e-8, "min eigenvalue >= 1/(2M)");
}

void criterion8(Outcome& o) {
  struct Case {
    std::vector<std::pair<double, double>> s;
    double x0;
  };
  const std::vector<Case> cases = {
      {{{0.0, 2.0}}, 0.5}, {{{0.0, 2.0}}, 3.7}, {{{0.0, 1.5}}, -0.25}, {{{0.0, 0.8}, {1.0, 2.2}}, 0.4}};
  int checked = 0;
  for (const auto& c : cases) {
    auto pts = integers(-10, 10).to_vector();
    pts.push_back(c.x0);
    std::sort(pts.begin(), pts.end());
    const FrequencySet lam(pts);
    std::vector<cplx> data(pts.size(), 0.0);
    const auto at = static_cast<std::size_t>(std::find(pts.begin(), pts.end(), c.x0) - pts.begin());
    data[at] = 1.0;
    const auto f = least_norm_interpolant(lam, normalize(c.s), data);
    if (f.min_eigenvalue <= 1e-6) continue;
    ++checked;
    double off = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i != at) off = std::max(off, std::abs(f(pts[i])));
    }
    const double on = std::abs(f(c.x0) - 1.0);
    o.detail << " x0=" << c.x0 << ": min_eig=" << f.min_eigenvalue << " off=" << off << " on=" << on;
    o.require(off < 1e-9 && on < 1e-9, "witness at x0=" + std::to_string(c.x0));
  }
  o.require(checked > 0, "at least one well-conditioned case");
}

void criterion9(Outcome& o) {
  const auto lam = integers(-25, 25);
  const auto profile = DecayProfile::exponential(2.0);
  const auto rows = contraction_row_sums(lam, profile);
  const double expected = 2.0 * std::exp(-2.0) / (1.0 - std::exp(-2.0));
  const double center = rows[25];
  std::vector<cplx> data(lam.size(), 1.0);
  const auto r = neumann_interpolate({lam, profile, data});
  o.detail << "center_row=" << center << " norm=" << r.contraction_norm
           << " residual=" << r.residual << " iterations=" << r.iterations;
  o.require(std::abs(center - expected) <= 1e-12, "center row sum");
  o.require(std::abs(r.contraction_norm - expected) <= 1e-12, "contraction norm");
  o.require(r.converged && r.residual < 1e-10, "Neumann residual");

  // Geometric prediction from the spectral radius of T.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(51, 51);
  for (int i = 0; i < 51; ++i) {
    for (int j = 0; j < 51; ++j) {
      if (i != j) t(i, j) = std::exp(-2.0 * std::abs(i - j));
    }
  }
  const auto ev = oracle::jacobi_eigenvalues(t);
  const double rho = std::max(std::abs(ev.front()), std::abs(ev.back()));
  const double u1 = r.update_norms.front();
  const int predicted = 1 + static_cast<int>(std::ceil(std::log(kNeumannTolerance / u1) / std::log(rho)));
  o.detail << " rho=" << rho << " predicted=" << predicted;
  o.require(std::abs(r.iterations - predicted) <= 2, "iteration count within 2 of prediction");
}

void criterion10(Outcome& o) {
  const auto single = mc_hit_probability(3.5, 1, 2, 10000, 1);
  o.detail << "single=" << single.freq;
  o.require(std::abs(single.freq - 0.5) <= 0.02, "single-window frequency 0.5 +- 0.02");
  const auto few = mc_hit_probability(3.5, 2, 10, 10000, 2);
  const auto many = mc_hit_probability(3.5, 2, 200, 10000, 2);
  const double se = std::hypot(few.stderr_, many.stderr_);
  o.detail << " J=10:" << few.freq << " J=200:" << many.freq;
  o.require(many.freq - few.freq > 3.0 * se, "frequency grows with J beyond 3 standard errors");
  const auto p = random_pipeline(PipelineConfig{});
  o.detail << " pipeline: hits=" << p.spectrum.used.size() << " contained=" << p.spectrum.contained
           << " min_eig=" << p.frame.min_eigenvalue;
  o.require(p.spectrum.used.size() == 5, "hits for 5 steps");
  o.require(p.spectrum.contained, "S(delta) containment");
  o.require(p.positive && p.frame.certified, "positive frame certificate");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, 1.0, criterion1},   {2, 5.0, criterion2},   {3, 120.0, criterion3},
      {4, 30.0, criterion4},  {5, 10.0, criterion5},  {6, 60.0, criterion6},
      {7, 120.0, criterion7}, {8, 10.0, criterion8},  {9, 5.0, criterion9},
      {10, 300.0, criterion10}};
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(seconds < c.budget_seconds, "runtime budget");
    if (!o.pass) ++failures;
    std::printf("criterion %2d: %s (%.2f s, budget %.0f s) %s\n", c.id, o.pass ? "PASS" : "FAIL",
                seconds, c.budget_seconds, o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
