#include "sgl/random_spectra.hpp"

#include <algorithm>
#include <cmath>

#include "sgl/error.hpp"
#include "sgl/format.hpp"
#include "sgl/parallel.hpp"
#include "sgl/rng.hpp"

namespace sgl {

RandomGammaSample sample_gamma_with(Index count, const std::function<double()>& gap_source) {
  if (count < 2) throw Error(ErrorKind::InvalidArgument, "need J >= 2 points");
  std::vector<double> gamma(static_cast<std::size_t>(count));
  gamma[0] = 0.0;
  for (std::size_t j = 1; j < gamma.size(); ++j) gamma[j] = gamma[j - 1] + 1.0 + gap_source();
  RandomGammaSample out;
  out.gamma = GammaRepresentation::from_gamma(std::move(gamma), 1.0);
  return out;
}

RandomGammaSample sample_gamma(std::uint64_t seed, Index count, std::uint64_t stream) {
  Rng rng(seed, stream);
  auto out = sample_gamma_with(count, [&rng] { return rng.uniform(2.0, 3.0); });
  out.seed = seed;
  out.stream = stream;
  return out;
}

namespace {

void check_progression_args(double q, Index n) {
  if (!(q > 3.0 && q < 4.0)) throw Error(ErrorKind::OutOfRange, "step q must lie in (3,4)", q);
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "progression length must be >= 1");
}

// Max deviation over j = 1..N, or a value >= tol as soon as one is found.
double deviation_at(const std::vector<double>& g, std::size_t k, double q, Index n, double tol) {
  double worst = 0.0;
  for (Index j = 1; j <= n; ++j) {
    const double d =
        std::abs(g[k + static_cast<std::size_t>(j)] - (g[k] + static_cast<double>(j) * q));
    worst = std::max(worst, d);
    if (!(worst < tol)) break;
  }
  return worst;
}

}  // namespace

std::vector<ProgressionHit> find_progressions(const RandomGammaSample& g, double q, Index n,
                                              double tol) {
  check_progression_args(q, n);
  std::vector<ProgressionHit> hits;
  const auto& pts = g.gamma.gamma;
  const auto len = static_cast<std::size_t>(n);
  for (std::size_t k = 0; k + len < pts.size(); ++k) {
    const double dev = deviation_at(pts, k, q, n, tol);
    if (dev < tol) hits.push_back({static_cast<Index>(k), q, n, dev});
  }
  return hits;
}

std::string MonteCarloReport::csv_header() { return "q,N,J,trials,freq,stderr,seed"; }

std::string MonteCarloReport::csv_row() const {
  return format_real(q) + "," + std::to_string(n) + "," + std::to_string(count) + "," +
         std::to_string(trials) + "," + format_real(freq) + "," + format_real(stderr_) + "," +
         std::to_string(seed);
}

MonteCarloReport mc_hit_probability(double q, Index n, Index count, Index trials,
                                    std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::InvalidTrials, "trials must be at least 1");
  check_progression_args(q, n);
  if (count < n + 1) throw Error(ErrorKind::InvalidArgument, "J must exceed N");
  std::vector<unsigned char> hit(static_cast<std::size_t>(trials), 0);
  parallel_for(hit.size(), [&](std::size_t t) {
    const auto sample = sample_gamma(seed, count, t);
    const auto& pts = sample.gamma.gamma;
    for (std::size_t k = 0; k + static_cast<std::size_t>(n) < pts.size(); ++k) {
      if (deviation_at(pts, k, q, n, kProgressionTolerance) < kProgressionTolerance) {
        hit[t] = 1;
        break;
      }
    }
  });
  MonteCarloReport out;
  out.q = q;
  out.n = n;
  out.count = count;
  out.trials = trials;
  out.seed = seed;
  const auto hits = std::count(hit.begin(), hit.end(), 1);
  out.freq = static_cast<double>(hits) / static_cast<double>(trials);
  out.stderr_ = std::sqrt(out.freq * (1.0 - out.freq) / static_cast<double>(trials));
  return out;
}

InterpolationSpectrum build_interpolation_spectrum(const RandomGammaSample& g,
                                                   const std::vector<ProgressionHit>& hits,
                                                   int m) {
  if (m < 1) throw Error(ErrorKind::InvalidArity, "need m >= 1 steps");
  InterpolationSpectrum out;
  for (const auto& h : hits) {
    auto same_q = [&](const ProgressionHit& u) { return u.q == h.q; };
    auto it = std::find_if(out.used.begin(), out.used.end(), same_q);
    if (it == out.used.end()) {
      if (out.used.size() < static_cast<std::size_t>(m)) out.used.push_back(h);
    } else if (h.k < it->k) {
      *it = h;
    }
  }
  if (out.used.size() < static_cast<std::size_t>(m)) {
    throw Error(ErrorKind::InsufficientHits,
                "hits for " + std::to_string(out.used.size()) + " distinct steps, need " +
                    std::to_string(m),
                static_cast<double>(out.used.size()));
  }

  const auto& pts = g.gamma.gamma;
  std::vector<double> ideal;
  for (const auto& h : out.used) {
    if (h.k < 0 || static_cast<std::size_t>(h.k + h.n) >= pts.size()) {
      throw Error(ErrorKind::OutOfRange, "hit index outside the sample");
    }
    const double start = pts[static_cast<std::size_t>(h.k)];
    for (Index i = 0; i <= h.n; ++i) ideal.push_back(start + static_cast<double>(i) * h.q);
  }
  std::sort(ideal.begin(), ideal.end());
  ideal.erase(std::unique(ideal.begin(), ideal.end()), ideal.end());

  std::vector<std::pair<double, double>> raw;
  for (double x : ideal) raw.emplace_back(x + 0.25, x + 0.75);
  out.gamma_star = FrequencySet(std::move(ideal));
  out.s_delta = normalize(raw);
  out.contained = g.gamma.spectrum().contains(out.s_delta);
  if (!out.contained) {
    throw Error(ErrorKind::ContainmentViolation,
                "S(delta) leaves Gamma + [0,1]; a hit deviation is out of bounds");
  }
  return out;
}

PipelineResult random_pipeline(const PipelineConfig& cfg) {
  if (!(cfg.delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta must be positive");
  if (cfg.lambda_points < 1) throw Error(ErrorKind::InvalidArgument, "need Lambda points");
  PipelineResult out;
  out.sample = sample_gamma(cfg.seed, cfg.count, 0);
  out.steps = choose_steps(cfg.m, cfg.step_lo, cfg.step_hi);

  std::vector<ProgressionHit> hits;
  for (double q : out.steps) {
    auto found = find_progressions(out.sample, q, cfg.length);
    if (!found.empty()) hits.push_back(found.front());
  }
  out.spectrum = build_interpolation_spectrum(out.sample, hits, cfg.m);

  std::vector<double> steps;
  std::vector<double> starts;
  for (const auto& h : out.spectrum.used) {
    steps.push_back(h.q);
    starts.push_back(out.sample.gamma.gamma[static_cast<std::size_t>(h.k)]);
  }
  const FlatteningKernel kernel(std::move(steps), std::move(starts), cfg.length + 1);
  out.certificate = certify_kernel(kernel, cfg.eps, true);
  out.window = window_pair(0.25, 0.5);

  Rng rng(cfg.seed, 1);
  std::vector<double> lam(static_cast<std::size_t>(cfg.lambda_points));
  for (std::size_t i = 1; i < lam.size(); ++i) {
    lam[i] = lam[i - 1] + cfg.delta * (1.0 + rng.uniform());
  }
  out.lambda = FrequencySet(std::move(lam));
  out.analysis = analyze_kernel(out.certificate, out.window, out.lambda);
  out.frame = frame_report(out.lambda, out.spectrum.s_delta, out.analysis.frame_bound);
  out.positive = out.spectrum.contained && out.frame.certified;
  return out;
}

}  // namespace sgl
