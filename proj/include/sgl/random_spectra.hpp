#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sgl/blocks.hpp"
#include "sgl/exp_analysis.hpp"
#include "sgl/flatten.hpp"
#include "sgl/spectra.hpp"

namespace sgl {

// gamma_0 = 0, gamma_{j+1} = gamma_j + 1 + xi_j with xi_j uniform on [2, 3].
struct RandomGammaSample {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  GammaRepresentation gamma;
};

RandomGammaSample sample_gamma(std::uint64_t seed, Index count, std::uint64_t stream = 0);
// Same construction with the gaps xi_j drawn from `gap_source`.
RandomGammaSample sample_gamma_with(Index count, const std::function<double()>& gap_source);

struct ProgressionHit {
  Index k = 0;  // 0-based start index
  double q = 0.0;
  Index n = 0;
  double max_deviation = 0.0;
};

inline constexpr double kProgressionTolerance = 0.25;

// Every k with |gamma_{k+j} - (gamma_k + j q)| < tol for j = 1..N.
std::vector<ProgressionHit> find_progressions(const RandomGammaSample& g, double q, Index n,
                                              double tol = kProgressionTolerance);

struct MonteCarloReport {
  double q = 0.0;
  Index n = 0;
  Index count = 0;  // J
  Index trials = 0;
  double freq = 0.0;
  double stderr_ = 0.0;
  std::uint64_t seed = 0;

  static std::string csv_header();  // q,N,J,trials,freq,stderr,seed
  std::string csv_row() const;
};

// Fraction of trials (trial t uses substream t) whose J-point sample has a hit.
MonteCarloReport mc_hit_probability(double q, Index n, Index count, Index trials,
                                    std::uint64_t seed);

struct InterpolationSpectrum {
  std::vector<ProgressionHit> used;  // earliest hit per step, m of them
  FrequencySet gamma_star;           // ideal points gamma_k + i q, i = 0..N
  SpectrumSet s_delta;               // gamma_star + [1/4, 3/4]
  bool contained = false;            // s_delta inside Gamma + [0, 1]
};

InterpolationSpectrum build_interpolation_spectrum(const RandomGammaSample& g,
                                                   const std::vector<ProgressionHit>& hits,
                                                   int m);

struct PipelineConfig {
  std::uint64_t seed = 1;
  int m = 5;
  double step_lo = 3.25;
  double step_hi = 3.75;
  Index length = 4;        // N
  Index count = 20000;     // J
  double eps = 0.02;       // sets the exact-evaluation reach 1/eps of the kernel analysis
  double delta = 4.0;      // Lambda gaps uniform on [delta, 2 delta]
  Index lambda_points = 64;
};

struct PipelineResult {
  RandomGammaSample sample;
  std::vector<double> steps;
  InterpolationSpectrum spectrum;
  FlatteningCertificate certificate;
  WindowPair window;
  KernelAnalysis analysis;
  FrequencySet lambda;
  FrameReport frame;
  bool positive = false;  // contained and the frame bound is certified
};

PipelineResult random_pipeline(const PipelineConfig& cfg);

}  // namespace sgl
