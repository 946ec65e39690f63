#include "sgl/uniqueness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sgl/error.hpp"
#include "sgl/format.hpp"

namespace sgl {

FrequencySet perturbed_integers(Index window) {
  if (window < 1) throw Error(ErrorKind::InvalidArgument, "window must be at least 1");
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(2 * window + 1));
  for (Index n = -window; n <= window; ++n) {
    const int e = static_cast<int>(-std::min<Index>(std::abs(n), 1100));
    pts.push_back(static_cast<double>(n) + std::ldexp(1.0, e));
  }
  return FrequencySet(std::move(pts));
}

std::string LambdaBuild::header_line() const {
  return "# separation=" + format_real(separation) + " J=" + std::to_string(parts) +
         " window=" + std::to_string(window);
}

std::vector<std::string> LambdaBuild::csv_rows() const {
  std::vector<std::string> rows;
  for (double x : lambda.values()) rows.push_back(format_real(x));
  return rows;
}

LambdaBuild build_lambda(const PartitionZ& partition, std::span<const double> alphas, int parts,
                         Index window, double ud_floor) {
  if (parts < 1 || static_cast<std::size_t>(parts) > partition.parts.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "J must be between 1 and the number of parts (" +
                    std::to_string(partition.parts.size()) + ")");
  }
  if (alphas.size() < static_cast<std::size_t>(parts)) {
    throw Error(ErrorKind::InvalidArgument, "need one alpha per part");
  }
  if (window < 0) throw Error(ErrorKind::InvalidArgument, "window must be non-negative");

  std::vector<std::pair<double, int>> tagged;
  for (int j = 1; j <= parts; ++j) {
    const double alpha = alphas[static_cast<std::size_t>(j - 1)];
    if (!(alpha >= 0.0 && alpha < 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "alpha must lie in [0,1)", alpha);
    }
    for (Index n : partition.parts[static_cast<std::size_t>(j - 1)]) {
      if (n < -window || n > window) continue;
      tagged.emplace_back(static_cast<double>(n) + alpha, j);
    }
  }
  std::sort(tagged.begin(), tagged.end());
  for (std::size_t i = 1; i < tagged.size(); ++i) {
    if (tagged[i].first - tagged[i - 1].first < kEndpointTolerance) {
      throw Error(ErrorKind::DegenerateTranslates,
                  "translates collide at " + format_real(tagged[i].first), tagged[i].first);
    }
  }

  LambdaBuild out;
  std::vector<double> pts;
  for (const auto& [x, j] : tagged) {
    pts.push_back(x);
    out.origin.push_back(j);
  }
  out.lambda = FrequencySet(std::move(pts));
  out.alphas.assign(alphas.begin(), alphas.begin() + parts);
  out.parts = parts;
  out.window = window;
  out.separation = out.lambda.separation();
  out.ud_floor = ud_floor;
  out.uniformly_discrete = out.separation >= ud_floor;
  return out;
}

std::vector<double> vdc_alphas(int count) {
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "J must be at least 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (unsigned i = 1; out.size() < static_cast<std::size_t>(count); ++i) {
    double x = 0.0;
    double scale = 0.5;
    for (unsigned k = i; k != 0; k >>= 1, scale *= 0.5) {
      if (k & 1u) x += scale;
    }
    out.push_back(x);
  }
  return out;
}

namespace {

std::vector<int> window_counts(std::span<const double> pts, double r) {
  std::vector<int> counts;
  const double lo = pts.front();
  const double hi = pts.back();
  const double stride = 0.25 * r;
  for (std::size_t i = 0;; ++i) {
    const double x = lo + static_cast<double>(i) * stride;
    if (x + r > hi + kEndpointTolerance) break;
    const auto first = std::lower_bound(pts.begin(), pts.end(), x - kEndpointTolerance);
    const auto last = std::upper_bound(pts.begin(), pts.end(), x + r + kEndpointTolerance);
    counts.push_back(static_cast<int>(last - first));
  }
  return counts;
}

}  // namespace

DensityReport density_report(const FrequencySet& lam, double r) {
  if (lam.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two points");
  const double span = lam[lam.size() - 1] - lam[0];
  if (!(r > 0.0) || !(r < span)) {
    throw Error(ErrorKind::InvalidArgument, "r must be positive and below the span", r);
  }
  DensityReport out;
  out.r = r;
  out.counts = window_counts(lam.values(), r);
  for (double rr = r; rr <= 0.5 * span || out.radii.empty(); rr *= 2.0) {
    const auto c = window_counts(lam.values(), rr);
    if (c.empty()) break;
    out.radii.push_back(rr);
    out.means.push_back(std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size()));
  }
  if (out.radii.size() == 1) {
    out.slope = out.means[0] / out.radii[0];
    return out;
  }
  const double n = static_cast<double>(out.radii.size());
  const double mx = std::accumulate(out.radii.begin(), out.radii.end(), 0.0) / n;
  const double my = std::accumulate(out.means.begin(), out.means.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < out.radii.size(); ++i) {
    sxy += (out.radii[i] - mx) * (out.means[i] - my);
    sxx += (out.radii[i] - mx) * (out.radii[i] - mx);
  }
  out.slope = sxy / sxx;
  return out;
}

}  // namespace sgl
