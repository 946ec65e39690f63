#include "sgl/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sgl/error.hpp"
#include "sgl/format.hpp"

namespace sgl {

double SpectrumSet::measure() const {
  return std::accumulate(intervals_.begin(), intervals_.end(), 0.0,
                         [](double acc, const Interval& iv) { return acc + iv.length(); });
}

double SpectrumSet::lower() const {
  if (empty()) throw Error(ErrorKind::InvalidArgument, "empty spectrum has no lower end");
  return intervals_.front().lo;
}

double SpectrumSet::upper() const {
  if (empty()) throw Error(ErrorKind::InvalidArgument, "empty spectrum has no upper end");
  return intervals_.back().hi;
}

bool SpectrumSet::contains(double t, double tol) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t + tol,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == intervals_.begin()) return false;
  --it;
  return t <= it->hi + tol;
}

bool SpectrumSet::contains(const SpectrumSet& inner, double tol) const {
  for (const auto& piece : inner.intervals_) {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), piece.lo + tol,
                               [](double v, const Interval& iv) { return v < iv.lo; });
    if (it == intervals_.begin()) return false;
    --it;
    if (piece.hi > it->hi + tol) return false;
  }
  return true;
}

SpectrumSet SpectrumSet::shifted(double s) const {
  std::vector<Interval> out = intervals_;
  for (auto& iv : out) {
    iv.lo += s;
    iv.hi += s;
  }
  return SpectrumSet(std::move(out));
}

bool SpectrumSet::symmetric_about(double center, double tol) const {
  const std::size_t n = intervals_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Interval& a = intervals_[i];
    const Interval& b = intervals_[n - 1 - i];
    if (std::abs((a.lo - center) + (b.hi - center)) > tol) return false;
    if (std::abs((a.hi - center) + (b.lo - center)) > tol) return false;
  }
  return true;
}

SpectrumSet normalize(std::span<const std::pair<double, double>> raw) {
  std::vector<Interval> pieces;
  pieces.reserve(raw.size());
  for (const auto& [lo, hi] : raw) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      throw Error(ErrorKind::InvalidInterval,
                  "need finite lo < hi, got [" + format_real(lo) + "," + format_real(hi) + "]");
    }
    pieces.push_back({lo, hi});
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const auto& iv : pieces) {
    if (!merged.empty() && iv.lo <= merged.back().hi + kEndpointTolerance) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  return SpectrumSet(std::move(merged));
}

SpectrumSet normalize(std::initializer_list<std::pair<double, double>> raw) {
  return normalize(std::span<const std::pair<double, double>>(raw.begin(), raw.size()));
}

SpectrumSet unite(const SpectrumSet& a, const SpectrumSet& b) {
  std::vector<std::pair<double, double>> raw;
  for (const auto& iv : a.intervals()) raw.emplace_back(iv.lo, iv.hi);
  for (const auto& iv : b.intervals()) raw.emplace_back(iv.lo, iv.hi);
  return normalize(raw);
}

SpectrumSet project(const SpectrumSet& s, double period) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw Error(ErrorKind::InvalidPeriod, "period must be positive, got " + format_real(period));
  }
  std::vector<std::pair<double, double>> raw;
  auto keep = [&](double lo, double hi) {
    lo = std::clamp(lo, 0.0, period);
    hi = std::clamp(hi, 0.0, period);
    if (hi - lo > kEndpointTolerance) raw.emplace_back(lo, hi);
  };
  for (const auto& iv : s.intervals()) {
    if (iv.length() >= period) {
      raw.emplace_back(0.0, period);
      continue;
    }
    const double k = std::floor(iv.lo / period);
    const double lo = iv.lo - k * period;
    const double hi = iv.hi - k * period;
    if (hi <= period) {
      keep(lo, hi);
    } else {
      keep(lo, period);
      keep(0.0, hi - period);
    }
  }
  return normalize(raw);
}

SpectrumSet complement_within(const SpectrumSet& s, double lo, double hi) {
  std::vector<std::pair<double, double>> raw;
  double cursor = lo;
  for (const auto& iv : s.intervals()) {
    if (iv.hi <= lo || iv.lo >= hi) continue;
    if (iv.lo - cursor > kEndpointTolerance) raw.emplace_back(cursor, iv.lo);
    cursor = std::max(cursor, iv.hi);
  }
  if (hi - cursor > kEndpointTolerance) raw.emplace_back(cursor, hi);
  return normalize(raw);
}

GapReport gap_report(const SpectrumSet& s, double period) {
  GapReport report;
  report.period = period;
  const SpectrumSet projected = project(s, period);
  report.projection_measure = projected.measure();
  report.witness = complement_within(projected, 0.0, period);
  report.complement_measure = report.witness.measure();
  report.weak = !report.witness.empty();
  report.strong = report.weak;
  return report;
}

SpectrumSet parse_spectrum_literal(std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw Error(ErrorKind::InvalidArgument, "spectrum literal must look like [lo,hi; lo,hi]");
  }
  text = trim(text.substr(1, text.size() - 2));
  std::vector<std::pair<double, double>> raw;
  if (text.empty()) return normalize(raw);
  std::size_t start = 0;
  while (true) {
    const auto semi = text.find(';', start);
    const auto values = parse_real_list(text.substr(start, semi - start));
    if (values.size() != 2) {
      throw Error(ErrorKind::InvalidArgument, "each spectrum piece needs exactly lo,hi");
    }
    raw.emplace_back(values[0], values[1]);
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return normalize(raw);
}

std::string format_spectrum_literal(const SpectrumSet& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0) out += "; ";
    out += format_real(s.intervals()[i].lo) + "," + format_real(s.intervals()[i].hi);
  }
  return out + "]";
}

GammaRepresentation GammaRepresentation::from_gamma(std::vector<double> gamma,
                                                    double block_length) {
  if (!(block_length > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "block length must be positive");
  }
  for (std::size_t j = 1; j < gamma.size(); ++j) {
    if (!(gamma[j] > gamma[j - 1])) {
      throw Error(ErrorKind::InvalidArgument, "gamma must be strictly increasing");
    }
  }
  GammaRepresentation rep;
  rep.block_length = block_length;
  rep.gaps.reserve(gamma.size() > 0 ? gamma.size() - 1 : 0);
  for (std::size_t j = 1; j < gamma.size(); ++j) {
    rep.gaps.push_back(gamma[j] - gamma[j - 1] - block_length);
  }
  rep.gamma = std::move(gamma);
  return rep;
}

SpectrumSet GammaRepresentation::spectrum() const {
  std::vector<std::pair<double, double>> raw;
  raw.reserve(gamma.size());
  for (double g : gamma) raw.emplace_back(g, g + block_length);
  return normalize(raw);
}

}  // namespace sgl
