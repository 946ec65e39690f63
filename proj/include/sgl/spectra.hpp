#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sgl {

// Absolute tolerance for endpoint comparisons (merging, containment, and
// dropping zero-length pieces produced by mod-a arithmetic).
inline constexpr double kEndpointTolerance = 1e-12;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

// Finite union of closed intervals, kept sorted and pairwise disjoint.
// Only `normalize` and the operations below produce instances, so every
// SpectrumSet is canonical.
class SpectrumSet {
 public:
  SpectrumSet() = default;

  const std::vector<Interval>& intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  double measure() const;
  double lower() const;
  double upper() const;

  bool contains(double t, double tol = kEndpointTolerance) const;
  // Every interval of `inner` lies inside a single interval of *this.
  bool contains(const SpectrumSet& inner, double tol = kEndpointTolerance) const;

  SpectrumSet shifted(double s) const;
  // Mirror image about `center` equals the set itself (within tol).
  bool symmetric_about(double center, double tol = kEndpointTolerance) const;

  bool operator==(const SpectrumSet&) const = default;

 private:
  friend SpectrumSet normalize(std::span<const std::pair<double, double>> raw);
  explicit SpectrumSet(std::vector<Interval> canonical)
      : intervals_(std::move(canonical)) {}

  std::vector<Interval> intervals_;
};

// Sorts and merges overlapping or adjacent (within tolerance) pairs.
// Throws InvalidInterval for lo >= hi or non-finite endpoints.
SpectrumSet normalize(std::span<const std::pair<double, double>> raw);
SpectrumSet normalize(std::initializer_list<std::pair<double, double>> raw);
SpectrumSet unite(const SpectrumSet& a, const SpectrumSet& b);

// S_a = (S + aZ) cap [0, a].
SpectrumSet project(const SpectrumSet& s, double period);

// [lo, hi] minus s, as closures of the open gaps.
SpectrumSet complement_within(const SpectrumSet& s, double lo, double hi);

struct GapReport {
  double period = 0.0;
  double projection_measure = 0.0;
  double complement_measure = 0.0;
  bool weak = false;
  bool strong = false;
  // For finite unions of closed intervals the closure of S_a is S_a, so the
  // strong and weak conditions coincide. Always true here.
  bool strong_equals_weak = true;
  SpectrumSet witness;
};

GapReport gap_report(const SpectrumSet& s, double period);

// `[lo,hi; lo,hi; ...]`, decimal reals.
SpectrumSet parse_spectrum_literal(std::string_view text);
std::string format_spectrum_literal(const SpectrumSet& s);

// S = Gamma + [0, block_length]; gaps xi_j = gamma_{j+1} - gamma_j - block_length.
struct GammaRepresentation {
  std::vector<double> gamma;
  double block_length = 1.0;
  std::vector<double> gaps;

  static GammaRepresentation from_gamma(std::vector<double> gamma,
                                        double block_length = 1.0);
  SpectrumSet spectrum() const;
};

}  // namespace sgl
