#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sgl/spectra.hpp"

namespace sgl {

using cplx = std::complex<double>;

// Strictly increasing finite set of real frequencies (or points).
class FrequencySet {
 public:
  FrequencySet() = default;
  // Sorts; throws InvalidArgument on non-finite values or exact duplicates.
  explicit FrequencySet(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  const std::vector<double>& to_vector() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  // Minimum gap between consecutive elements; +inf for fewer than two.
  double separation() const { return separation_; }
  bool contains(double x, double tol) const;

 private:
  std::vector<double> values_;
  double separation_ = 0.0;
};

struct ExpTerm {
  double freq = 0.0;
  cplx coef{};
};

// Finite sum of coef * e^{2 pi i freq t}; frequencies kept sorted and distinct
// (terms sharing a frequency are merged on construction).
class ExpPolynomial {
 public:
  ExpPolynomial() = default;
  explicit ExpPolynomial(std::vector<ExpTerm> terms);

  const std::vector<ExpTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  cplx operator()(double t) const;
  double coefficient_l1() const;
  double max_abs_frequency() const;
  // Half-width of the frequency range; |P| is unchanged by modulating with
  // the range midpoint, so this is the radius that bounds d|P|/dt.
  double frequency_radius() const;

 private:
  std::vector<ExpTerm> terms_;
};

// Integral of e^{2 pi i theta t} over [lo, hi].
cplx interval_integral(double theta, double lo, double hi);

// Integral of e^{2 pi i theta t} over S.
cplx pair_integral(double theta, const SpectrumSet& s);

struct GramMatrix {
  Eigen::MatrixXcd entries;  // entries(j, k) = pair_integral(lam_j - lam_k, S)
  FrequencySet frequencies;
  SpectrumSet spectrum;

  // sum_{j,k} c_j conj(c_k) entries(j,k) = int_S |sum_j c_j e^{2 pi i lam_j t}|^2 dt
  double quadratic_form(std::span<const cplx> c) const;
};

GramMatrix gram(const FrequencySet& lam, const SpectrumSet& s);

inline constexpr double kPsdSlack = 1e-10;
inline constexpr double kCertifySlack = 1e-8;

struct FrameReport {
  std::size_t n = 0;
  double min_eigenvalue = 0.0;
  std::optional<double> claimed_bound;
  bool certified = false;

  static std::string csv_header();  // n,min_eig,claimed,certified
  std::string csv_row() const;
};

FrameReport frame_report(const FrequencySet& lam, const SpectrumSet& s,
                         std::optional<double> claimed_bound = std::nullopt);
FrameReport frame_report(const GramMatrix& g,
                         std::optional<double> claimed_bound = std::nullopt);

// Ascending eigenvalues of a Hermitian matrix; NumericalFailure if the solver
// does not converge.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m);

// int_S |P(t)|^2 dt, exact through pair_integral.
double l2_norm_squared(const ExpPolynomial& p, const SpectrumSet& s);

}  // namespace sgl
