#pragma once

#include <span>
#include <string>
#include <vector>

#include "sgl/blocks.hpp"
#include "sgl/exp_analysis.hpp"

namespace sgl {

// {n + 2^{-|n|} : |n| <= N}
FrequencySet perturbed_integers(Index window);

inline constexpr double kDefaultUdFloor = 0.1;

struct LambdaBuild {
  FrequencySet lambda;
  std::vector<double> alphas;  // the J shifts actually used
  int parts = 0;               // J
  Index window = 0;
  double separation = 0.0;
  double ud_floor = kDefaultUdFloor;
  bool uniformly_discrete = false;  // separation >= ud_floor
  // origin[i] = part (1-based) that produced lambda[i]
  std::vector<int> origin;

  // "# separation=<d> J=<J> window=<w>" then one point per line.
  std::string header_line() const;
  std::vector<std::string> csv_rows() const;
};

// Union over j <= J of (Z_j cap [-window, window]) + alpha_j.
LambdaBuild build_lambda(const PartitionZ& partition, std::span<const double> alphas, int parts,
                         Index window, double ud_floor = kDefaultUdFloor);

// First J terms of base-2 van der Corput: 1/2, 1/4, 3/4, 1/8, ...
std::vector<double> vdc_alphas(int count);

struct DensityReport {
  double r = 0.0;
  std::vector<int> counts;     // closed windows [x, x + r], stride r/4
  std::vector<double> radii;   // dyadic r values used for the fit
  std::vector<double> means;   // mean count per radius
  double slope = 0.0;          // least-squares slope of mean count against r
  bool diagnostic = true;      // finite-window estimate only
};

DensityReport density_report(const FrequencySet& lam, double r);

}  // namespace sgl
