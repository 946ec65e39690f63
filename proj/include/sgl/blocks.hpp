#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sgl/spectra.hpp"

namespace sgl {

using Index = std::int64_t;

// Gram regularization applied when the eigenvalue condition number of the
// normal-equation matrix exceeds kRidgeConditionLimit.
inline constexpr double kRidgeConditionLimit = 1e12;
inline constexpr double kRidgeScale = 1e-12;

struct ResidualResult {
  double value = 0.0;       // L^2(A) distance
  double condition = 1.0;   // lambda_max / lambda_min of the normal matrix
  double ridge = 0.0;       // diagonal shift actually used (0 if none)
  bool real_reduction = false;  // A symmetric about its midpoint
};

// L^2(A) distance from e^{2 pi i m t} to span{e^{2 pi i n t} : n in z}.
ResidualResult residual_detail(Index m, std::span<const Index> z, const SpectrumSet& a);
double residual(Index m, std::span<const Index> z, const SpectrumSet& a);
// Same distance for several m against one factorization of the normal matrix.
std::vector<ResidualResult> residual_profile(std::span<const Index> ms, std::span<const Index> z,
                                             const SpectrumSet& a);

// {n : n_lo < |n| <= n_hi}; the first block is {-1, 0, 1}.
struct Block {
  int k = 1;
  Index n_lo = 0;
  Index n_hi = 1;

  std::vector<Index> members() const;
};

struct BlockSchedule {
  std::vector<double> eps;  // eps[k-1] = eps_k

  // eps_k = 2^{-k}, k = 1..k_max.
  static BlockSchedule geometric(int k_max);
  double at(int k) const;
  void validate() const;
};

struct ResidualRow {
  int k = 0;
  Index n_lo = 0;
  Index n_hi = 0;
  Index m = 0;
  double residual = 0.0;
  double eps_k = 0.0;
};

struct BlockBuild {
  std::vector<Block> blocks;
  std::vector<ResidualRow> table;
  int k_max = 0;
  // The construction is infinite; this is its first k_max blocks.
  bool truncated = true;

  static std::string csv_header();  // k,n_lo,n_hi,m,residual,eps_k
  std::vector<std::string> csv_rows() const;
};

BlockBuild build_blocks(const SpectrumSet& a, const BlockSchedule& schedule, int k_max,
                        Index n_cap);

// residual(m, {N < |n| <= M}, A)
double tail_probe(Index m, Index n_lower, Index n_upper, const SpectrumSet& a);

struct PartitionZ {
  std::vector<int> assignment;            // assignment[i] = part (1-based) of blocks[i]
  std::vector<std::vector<Index>> parts;  // parts[j-1] = Z_j, sorted
};

// Round robin: block k goes to part ((k - 1) mod J) + 1.
PartitionZ partition_blocks(std::span<const Block> blocks, int parts);

// Integers n with |n| <= n_hi, n_lo < |n| (plus 0 for the first block).
std::vector<Index> symmetric_band(Index n_lo, Index n_hi, bool include_zero);

}  // namespace sgl
