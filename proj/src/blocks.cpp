#include "sgl/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "sgl/error.hpp"
#include "sgl/exp_analysis.hpp"
#include "sgl/format.hpp"
#include "sgl/parallel.hpp"

namespace sgl {

namespace {

// Distance^2 = |A| - g^* M^{-1} g, evaluated in the eigenbasis of M. With a
// ridge r the value is that of the ridge solution b = (M + r)^{-1} g, i.e.
// |A| - 2 Re(g^* b) + b^* M b, which is still an attained distance.
// M depends only on z, so one decomposition serves every m.
template <class Matrix, class Vector, class Rhs>
std::vector<ResidualResult> solve_normal_equations(const Matrix& normal, std::span<const Index> ms,
                                                   Rhs&& rhs_for, double measure) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(normal);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::IllConditioned, "eigen-solver failed on the normal equations");
  }
  const Eigen::VectorXd& d = solver.eigenvalues();
  const double d_max = d.maxCoeff();
  const double d_min = d.minCoeff();
  if (!(d_max > 0.0)) {
    throw Error(ErrorKind::IllConditioned, "normal matrix has no positive spectrum", d_max);
  }
  ResidualResult base;
  base.condition = d_min > 0.0 ? d_max / d_min : std::numeric_limits<double>::infinity();
  base.ridge = base.condition > kRidgeConditionLimit ? kRidgeScale * measure : 0.0;
  if (!(d_min + base.ridge > 0.0)) {
    throw Error(ErrorKind::IllConditioned,
                "normal matrix singular beyond regularization (condition " +
                    format_real(base.condition) + ")",
                base.condition);
  }
  std::vector<ResidualResult> out(ms.size(), base);
  parallel_for(ms.size(), [&](std::size_t k) {
    const Vector rhs = rhs_for(ms[k]);
    const auto w = (solver.eigenvectors().adjoint() * rhs).eval();
    double captured = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      const double shifted = d(i) + base.ridge;
      captured += std::norm(w(i)) * (d(i) + 2.0 * base.ridge) / (shifted * shifted);
    }
    out[k].value = std::sqrt(std::max(0.0, measure - captured));
  });
  return out;
}

}  // namespace

std::vector<ResidualResult> residual_profile(std::span<const Index> ms, std::span<const Index> z,
                                             const SpectrumSet& a) {
  const double measure = a.measure();
  if (z.empty() || a.empty()) {
    return std::vector<ResidualResult>(ms.size(), {std::sqrt(measure), 1.0, 0.0, false});
  }

  const auto n = static_cast<Eigen::Index>(z.size());
  const double center = 0.5 * (a.lower() + a.upper());
  if (a.symmetric_about(center)) {
    // Conjugating by diag(e^{2 pi i n c}) makes every entry real.
    const SpectrumSet centered = a.shifted(-center);
    Eigen::MatrixXd normal(n, n);
    parallel_for(z.size(), [&](std::size_t row) {
      const auto i = static_cast<Eigen::Index>(row);
      normal(i, i) = measure;
      for (Eigen::Index j = 0; j < i; ++j) {
        normal(i, j) = pair_integral(static_cast<double>(z[j] - z[row]), centered).real();
      }
    });
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) normal(i, j) = normal(j, i);
    }
    auto rhs = [&](Index m) {
      Eigen::VectorXd v(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = pair_integral(static_cast<double>(m - z[i]), centered).real();
      }
      return v;
    };
    auto out = solve_normal_equations<Eigen::MatrixXd, Eigen::VectorXd>(normal, ms, rhs, measure);
    for (auto& r : out) r.real_reduction = true;
    return out;
  }

  Eigen::MatrixXcd normal(n, n);
  parallel_for(z.size(), [&](std::size_t row) {
    const auto i = static_cast<Eigen::Index>(row);
    normal(i, i) = measure;
    for (Eigen::Index j = 0; j < i; ++j) {
      normal(i, j) = pair_integral(static_cast<double>(z[j] - z[row]), a);
    }
  });
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) normal(i, j) = std::conj(normal(j, i));
  }
  auto rhs = [&](Index m) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = pair_integral(static_cast<double>(m - z[i]), a);
    return v;
  };
  return solve_normal_equations<Eigen::MatrixXcd, Eigen::VectorXcd>(normal, ms, rhs, measure);
}

ResidualResult residual_detail(Index m, std::span<const Index> z, const SpectrumSet& a) {
  const Index ms[] = {m};
  return residual_profile(ms, z, a).front();
}

double residual(Index m, std::span<const Index> z, const SpectrumSet& a) {
  return residual_detail(m, z, a).value;
}

std::vector<Index> symmetric_band(Index n_lo, Index n_hi, bool include_zero) {
  std::vector<Index> out;
  for (Index n = n_hi; n > n_lo; --n) out.push_back(-n);
  if (include_zero) out.push_back(0);
  for (Index n = n_lo + 1; n <= n_hi; ++n) out.push_back(n);
  return out;
}

std::vector<Index> Block::members() const { return symmetric_band(n_lo, n_hi, k == 1); }

BlockSchedule BlockSchedule::geometric(int k_max) {
  BlockSchedule s;
  for (int k = 1; k <= k_max; ++k) s.eps.push_back(std::ldexp(1.0, -k));
  return s;
}

double BlockSchedule::at(int k) const {
  if (k < 1 || static_cast<std::size_t>(k) > eps.size()) {
    throw Error(ErrorKind::OutOfRange, "schedule has no eps_" + std::to_string(k));
  }
  return eps[static_cast<std::size_t>(k - 1)];
}

void BlockSchedule::validate() const {
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps_k must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "eps_k must be strictly decreasing");
    }
  }
}

std::string BlockBuild::csv_header() { return "k,n_lo,n_hi,m,residual,eps_k"; }

std::vector<std::string> BlockBuild::csv_rows() const {
  std::vector<std::string> rows;
  rows.reserve(table.size());
  for (const auto& r : table) {
    rows.push_back(std::to_string(r.k) + "," + std::to_string(r.n_lo) + "," +
                   std::to_string(r.n_hi) + "," + std::to_string(r.m) + "," +
                   format_real(r.residual) + "," + format_real(r.eps_k));
  }
  return rows;
}

namespace {

std::vector<double> residuals_for_block(int k, Index n_lo, Index n_hi, const SpectrumSet& a) {
  const auto z = symmetric_band(n_lo, n_hi, k == 1);
  std::vector<Index> ms;
  for (Index m = -k; m <= k; ++m) ms.push_back(m);
  std::vector<double> out;
  for (const auto& r : residual_profile(ms, z, a)) out.push_back(r.value);
  return out;
}

double worst(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

BlockBuild build_blocks(const SpectrumSet& a, const BlockSchedule& schedule, int k_max,
                        Index n_cap) {
  if (!(a.measure() < 1.0)) {
    throw Error(ErrorKind::HypothesisViolated, "need |A| < 1, got " + format_real(a.measure()));
  }
  if (!a.empty() && (a.lower() < -kEndpointTolerance || a.upper() > 1.0 + kEndpointTolerance)) {
    throw Error(ErrorKind::HypothesisViolated, "A must lie in [0,1]");
  }
  if (k_max < 1) throw Error(ErrorKind::InvalidArgument, "k_max must be at least 1");
  schedule.validate();
  if (schedule.eps.size() < static_cast<std::size_t>(k_max)) {
    throw Error(ErrorKind::InvalidArgument, "schedule shorter than k_max");
  }

  BlockBuild build;
  build.k_max = k_max;
  auto record = [&](const Block& b, const std::vector<double>& res) {
    const double eps_k = schedule.at(b.k);
    for (std::size_t i = 0; i < res.size(); ++i) {
      build.table.push_back({b.k, b.n_lo, b.n_hi, static_cast<Index>(i) - b.k, res[i], eps_k});
    }
    build.blocks.push_back(b);
  };

  {
    const Block first{1, 0, 1};
    const auto res = residuals_for_block(1, 0, 1, a);
    if (!(worst(res) < schedule.at(1))) {
      throw Error(ErrorKind::NumericalFailure, "first block misses eps_1", worst(res));
    }
    record(first, res);
  }

  for (int k = 2; k <= k_max; ++k) {
    const Index n_prev = build.blocks.back().n_hi;
    const double eps_k = schedule.at(k);
    auto attempt = [&](Index n_hi) { return residuals_for_block(k, n_prev, n_hi, a); };

    // Doubling from n_prev + 1, then bisection for the smallest passing n_k.
    Index last_fail = n_prev;
    Index step = 1;
    Index success = -1;
    std::vector<double> success_res;
    double best_seen = std::numeric_limits<double>::infinity();
    while (true) {
      const Index candidate = std::min(n_prev + step, n_cap);
      if (candidate <= last_fail) break;
      auto res = attempt(candidate);
      best_seen = std::min(best_seen, worst(res));
      if (worst(res) < eps_k) {
        success = candidate;
        success_res = std::move(res);
        break;
      }
      last_fail = candidate;
      if (candidate == n_cap) break;
      step *= 2;
    }
    if (success < 0) {
      throw Error(ErrorKind::BudgetExceeded,
                  "block " + std::to_string(k) + " needs n_k beyond cap " + std::to_string(n_cap),
                  best_seen);
    }
    while (success - last_fail > 1) {
      const Index mid = last_fail + (success - last_fail) / 2;
      auto res = attempt(mid);
      if (worst(res) < eps_k) {
        success = mid;
        success_res = std::move(res);
      } else {
        last_fail = mid;
      }
    }
    record(Block{k, n_prev, success}, success_res);
  }
  return build;
}

double tail_probe(Index m, Index n_lower, Index n_upper, const SpectrumSet& a) {
  if (n_lower < 0 || !(n_upper > n_lower)) {
    throw Error(ErrorKind::InvalidArgument, "tail probe needs M > N >= 0");
  }
  const auto z = symmetric_band(n_lower, n_upper, false);
  return residual(m, z, a);
}

PartitionZ partition_blocks(std::span<const Block> blocks, int parts) {
  if (parts < 1) throw Error(ErrorKind::InvalidArgument, "need at least one part");
  PartitionZ out;
  out.parts.resize(static_cast<std::size_t>(parts));
  for (const auto& b : blocks) {
    const int j = (b.k - 1) % parts + 1;
    out.assignment.push_back(j);
    auto members = b.members();
    auto& dst = out.parts[static_cast<std::size_t>(j - 1)];
    dst.insert(dst.end(), members.begin(), members.end());
  }
  for (auto& p : out.parts) std::sort(p.begin(), p.end());
  return out;
}

}  // namespace sgl
