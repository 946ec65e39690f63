#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace oracle {

Rule gauss_legendre(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

cplx integrate(const std::function<cplx(double)>& f, double lo, double hi, int panels,
               int order) {
  const Rule rule = gauss_legendre(order);
  const double h = (hi - lo) / panels;
  cplx acc{};
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (int i = 0; i < order; ++i) acc += rule.weights[i] * 0.5 * h * f(mid + 0.5 * h * rule.nodes[i]);
  }
  return acc;
}

std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, double tol, int sweeps) {
  const auto n = a.rows();
  for (int s = 0; s < sweeps; ++s) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (std::sqrt(off) < tol * std::max(1.0, a.norm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = 0.5 * (a(q, q) - a(p, p)) / a(p, q);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

Eigen::MatrixXd real_embedding(const Eigen::MatrixXcd& h) {
  const auto n = h.rows();
  Eigen::MatrixXd r(2 * n, 2 * n);
  r.topLeftCorner(n, n) = h.real();
  r.topRightCorner(n, n) = -h.imag();
  r.bottomLeftCorner(n, n) = h.imag();
  r.bottomRightCorner(n, n) = h.real();
  return r;
}

double hermitian_min_eigenvalue(const Eigen::MatrixXcd& h) {
  return jacobi_eigenvalues(real_embedding(h)).front();
}

double grid_least_squares(long m, const std::vector<long>& z,
                          const std::vector<std::pair<double, double>>& a, double step) {
  std::vector<double> t;
  std::vector<double> w;
  for (const auto& [lo, hi] : a) {
    const long cells = std::lround((hi - lo) / step);
    const double h = (hi - lo) / static_cast<double>(cells);
    for (long i = 0; i < cells; ++i) {
      t.push_back(lo + (i + 0.5) * h);
      w.push_back(std::sqrt(h));
    }
  }
  const auto rows = static_cast<Eigen::Index>(t.size());
  const auto cols = static_cast<Eigen::Index>(z.size());
  Eigen::MatrixXcd x(rows, cols);
  Eigen::VectorXcd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double ti = t[static_cast<std::size_t>(i)];
    const double wi = w[static_cast<std::size_t>(i)];
    y(i) = wi * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) * ti);
    for (Eigen::Index j = 0; j < cols; ++j) {
      x(i, j) = wi * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(z[j]) * ti);
    }
  }
  if (cols == 0) return y.norm();
  const Eigen::VectorXcd c = x.colPivHouseholderQr().solve(y);
  return (y - x * c).norm();
}

cplx window_transform_closed(double y) {
  double prod = y;
  for (int k = 1; k <= 4; ++k) prod *= (k * k - y * y);
  return 576.0 / std::numbers::pi * std::polar(1.0, std::numbers::pi * y) *
         std::sin(std::numbers::pi * y) / prod;
}

cplx dirichlet_direct(long n, double q, double t) {
  cplx acc{};
  for (long j = 0; j < n; ++j) acc += std::polar(1.0, 2.0 * std::numbers::pi * j * q * t);
  return acc / static_cast<double>(n);
}

namespace {

// Plain real arithmetic: std::complex products go through the NaN-checking
// libgcc helper, which dominates this loop.
struct Rot {
  double re = 1.0;
  double im = 0.0;
  void advance(const Rot& w) {
    const double r = re * w.re - im * w.im;
    im = re * w.im + im * w.re;
    re = r;
  }
  static Rot at(double angle) { return {std::cos(angle), std::sin(angle)}; }
};

}  // namespace

double kernel_grid_max(const std::vector<double>& steps, const std::vector<double>& starts, long n,
                       double lo, double hi, double step) {
  const double two_pi = 2.0 * std::numbers::pi;
  const auto cells = static_cast<long>(std::ceil((hi - lo) / step));
  const double h = (hi - lo) / static_cast<double>(cells);
  const std::size_t m = steps.size();
  const double dn = static_cast<double>(n);
  std::vector<Rot> z(m), zn(m), e(m), w(m), wn(m), we(m);
  for (std::size_t j = 0; j < m; ++j) {
    w[j] = Rot::at(two_pi * steps[j] * h);
    wn[j] = Rot::at(two_pi * dn * steps[j] * h);
    we[j] = Rot::at(two_pi * starts[j] * h);
  }
  double best = 0.0;
  for (long i = 0; i <= cells; ++i) {
    const double t = lo + static_cast<double>(i) * h;
    if (i % 1024 == 0) {
      for (std::size_t j = 0; j < m; ++j) {
        z[j] = Rot::at(two_pi * steps[j] * t);
        zn[j] = Rot::at(two_pi * dn * steps[j] * t);
        e[j] = Rot::at(two_pi * starts[j] * t);
      }
    }
    double acc_re = 0.0;
    double acc_im = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      // D = (1 - z^n) / (n (1 - z))
      const double a_re = 1.0 - z[j].re;
      const double a_im = -z[j].im;
      const double den2 = a_re * a_re + a_im * a_im;
      double d_re;
      double d_im;
      if (den2 < 1e-12) {
        const cplx d = dirichlet_direct(n, steps[j], t);
        d_re = d.real();
        d_im = d.imag();
      } else {
        const double b_re = 1.0 - zn[j].re;
        const double b_im = -zn[j].im;
        const double s = 1.0 / (dn * den2);
        d_re = (b_re * a_re + b_im * a_im) * s;
        d_im = (b_im * a_re - b_re * a_im) * s;
      }
      acc_re += e[j].re * d_re - e[j].im * d_im;
      acc_im += e[j].re * d_im + e[j].im * d_re;
      z[j].advance(w[j]);
      zn[j].advance(wn[j]);
      e[j].advance(we[j]);
    }
    best = std::max(best, acc_re * acc_re + acc_im * acc_im);
  }
  return std::sqrt(best) / static_cast<double>(m);
}

double star_discrepancy(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d = std::max({d, (i + 1) / n - x[i], x[i] - i / n});
  }
  return d;
}

double brute_min_gap(const std::vector<double>& x) {
  double best = INFINITY;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) best = std::min(best, std::abs(x[i] - x[j]));
  }
  return best;
}

double grid_union_measure(const std::vector<std::pair<double, double>>& raw, double lo, double hi,
                          double step) {
  const long cells = std::lround((hi - lo) / step);
  long hit = 0;
  for (long i = 0; i < cells; ++i) {
    const double t = lo + (i + 0.5) * step;
    for (const auto& [a, b] : raw) {
      if (a <= t && t <= b) {
        ++hit;
        break;
      }
    }
  }
  return hit * step;
}

std::vector<std::pair<double, double>> Gen::disjoint_intervals(int max_count, double lo, double hi) {
  const int count = static_cast<int>(integer(1, max_count));
  std::set<double> cuts;
  while (static_cast<int>(cuts.size()) < 2 * count) cuts.insert(uniform(lo, hi));
  std::vector<double> c(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < count; ++i) out.emplace_back(c[2 * i], c[2 * i + 1]);
  return out;
}

std::vector<std::pair<double, double>> Gen::raw_intervals(int max_count, double lo, double hi) {
  const int count = static_cast<int>(integer(1, max_count));
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < count; ++i) {
    const double a = uniform(lo, hi);
    const double b = uniform(lo, hi);
    if (a == b) continue;
    out.emplace_back(std::min(a, b), std::max(a, b));
  }
  if (out.empty()) out.emplace_back(lo, hi);
  return out;
}

}  // namespace oracle
