#pragma once

// Test-side reference computations. Deliberately independent of the library:
// plain loops, no Eigen, different algorithms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;  // rows

/// Minimum-norm least-squares solution x = pinv(A) b via one-sided Jacobi SVD.
inline std::vector<double> pinv_solve(const Matrix& a, const std::vector<double>& b,
                                      double rcond = 1e-10) {
  const std::size_t m = a.size();
  const std::size_t n = m ? a[0].size() : 0;
  // Column-major working copy and V = I.
  std::vector<std::vector<double>> col(n, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) col[j][i] = a[i][j];
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) v[j][j] = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0, beta = 0, gamma = 0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += col[p][i] * col[p][i];
          beta += col[q][i] * col[q][i];
          gamma += col[p][i] * col[q][i];
        }
        if (alpha == 0.0 || beta == 0.0) continue;
        const double c_off = std::abs(gamma) / std::sqrt(alpha * beta);
        off = std::max(off, c_off);
        if (c_off < 1e-15) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double x = col[p][i], y = col[q][i];
          col[p][i] = c * x - s * y;
          col[q][i] = s * x + c * y;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double x = v[p][i], y = v[q][i];
          v[p][i] = c * x - s * y;
          v[q][i] = s * x + c * y;
        }
      }
    }
    if (off < 1e-15) break;
  }

  std::vector<double> sigma(n);
  double smax = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0;
    for (double x : col[j]) s += x * x;
    sigma[j] = std::sqrt(s);
    smax = std::max(smax, sigma[j]);
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (sigma[j] <= rcond * smax || sigma[j] == 0.0) continue;
    double ub = 0;  // u_j . b with u_j = col_j / sigma_j
    for (std::size_t i = 0; i < m; ++i) ub += col[j][i] * b[i];
    ub /= sigma[j] * sigma[j];
    for (std::size_t k = 0; k < n; ++k) x[k] += v[j][k] * ub;
  }
  return x;
}

/// Row r predicts d[p + r] from d[p + r - 1], ..., d[r].
inline std::vector<double> temporal_ls(const std::vector<double>& d, std::size_t p) {
  Matrix u;
  std::vector<double> rhs;
  for (std::size_t t = p; t < d.size(); ++t) {
    std::vector<double> row;
    for (std::size_t i = 1; i <= p; ++i) row.push_back(d[t - i]);
    u.push_back(row);
    rhs.push_back(d[t]);
  }
  return pinv_solve(u, rhs);
}

inline std::vector<double> spatial_ls(const std::vector<double>& dep,
                                      const std::vector<std::vector<double>>& comps) {
  Matrix v;
  for (std::size_t t = 0; t < dep.size(); ++t) {
    std::vector<double> row{1.0};
    for (const auto& c : comps) row.push_back(c[t]);
    v.push_back(row);
  }
  return pinv_solve(v, dep);
}

inline double norm(const std::vector<double>& x) {
  return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
}

inline double relative_error(const std::vector<double>& got, const std::vector<double>& want) {
  std::vector<double> diff(got.size());
  for (std::size_t i = 0; i < got.size(); ++i) diff[i] = got[i] - want[i];
  const double scale = norm(want);
  return scale > 0 ? norm(diff) / scale : norm(diff);
}

inline double mse(const std::vector<double>& actual, const std::vector<double>& predicted) {
  double s = 0;
  for (std::size_t i = 0; i < actual.size(); ++i)
    s += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
  return s / static_cast<double>(actual.size());
}

inline double chi2_terms(const std::vector<double>& a, const std::vector<double>& p,
                         double sigma2) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = a[i] - p[i];
    s += r * r / sigma2;
  }
  return s;
}

inline std::vector<double> normal_series(std::mt19937_64& rng, std::size_t n, double mean = 0,
                                         double sd = 1) {
  std::normal_distribution<double> dist(mean, sd);
  std::vector<double> x(n);
  for (auto& v : x) v = dist(rng);
  return x;
}

inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace oracle
