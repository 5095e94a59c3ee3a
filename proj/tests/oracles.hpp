#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "accr/fields.hpp"
#include "accr/pack.hpp"

namespace accr::testing {

inline Eigen::MatrixXd metric_at(const MetricField& g, std::span<const double> p) {
  return eval_matrix(g, p).real();
}

// Christoffel symbols from finite differences of the metric.
inline std::vector<double> fd_gamma(const MetricField& g, std::span<const double> p, double h) {
  const int n = g.dim();
  std::vector<Eigen::MatrixXd> dg(n);
  for (int a = 0; a < n; ++a) {
    std::vector<double> u(p.begin(), p.end()), v(p.begin(), p.end());
    u[a] += h;
    v[a] -= h;
    dg[a] = (metric_at(g, u) - metric_at(g, v)) / (2 * h);
  }
  Eigen::MatrixXd inv = metric_at(g, p).inverse();
  std::vector<double> gam(n * n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int l = 0; l < n; ++l)
          s += inv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        gam[(k * n + i) * n + j] = 0.5 * s;
      }
  return gam;
}

// R^l_{ijk} from finite differences of fd_gamma.
inline std::vector<double> fd_curvature(const MetricField& g, std::span<const double> p) {
  const int n = g.dim();
  const double h_out = 1e-3, h_in = 1e-4;
  auto gam = fd_gamma(g, p, h_in);
  std::vector<std::vector<double>> dgam(n);
  for (int a = 0; a < n; ++a) {
    std::vector<double> u(p.begin(), p.end()), v(p.begin(), p.end());
    u[a] += h_out;
    v[a] -= h_out;
    auto gu = fd_gamma(g, u, h_in), gv = fd_gamma(g, v, h_in);
    dgam[a].resize(gu.size());
    for (std::size_t q = 0; q < gu.size(); ++q)
      dgam[a][q] = (gu[q] - gv[q]) / (2 * h_out);
  }
  auto G = [&](int k, int i, int j) { return gam[(k * n + i) * n + j]; };
  auto dG = [&](int a, int k, int i, int j) { return dgam[a][(k * n + i) * n + j]; };
  std::vector<double> r(n * n * n * n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = dG(i, l, j, k) - dG(j, l, i, k);
          for (int m = 0; m < n; ++m)
            v += G(l, i, m) * G(m, j, k) - G(l, j, m) * G(m, i, k);
          r[((l * n + i) * n + j) * n + k] = v;
        }
  return r;
}

} // namespace accr::testing
