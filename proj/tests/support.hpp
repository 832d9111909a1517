#pragma once

// Independent oracles shared by the unit and acceptance tests. Nothing here calls
// into the library's quadrature or kernel code, so results computed with these
// helpers can be compared against the library without circularity.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "framelet/basis.hpp"

namespace framelet::testing {

/// Gauss-Legendre nodes and weights on [0,1] by Newton iteration on P_n.
struct Line {
  std::vector<double> x;
  std::vector<double> w;
};

inline Line gauss_legendre_unit(int n) {
  Line out;
  for (int i = 0; i < n; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double step = p1 / dp;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    out.x.push_back(0.5 * (t + 1.0));
    out.w.push_back(1.0 / ((1.0 - t * t) * dp * dp));
  }
  return out;
}

/// Integral over T2 against the normalized measure, via the Duffy map
/// (u, v) -> (u, (1-u) v) with n Gauss-Legendre points per direction.
inline double duffy_integral(const std::function<double(const SimplexPoint&)>& f, int n) {
  const Line g = gauss_legendre_unit(n);
  double sum = 0.0;
  for (std::size_t a = 0; a < g.x.size(); ++a) {
    for (std::size_t b = 0; b < g.x.size(); ++b) {
      const double u = g.x[a];
      sum += g.w[a] * g.w[b] * (1.0 - u) * f({u, (1.0 - u) * g.x[b]});
    }
  }
  return 2.0 * sum;
}

/// Legendre P_m by recurrence, for closed-form cross-checks.
inline double legendre(int m, double t) {
  double p0 = 1.0;
  if (m == 0) return p0;
  double p1 = t;
  for (int k = 2; k <= m; ++k) {
    const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// Jacobi P^{(a,0)}_n via the explicit sum over binomials.
inline double jacobi_a0_explicit(double a, int n, double t) {
  // P_n^{(a,b)}(t) = sum_s C(n+a, n-s) C(n+b, s) ((t-1)/2)^s ((t+1)/2)^{n-s}, b = 0
  auto binom = [](double top, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= (top - k + i) / i;
    return r;
  };
  double sum = 0.0;
  for (int s = 0; s <= n; ++s) {
    sum += binom(n + a, n - s) * binom(n, s) * std::pow((t - 1.0) / 2.0, s) * std::pow((t + 1.0) / 2.0, n - s);
  }
  return sum;
}

/// Basis value computed straight from the textbook product form, away from x1 = 1.
inline double basis_product_form(BasisIndex idx, const SimplexPoint& x) {
  const double norm = std::sqrt((idx.ell + 1.0) * (2.0 * idx.m + 1.0));
  const double r = 1.0 - x.x1;
  return norm * jacobi_a0_explicit(2.0 * idx.m + 1.0, idx.ell - idx.m, 2.0 * x.x1 - 1.0) * std::pow(r, idx.m) *
         legendre(idx.m, 2.0 * x.x2 / r - 1.0);
}

/// Uniform random point of T2 at distance >= margin from the boundary.
inline SimplexPoint random_interior(std::mt19937_64& rng, double margin) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const SimplexPoint p{u(rng), u(rng)};
    if (p.x1 >= margin && p.x2 >= margin && p.x1 + p.x2 <= 1.0 - 2.0 * margin) return p;
  }
}

/// Complex Gaussian coefficients on every index with ell <= cutoff.
inline SpectralVector random_spectral(int cutoff, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  SpectralVector v(cutoff);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = {g(rng), g(rng)};
  return v;
}

inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

}  // namespace framelet::testing
