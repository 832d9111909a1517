#include "framelet/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace framelet {

std::vector<SimplexPoint> simplex_grid(int resolution) {
  if (resolution < 2) throw std::invalid_argument("simplex_grid: resolution must be >= 2");
  const double step = 1.0 / (resolution - 1);
  std::vector<SimplexPoint> out;
  for (int i = 0; i < resolution; ++i) {
    // i + k <= resolution - 1 is the integer form of x1 + x2 <= 1
    for (int k = 0; i + k < resolution; ++k) out.push_back({i * step, k * step});
  }
  return out;
}

std::vector<double> sample_framelet(const FrameletSystem& sys, FrameletKind kind, int j, std::size_t k,
                                    std::span<const SimplexPoint> points, ExecPolicy policy) {
  const SimplexPoint center = framelet_center(sys, kind, j, k);
  for (const auto& x : points) {
    if (!in_simplex(x)) throw DomainError("sample_framelet: point outside the simplex");
  }
  const auto& symbol = kind.channel == Channel::low ? sys.bank().scaling_low() : sys.bank().scaling_high(kind.n);
  const int node_level = kind.channel == Channel::low ? j : j + 1;
  const double scale = std::sqrt(sys.rule(node_level).weights()[k]);

  // Fold the symbol and the center values into one coefficient per basis function.
  const int cutoff = max_degree_with_eigenvalue_at_most(std::ldexp(symbol.support_hi(), j));
  std::vector<double> out(points.size(), 0.0);
  if (cutoff < 0) return out;
  std::vector<double> coef(spectral_dim(cutoff));
  basis_eval_all(cutoff, center, coef);
  for (int ell = 0; ell <= cutoff; ++ell) {
    const double h = scale * symbol(std::ldexp(eigenvalue(ell), -j));
    for (int m = 0; m <= ell; ++m) coef[linear_index({ell, m})] *= h;
  }

  const auto n = static_cast<std::ptrdiff_t>(points.size());
  auto body = [&](std::vector<double>& px, std::ptrdiff_t i) {
    basis_eval_all(cutoff, points[static_cast<std::size_t>(i)], px);
    double sum = 0.0;
    for (std::size_t q = 0; q < coef.size(); ++q) sum += coef[q] * px[q];
    out[static_cast<std::size_t>(i)] = sum;
  };
  if (policy == ExecPolicy::serial) {
    std::vector<double> px(coef.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) body(px, i);
  } else {
#pragma omp parallel
    {
      std::vector<double> px(coef.size());
#pragma omp for schedule(static)
      for (std::ptrdiff_t i = 0; i < n; ++i) body(px, i);
    }
  }
  return out;
}

Localization localization(std::span<const SimplexPoint> points, std::span<const double> values,
                          const SimplexPoint& center, double fraction) {
  if (points.size() != values.size() || points.empty()) {
    throw std::invalid_argument("localization: points and values must be non-empty and of equal size");
  }
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("localization: fraction must lie in (0, 1]");

  Localization loc;
  std::vector<double> dist(points.size());
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double a = std::abs(values[i]);
    if (a > loc.peak) {
      loc.peak = a;
      loc.argmax = i;
    }
    dist[i] = std::hypot(points[i].x1 - center.x1, points[i].x2 - center.x2);
    total += values[i] * values[i];
  }

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  double acc = 0.0;
  for (std::size_t i : order) {
    acc += values[i] * values[i];
    loc.mass_radius = dist[i];
    if (acc >= fraction * total) break;
  }
  return loc;
}

}  // namespace framelet
