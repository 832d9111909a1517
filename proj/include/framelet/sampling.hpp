#pragma once

#include <span>
#include <vector>

#include "framelet/basis.hpp"
#include "framelet/transform.hpp"

namespace framelet {

/// Points (i, k) / (resolution - 1) of the square grid that fall in T2, row-major in i.
[[nodiscard]] std::vector<SimplexPoint> simplex_grid(int resolution);

/// framelet_eval at every point, with the translation node expanded once.
/// The parallel policy splits points across threads; each value is computed identically.
[[nodiscard]] std::vector<double> sample_framelet(const FrameletSystem& sys, FrameletKind kind, int j, std::size_t k,
                                                  std::span<const SimplexPoint> points,
                                                  ExecPolicy policy = ExecPolicy::parallel);

struct Localization {
  std::size_t argmax = 0;      // index of the largest |value|
  double peak = 0.0;           // that |value|
  double mass_radius = 0.0;    // smallest distance from center holding `fraction` of sum value^2
};

[[nodiscard]] Localization localization(std::span<const SimplexPoint> points, std::span<const double> values,
                                        const SimplexPoint& center, double fraction = 0.9);

}  // namespace framelet
