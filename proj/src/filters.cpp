#include "framelet/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "framelet/basis.hpp"

namespace framelet {

namespace {

double nu_power_form(double t) {
  const double t2 = t * t;
  return t2 * t2 * (35.0 - 84.0 * t + 70.0 * t2 - 20.0 * t2 * t);
}

}  // namespace

// The power form cancels badly near t = 1, so the upper half uses nu(t) = 1 - nu(1 - t).
double nu(double t) { return t <= 0.5 ? nu_power_form(t) : 1.0 - nu_power_form(1.0 - t); }

double SymbolBranch::operator()(double abs_xi) const {
  if (kind == Kind::constant) return value;
  const double theta = 0.5 * std::numbers::pi * nu(scale * abs_xi - 1.0);
  switch (kind) {
    case Kind::cos_nu:
      return std::cos(theta);
    case Kind::sin_nu:
      return std::sin(theta);
    case Kind::cos_sq_nu: {
      const double c = std::cos(theta);
      return c * c;
    }
    case Kind::cos_sin_nu:
      return std::cos(theta) * std::sin(theta);
    case Kind::constant:
      break;
  }
  return value;
}

bool SymbolPiece::contains(double abs_xi) const {
  const bool above = lo_closed ? abs_xi >= lo : abs_xi > lo;
  const bool below = hi_closed ? abs_xi <= hi : abs_xi < hi;
  return above && below;
}

SpectralSymbol::SpectralSymbol(std::vector<SymbolPiece> pieces) : pieces_(std::move(pieces)) {
  bool any = false;
  for (const auto& p : pieces_) {
    if (!(p.lo <= p.hi) || p.lo < 0.0) throw std::invalid_argument("SpectralSymbol: bad piece interval");
    const bool zero = p.branch.kind == SymbolBranch::Kind::constant && p.branch.value == 0.0;
    if (zero) continue;
    support_lo_ = any ? std::min(support_lo_, p.lo) : p.lo;
    support_hi_ = any ? std::max(support_hi_, p.hi) : p.hi;
    any = true;
  }
}

double SpectralSymbol::operator()(double xi) const {
  const double a = std::abs(xi);
  for (const auto& p : pieces_) {
    if (p.contains(a)) return p.branch(a);
  }
  return 0.0;
}

std::vector<double> SpectralSymbol::breakpoints() const {
  std::vector<double> out;
  for (const auto& p : pieces_) {
    out.push_back(p.lo);
    out.push_back(p.hi);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FilterBank::FilterBank(std::string name, SpectralSymbol low, std::vector<SpectralSymbol> highs,
                       SpectralSymbol scaling_low, std::vector<SpectralSymbol> scaling_highs)
    : name_(std::move(name)),
      low_(std::move(low)),
      highs_(std::move(highs)),
      scaling_low_(std::move(scaling_low)),
      scaling_highs_(std::move(scaling_highs)) {
  if (highs_.empty()) throw std::invalid_argument("FilterBank: at least one high-pass is required");
  if (highs_.size() != scaling_highs_.size()) {
    throw std::invalid_argument("FilterBank: high-pass and scaling-function counts differ");
  }
  if (scaling_low_.support_hi() > 0.5) {
    throw std::invalid_argument("FilterBank: low-pass scaling symbol must vanish beyond 1/2");
  }
  for (const auto& s : scaling_highs_) {
    if (s.support_hi() > 1.0) {
      throw std::invalid_argument("FilterBank: high-pass scaling symbols must vanish beyond 1");
    }
  }
}

FilterBank FilterBank::dau2_simplex_r2() {
  using K = SymbolBranch::Kind;
  auto constant = [](double v) { return SymbolBranch{K::constant, v, 1.0}; };
  auto trig = [](K k, double scale) { return SymbolBranch{k, 0.0, scale}; };

  SpectralSymbol a({
      {0.0, 0.125, true, false, constant(1.0)},
      {0.125, 0.25, true, true, trig(K::cos_nu, 8.0)},
  });
  SpectralSymbol b1({
      {0.125, 0.25, true, true, trig(K::sin_nu, 8.0)},
      {0.25, 0.5, false, true, trig(K::cos_nu, 4.0)},
  });
  SpectralSymbol b2({
      {0.25, 0.5, true, true, trig(K::sin_nu, 4.0)},
  });
  SpectralSymbol alpha({
      {0.0, 0.25, true, false, constant(1.0)},
      {0.25, 0.5, true, true, trig(K::cos_nu, 4.0)},
  });
  SpectralSymbol beta1({
      {0.25, 0.5, true, false, trig(K::sin_nu, 4.0)},
      {0.5, 1.0, true, true, trig(K::cos_sq_nu, 2.0)},
  });
  SpectralSymbol beta2({
      {0.5, 1.0, true, true, trig(K::cos_sin_nu, 2.0)},
  });
  return FilterBank(kShippedName, std::move(a), {std::move(b1), std::move(b2)}, std::move(alpha),
                    {std::move(beta1), std::move(beta2)});
}

double check_partition(const FilterBank& bank, std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("check_partition: empty grid");
  double worst = 0.0;
  for (double xi : grid) {
    const double a = bank.low()(xi);
    double sum = a * a;
    for (const auto& b : bank.highs()) {
      const double v = b(xi);
      sum += v * v;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

double check_refinement(const FilterBank& bank, std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("check_refinement: empty grid");
  double worst = 0.0;
  for (double xi : grid) {
    const double alpha = bank.scaling_low()(xi);
    worst = std::max(worst, std::abs(bank.scaling_low()(2.0 * xi) - bank.low()(xi) * alpha));
    for (int n = 0; n < bank.r(); ++n) {
      worst = std::max(worst, std::abs(bank.scaling_high(n)(2.0 * xi) - bank.high(n)(xi) * alpha));
    }
  }
  return worst;
}

double check_limit_lowpass(const FilterBank& bank, int ell, int j_max) {
  if (j_max < 1) throw std::invalid_argument("check_limit_lowpass: j_max must be >= 1");
  return std::abs(bank.low()(std::ldexp(eigenvalue(ell), -j_max)) - 1.0);
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t count) {
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return grid;
}

}  // namespace framelet
