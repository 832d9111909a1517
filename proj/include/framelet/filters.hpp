#pragma once

#include <span>
#include <string>
#include <vector>

namespace framelet {

/// nu(t) = t^4 (35 - 84t + 70t^2 - 20t^3); smooth ramp with nu(t) + nu(1-t) = 1.
[[nodiscard]] double nu(double t);

/// Closed-form branch of a piecewise symbol. Trigonometric kinds are evaluated at
/// theta = (pi/2) * nu(scale * |xi| - 1).
struct SymbolBranch {
  enum class Kind { constant, cos_nu, sin_nu, cos_sq_nu, cos_sin_nu };

  Kind kind = Kind::constant;
  double value = 0.0;  // constant only
  double scale = 1.0;  // trigonometric kinds only

  [[nodiscard]] double operator()(double abs_xi) const;
};

/// One interval of |xi| on which a single branch applies.
struct SymbolPiece {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;
  SymbolBranch branch;

  [[nodiscard]] bool contains(double abs_xi) const;
};

/// Real symbol of |xi|, zero outside its pieces. The first piece containing |xi| wins.
class SpectralSymbol {
 public:
  SpectralSymbol() = default;
  explicit SpectralSymbol(std::vector<SymbolPiece> pieces);

  [[nodiscard]] double operator()(double xi) const;
  [[nodiscard]] const std::vector<SymbolPiece>& pieces() const { return pieces_; }

  /// Smallest interval containing every piece with a nonzero branch.
  [[nodiscard]] double support_lo() const { return support_lo_; }
  [[nodiscard]] double support_hi() const { return support_hi_; }

  /// Sorted interior piece boundaries.
  [[nodiscard]] std::vector<double> breakpoints() const;

 private:
  std::vector<SymbolPiece> pieces_;
  double support_lo_ = 0.0;
  double support_hi_ = 0.0;
};

[[nodiscard]] inline double eval_symbol(const SpectralSymbol& s, double xi) { return s(xi); }

/// Masks {a; b_1..b_r} with the scaling-function symbols {alpha; beta^1..beta^r} they refine.
class FilterBank {
 public:
  FilterBank(std::string name, SpectralSymbol low, std::vector<SpectralSymbol> highs,
             SpectralSymbol scaling_low, std::vector<SpectralSymbol> scaling_highs);

  /// The two-high-pass bank built from nu, with alpha supported in [0,1/2].
  static FilterBank dau2_simplex_r2();
  static constexpr const char* kShippedName = "dau2-simplex-r2";

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] int r() const { return static_cast<int>(highs_.size()); }
  [[nodiscard]] const SpectralSymbol& low() const { return low_; }
  [[nodiscard]] const SpectralSymbol& high(int n) const { return highs_.at(static_cast<std::size_t>(n)); }
  [[nodiscard]] const std::vector<SpectralSymbol>& highs() const { return highs_; }
  [[nodiscard]] const SpectralSymbol& scaling_low() const { return scaling_low_; }
  [[nodiscard]] const SpectralSymbol& scaling_high(int n) const {
    return scaling_highs_.at(static_cast<std::size_t>(n));
  }
  [[nodiscard]] const std::vector<SpectralSymbol>& scaling_highs() const { return scaling_highs_; }

 private:
  std::string name_;
  SpectralSymbol low_;
  std::vector<SpectralSymbol> highs_;
  SpectralSymbol scaling_low_;
  std::vector<SpectralSymbol> scaling_highs_;
};

/// max over grid of | |a|^2 + sum_n |b_n|^2 - 1 |.
[[nodiscard]] double check_partition(const FilterBank& bank, std::span<const double> grid);

/// max over grid of the residuals of alpha(2xi) = a(xi) alpha(xi) and beta^n(2xi) = b_n(xi) alpha(xi).
[[nodiscard]] double check_refinement(const FilterBank& bank, std::span<const double> grid);

/// |a(lambda_ell / 2^j_max) - 1|.
[[nodiscard]] double check_limit_lowpass(const FilterBank& bank, int ell, int j_max);

/// count points evenly spaced on [lo, hi], endpoints included.
[[nodiscard]] std::vector<double> uniform_grid(double lo, double hi, std::size_t count);

}  // namespace framelet
