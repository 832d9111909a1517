#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace framelet {

using Complex = std::complex<double>;

/// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A point of the closed triangle T2 = {x1 >= 0, x2 >= 0, x1 + x2 <= 1}.
struct SimplexPoint {
  double x1 = 0.0;
  double x2 = 0.0;

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;
};

[[nodiscard]] bool in_simplex(const SimplexPoint& x, double tol = 1e-12);

/// Degree ell and within-degree index m (0 <= m <= ell) of the orthonormal polynomial P_{ell,m}.
struct BasisIndex {
  int ell = 0;
  int m = 0;

  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

/// Number of basis functions of total degree <= cutoff.
[[nodiscard]] constexpr std::size_t spectral_dim(int cutoff) {
  if (cutoff < 0) return 0;
  const auto c = static_cast<std::size_t>(cutoff);
  return (c + 1) * (c + 2) / 2;
}

/// Degree-major linearization: all of degree 0, then degree 1, ...
[[nodiscard]] constexpr std::size_t linear_index(BasisIndex idx) {
  const auto l = static_cast<std::size_t>(idx.ell);
  return l * (l + 1) / 2 + static_cast<std::size_t>(idx.m);
}

[[nodiscard]] BasisIndex basis_index(std::size_t linear);

/// Standard (unnormalized) Jacobi polynomial P_ell^{(tau,gamma)}(t) by forward recurrence.
[[nodiscard]] double jacobi_eval(double tau, double gamma, int ell, double t);

/// Orthonormal basis of L2(T2) w.r.t. the normalized area measure:
///   P_{l,m}(x) = sqrt((l+1)(2m+1)) P^{(2m+1,0)}_{l-m}(2x1-1) (1-x1)^m P_m(2x2/(1-x1) - 1).
/// Continuous at the corner x1 = 1.
[[nodiscard]] double basis_eval(BasisIndex idx, const SimplexPoint& x);

/// Evaluates every P_{l,m} with l <= cutoff at x into out (size spectral_dim(cutoff)),
/// ordered by linear_index. No domain check; O(cutoff^2).
void basis_eval_all(int cutoff, const SimplexPoint& x, std::span<double> out);

/// Square-rooted Laplace-Beltrami eigenvalue sqrt(l(l+2)).
[[nodiscard]] double eigenvalue(int ell);

/// Largest ell with eigenvalue(ell) <= bound, or -1 when bound < 0.
[[nodiscard]] int max_degree_with_eigenvalue_at_most(double bound);

/// Lambda_j: largest ell with eigenvalue(ell) <= 2^{j-1}.
[[nodiscard]] int degree_cutoff(int j);

/// Central-difference approximation of the Laplace-Beltrami operator
///   x1(1-x1) f_11 + x2(1-x2) f_22 - 2 x1 x2 f_12 + (1-3x1) f_1 + (1-3x2) f_2
/// at an interior point, with fourth-order stencils of reach 2h. The mixed
/// derivative comes from the second derivative along e1 - e2, so the stencil
/// never moves toward the hypotenuse by more than 2h. Throws DomainError if the
/// stencil leaves T2.
[[nodiscard]] double laplace_beltrami_apply(const std::function<double(const SimplexPoint&)>& f,
                                            const SimplexPoint& x, double h);

/// Dense coefficient vector over all BasisIndex with ell <= cutoff.
class SpectralVector {
 public:
  SpectralVector() : SpectralVector(0) {}
  explicit SpectralVector(int cutoff);
  SpectralVector(int cutoff, std::vector<Complex> coeffs);

  [[nodiscard]] int cutoff() const { return cutoff_; }
  [[nodiscard]] std::size_t size() const { return coeffs_.size(); }

  [[nodiscard]] Complex& operator[](std::size_t linear) { return coeffs_[linear]; }
  [[nodiscard]] const Complex& operator[](std::size_t linear) const { return coeffs_[linear]; }
  [[nodiscard]] Complex& at(BasisIndex idx);
  [[nodiscard]] const Complex& at(BasisIndex idx) const;

  [[nodiscard]] std::span<Complex> coeffs() { return coeffs_; }
  [[nodiscard]] std::span<const Complex> coeffs() const { return coeffs_; }

  /// Copy with a new cutoff; drops higher degrees or zero-pads.
  [[nodiscard]] SpectralVector resized(int cutoff) const;

  [[nodiscard]] double norm() const;

 private:
  int cutoff_ = 0;
  std::vector<Complex> coeffs_;
};

/// Max |a_i - b_i| with the shorter vector zero-extended.
[[nodiscard]] double max_abs_diff(const SpectralVector& a, const SpectralVector& b);

}  // namespace framelet
