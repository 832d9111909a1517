#include "framelet/basis.hpp"

#include <algorithm>
#include <cmath>

namespace framelet {

bool in_simplex(const SimplexPoint& x, double tol) {
  return x.x1 >= -tol && x.x2 >= -tol && x.x1 + x.x2 <= 1.0 + tol;
}

BasisIndex basis_index(std::size_t linear) {
  auto ell = static_cast<std::size_t>((std::sqrt(8.0 * static_cast<double>(linear) + 1.0) - 1.0) / 2.0);
  while (ell * (ell + 1) / 2 > linear) --ell;
  while ((ell + 1) * (ell + 2) / 2 <= linear) ++ell;
  return {static_cast<int>(ell), static_cast<int>(linear - ell * (ell + 1) / 2)};
}

double jacobi_eval(double tau, double gamma, int ell, double t) {
  if (tau <= -1.0 || gamma <= -1.0) {
    throw DomainError("jacobi_eval: parameters must exceed -1");
  }
  if (ell < 0) throw DomainError("jacobi_eval: negative degree");
  if (ell == 0) return 1.0;

  const double a = tau;
  const double b = gamma;
  double p_prev = 1.0;
  double p = 0.5 * ((a + b + 2.0) * t + (a - b));
  for (int n = 2; n <= ell; ++n) {
    const double c = 2.0 * n + a + b;
    const double a1 = 2.0 * n * (n + a + b) * (c - 2.0);
    const double a2 = (c - 1.0) * (a * a - b * b);
    const double a3 = (c - 2.0) * (c - 1.0) * c;
    const double a4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * c;
    const double next = ((a2 + a3 * t) * p - a4 * p_prev) / a1;
    p_prev = p;
    p = next;
  }
  return p;
}

void basis_eval_all(int cutoff, const SimplexPoint& x, std::span<double> out) {
  if (cutoff < 0) return;
  const double s = 1.0 - x.x1;
  const double t = 2.0 * x.x1 - 1.0;
  // q_m = (1-x1)^m P_m(2x2/(1-x1) - 1), via the Legendre recurrence multiplied through by (1-x1)^m.
  const double y = 2.0 * x.x2 - s;
  const double s2 = s * s;

  double q_prev = 0.0;
  double q = 1.0;
  for (int m = 0; m <= cutoff; ++m) {
    if (m == 1) {
      q_prev = 1.0;
      q = y;
    } else if (m >= 2) {
      const double next = ((2.0 * m - 1.0) * y * q - (m - 1.0) * s2 * q_prev) / m;
      q_prev = q;
      q = next;
    }

    // P^{(2m+1,0)}_n(t), n = 0..cutoff-m
    const double a = 2.0 * m + 1.0;
    double p_prev = 0.0;
    double p = 1.0;
    for (int n = 0; n + m <= cutoff; ++n) {
      if (n == 1) {
        p_prev = 1.0;
        p = 0.5 * ((a + 2.0) * t + a);
      } else if (n >= 2) {
        const double c = 2.0 * n + a;
        const double a1 = 2.0 * n * (n + a) * (c - 2.0);
        const double a2 = (c - 1.0) * a * a;
        const double a3 = (c - 2.0) * (c - 1.0) * c;
        const double a4 = 2.0 * (n + a - 1.0) * (n - 1.0) * c;
        const double next = ((a2 + a3 * t) * p - a4 * p_prev) / a1;
        p_prev = p;
        p = next;
      }
      const int ell = n + m;
      const double scale = std::sqrt((ell + 1.0) * (2.0 * m + 1.0));
      out[linear_index({ell, m})] = scale * p * q;
    }
  }
}

double basis_eval(BasisIndex idx, const SimplexPoint& x) {
  if (idx.ell < 0 || idx.m < 0 || idx.m > idx.ell) {
    throw DomainError("basis_eval: index requires 0 <= m <= ell");
  }
  if (!in_simplex(x)) throw DomainError("basis_eval: point outside the simplex");

  const double s = 1.0 - x.x1;
  const double y = 2.0 * x.x2 - s;
  double q_prev = 1.0;
  double q = (idx.m == 0) ? 1.0 : y;
  for (int m = 2; m <= idx.m; ++m) {
    const double next = ((2.0 * m - 1.0) * y * q - (m - 1.0) * s * s * q_prev) / m;
    q_prev = q;
    q = next;
  }
  const double p = jacobi_eval(2.0 * idx.m + 1.0, 0.0, idx.ell - idx.m, 2.0 * x.x1 - 1.0);
  return std::sqrt((idx.ell + 1.0) * (2.0 * idx.m + 1.0)) * p * q;
}

double eigenvalue(int ell) {
  if (ell < 0) throw DomainError("eigenvalue: negative degree");
  return std::sqrt(static_cast<double>(ell) * (ell + 2.0));
}

int max_degree_with_eigenvalue_at_most(double bound) {
  if (bound < 0.0) return -1;
  const double b2 = bound * bound;
  auto fits = [b2](double l) { return l * (l + 2.0) <= b2; };
  auto ell = static_cast<int>(std::floor(std::sqrt(b2 + 1.0) - 1.0));
  ell = std::max(ell, 0);
  while (fits(ell + 1.0)) ++ell;
  while (ell > 0 && !fits(ell)) --ell;
  return ell;
}

int degree_cutoff(int j) {
  if (j < 0) throw DomainError("degree_cutoff: negative level");
  return max_degree_with_eigenvalue_at_most(std::ldexp(1.0, j - 1));
}

double laplace_beltrami_apply(const std::function<double(const SimplexPoint&)>& f,
                              const SimplexPoint& x, double h) {
  if (!(h > 0.0)) throw DomainError("laplace_beltrami_apply: step must be positive");
  const double x1 = x.x1;
  const double x2 = x.x2;
  // Fourth-order stencils reaching 2h along e1, e2 and e1 - e2; the last keeps x1 + x2 fixed.
  if (x1 - 2.0 * h < 0.0 || x2 - 2.0 * h < 0.0 || x1 + x2 + 2.0 * h > 1.0) {
    throw DomainError("laplace_beltrami_apply: stencil leaves the simplex");
  }

  const double f0 = f(x);
  auto at = [&](double s, double d1, double d2) { return f({x1 + s * h * d1, x2 + s * h * d2}); };
  // Second and first directional derivatives along (d1, d2).
  auto second = [&](double d1, double d2) {
    return (-at(2, d1, d2) + 16.0 * at(1, d1, d2) - 30.0 * f0 + 16.0 * at(-1, d1, d2) - at(-2, d1, d2)) /
           (12.0 * h * h);
  };
  auto first = [&](double d1, double d2) {
    return (-at(2, d1, d2) + 8.0 * at(1, d1, d2) - 8.0 * at(-1, d1, d2) + at(-2, d1, d2)) / (12.0 * h);
  };

  const double d11 = second(1, 0);
  const double d22 = second(0, 1);
  const double d12 = 0.5 * (d11 + d22 - second(1, -1));
  const double d1 = first(1, 0);
  const double d2 = first(0, 1);

  return x1 * (1.0 - x1) * d11 + x2 * (1.0 - x2) * d22 - 2.0 * x1 * x2 * d12 +
         (1.0 - 3.0 * x1) * d1 + (1.0 - 3.0 * x2) * d2;
}

SpectralVector::SpectralVector(int cutoff) : cutoff_(cutoff), coeffs_(spectral_dim(cutoff)) {
  if (cutoff < 0) throw DomainError("SpectralVector: negative cutoff");
}

SpectralVector::SpectralVector(int cutoff, std::vector<Complex> coeffs)
    : cutoff_(cutoff), coeffs_(std::move(coeffs)) {
  if (cutoff < 0) throw DomainError("SpectralVector: negative cutoff");
  if (coeffs_.size() != spectral_dim(cutoff)) {
    throw std::invalid_argument("SpectralVector: expected " + std::to_string(spectral_dim(cutoff)) +
                                " coefficients for cutoff " + std::to_string(cutoff) + ", got " +
                                std::to_string(coeffs_.size()));
  }
}

Complex& SpectralVector::at(BasisIndex idx) {
  if (idx.m < 0 || idx.m > idx.ell || idx.ell > cutoff_) throw std::out_of_range("SpectralVector::at");
  return coeffs_[linear_index(idx)];
}

const Complex& SpectralVector::at(BasisIndex idx) const {
  if (idx.m < 0 || idx.m > idx.ell || idx.ell > cutoff_) throw std::out_of_range("SpectralVector::at");
  return coeffs_[linear_index(idx)];
}

SpectralVector SpectralVector::resized(int cutoff) const {
  SpectralVector out(cutoff);
  const std::size_t n = std::min(out.size(), size());
  std::copy_n(coeffs_.begin(), n, out.coeffs_.begin());
  return out;
}

double SpectralVector::norm() const {
  double sum = 0.0;
  for (const auto& c : coeffs_) sum += std::norm(c);
  return std::sqrt(sum);
}

double max_abs_diff(const SpectralVector& a, const SpectralVector& b) {
  const std::size_t n = std::max(a.size(), b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex ai = i < a.size() ? a[i] : Complex{};
    const Complex bi = i < b.size() ? b[i] : Complex{};
    worst = std::max(worst, std::abs(ai - bi));
  }
  return worst;
}

}  // namespace framelet
