#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "framelet/basis.hpp"
#include "framelet/filters.hpp"
#include "framelet/kernels.hpp"
#include "framelet/quadrature.hpp"

namespace framelet {

/// Framelet coefficients on one quadrature rule: point values (v)_k together with
/// the spectral coefficients they were synthesized from,
///   (v)_k = sqrt(w_k) sum_{l,m} spectral_{l,m} P_{l,m}(x_k).
/// `level` is the level of the rule the values live on; high-pass coefficients
/// w^n_{j-1} therefore carry level j.
struct CoefficientSequence {
  int level = 0;
  std::string rule_ref;
  std::vector<Complex> values;
  std::optional<SpectralVector> spectral;
};

/// Filter bank plus one quadrature rule per level 0..J, with cached basis tables.
class FrameletSystem {
 public:
  FrameletSystem(FilterBank bank, std::vector<QuadratureRule> rules, ExecPolicy policy = ExecPolicy::parallel);

  /// Kronecker lattices Q_{N_j}, N_j = 2^{2j} + 1, for j = 0..top.
  static FrameletSystem kronecker(FilterBank bank, int top, const LatticeParams& params = LatticeParams::defaults(),
                                  ExecPolicy policy = ExecPolicy::parallel);
  /// Reference rules exact to degree 2 * degree_cutoff(j) at each level j = 0..top.
  static FrameletSystem exact(FilterBank bank, int top, ExecPolicy policy = ExecPolicy::parallel);

  [[nodiscard]] const FilterBank& bank() const { return bank_; }
  [[nodiscard]] int top_level() const { return static_cast<int>(rules_.size()) - 1; }
  [[nodiscard]] const QuadratureRule& rule(int j) const;
  [[nodiscard]] ExecPolicy policy() const { return policy_; }
  void set_policy(ExecPolicy policy) { policy_ = policy; }

  /// Point values of `spectral` on the level-j rule (direct DFT for any cutoff).
  [[nodiscard]] std::vector<Complex> synthesize(int j, const SpectralVector& spectral) const;
  /// Adjoint of synthesize, truncated at `cutoff`.
  [[nodiscard]] SpectralVector adjoint(int j, std::span<const Complex> values, int cutoff) const;

  /// Wraps a spectral vector as a sequence on the level-j rule.
  [[nodiscard]] CoefficientSequence make_sequence(int j, SpectralVector spectral) const;

 private:
  void check_level(int j) const;

  FilterBank bank_;
  std::vector<QuadratureRule> rules_;
  std::vector<std::vector<double>> sqrt_weights_;
  std::vector<kernels::BasisTable> tables_;  // cutoff degree_cutoff(j), or empty when too large
  ExecPolicy policy_;
};

enum class Channel { low, high };

/// Low-pass phi_{j,k}, or high-pass psi^n_{j,k'} with n counted from 0.
struct FrameletKind {
  Channel channel = Channel::low;
  int n = 0;
};

/// phi_{j,k}(x) = sqrt(w_{j,k}) sum_l alpha(lambda_l/2^j) sum_m P(x_{j,k}) P(x), or
/// psi^n_{j,k'}(x) with beta^n and the level-(j+1) node x_{j+1,k'}. Node indices are 0-based.
[[nodiscard]] double framelet_eval(const FrameletSystem& sys, FrameletKind kind, int j, std::size_t k,
                                   const SimplexPoint& x);

/// Translation node of a framelet (x_{j,k} or x_{j+1,k'}).
[[nodiscard]] SimplexPoint framelet_center(const FrameletSystem& sys, FrameletKind kind, int j, std::size_t k);

/// v_j and w^1_j..w^r_j; high-pass entries live on the level-(j+1) rule.
struct LevelCoefficients {
  CoefficientSequence low;
  std::vector<CoefficientSequence> high;
};

/// v_j = <f, phi_{j,k}>: spectral conj(alpha(lambda_l/2^j)) f_l, needs rule j.
[[nodiscard]] CoefficientSequence analyze_low(const FrameletSystem& sys, const SpectralVector& f, int j);
/// w^n_j = <f, psi^n_{j,k'}>: spectral conj(beta^n(lambda_l/2^j)) f_l, needs rule j+1.
[[nodiscard]] std::vector<CoefficientSequence> analyze_high(const FrameletSystem& sys, const SpectralVector& f, int j);
/// Both channels; requires j + 1 <= top level.
[[nodiscard]] LevelCoefficients analyze(const FrameletSystem& sys, const SpectralVector& f, int j);

/// v *_j h (or h* when conjugate): spectral v_l h(lambda_l/2^j), values resynthesized on the same rule.
/// The spectrum is truncated at the symbol's support edge.
[[nodiscard]] CoefficientSequence convolve(const FrameletSystem& sys, const CoefficientSequence& v,
                                           const SpectralSymbol& s, bool conjugate);
/// Level j -> j-1, keeping lambda_l <= 2^{j-1}.
[[nodiscard]] CoefficientSequence downsample(const FrameletSystem& sys, const CoefficientSequence& v);
/// Level j-1 -> j, keeping lambda_l <= 2^{j-2}.
[[nodiscard]] CoefficientSequence upsample(const FrameletSystem& sys, const CoefficientSequence& v);

/// v_{j-1} = (v_j *_j a*) downsampled, w^n_{j-1} = v_j *_j b_n*.
[[nodiscard]] LevelCoefficients decompose(const FrameletSystem& sys, const CoefficientSequence& v_j);
/// v_j = (v_{j-1} upsampled) *_j a + sum_n w^n_{j-1} *_j b_n.
[[nodiscard]] CoefficientSequence reconstruct(const FrameletSystem& sys, const LevelCoefficients& coarse);

/// v_0 and w^n_j for j = 0..J-1 (high[j][n]).
struct CoefficientTree {
  int top = 0;
  CoefficientSequence v0;
  std::vector<std::vector<CoefficientSequence>> high;

  [[nodiscard]] std::size_t coefficient_count() const;
};

[[nodiscard]] CoefficientTree multilevel_decompose(const FrameletSystem& sys, const CoefficientSequence& v_top);
[[nodiscard]] CoefficientSequence multilevel_reconstruct(const FrameletSystem& sys, const CoefficientTree& tree);

/// (F_j u)_k = sum_{l <= Lambda_j} u_l sqrt(w_k) P_l(x_k).
[[nodiscard]] std::vector<Complex> dft(const SpectralVector& u, int j, const QuadratureRule& rule,
                                       ExecPolicy policy = ExecPolicy::parallel);
/// (F*_j v)_l = sum_k v_k sqrt(w_k) conj(P_l(x_k)), l <= Lambda_j.
[[nodiscard]] SpectralVector adjoint_dft(std::span<const Complex> v, int j, const QuadratureRule& rule,
                                         ExecPolicy policy = ExecPolicy::parallel);

struct ParsevalLevel {
  int j = 0;
  double fine = 0.0;    // sum_k |<f, phi_{j+1,k}>|^2
  double coarse = 0.0;  // sum_k |<f, phi_{j,k}>|^2
  double high = 0.0;    // sum_{k,n} |<f, psi^n_{j,k}>|^2
  double residual = 0.0;  // fine - coarse - high
};

struct ParsevalReport {
  std::vector<ParsevalLevel> levels;  // j = 0..J-1
  double top_energy = 0.0;            // sum_k |<f, phi_{J,k}>|^2
  double norm_sq = 0.0;               // ||f||^2 from the spectral coefficients
  double top_residual = 0.0;          // top_energy - norm_sq

  [[nodiscard]] double max_level_residual() const;
};

[[nodiscard]] ParsevalReport parseval_report(const FrameletSystem& sys, const SpectralVector& f, int top);

/// ||a - b|| / ||b|| on point values, with an absolute fallback when b is zero.
[[nodiscard]] double relative_error(std::span<const Complex> a, std::span<const Complex> b);
/// Same on spectra (zero-extended to a common cutoff).
[[nodiscard]] double relative_error(const SpectralVector& a, const SpectralVector& b);

}  // namespace framelet
