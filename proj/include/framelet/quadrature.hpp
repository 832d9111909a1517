#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "framelet/basis.hpp"
#include "framelet/filters.hpp"
#include "framelet/kernels.hpp"

namespace framelet {

enum class RuleKind { kronecker_lattice, gauss_reference, custom };
enum class LatticeStrategy { fold, intersect };

[[nodiscard]] std::string to_string(RuleKind kind);
[[nodiscard]] std::string to_string(LatticeStrategy strategy);
[[nodiscard]] RuleKind rule_kind_from_string(const std::string& s);
[[nodiscard]] LatticeStrategy lattice_strategy_from_string(const std::string& s);

/// Construction parameters of a Kronecker lattice.
struct LatticeParams {
  std::array<double, 2> generator{};
  std::array<double, 2> shift{0.0, 0.0};
  LatticeStrategy strategy = LatticeStrategy::fold;

  /// generator (frac(sqrt 2), frac(sqrt 3)), zero shift, fold.
  static LatticeParams defaults();

  friend bool operator==(const LatticeParams&, const LatticeParams&) = default;
};

/// Weighted node set on T2. Immutable once built.
class QuadratureRule {
 public:
  QuadratureRule(std::vector<SimplexPoint> nodes, std::vector<double> weights, RuleKind kind,
                 std::optional<int> level = std::nullopt, std::optional<LatticeParams> lattice = std::nullopt,
                 std::optional<int> exact_degree = std::nullopt);

  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] const std::vector<SimplexPoint>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
  [[nodiscard]] RuleKind kind() const { return kind_; }
  [[nodiscard]] std::optional<int> level() const { return level_; }
  [[nodiscard]] const std::optional<LatticeParams>& lattice() const { return lattice_; }
  /// Polynomial degree the construction guarantees (reference rules only).
  [[nodiscard]] std::optional<int> exact_degree() const { return exact_degree_; }

  /// Identifier used by coefficient sequences to name the rule they live on.
  [[nodiscard]] std::string id() const;

 private:
  std::vector<SimplexPoint> nodes_;
  std::vector<double> weights_;
  RuleKind kind_;
  std::optional<int> level_;
  std::optional<LatticeParams> lattice_;
  std::optional<int> exact_degree_;
};

/// Node count 2^{2j} + 1 of the level-j lattice.
[[nodiscard]] std::size_t lattice_size(int j);

/// Equal-weight triangular Kronecker lattice with 2^{2j} + 1 nodes.
///   fold:      points ({i g1 + s1}, {i g2 + s2}) of the unit square, reflecting x+y > 1 to (1-x, 1-y).
///   intersect: the first 2^{2j} + 1 square points that already lie in T2 (at most 8x candidates).
[[nodiscard]] QuadratureRule kronecker_lattice(int j, const LatticeParams& params = LatticeParams::defaults());

/// Collapsed-coordinate Gauss rule exact for polynomials of total degree <= degree (<= 128),
/// normalized to unit mass.
[[nodiscard]] QuadratureRule gauss_reference_rule(int degree);

/// sum_k w_k f(x_k)
[[nodiscard]] Complex integrate(const QuadratureRule& rule,
                                const std::function<Complex(const SimplexPoint&)>& f);

/// Largest L <= max_degree such that every P_{l,m} with l <= L integrates to delta_{l,0}
/// within tol; -1 if constants already fail.
[[nodiscard]] int exactness_degree(const QuadratureRule& rule, double tol, int max_degree = 64);

/// U_{(l,m),(l',m')} = sum_k w_k P_{l,m}(x_k) conj(P_{l',m'}(x_k)) for l, l' <= cutoff.
class GramMatrix {
 public:
  GramMatrix(int cutoff, std::vector<Complex> entries);

  [[nodiscard]] int cutoff() const { return cutoff_; }
  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] const Complex& operator()(std::size_t i, std::size_t ip) const { return entries_[i * dim_ + ip]; }
  [[nodiscard]] const Complex& operator()(BasisIndex a, BasisIndex b) const {
    return (*this)(linear_index(a), linear_index(b));
  }

  /// max |U - I| over all entries.
  [[nodiscard]] double max_deviation_from_identity() const;
  /// max |U_{i,i'}| over i != i'.
  [[nodiscard]] double max_off_diagonal() const;

 private:
  int cutoff_;
  std::size_t dim_;
  std::vector<Complex> entries_;
};

[[nodiscard]] GramMatrix gram_matrix(const QuadratureRule& rule, int cutoff,
                                     ExecPolicy policy = ExecPolicy::parallel);

/// Largest residual of
///   conj(a_l) a_l' U_lo + sum_n conj(b_n,l) b_n,l' U_hi = U_hi
/// (symbols at lambda/2^j) over index pairs with l, l' <= cutoff and alpha(lambda_l/2^j) alpha(lambda_l'/2^j) != 0.
[[nodiscard]] double generalized_tightness_residual(const QuadratureRule& rule_lo,
                                                    const QuadratureRule& rule_hi, const FilterBank& bank,
                                                    int j, int cutoff);

}  // namespace framelet
