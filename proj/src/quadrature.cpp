#include "framelet/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace framelet {

std::string to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::kronecker_lattice:
      return "kronecker_lattice";
    case RuleKind::gauss_reference:
      return "gauss_reference";
    case RuleKind::custom:
      return "custom";
  }
  return "custom";
}

std::string to_string(LatticeStrategy strategy) {
  return strategy == LatticeStrategy::fold ? "fold" : "intersect";
}

RuleKind rule_kind_from_string(const std::string& s) {
  if (s == "kronecker_lattice") return RuleKind::kronecker_lattice;
  if (s == "gauss_reference") return RuleKind::gauss_reference;
  if (s == "custom") return RuleKind::custom;
  throw std::invalid_argument("unknown rule kind '" + s + "'");
}

LatticeStrategy lattice_strategy_from_string(const std::string& s) {
  if (s == "fold") return LatticeStrategy::fold;
  if (s == "intersect") return LatticeStrategy::intersect;
  throw std::invalid_argument("unknown lattice strategy '" + s + "' (expected fold or intersect)");
}

LatticeParams LatticeParams::defaults() {
  return {{std::sqrt(2.0) - 1.0, std::sqrt(3.0) - 1.0}, {0.0, 0.0}, LatticeStrategy::fold};
}

QuadratureRule::QuadratureRule(std::vector<SimplexPoint> nodes, std::vector<double> weights, RuleKind kind,
                               std::optional<int> level, std::optional<LatticeParams> lattice,
                               std::optional<int> exact_degree)
    : nodes_(std::move(nodes)),
      weights_(std::move(weights)),
      kind_(kind),
      level_(level),
      lattice_(lattice),
      exact_degree_(exact_degree) {
  if (nodes_.empty()) throw std::invalid_argument("QuadratureRule: no nodes");
  if (nodes_.size() != weights_.size()) throw std::invalid_argument("QuadratureRule: node/weight count mismatch");
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (!in_simplex(nodes_[k])) {
      throw DomainError("QuadratureRule: node " + std::to_string(k) + " lies outside the simplex");
    }
    if (weights_[k] == 0.0 || !std::isfinite(weights_[k])) {
      throw std::invalid_argument("QuadratureRule: weights must be finite and nonzero");
    }
  }
  if (level_ && *level_ < 0) throw std::invalid_argument("QuadratureRule: negative level");
  if (kind_ == RuleKind::kronecker_lattice) {
    if (!level_) throw std::invalid_argument("QuadratureRule: lattice rules need a level");
    if (nodes_.size() < (std::size_t{1} << (2 * *level_))) {
      throw std::invalid_argument("QuadratureRule: lattice has fewer than 2^{2j} nodes");
    }
    const double w0 = 1.0 / static_cast<double>(nodes_.size());
    for (double w : weights_) {
      if (w != w0) throw std::invalid_argument("QuadratureRule: lattice weights must all equal 1/N");
    }
  }
}

std::string QuadratureRule::id() const {
  char buf[256];
  switch (kind_) {
    case RuleKind::kronecker_lattice: {
      const auto p = lattice_.value_or(LatticeParams::defaults());
      std::snprintf(buf, sizeof buf, "kronecker_lattice:j=%d:%s:g=%.17g,%.17g:s=%.17g,%.17g", level_.value_or(-1),
                    to_string(p.strategy).c_str(), p.generator[0], p.generator[1], p.shift[0], p.shift[1]);
      break;
    }
    case RuleKind::gauss_reference:
      std::snprintf(buf, sizeof buf, "gauss_reference:degree=%d", exact_degree_.value_or(-1));
      break;
    case RuleKind::custom:
      std::snprintf(buf, sizeof buf, "custom:n=%zu", nodes_.size());
      break;
  }
  std::string out = buf;
  if (kind_ != RuleKind::kronecker_lattice && level_) out += ":j=" + std::to_string(*level_);
  return out;
}

std::size_t lattice_size(int j) {
  if (j < 0 || j > 13) throw std::invalid_argument("lattice_size: level out of range [0, 13]");
  return (std::size_t{1} << (2 * j)) + 1;
}

QuadratureRule kronecker_lattice(int j, const LatticeParams& params) {
  const std::size_t n = lattice_size(j);
  for (double g : params.generator) {
    if (!std::isfinite(g)) throw std::invalid_argument("kronecker_lattice: generator must be finite");
  }
  for (double s : params.shift) {
    if (!(s >= 0.0 && s < 1.0)) throw std::invalid_argument("kronecker_lattice: shift must lie in [0,1)");
  }

  auto frac = [](double v) { return v - std::floor(v); };
  auto square_point = [&](std::size_t i) {
    const auto di = static_cast<double>(i);
    return SimplexPoint{frac(di * params.generator[0] + params.shift[0]),
                        frac(di * params.generator[1] + params.shift[1])};
  };

  std::vector<SimplexPoint> nodes;
  nodes.reserve(n);
  if (params.strategy == LatticeStrategy::fold) {
    for (std::size_t i = 0; i < n; ++i) {
      auto p = square_point(i);
      if (p.x1 + p.x2 > 1.0) p = {1.0 - p.x1, 1.0 - p.x2};
      nodes.push_back(p);
    }
  } else {
    const std::size_t budget = 8 * n;
    for (std::size_t i = 0; i < budget && nodes.size() < n; ++i) {
      const auto p = square_point(i);
      if (p.x1 + p.x2 <= 1.0) nodes.push_back(p);
    }
    if (nodes.size() < n) {
      throw std::runtime_error("kronecker_lattice: intersect strategy found only " + std::to_string(nodes.size()) +
                               " of " + std::to_string(n) + " nodes within " + std::to_string(budget) +
                               " candidates");
    }
  }
  std::vector<double> weights(n, 1.0 / static_cast<double>(n));
  return QuadratureRule(std::move(nodes), std::move(weights), RuleKind::kronecker_lattice, j, params);
}

namespace {

struct Gauss1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Golub-Welsch for the weight (1-t)^a (1+t)^b on [-1,1]. Weights are up to a
// common factor, which the caller normalizes away.
Gauss1D gauss_jacobi(int n, double a, double b) {
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 1));
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      diag[i] = (b - a) / (a + b + 2.0);
    } else {
      const double c = 2.0 * i + a + b;
      diag[i] = (b * b - a * a) / (c * (c + 2.0));
    }
  }
  for (int i = 1; i < n; ++i) {
    const double c = 2.0 * i + a + b;
    sub[i - 1] = std::sqrt(4.0 * i * (i + a) * (i + b) * (i + a + b) / (c * c * (c + 1.0) * (c - 1.0)));
  }
  Gauss1D out;
  if (n == 1) {
    out.nodes = {diag[0]};
    out.weights = {1.0};
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("gauss_jacobi: eigensolver failed");
  out.nodes.resize(static_cast<std::size_t>(n));
  out.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()[i];
    const double v0 = solver.eigenvectors()(0, i);
    out.weights[static_cast<std::size_t>(i)] = v0 * v0;
  }
  return out;
}

}  // namespace

QuadratureRule gauss_reference_rule(int degree) {
  if (degree < 0 || degree > 128) throw std::invalid_argument("gauss_reference_rule: degree must lie in [0, 128]");
  const int n = degree / 2 + 1;
  // x1 carries the collapsed Jacobian (1 - x1) as a Jacobi weight; the ratio direction is Legendre.
  const Gauss1D outer = gauss_jacobi(n, 1.0, 0.0);
  const Gauss1D inner = gauss_jacobi(n, 0.0, 0.0);

  std::vector<SimplexPoint> nodes;
  std::vector<double> weights;
  nodes.reserve(static_cast<std::size_t>(n * n));
  weights.reserve(static_cast<std::size_t>(n * n));
  for (std::size_t a = 0; a < outer.nodes.size(); ++a) {
    const double x1 = 0.5 * (outer.nodes[a] + 1.0);
    for (std::size_t b = 0; b < inner.nodes.size(); ++b) {
      const double v = 0.5 * (inner.nodes[b] + 1.0);
      nodes.push_back({x1, (1.0 - x1) * v});
      weights.push_back(outer.weights[a] * inner.weights[b]);
    }
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  return QuadratureRule(std::move(nodes), std::move(weights), RuleKind::gauss_reference, std::nullopt,
                        std::nullopt, degree);
}

Complex integrate(const QuadratureRule& rule, const std::function<Complex(const SimplexPoint&)>& f) {
  Complex sum{};
  for (std::size_t k = 0; k < rule.size(); ++k) sum += rule.weights()[k] * f(rule.nodes()[k]);
  return sum;
}

int exactness_degree(const QuadratureRule& rule, double tol, int max_degree) {
  if (!(tol > 0.0)) throw std::invalid_argument("exactness_degree: tol must be positive");
  if (max_degree < 0) return -1;
  const std::size_t dim = spectral_dim(max_degree);
  std::vector<double> integrals(dim, 0.0);
  std::vector<double> basis(dim);
  for (std::size_t k = 0; k < rule.size(); ++k) {
    basis_eval_all(max_degree, rule.nodes()[k], basis);
    const double w = rule.weights()[k];
    for (std::size_t i = 0; i < dim; ++i) integrals[i] += w * basis[i];
  }
  for (int ell = 0; ell <= max_degree; ++ell) {
    for (int m = 0; m <= ell; ++m) {
      const double expected = ell == 0 ? 1.0 : 0.0;
      if (!(std::abs(integrals[linear_index({ell, m})] - expected) <= tol)) return ell - 1;
    }
  }
  return max_degree;
}

GramMatrix::GramMatrix(int cutoff, std::vector<Complex> entries)
    : cutoff_(cutoff), dim_(spectral_dim(cutoff)), entries_(std::move(entries)) {
  if (entries_.size() != dim_ * dim_) throw std::invalid_argument("GramMatrix: entry count mismatch");
}

double GramMatrix::max_deviation_from_identity() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t ip = 0; ip < dim_; ++ip) {
      const Complex target = i == ip ? Complex{1.0} : Complex{};
      worst = std::max(worst, std::abs((*this)(i, ip) - target));
    }
  }
  return worst;
}

double GramMatrix::max_off_diagonal() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t ip = 0; ip < dim_; ++ip) {
      if (i != ip) worst = std::max(worst, std::abs((*this)(i, ip)));
    }
  }
  return worst;
}

GramMatrix gram_matrix(const QuadratureRule& rule, int cutoff, ExecPolicy policy) {
  if (cutoff < 0) throw std::invalid_argument("gram_matrix: negative cutoff");
  const kernels::BasisTable table(rule.nodes(), cutoff, policy);
  const std::size_t dim = table.cols();
  std::vector<double> real(dim * dim);
  kernels::gram(policy, table, rule.weights(), real);
  return GramMatrix(cutoff, std::vector<Complex>(real.begin(), real.end()));
}

double generalized_tightness_residual(const QuadratureRule& rule_lo, const QuadratureRule& rule_hi,
                                      const FilterBank& bank, int j, int cutoff) {
  if (j < 1) throw std::invalid_argument("generalized_tightness_residual: j must be >= 1");
  if (cutoff < 0 || cutoff > degree_cutoff(j)) {
    throw std::invalid_argument("generalized_tightness_residual: cutoff exceeds degree_cutoff(j)");
  }
  const GramMatrix lo = gram_matrix(rule_lo, cutoff);
  const GramMatrix hi = gram_matrix(rule_hi, cutoff);
  const std::size_t dim = lo.dim();

  struct Symbols {
    Complex alpha;
    Complex a;
    std::vector<Complex> b;
  };
  std::vector<Symbols> at(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const double xi = std::ldexp(eigenvalue(basis_index(i).ell), -j);
    at[i].alpha = bank.scaling_low()(xi);
    at[i].a = bank.low()(xi);
    for (const auto& b : bank.highs()) at[i].b.emplace_back(b(xi));
  }

  double worst = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t ip = 0; ip < dim; ++ip) {
      if (std::conj(at[i].alpha) * at[ip].alpha == Complex{}) continue;
      Complex lhs = std::conj(at[i].a) * at[ip].a * lo(i, ip);
      for (std::size_t n = 0; n < at[i].b.size(); ++n) lhs += std::conj(at[i].b[n]) * at[ip].b[n] * hi(i, ip);
      worst = std::max(worst, std::abs(lhs - hi(i, ip)));
    }
  }
  return worst;
}

}  // namespace framelet
