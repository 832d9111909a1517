#include "framelet/transform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace framelet {
namespace {

// Tables above this many entries are not cached; synthesis falls back to per-node evaluation.
constexpr std::size_t kMaxTableEntries = std::size_t{1} << 25;

// Largest degree whose symbol argument lambda_l / 2^level stays within the support of s.
int support_cutoff(const SpectralSymbol& s, int level) {
  return max_degree_with_eigenvalue_at_most(std::ldexp(s.support_hi(), level));
}

// Spectrum of v *_level s (or s* when conjugate), truncated at the support edge.
SpectralVector convolve_spectrum(const SpectralVector& v, int level, const SpectralSymbol& s, bool conjugate) {
  const int cutoff = std::min(v.cutoff(), std::max(support_cutoff(s, level), 0));
  SpectralVector out(cutoff);
  for (int ell = 0; ell <= cutoff; ++ell) {
    Complex h = s(std::ldexp(eigenvalue(ell), -level));
    if (conjugate) h = std::conj(h);
    for (int m = 0; m <= ell; ++m) {
      const std::size_t i = linear_index({ell, m});
      out[i] = v[i] * h;
    }
  }
  return out;
}

SpectralVector add_spectra(const SpectralVector& a, const SpectralVector& b) {
  SpectralVector out = a.resized(std::max(a.cutoff(), b.cutoff()));
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

const SpectralVector& require_spectral(const CoefficientSequence& v, const char* op) {
  if (!v.spectral) throw std::invalid_argument(std::string(op) + ": sequence carries no spectral data");
  return *v.spectral;
}

double energy(std::span<const Complex> values) {
  double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return sum;
}

}  // namespace

FrameletSystem::FrameletSystem(FilterBank bank, std::vector<QuadratureRule> rules, ExecPolicy policy)
    : bank_(std::move(bank)), rules_(std::move(rules)), policy_(policy) {
  if (rules_.empty()) throw std::invalid_argument("FrameletSystem: at least the level-0 rule is required");
  const auto grid = uniform_grid(0.0, 0.5, 10001);
  if (check_partition(bank_, grid) > 1e-12) {
    throw std::invalid_argument("FrameletSystem: filter bank '" + bank_.name() + "' violates the partition identity");
  }
  for (std::size_t j = 0; j < rules_.size(); ++j) {
    const auto& rule = rules_[j];
    const int level = static_cast<int>(j);
    if (rule.level() && *rule.level() != level) {
      throw std::invalid_argument("FrameletSystem: rule " + std::to_string(j) + " is tagged with level " +
                                  std::to_string(*rule.level()));
    }
    if (rule.kind() == RuleKind::kronecker_lattice && rule.size() != lattice_size(level)) {
      throw std::invalid_argument("FrameletSystem: lattice at level " + std::to_string(j) + " must have " +
                                  std::to_string(lattice_size(level)) + " nodes");
    }
    std::vector<double> sw(rule.size());
    for (std::size_t k = 0; k < rule.size(); ++k) {
      if (rule.weights()[k] <= 0.0) throw std::invalid_argument("FrameletSystem: weights must be positive");
      sw[k] = std::sqrt(rule.weights()[k]);
    }
    sqrt_weights_.push_back(std::move(sw));

    const int cutoff = degree_cutoff(level);
    if (rule.size() * spectral_dim(cutoff) <= kMaxTableEntries) {
      tables_.emplace_back(rule.nodes(), cutoff, policy_);
    } else {
      tables_.emplace_back();
    }
  }
}

FrameletSystem FrameletSystem::kronecker(FilterBank bank, int top, const LatticeParams& params, ExecPolicy policy) {
  if (top < 0) throw std::invalid_argument("FrameletSystem::kronecker: negative top level");
  std::vector<QuadratureRule> rules;
  for (int j = 0; j <= top; ++j) rules.push_back(kronecker_lattice(j, params));
  return FrameletSystem(std::move(bank), std::move(rules), policy);
}

FrameletSystem FrameletSystem::exact(FilterBank bank, int top, ExecPolicy policy) {
  if (top < 0) throw std::invalid_argument("FrameletSystem::exact: negative top level");
  std::vector<QuadratureRule> rules;
  for (int j = 0; j <= top; ++j) rules.push_back(gauss_reference_rule(2 * degree_cutoff(j)));
  return FrameletSystem(std::move(bank), std::move(rules), policy);
}

void FrameletSystem::check_level(int j) const {
  if (j < 0 || j > top_level()) {
    throw std::out_of_range("FrameletSystem: level " + std::to_string(j) + " outside [0, " +
                            std::to_string(top_level()) + "]");
  }
}

const QuadratureRule& FrameletSystem::rule(int j) const {
  check_level(j);
  return rules_[static_cast<std::size_t>(j)];
}

std::vector<Complex> FrameletSystem::synthesize(int j, const SpectralVector& spectral) const {
  check_level(j);
  const auto idx = static_cast<std::size_t>(j);
  std::vector<Complex> out(rules_[idx].size());
  if (tables_[idx].cutoff() >= spectral.cutoff()) {
    kernels::synthesize(policy_, tables_[idx], sqrt_weights_[idx], spectral.coeffs(), out);
  } else {
    kernels::synthesize_direct(policy_, rules_[idx].nodes(), sqrt_weights_[idx], spectral.cutoff(),
                               spectral.coeffs(), out);
  }
  return out;
}

SpectralVector FrameletSystem::adjoint(int j, std::span<const Complex> values, int cutoff) const {
  check_level(j);
  const auto idx = static_cast<std::size_t>(j);
  if (values.size() != rules_[idx].size()) throw std::invalid_argument("FrameletSystem::adjoint: length mismatch");
  SpectralVector out(cutoff);
  if (tables_[idx].cutoff() >= cutoff) {
    kernels::adjoint(policy_, tables_[idx], sqrt_weights_[idx], values, out.coeffs());
  } else {
    kernels::adjoint_direct(policy_, rules_[idx].nodes(), sqrt_weights_[idx], cutoff, values, out.coeffs());
  }
  return out;
}

CoefficientSequence FrameletSystem::make_sequence(int j, SpectralVector spectral) const {
  CoefficientSequence seq;
  seq.level = j;
  seq.rule_ref = rule(j).id();
  seq.values = synthesize(j, spectral);
  seq.spectral = std::move(spectral);
  return seq;
}

SimplexPoint framelet_center(const FrameletSystem& sys, FrameletKind kind, int j, std::size_t k) {
  if (kind.channel == Channel::high && (kind.n < 0 || kind.n >= sys.bank().r())) {
    throw std::out_of_range("framelet: high-pass index out of range");
  }
  const int node_level = kind.channel == Channel::low ? j : j + 1;
  if (j < 0 || node_level > sys.top_level()) throw std::out_of_range("framelet: level out of range");
  const auto& rule = sys.rule(node_level);
  if (k >= rule.size()) throw std::out_of_range("framelet: node index out of range");
  return rule.nodes()[k];
}

double framelet_eval(const FrameletSystem& sys, FrameletKind kind, int j, std::size_t k, const SimplexPoint& x) {
  const SimplexPoint center = framelet_center(sys, kind, j, k);
  if (!in_simplex(x)) throw DomainError("framelet_eval: point outside the simplex");
  const auto& symbol = kind.channel == Channel::low ? sys.bank().scaling_low() : sys.bank().scaling_high(kind.n);
  const int node_level = kind.channel == Channel::low ? j : j + 1;
  const double weight = sys.rule(node_level).weights()[k];

  const int cutoff = support_cutoff(symbol, j);
  if (cutoff < 0) return 0.0;
  std::vector<double> pc(spectral_dim(cutoff));
  std::vector<double> px(spectral_dim(cutoff));
  basis_eval_all(cutoff, center, pc);
  basis_eval_all(cutoff, x, px);

  double sum = 0.0;
  for (int ell = 0; ell <= cutoff; ++ell) {
    const double h = symbol(std::ldexp(eigenvalue(ell), -j));
    if (h == 0.0) continue;
    double inner = 0.0;
    for (int m = 0; m <= ell; ++m) {
      const std::size_t i = linear_index({ell, m});
      inner += pc[i] * px[i];
    }
    sum += h * inner;
  }
  return std::sqrt(weight) * sum;
}

CoefficientSequence analyze_low(const FrameletSystem& sys, const SpectralVector& f, int j) {
  (void)sys.rule(j);
  return sys.make_sequence(j, convolve_spectrum(f, j, sys.bank().scaling_low(), true));
}

std::vector<CoefficientSequence> analyze_high(const FrameletSystem& sys, const SpectralVector& f, int j) {
  if (j < 0 || j + 1 > sys.top_level()) {
    throw std::out_of_range("analyze_high: level " + std::to_string(j) + " needs the rule at level " +
                            std::to_string(j + 1));
  }
  std::vector<CoefficientSequence> out;
  for (const auto& beta : sys.bank().scaling_highs()) {
    out.push_back(sys.make_sequence(j + 1, convolve_spectrum(f, j, beta, true)));
  }
  return out;
}

LevelCoefficients analyze(const FrameletSystem& sys, const SpectralVector& f, int j) {
  return {analyze_low(sys, f, j), analyze_high(sys, f, j)};
}

CoefficientSequence convolve(const FrameletSystem& sys, const CoefficientSequence& v, const SpectralSymbol& s,
                             bool conjugate) {
  const auto& spectral = require_spectral(v, "convolve");
  return sys.make_sequence(v.level, convolve_spectrum(spectral, v.level, s, conjugate));
}

CoefficientSequence downsample(const FrameletSystem& sys, const CoefficientSequence& v) {
  const auto& spectral = require_spectral(v, "downsample");
  if (v.level < 1) throw std::invalid_argument("downsample: level-0 sequences cannot be downsampled");
  const int cutoff = std::min(spectral.cutoff(), degree_cutoff(v.level));
  return sys.make_sequence(v.level - 1, spectral.resized(cutoff));
}

CoefficientSequence upsample(const FrameletSystem& sys, const CoefficientSequence& v) {
  const auto& spectral = require_spectral(v, "upsample");
  if (v.level + 1 > sys.top_level()) {
    throw std::out_of_range("upsample: no rule at level " + std::to_string(v.level + 1));
  }
  const int cutoff = std::min(spectral.cutoff(), degree_cutoff(v.level));
  return sys.make_sequence(v.level + 1, spectral.resized(cutoff));
}

LevelCoefficients decompose(const FrameletSystem& sys, const CoefficientSequence& v_j) {
  const auto& spectral = require_spectral(v_j, "decompose");
  const int j = v_j.level;
  if (j < 1) throw std::invalid_argument("decompose: level must be >= 1");
  (void)sys.rule(j);

  // Spectra first, then one DFT per output: v_{j-1} = F_{j-1}(v_j *_j a*), w^n = F_j(v_j *_j b_n*).
  const SpectralVector low = convolve_spectrum(spectral, j, sys.bank().low(), true);
  LevelCoefficients out;
  out.low = sys.make_sequence(j - 1, low.resized(std::min(low.cutoff(), degree_cutoff(j))));
  for (const auto& b : sys.bank().highs()) {
    out.high.push_back(sys.make_sequence(j, convolve_spectrum(spectral, j, b, true)));
  }
  return out;
}

CoefficientSequence reconstruct(const FrameletSystem& sys, const LevelCoefficients& coarse) {
  const int j = coarse.low.level + 1;
  if (j > sys.top_level()) throw std::out_of_range("reconstruct: no rule at level " + std::to_string(j));
  if (static_cast<int>(coarse.high.size()) != sys.bank().r()) {
    throw std::invalid_argument("reconstruct: expected " + std::to_string(sys.bank().r()) + " high-pass sequences");
  }
  for (const auto& w : coarse.high) {
    if (w.level != j) {
      throw std::invalid_argument("reconstruct: high-pass sequence at level " + std::to_string(w.level) +
                                  ", expected " + std::to_string(j));
    }
  }

  const auto& low = require_spectral(coarse.low, "reconstruct");
  const SpectralVector up = low.resized(std::min(low.cutoff(), degree_cutoff(j - 1)));
  SpectralVector sum = convolve_spectrum(up, j, sys.bank().low(), false);
  for (int n = 0; n < sys.bank().r(); ++n) {
    const auto& w = require_spectral(coarse.high[static_cast<std::size_t>(n)], "reconstruct");
    sum = add_spectra(sum, convolve_spectrum(w, j, sys.bank().high(n), false));
  }
  return sys.make_sequence(j, std::move(sum));
}

std::size_t CoefficientTree::coefficient_count() const {
  std::size_t count = v0.values.size();
  for (const auto& level : high) {
    for (const auto& w : level) count += w.values.size();
  }
  return count;
}

CoefficientTree multilevel_decompose(const FrameletSystem& sys, const CoefficientSequence& v_top) {
  if (v_top.level < 1) throw std::invalid_argument("multilevel_decompose: top level must be >= 1");
  CoefficientTree tree;
  tree.top = v_top.level;
  tree.high.resize(static_cast<std::size_t>(v_top.level));
  CoefficientSequence v = v_top;
  for (int j = v_top.level; j >= 1; --j) {
    auto level = decompose(sys, v);
    tree.high[static_cast<std::size_t>(j - 1)] = std::move(level.high);
    v = std::move(level.low);
  }
  tree.v0 = std::move(v);
  return tree;
}

CoefficientSequence multilevel_reconstruct(const FrameletSystem& sys, const CoefficientTree& tree) {
  if (tree.top < 1 || tree.high.size() != static_cast<std::size_t>(tree.top)) {
    throw std::invalid_argument("multilevel_reconstruct: tree needs high-pass data for levels 0..top-1");
  }
  if (tree.v0.level != 0) throw std::invalid_argument("multilevel_reconstruct: v0 must live at level 0");
  CoefficientSequence v = tree.v0;
  for (int j = 1; j <= tree.top; ++j) {
    v = reconstruct(sys, {std::move(v), tree.high[static_cast<std::size_t>(j - 1)]});
  }
  return v;
}

namespace {

std::vector<double> sqrt_weights(const QuadratureRule& rule) {
  std::vector<double> sw(rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) {
    if (rule.weights()[k] <= 0.0) throw DomainError("dft: weights must be positive");
    sw[k] = std::sqrt(rule.weights()[k]);
  }
  return sw;
}

}  // namespace

std::vector<Complex> dft(const SpectralVector& u, int j, const QuadratureRule& rule, ExecPolicy policy) {
  if (u.cutoff() > degree_cutoff(j)) {
    throw std::invalid_argument("dft: cutoff " + std::to_string(u.cutoff()) + " exceeds Lambda_" + std::to_string(j) +
                                " = " + std::to_string(degree_cutoff(j)));
  }
  std::vector<Complex> out(rule.size());
  kernels::synthesize_direct(policy, rule.nodes(), sqrt_weights(rule), u.cutoff(), u.coeffs(), out);
  return out;
}

SpectralVector adjoint_dft(std::span<const Complex> v, int j, const QuadratureRule& rule, ExecPolicy policy) {
  if (v.size() != rule.size()) {
    throw std::invalid_argument("adjoint_dft: expected " + std::to_string(rule.size()) + " values, got " +
                                std::to_string(v.size()));
  }
  SpectralVector out(degree_cutoff(j));
  kernels::adjoint_direct(policy, rule.nodes(), sqrt_weights(rule), out.cutoff(), v, out.coeffs());
  return out;
}

double ParsevalReport::max_level_residual() const {
  double worst = 0.0;
  for (const auto& l : levels) worst = std::max(worst, std::abs(l.residual));
  return worst;
}

ParsevalReport parseval_report(const FrameletSystem& sys, const SpectralVector& f, int top) {
  if (top < 0 || top > sys.top_level()) throw std::out_of_range("parseval_report: top level out of range");
  ParsevalReport report;
  std::vector<double> low_energy;
  for (int j = 0; j <= top; ++j) low_energy.push_back(energy(analyze_low(sys, f, j).values));
  for (int j = 0; j < top; ++j) {
    ParsevalLevel row;
    row.j = j;
    row.fine = low_energy[static_cast<std::size_t>(j + 1)];
    row.coarse = low_energy[static_cast<std::size_t>(j)];
    for (const auto& w : analyze_high(sys, f, j)) row.high += energy(w.values);
    row.residual = row.fine - row.coarse - row.high;
    report.levels.push_back(row);
  }
  report.top_energy = low_energy.back();
  const double n = f.norm();
  report.norm_sq = n * n;
  report.top_residual = report.top_energy - report.norm_sq;
  return report;
}

double relative_error(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw std::invalid_argument("relative_error: length mismatch");
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += std::norm(a[i] - b[i]);
    ref += std::norm(b[i]);
  }
  return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
}

double relative_error(const SpectralVector& a, const SpectralVector& b) {
  const int cutoff = std::max(a.cutoff(), b.cutoff());
  const auto ea = a.resized(cutoff);
  const auto eb = b.resized(cutoff);
  return relative_error(ea.coeffs(), eb.coeffs());
}

}  // namespace framelet
