#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "framelet/transform.hpp"
#include "support.hpp"

namespace fl = framelet;
using fl::Complex;
using fl::SpectralVector;

namespace {

const fl::FilterBank& bank() {
  static const fl::FilterBank b = fl::FilterBank::dau2_simplex_r2();
  return b;
}

const fl::FrameletSystem& kron5() {
  static const fl::FrameletSystem sys = fl::FrameletSystem::kronecker(bank(), 5);
  return sys;
}

const fl::FrameletSystem& exact5() {
  static const fl::FrameletSystem sys = fl::FrameletSystem::exact(bank(), 5);
  return sys;
}

SpectralVector delta(int cutoff, fl::BasisIndex idx, Complex value = 1.0) {
  SpectralVector v(cutoff);
  v.at(idx) = value;
  return v;
}

// c^H U c with U assembled by direct loops over the rule's nodes.
double quadratic_form(const fl::QuadratureRule& rule, const SpectralVector& c) {
  const std::size_t dim = c.size();
  std::vector<double> p(dim);
  double total = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    for (std::size_t i = 0; i < dim; ++i) p[i] = fl::basis_eval(fl::basis_index(i), rule.nodes()[k]);
    Complex s{};
    for (std::size_t i = 0; i < dim; ++i) s += c[i] * p[i];
    total += rule.weights()[k] * std::norm(s);
  }
  return total;
}

// Spectrum scaled by conj(s(lambda_l / 2^level)), truncated at `cutoff`.
SpectralVector filtered(const SpectralVector& f, const fl::SpectralSymbol& s, int level, int cutoff) {
  SpectralVector out(std::min(cutoff, f.cutoff()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::conj(Complex{s(std::ldexp(fl::eigenvalue(fl::basis_index(i).ell), -level))}) * f[i];
  }
  return out;
}

double max_abs(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(FrameletSystem, Invariants) {
  std::vector<fl::QuadratureRule> wrong_level{fl::kronecker_lattice(0), fl::kronecker_lattice(2)};
  EXPECT_THROW(fl::FrameletSystem(bank(), wrong_level), std::invalid_argument);

  const auto& b = bank();
  const fl::FilterBank broken("no-b2", b.low(), {b.high(0)}, b.scaling_low(), {b.scaling_high(0)});
  EXPECT_THROW((void)fl::FrameletSystem::kronecker(broken, 2), std::invalid_argument);

  // A lattice-tagged rule at level 1 with 4 nodes satisfies the rule invariant but not N_1 = 5.
  std::vector<fl::QuadratureRule> short_lattice{
      fl::kronecker_lattice(0),
      fl::QuadratureRule({{0.1, 0.1}, {0.2, 0.1}, {0.1, 0.3}, {0.4, 0.4}}, {0.25, 0.25, 0.25, 0.25},
                         fl::RuleKind::kronecker_lattice, 1)};
  EXPECT_THROW(fl::FrameletSystem(bank(), short_lattice), std::invalid_argument);

  EXPECT_EQ(kron5().top_level(), 5);
  for (int j = 0; j <= 5; ++j) {
    EXPECT_EQ(kron5().rule(j).level(), j);
    EXPECT_EQ(kron5().rule(j).size(), fl::lattice_size(j));
  }
  EXPECT_THROW((void)kron5().rule(6), std::out_of_range);
}

TEST(FrameletEval, LevelZeroLowPassIsConstant) {
  const auto& sys = kron5();
  for (std::size_t k = 0; k < 2; ++k) {
    for (const fl::SimplexPoint x : {fl::SimplexPoint{0.1, 0.7}, fl::SimplexPoint{0.0, 0.0}, fl::SimplexPoint{1, 0}}) {
      EXPECT_NEAR(fl::framelet_eval(sys, {fl::Channel::low, 0}, 0, k, x), 1.0 / std::sqrt(2.0), 1e-15);
    }
  }
}

TEST(FrameletEval, InnerProductsWithBasisMatchAnalysis) {
  // <P_{l,m}, phi_{j,k}> by an independent Duffy quadrature equals (v_j)_k for f = P_{l,m}.
  const auto& sys = kron5();
  const int j = 3;
  for (const fl::BasisIndex idx : {fl::BasisIndex{0, 0}, fl::BasisIndex{2, 1}, fl::BasisIndex{3, 3}}) {
    const auto f = delta(fl::degree_cutoff(j + 1), idx);
    const auto coeffs = fl::analyze(sys, f, j);
    for (std::size_t k : {std::size_t{0}, std::size_t{17}, std::size_t{64}}) {
      const double low = fl::testing::duffy_integral(
          [&](const fl::SimplexPoint& x) {
            return fl::basis_eval(idx, x) * fl::framelet_eval(sys, {fl::Channel::low, 0}, j, k, x);
          },
          12);
      EXPECT_NEAR(low, coeffs.low.values[k].real(), 1e-12);
      for (int n = 0; n < 2; ++n) {
        const double high = fl::testing::duffy_integral(
            [&](const fl::SimplexPoint& x) {
              return fl::basis_eval(idx, x) * fl::framelet_eval(sys, {fl::Channel::high, n}, j, 4 * k, x);
            },
            12);
        EXPECT_NEAR(high, coeffs.high[static_cast<std::size_t>(n)].values[4 * k].real(), 1e-12);
      }
    }
  }
}

TEST(FrameletEval, IndexErrors) {
  const auto& sys = kron5();
  EXPECT_THROW((void)fl::framelet_eval(sys, {fl::Channel::low, 0}, 3, 65, {0.1, 0.1}), std::out_of_range);
  EXPECT_THROW((void)fl::framelet_eval(sys, {fl::Channel::high, 0}, 5, 0, {0.1, 0.1}), std::out_of_range);
  EXPECT_THROW((void)fl::framelet_eval(sys, {fl::Channel::high, 2}, 1, 0, {0.1, 0.1}), std::out_of_range);
  EXPECT_NO_THROW((void)fl::framelet_eval(sys, {fl::Channel::high, 1}, 4, 1024, {0.1, 0.1}));
}

TEST(FrameletEval, LowPassPeaksAtItsNode) {
  const auto& sys = kron5();
  const int j = 4;
  const std::size_t k = 100;
  const auto c = fl::framelet_center(sys, {fl::Channel::low, 0}, j, k);
  double best = -1.0;
  fl::SimplexPoint arg{};
  const int n = 100;
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; a + b <= n; ++b) {
      const fl::SimplexPoint x{static_cast<double>(a) / n, static_cast<double>(b) / n};
      const double v = std::abs(fl::framelet_eval(sys, {fl::Channel::low, 0}, j, k, x));
      if (v > best) {
        best = v;
        arg = x;
      }
    }
  }
  EXPECT_LT(std::hypot(arg.x1 - c.x1, arg.x2 - c.x2), 0.05);
}

TEST(Analyze, ConstantFunction) {
  const auto& sys = kron5();
  const auto f = delta(0, {0, 0});
  for (int j = 0; j < 5; ++j) {
    const auto c = fl::analyze(sys, f, j);
    const double expected = 1.0 / std::sqrt(static_cast<double>(fl::lattice_size(j)));
    for (const auto& v : c.low.values) EXPECT_NEAR(std::abs(v - expected), 0.0, 1e-15);
    for (const auto& w : c.high) EXPECT_EQ(max_abs(w.values), 0.0);
    EXPECT_EQ(c.low.level, j);
    EXPECT_EQ(c.high[0].level, j + 1);
  }
}

TEST(Analyze, OutsideLowPassSupportVanishes) {
  const auto& sys = kron5();
  const int j = 2;  // lambda_l / 4 > 1/2 once l >= 2
  const auto c = fl::analyze(sys, delta(6, {3, 1}), j);
  EXPECT_EQ(max_abs(c.low.values), 0.0);
}

TEST(Analyze, TopLevelEnergyTwoWays) {
  const auto& sys = kron5();
  const int j = 5;
  const auto f = fl::testing::random_spectral(fl::degree_cutoff(j), 42);
  const auto v = fl::analyze_low(sys, f, j);
  double point = 0.0;
  for (const auto& x : v.values) point += std::norm(x);
  EXPECT_NEAR(point, quadratic_form(sys.rule(j), *v.spectral), 1e-10 * point);
  EXPECT_THROW((void)fl::analyze(sys, f, 5), std::out_of_range);
}

TEST(Analyze, CarriesConjugatedSpectrum) {
  const auto& sys = kron5();
  const auto f = fl::testing::random_spectral(fl::degree_cutoff(4), 3);
  const auto c = fl::analyze(sys, f, 3);
  EXPECT_EQ(fl::max_abs_diff(*c.low.spectral, filtered(f, bank().scaling_low(), 3, fl::degree_cutoff(3))), 0.0);
  for (int n = 0; n < 2; ++n) {
    EXPECT_EQ(fl::max_abs_diff(*c.high[n].spectral, filtered(f, bank().scaling_high(n), 3, fl::degree_cutoff(4))),
              0.0);
  }
}

TEST(SequenceProperty, ValuesMatchCarriedSpectrum) {
  const auto& sys = kron5();
  const auto f = fl::testing::random_spectral(fl::degree_cutoff(5), 8);
  const auto c = fl::analyze(sys, f, 4);
  for (const auto* seq : {&c.low, &c.high[0], &c.high[1]}) {
    const auto& rule = sys.rule(seq->level);
    const auto& s = *seq->spectral;
    std::vector<Complex> ref(rule.size());
    for (std::size_t k = 0; k < rule.size(); ++k) {
      for (std::size_t i = 0; i < s.size(); ++i) ref[k] += s[i] * fl::basis_eval(fl::basis_index(i), rule.nodes()[k]);
      ref[k] *= std::sqrt(rule.weights()[k]);
    }
    EXPECT_LE(fl::relative_error(seq->values, ref), 1e-10);
  }
}

TEST(Convolve, Examples) {
  const auto& sys = kron5();
  const fl::SpectralSymbol one({{0.0, 10.0, true, true, {fl::SymbolBranch::Kind::constant, 1.0, 1.0}}});
  const auto v = sys.make_sequence(4, fl::testing::random_spectral(fl::degree_cutoff(4), 5));
  const auto same = fl::convolve(sys, v, one, false);
  EXPECT_EQ(fl::max_abs_diff(*same.spectral, *v.spectral), 0.0);
  EXPECT_LE(fl::relative_error(same.values, v.values), 1e-15);

  const auto c0 = sys.make_sequence(3, delta(0, {0, 0}, {2.0, -1.0}));
  const auto r0 = fl::convolve(sys, c0, bank().low(), true);
  EXPECT_EQ(fl::max_abs_diff(*r0.spectral, *c0.spectral), 0.0);

  fl::CoefficientSequence bare{3, "", c0.values, std::nullopt};
  EXPECT_THROW((void)fl::convolve(sys, bare, bank().low(), true), std::invalid_argument);
}

TEST(ConvolveProperty, EnergySplitsAcrossTheBank) {
  const auto& sys = kron5();
  for (int j = 1; j <= 5; ++j) {
    const auto v = sys.make_sequence(j, fl::testing::random_spectral(fl::degree_cutoff(j), 100 + j));
    double split = std::pow(fl::convolve(sys, v, bank().low(), true).spectral->norm(), 2);
    for (const auto& b : bank().highs()) split += std::pow(fl::convolve(sys, v, b, true).spectral->norm(), 2);
    const double total = std::pow(v.spectral->norm(), 2);
    EXPECT_NEAR(split, total, 1e-12 * total) << "j=" << j;
  }
}

TEST(Downsample, Examples) {
  const auto& sys = kron5();
  const auto v = sys.make_sequence(3, delta(0, {0, 0}, 3.0));
  const auto d = fl::downsample(sys, v);
  EXPECT_EQ(d.level, 2);
  EXPECT_EQ(fl::max_abs_diff(*d.spectral, *v.spectral), 0.0);
  for (const auto& x : d.values) EXPECT_NEAR(std::abs(x - 3.0 / std::sqrt(17.0)), 0.0, 1e-15);

  // Downsampling from level 4 keeps degrees <= Lambda_4 = 7, so a degree-8 entry is removed.
  const auto big = sys.make_sequence(4, delta(8, {8, 2}));
  EXPECT_EQ(fl::downsample(sys, big).spectral->norm(), 0.0);

  EXPECT_THROW((void)fl::downsample(sys, sys.make_sequence(0, delta(0, {0, 0}))), std::invalid_argument);
}

TEST(Upsample, Examples) {
  const auto& sys = kron5();
  const auto zero = sys.make_sequence(2, SpectralVector(1));
  const auto u = fl::upsample(sys, zero);
  EXPECT_EQ(u.level, 3);
  EXPECT_EQ(max_abs(u.values), 0.0);

  // A level-3 low-pass analysis is confined to lambda <= 2^{2} and survives upsampling untouched.
  const auto f = fl::testing::random_spectral(fl::degree_cutoff(5), 77);
  const auto v3 = fl::analyze_low(kron5(), f, 3);
  EXPECT_EQ(fl::max_abs_diff(*fl::upsample(sys, v3).spectral, *v3.spectral), 0.0);

  // Component with 2^{j-2} < lambda <= 2^{j-1} at j = 4: degree 5 (Lambda_3 = 3 < 5 <= Lambda_4 = 7).
  const auto art = sys.make_sequence(3, delta(5, {5, 0}));
  EXPECT_EQ(fl::upsample(sys, art).spectral->norm(), 0.0);

  EXPECT_THROW((void)fl::upsample(sys, sys.make_sequence(5, delta(0, {0, 0}))), std::out_of_range);
}

TEST(SamplingProperty, DownsampleAfterUpsampleIsIdentityOnLowSpectra) {
  const auto& sys = kron5();
  for (int j = 1; j <= 5; ++j) {
    const auto v = sys.make_sequence(j - 1, fl::testing::random_spectral(fl::degree_cutoff(j - 1), 300 + j));
    const auto back = fl::downsample(sys, fl::upsample(sys, v));
    EXPECT_EQ(fl::max_abs_diff(*back.spectral, *v.spectral), 0.0);
    EXPECT_LE(fl::relative_error(back.values, v.values), 1e-12);
  }
}

TEST(Decompose, ConstantFunction) {
  const auto& sys = kron5();
  const auto f = delta(0, {0, 0});
  for (int j = 1; j <= 5; ++j) {
    const auto out = fl::decompose(sys, fl::analyze_low(sys, f, j));
    EXPECT_LE(fl::relative_error(out.low.values, fl::analyze_low(sys, f, j - 1).values), 1e-15);
    for (const auto& w : out.high) EXPECT_EQ(max_abs(w.values), 0.0);
  }
  const auto v1 = sys.make_sequence(1, delta(0, {0, 0}));
  const auto out = fl::decompose(sys, v1);
  EXPECT_EQ(out.low.spectral->at({0, 0}), Complex(1.0));
  for (const auto& w : out.high) EXPECT_EQ(w.spectral->norm(), 0.0);
  EXPECT_THROW((void)fl::decompose(sys, sys.make_sequence(0, delta(0, {0, 0}))), std::invalid_argument);
}

TEST(DecomposeProperty, CommutesWithAnalysis) {
  for (const auto* sys : {&kron5(), &exact5()}) {
    for (int j = 1; j <= 4; ++j) {
      for (int trial = 0; trial < 3; ++trial) {
        const auto f = fl::testing::random_spectral(fl::degree_cutoff(j + 1), 1000 * j + trial);
        const auto out = fl::decompose(*sys, fl::analyze_low(*sys, f, j));
        const auto ref = fl::analyze(*sys, f, j - 1);
        EXPECT_LE(fl::relative_error(out.low.values, ref.low.values), 1e-10);
        EXPECT_LE(fl::relative_error(*out.low.spectral, *ref.low.spectral), 1e-10);
        for (int n = 0; n < 2; ++n) {
          EXPECT_EQ(out.high[n].level, ref.high[n].level);
          EXPECT_LE(fl::relative_error(out.high[n].values, ref.high[n].values), 1e-10);
        }
      }
    }
  }
}

TEST(Reconstruct, Examples) {
  const auto& sys = kron5();
  fl::LevelCoefficients zero{sys.make_sequence(2, SpectralVector(1)),
                             {sys.make_sequence(3, SpectralVector(3)), sys.make_sequence(3, SpectralVector(3))}};
  EXPECT_EQ(max_abs(fl::reconstruct(sys, zero).values), 0.0);

  const auto f = delta(0, {0, 0});
  fl::LevelCoefficients c{fl::analyze_low(sys, f, 0),
                          {sys.make_sequence(1, SpectralVector(0)), sys.make_sequence(1, SpectralVector(0))}};
  EXPECT_LE(fl::relative_error(fl::reconstruct(sys, c).values, fl::analyze_low(sys, f, 1).values), 1e-15);

  fl::LevelCoefficients mismatched{sys.make_sequence(2, SpectralVector(1)),
                                   {sys.make_sequence(2, SpectralVector(1)), sys.make_sequence(3, SpectralVector(1))}};
  EXPECT_THROW((void)fl::reconstruct(sys, mismatched), std::invalid_argument);
}

TEST(ReconstructProperty, ExactRoundTripForBothRuleKinds) {
  for (const auto* sys : {&kron5(), &exact5()}) {
    for (int j = 1; j <= 5; ++j) {
      for (int trial = 0; trial < 3; ++trial) {
        const auto v = sys->make_sequence(j, fl::testing::random_spectral(fl::degree_cutoff(j), 50 * j + trial));
        const auto back = fl::reconstruct(*sys, fl::decompose(*sys, v));
        EXPECT_LE(fl::relative_error(*back.spectral, *v.spectral), 1e-10);
        EXPECT_LE(fl::relative_error(back.values, v.values), 1e-10);
      }
    }
  }
}

TEST(Multilevel, CountsAndRoundTrip) {
  const auto& sys = kron5();
  for (int top = 1; top <= 5; ++top) {
    const auto v = sys.make_sequence(top, fl::testing::random_spectral(fl::degree_cutoff(top), top));
    const auto tree = fl::multilevel_decompose(sys, v);
    std::size_t expected = fl::lattice_size(0);
    for (int j = 1; j <= top; ++j) expected += 2 * fl::lattice_size(j);
    EXPECT_EQ(tree.coefficient_count(), expected);
    const auto back = fl::multilevel_reconstruct(sys, tree);
    EXPECT_LE(fl::relative_error(back.values, v.values), 1e-9);
    EXPECT_LE(fl::relative_error(*back.spectral, *v.spectral), 1e-9);
  }
}

TEST(Multilevel, ConstantFunction) {
  const auto& sys = kron5();
  const auto f = delta(0, {0, 0});
  const auto tree = fl::multilevel_decompose(sys, fl::analyze_low(sys, f, 3));
  EXPECT_LE(fl::relative_error(tree.v0.values, fl::analyze_low(sys, f, 0).values), 1e-15);
  for (const auto& level : tree.high) {
    for (const auto& w : level) EXPECT_EQ(max_abs(w.values), 0.0);
  }
  const auto single = fl::multilevel_decompose(sys, fl::analyze_low(sys, f, 1));
  EXPECT_EQ(single.high.size(), 1u);
}

TEST(Dft, Examples) {
  const auto rule = fl::kronecker_lattice(4);
  const auto v = fl::dft(delta(0, {0, 0}), 4, rule);
  for (const auto& x : v) EXPECT_NEAR(std::abs(x - 1.0 / std::sqrt(257.0)), 0.0, 1e-15);

  const auto u1 = fl::testing::random_spectral(7, 1);
  const auto u2 = fl::testing::random_spectral(7, 2);
  SpectralVector sum(7);
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = u1[i] + u2[i];
  const auto a = fl::dft(u1, 4, rule);
  const auto b = fl::dft(u2, 4, rule);
  const auto c = fl::dft(sum, 4, rule);
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_NEAR(std::abs(c[k] - (a[k] + b[k])), 0.0, 1e-13);

  EXPECT_THROW((void)fl::dft(fl::testing::random_spectral(8, 1), 4, rule), std::invalid_argument);
}

TEST(Dft, AdjointInvertsUnderExactRule) {
  const int j = 5;
  const auto rule = fl::gauss_reference_rule(2 * fl::degree_cutoff(j));
  const auto u = fl::testing::random_spectral(fl::degree_cutoff(j), 9);
  const auto back = fl::adjoint_dft(fl::dft(u, j, rule), j, rule);
  EXPECT_LE(fl::max_abs_diff(back, u), 1e-12 * std::max(1.0, u.norm()));
  const auto d = fl::adjoint_dft(fl::dft(delta(0, {0, 0}), j, rule), j, rule);
  EXPECT_LE(fl::max_abs_diff(d, delta(0, {0, 0})), 1e-13);
}

TEST(AdjointDft, Examples) {
  const auto rule = fl::kronecker_lattice(3);
  const std::vector<Complex> zero(rule.size());
  EXPECT_EQ(fl::adjoint_dft(zero, 3, rule).norm(), 0.0);
  EXPECT_THROW((void)fl::adjoint_dft(std::vector<Complex>(64), 3, rule), std::invalid_argument);
}

TEST(DftProperty, Adjointness) {
  for (int j = 1; j <= 5; ++j) {
    const auto rule = fl::kronecker_lattice(j);
    const auto u = fl::testing::random_spectral(fl::degree_cutoff(j), j);
    std::vector<Complex> w(rule.size());
    std::mt19937_64 rng(900 + j);
    std::normal_distribution<double> g;
    for (auto& x : w) x = {g(rng), g(rng)};
    const auto fu = fl::dft(u, j, rule);
    const auto aw = fl::adjoint_dft(w, j, rule);
    const Complex lhs = fl::testing::inner(fu, w);
    const Complex rhs = fl::testing::inner(u.coeffs(), aw.coeffs());
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(DftProperty, NormalOperatorIsTheGramMatrix) {
  const int j = 4;
  const auto rule = fl::kronecker_lattice(j);
  const int cutoff = fl::degree_cutoff(j);
  const auto g = fl::gram_matrix(rule, cutoff);
  for (std::size_t i = 0; i < fl::spectral_dim(cutoff); ++i) {
    SpectralVector e(cutoff);
    e[i] = 1.0;
    const auto col = fl::adjoint_dft(fl::dft(e, j, rule), j, rule);
    for (std::size_t r = 0; r < col.size(); ++r) EXPECT_NEAR(std::abs(col[r] - g(r, i)), 0.0, 1e-12);
  }
}

TEST(Parseval, ConstantFunction) {
  const auto report = fl::parseval_report(kron5(), delta(0, {0, 0}), 4);
  ASSERT_EQ(report.levels.size(), 4u);
  for (const auto& l : report.levels) {
    EXPECT_NEAR(l.fine, 1.0, 1e-14);
    EXPECT_NEAR(l.coarse, 1.0, 1e-14);
    EXPECT_EQ(l.high, 0.0);
    EXPECT_NEAR(l.residual, 0.0, 1e-14);
  }
  EXPECT_NEAR(report.top_residual, 0.0, 1e-14);
}

TEST(Parseval, ExactRulesAreTight) {
  const int top = 4;
  const auto& sys = exact5();
  for (int trial = 0; trial < 3; ++trial) {
    const auto f = fl::testing::random_spectral(fl::degree_cutoff(top - 1), 60 + trial);
    const auto report = fl::parseval_report(sys, f, top);
    const double scale = report.norm_sq;
    EXPECT_LE(report.max_level_residual(), 1e-10 * scale);
    EXPECT_LE(std::abs(report.top_residual), 1e-10 * scale);
  }
}

TEST(Parseval, KroneckerResidualMatchesGramPrediction) {
  const int top = 4;
  const auto& sys = kron5();
  const auto f = fl::testing::random_spectral(fl::degree_cutoff(top - 1), 61);
  const auto report = fl::parseval_report(sys, f, top);
  for (const auto& l : report.levels) {
    const int j = l.j;
    const double fine = quadratic_form(sys.rule(j + 1), filtered(f, bank().scaling_low(), j + 1, 99));
    const double coarse = quadratic_form(sys.rule(j), filtered(f, bank().scaling_low(), j, 99));
    double high = 0.0;
    for (const auto& beta : bank().scaling_highs()) high += quadratic_form(sys.rule(j + 1), filtered(f, beta, j, 99));
    EXPECT_NEAR(l.residual, fine - coarse - high, 1e-10) << "j=" << j;
  }
  const double top_pred = quadratic_form(sys.rule(top), filtered(f, bank().scaling_low(), top, 99)) -
                          std::pow(f.norm(), 2);
  EXPECT_NEAR(report.top_residual, top_pred, 1e-10);
}

TEST(Policy, SerialAndParallelSystemsAgreeBitwise) {
  auto serial = fl::FrameletSystem::kronecker(bank(), 4, fl::LatticeParams::defaults(), fl::ExecPolicy::serial);
  const auto v = serial.make_sequence(4, fl::testing::random_spectral(fl::degree_cutoff(4), 5));
  const auto a = fl::multilevel_decompose(serial, v);
  serial.set_policy(fl::ExecPolicy::parallel);
  const auto b = fl::multilevel_decompose(serial, v);
  ASSERT_EQ(a.v0.values.size(), b.v0.values.size());
  for (std::size_t k = 0; k < a.v0.values.size(); ++k) EXPECT_EQ(a.v0.values[k], b.v0.values[k]);
  for (std::size_t j = 0; j < a.high.size(); ++j) {
    for (std::size_t n = 0; n < 2; ++n) EXPECT_EQ(a.high[j][n].values, b.high[j][n].values);
  }
}
