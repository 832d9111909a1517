#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <random>

#include "framelet/kernels.hpp"
#include "framelet/quadrature.hpp"
#include "framelet/transform.hpp"

namespace fl = framelet;
namespace kn = framelet::kernels;

namespace {

fl::SpectralVector random_spectrum(int cutoff) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  fl::SpectralVector v(cutoff);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = {g(rng), g(rng)};
  return v;
}

// One level-j lattice with its table and weights, shared by the kernel benchmarks.
struct Level {
  explicit Level(int j)
      : rule(fl::kronecker_lattice(j)),
        cutoff(fl::degree_cutoff(j)),
        table(rule.nodes(), cutoff, fl::ExecPolicy::parallel),
        coeffs(random_spectrum(cutoff)) {
    for (double w : rule.weights()) sqrt_w.push_back(std::sqrt(w));
  }
  fl::QuadratureRule rule;
  int cutoff;
  kn::BasisTable table;
  fl::SpectralVector coeffs;
  std::vector<double> sqrt_w;
};

const Level& level(int j) {
  static std::vector<std::unique_ptr<Level>> cache(9);
  auto& slot = cache[static_cast<std::size_t>(j)];
  if (!slot) slot = std::make_unique<Level>(j);
  return *slot;
}

fl::ExecPolicy policy_arg(const benchmark::State& s) {
  return s.range(1) == 0 ? fl::ExecPolicy::serial : fl::ExecPolicy::parallel;
}

void set_label(benchmark::State& s) { s.SetLabel(s.range(1) == 0 ? "serial" : "parallel"); }

void BM_Synthesize(benchmark::State& s) {
  const auto& L = level(static_cast<int>(s.range(0)));
  std::vector<fl::Complex> out(L.rule.size());
  for (auto _ : s) {
    kn::synthesize(policy_arg(s), L.table, L.sqrt_w, L.coeffs.coeffs(), out);
    benchmark::DoNotOptimize(out.data());
  }
  set_label(s);
}

void BM_SynthesizeDirect(benchmark::State& s) {
  const auto& L = level(static_cast<int>(s.range(0)));
  std::vector<fl::Complex> out(L.rule.size());
  for (auto _ : s) {
    kn::synthesize_direct(policy_arg(s), L.rule.nodes(), L.sqrt_w, L.cutoff, L.coeffs.coeffs(), out);
    benchmark::DoNotOptimize(out.data());
  }
  set_label(s);
}

void BM_Adjoint(benchmark::State& s) {
  const auto& L = level(static_cast<int>(s.range(0)));
  std::vector<fl::Complex> values(L.rule.size(), fl::Complex{1.0, -0.5});
  std::vector<fl::Complex> out(L.coeffs.size());
  for (auto _ : s) {
    kn::adjoint(policy_arg(s), L.table, L.sqrt_w, values, out);
    benchmark::DoNotOptimize(out.data());
  }
  set_label(s);
}

void BM_Gram(benchmark::State& s) {
  const auto& L = level(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(fl::gram_matrix(L.rule, L.cutoff, policy_arg(s)));
  set_label(s);
}

void BM_Decompose(benchmark::State& s) {
  const int j = static_cast<int>(s.range(0));
  static const auto sys = fl::FrameletSystem::kronecker(fl::FilterBank::dau2_simplex_r2(), 6);
  auto local = sys;
  local.set_policy(policy_arg(s));
  const auto v = local.make_sequence(j, random_spectrum(fl::degree_cutoff(j)));
  for (auto _ : s) benchmark::DoNotOptimize(fl::decompose(local, v));
  set_label(s);
}

void levels(benchmark::internal::Benchmark* b, int lo, int hi) {
  for (int j = lo; j <= hi; ++j) {
    for (int p : {0, 1}) b->Args({j, p});
  }
  b->ArgNames({"j", "par"})->Unit(benchmark::kMicrosecond);
}

}  // namespace

BENCHMARK(BM_Synthesize)->Apply([](auto* b) { levels(b, 3, 6); });
BENCHMARK(BM_SynthesizeDirect)->Apply([](auto* b) { levels(b, 3, 6); });
BENCHMARK(BM_Adjoint)->Apply([](auto* b) { levels(b, 3, 6); });
BENCHMARK(BM_Gram)->Apply([](auto* b) { levels(b, 3, 5); });
BENCHMARK(BM_Decompose)->Apply([](auto* b) { levels(b, 2, 6); });

BENCHMARK_MAIN();
