#include <cmath>
#include <complex>
#include <numbers>

#include <benchmark/benchmark.h>

#include "scb/lindblad.hpp"
#include "scb/meanfield.hpp"
#include "scb/model.hpp"
#include "scb/rates.hpp"
#include "scb/sector.hpp"

using namespace scb;

namespace {

ModelParams desk(std::int64_t total, double nbar) {
  ModelParams p;
  p.charging_energy = 1.0;
  p.tunneling = 0.05;
  p.total_pairs = total;
  p.mean_pairs = nbar;
  p.gate_charge = 0.5;
  p.coupling = 0.01;
  return p;
}

BathSpec bath(double r) { return BathSpec::exponential(1.0, r / 2.0); }

void BM_DissipatorApply(benchmark::State& state) {
  const auto total = state.range(0);
  const SectorBasis basis = build_basis(total);
  const ModelParams p = desk(total, total / 2.0);
  const DissipatorSpec spec = make_dissipator(basis, p, bath(1.0));
  const CMatrix rho = coherent_coefficients(basis, total / 2.0, 0.3).projector();
  for (auto _ : state) benchmark::DoNotOptimize(dissipator(rho, spec));
}
BENCHMARK(BM_DissipatorApply)->Arg(10)->Arg(30)->Arg(60);

void BM_AssembledDissipator(benchmark::State& state) {
  const auto total = state.range(0);
  const SectorBasis basis = build_basis(total);
  const ModelParams p = desk(total, total / 2.0);
  const DissipatorSpec spec = make_dissipator(basis, p, bath(1.0));
  const CMatrix rho = coherent_coefficients(basis, total / 2.0, 0.3).projector();
  for (auto _ : state) benchmark::DoNotOptimize(assembled_dissipator(rho, spec));
}
BENCHMARK(BM_AssembledDissipator)->Arg(10)->Arg(30);

void BM_RK4Step(benchmark::State& state) {
  const auto total = state.range(0);
  const SectorBasis basis = build_basis(total);
  const ModelParams p = desk(total, total / 2.0);
  const Generator gen(h0_full(basis, p), make_dissipator(basis, p, bath(1.0)));
  const CMatrix rho = coherent_coefficients(basis, total / 2.0, 0.0).projector();
  const double dt = kDefaultStepNorm / gen.norm_estimate();
  for (auto _ : state) benchmark::DoNotOptimize(rk4_advance(rho, gen, dt, 1));
}
BENCHMARK(BM_RK4Step)->Arg(10)->Arg(30);

void BM_CoherentExact(benchmark::State& state) {
  const double nbar = static_cast<double>(state.range(0));
  const ModelParams p = desk(static_cast<std::int64_t>(100 * nbar), nbar);
  const BathSpec b = bath(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gamma_coherent_exact(p, b));
}
BENCHMARK(BM_CoherentExact)->Arg(400)->Arg(10000)->Arg(100000000);

void BM_CoherentGauss(benchmark::State& state) {
  const double nbar = static_cast<double>(state.range(0));
  const ModelParams p = desk(static_cast<std::int64_t>(100 * nbar), nbar);
  const BathSpec b = bath(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gamma_coherent_gauss(p, b));
}
BENCHMARK(BM_CoherentGauss)->Arg(400)->Arg(100000000);

void BM_RateReport(benchmark::State& state) {
  const ModelParams p = desk(10000, 400.0);
  const BathSpec b = bath(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(rate_report(p, b));
}
BENCHMARK(BM_RateReport);

void BM_FIntegral(benchmark::State& state) {
  const double z = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(f_integral(z));
}
BENCHMARK(BM_FIntegral)->Arg(1)->Arg(10)->Arg(200)->Arg(10000);

void BM_GpEvolvePeriod(benchmark::State& state) {
  ModelParams p = desk(200, 100.0);
  p.charging_energy = 10.0;
  p.tunneling = 1.0;
  const OrderParameter psi = make_order_parameter(std::polar(std::sqrt(0.505), 0.0), std::polar(std::sqrt(0.495), 0.0));
  const double period = 2.0 * std::numbers::pi / std::sqrt(2.0 * p.charging_energy * p.tunneling);
  GpOptions opt;
  opt.record_every = 1000000;
  for (auto _ : state) benchmark::DoNotOptimize(gp_evolve(psi, p, period, opt));
}
BENCHMARK(BM_GpEvolvePeriod);

}  // namespace

BENCHMARK_MAIN();
