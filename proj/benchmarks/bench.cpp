#include <benchmark/benchmark.h>

#include <random>

#include "laurentcf/cfcore.hpp"
#include "laurentcf/gfpoly.hpp"
#include "laurentcf/seedset.hpp"

namespace {

lcf::Poly random_poly(std::uint32_t q, lcf::Degree d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> c(static_cast<std::size_t>(d) + 1);
  for (auto& v : c) v = static_cast<std::uint32_t>(rng() % q);
  c.back() = 1;
  return lcf::Poly::from_coefficients(lcf::PrimeField(q), c);
}

void BM_Multiply(benchmark::State& state) {
  const auto q = static_cast<std::uint32_t>(state.range(0));
  const auto d = static_cast<lcf::Degree>(state.range(1));
  const auto a = random_poly(q, d, 1);
  const auto b = random_poly(q, d, 2);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_Multiply)
    ->ArgsProduct({{2}, benchmark::CreateRange(64, 1 << 16, 4)})
    ->ArgsProduct({{3}, benchmark::CreateRange(64, 1 << 12, 4)});

void BM_DivMod(benchmark::State& state) {
  const auto d = static_cast<lcf::Degree>(state.range(0));
  const auto a = random_poly(2, 2 * d, 3);
  const auto b = random_poly(2, d, 4);
  for (auto _ : state) benchmark::DoNotOptimize(lcf::divmod(a, b));
}
BENCHMARK(BM_DivMod)->RangeMultiplier(4)->Range(64, 1 << 14);

void BM_CfExpand(benchmark::State& state) {
  const auto d = static_cast<lcf::Degree>(state.range(0));
  const lcf::RationalFunction r(random_poly(2, d - 1, 5), random_poly(2, d, 6));
  for (auto _ : state) benchmark::DoNotOptimize(lcf::cf_expand_rational(r));
}
BENCHMARK(BM_CfExpand)->RangeMultiplier(4)->Range(64, 1 << 12);

void BM_CountIrreducible(benchmark::State& state) {
  const lcf::PrimeField f2(2);
  for (auto _ : state) benchmark::DoNotOptimize(lcf::count_irreducible(f2, state.range(0), false));
}
BENCHMARK(BM_CountIrreducible)->Arg(64)->Arg(720)->Arg(5040);

void BM_CountP(benchmark::State& state) {
  const lcf::Integer T = lcf::pow(2, static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lcf::count_P(T));
}
BENCHMARK(BM_CountP)->Arg(64)->Arg(1000)->Arg(10000);

void BM_WindowTable(benchmark::State& state) {
  const lcf::SparseSubset sparse(lcf::make_source(lcf::PrimeField(2), "full"));
  for (auto _ : state) benchmark::DoNotOptimize(lcf::window_table(sparse, 3, state.range(0)));
}
BENCHMARK(BM_WindowTable)->Arg(6)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
