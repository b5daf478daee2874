#include "malcev/braid_kz.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace malcev;

namespace {

struct KernelSetup {
  std::shared_ptr<const Envelope> env;
  TransportKernel kernel;
  std::vector<Complex> f, y, out;

  static KernelSetup make(int generators, int N) {
    LiePresentation p;
    for (int g = 0; g < generators; ++g) p.generators.push_back({"x" + std::to_string(g), 1});
    p.truncation = N;
    NilpotentQuotient q(p);
    auto env = std::make_shared<const Envelope>(q.lie(), N);
    std::vector<LieElement> coeffs;
    for (int g = 0; g < generators; ++g) coeffs.push_back(LieElement::basis(std::size_t(g)));
    KernelSetup s{env, TransportKernel(*env, coeffs), {}, {}, {}};
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    for (int g = 0; g < generators; ++g) s.f.emplace_back(n(rng), n(rng));
    for (std::size_t i = 0; i < env->size(); ++i) s.y.emplace_back(n(rng), n(rng));
    s.out.resize(env->size());
    return s;
  }
};

void BM_KernelSerial(benchmark::State& st) {
  auto s = KernelSetup::make(int(st.range(0)), int(st.range(1)));
  for (auto _ : st) {
    s.kernel.apply_serial(s.f, s.y, s.out);
    benchmark::DoNotOptimize(s.out.data());
  }
  st.counters["envelope"] = double(s.env->size());
  st.counters["nnz"] = double(s.kernel.nonzeros());
}

void BM_KernelParallel(benchmark::State& st) {
  auto s = KernelSetup::make(int(st.range(0)), int(st.range(1)));
  for (auto _ : st) {
    s.kernel.apply_parallel(s.f, s.y, s.out);
    benchmark::DoNotOptimize(s.out.data());
  }
  st.counters["envelope"] = double(s.env->size());
  st.counters["nnz"] = double(s.kernel.nonzeros());
}

void BM_BraidHolonomy(benchmark::State& st) {
  KZSystem kz(std::size_t(st.range(0)), int(st.range(1)));
  BraidWord w = BraidWord::parse(kz.strands(), "s1 s2 s1");
  OdeOptions o;
  o.parallel = st.range(2) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(braid_holonomy(kz, w, o).element.u.coeffs().data());
  st.counters["envelope"] = double(kz.envelope()->size());
}

}  // namespace

BENCHMARK(BM_KernelSerial)->Args({2, 6})->Args({3, 5})->Args({4, 5})->Args({3, 6});
BENCHMARK(BM_KernelParallel)->Args({2, 6})->Args({3, 5})->Args({4, 5})->Args({3, 6});
BENCHMARK(BM_BraidHolonomy)->Args({3, 4, 0})->Args({3, 4, 1})->Args({4, 4, 0})->Args({4, 4, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
