#include <benchmark/benchmark.h>

#include <string>

#include "elprov/entail.hpp"
#include "elprov/explain.hpp"
#include "elprov/query.hpp"
#include "elprov/saturate.hpp"
#include "elprov/textio.hpp"

namespace {

using namespace elprov;

// The B <= A entry carries 2^n monomials.
AnnotatedOntology exp_onto(int n) {
    std::string text;
    for (int i = 1; i <= n; ++i) {
        std::string k = std::to_string(i);
        text += "A <= A" + k + " @ v" + k + "\nA" + k + " <= B @ u" + k + "\n";
    }
    return parse_ontology(text + "B <= A @ u\n");
}

const char* kDio =
    "Deity(dionysus) @ x1\nmother(dionysus,semele) @ x2\nmother(dionysus,demeter) @ x3\n"
    "Deity(demeter) @ x4\nfather(dionysus,zeus) @ x5\nDeity(zeus) @ x6\n"
    "exists parent . Deity <= Deity @ y1\nmother <= parent @ y2\nfather <= parent @ y3\n";

// A chain a0 -r-> a1 -r-> ... with exists r . A <= A closing back to a0.
AnnotatedOntology chain(int n) {
    std::string text = "A(a" + std::to_string(n) + ") @ w\nexists r- . A <= A @ u\n";
    for (int i = 0; i < n; ++i)
        text += "r(a" + std::to_string(i + 1) + ",a" + std::to_string(i) + ") @ e" + std::to_string(i) + "\n";
    return parse_ontology(text);
}

void BM_SaturateExp(benchmark::State& state) {
    auto o = exp_onto(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(saturate(o));
}
BENCHMARK(BM_SaturateExp)->DenseRange(2, 10, 2)->Unit(benchmark::kMillisecond);

void BM_SaturateKExp(benchmark::State& state) {
    auto o = exp_onto(10);
    auto k = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(saturate_k(o, k));
}
BENCHMARK(BM_SaturateKExp)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_LinsatExp(benchmark::State& state) {
    auto o = exp_onto(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(linsat(o));
}
BENCHMARK(BM_LinsatExp)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_ChainAssertion(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    auto o = chain(n);
    Axiom goal = ConceptAssertion{Concept::name("A"), "a0"};
    for (auto _ : state) benchmark::DoNotOptimize(assertion_provenance(o, goal));
}
BENCHMARK(BM_ChainAssertion)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_DionysusQuery(benchmark::State& state) {
    auto o = parse_ontology(kDio);
    auto voc = vocabulary(o);
    auto q = parse_query("q(x) :- Deity(x), parent(x,y).", &voc);
    for (auto _ : state) benchmark::DoNotOptimize(cq_provenance(o, q, {"dionysus"}));
}
BENCHMARK(BM_DionysusQuery)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
