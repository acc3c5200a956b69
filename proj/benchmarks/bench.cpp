#include "tpbounds/bounds.hpp"
#include "tpbounds/oracle.hpp"
#include "tpbounds/simulate.hpp"
#include "tpbounds/study.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>

namespace {

tpb::StudyProbabilities male_probabilities() {
    tpb::StudyProbabilities p;
    p.p_yt = tpb::ratio(49, 100);
    p.p_yc = tpb::ratio(21, 100);
    p.p_y_given_t = tpb::ratio(7, 10);
    p.p_y_given_c = tpb::ratio(7, 10);
    p.p_t = tpb::ratio(7, 10);
    return p;
}

// Varying inputs so cached basis inverses, not memoized answers, carry the
// speed. Every input here is compatible by construction.
tpb::StudyProbabilities varying_probabilities(std::uint64_t i) {
    tpb::ResponseTypeDistribution d;
    std::uint64_t x = i * 2654435761u + 1;
    tpb::Rat total = 0;
    for (std::size_t cell = 0; cell < 8; ++cell) {
        x ^= x >> 13;
        x *= 0x9E3779B97F4A7C15ULL;
        x ^= x >> 33;
        d.cells[cell] = tpb::Rat(x % 97, 1);
        total += d.cells[cell];
    }
    for (std::size_t cell = 0; cell < 8; ++cell) d.cells[cell] /= total;
    return tpb::pns_of(d).study();
}

void bm_closed_form_bounds(benchmark::State& state) {
    std::uint64_t i = 0;
    for (auto _ : state) {
        const tpb::StudyProbabilities p = varying_probabilities(++i);
        benchmark::DoNotOptimize(tpb::benefit_bounds(p, tpb::EvidenceScope::Combined));
        benchmark::DoNotOptimize(tpb::harm_bounds(p, tpb::EvidenceScope::Combined));
    }
}
BENCHMARK(bm_closed_form_bounds);

void bm_oracle_vertex_enumeration(benchmark::State& state) {
    std::uint64_t i = 0;
    for (auto _ : state) {
        const tpb::StudyProbabilities p = varying_probabilities(++i);
        benchmark::DoNotOptimize(
            tpb::oracle_bounds(p, tpb::EvidenceScope::Combined, tpb::CausalTarget::Benefit));
    }
}
BENCHMARK(bm_oracle_vertex_enumeration);

void bm_oracle_all_scopes(benchmark::State& state) {
    const tpb::StudyProbabilities p = male_probabilities();
    for (auto _ : state) {
        for (tpb::EvidenceScope scope :
             {tpb::EvidenceScope::Combined, tpb::EvidenceScope::ExperimentalOnly,
              tpb::EvidenceScope::ObservationalOnly}) {
            benchmark::DoNotOptimize(tpb::oracle_bounds(p, scope, tpb::CausalTarget::Benefit));
            benchmark::DoNotOptimize(tpb::oracle_bounds(p, scope, tpb::CausalTarget::Harm));
        }
    }
}
BENCHMARK(bm_oracle_all_scopes);

void bm_simulate_units(benchmark::State& state) {
    const tpb::ScenarioSpec spec = tpb::preset("two-sex-trial");
    const std::uint64_t n = static_cast<std::uint64_t>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(tpb::simulate(spec, n, n, tpb::derive_seed(7, ++seed)));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 2 * n);
}
BENCHMARK(bm_simulate_units)->Arg(1000)->Arg(100000);

} // namespace

BENCHMARK_MAIN();
