#include <benchmark/benchmark.h>

#include <map>
#include <string>
#include <vector>

#include "ydss/contingency.hpp"
#include "ydss/logit_model.hpp"
#include "ydss/rule_tree.hpp"
#include "ydss/screening.hpp"
#include "ydss/special_functions.hpp"
#include "ydss/stat_tests.hpp"
#include "ydss/stepwise.hpp"
#include "ydss/synth.hpp"

using namespace ydss;

namespace {

const Dataset& survey(std::size_t n)
{
    static std::map<std::size_t, Dataset> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, generate(default_survey_spec(7, n))).first;
    return it->second;
}

std::vector<std::string> predictors(const AttributeSchema& s)
{
    std::vector<std::string> out;
    for (auto a : s.predictor_indices()) out.push_back(s[a].name);
    return out;
}

} // namespace

static void BM_ChiSquareSf(benchmark::State& state)
{
    const double x = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(chi_square_sf(x, 10));
}
BENCHMARK(BM_ChiSquareSf)->Arg(8)->Arg(200)->Arg(1090);

static void BM_ChiSquareSfLargeDf(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(chi_square_sf(2145.881, 2930));
}
BENCHMARK(BM_ChiSquareSfLargeDf);

static void BM_FisherTwoByTwo(benchmark::State& state)
{
    const auto t = ContingencyTable::from_counts({{12, 5}, {3, 10}});
    for (auto _ : state) benchmark::DoNotOptimize(fisher_exact(t));
}
BENCHMARK(BM_FisherTwoByTwo);

static void BM_FisherRxc(benchmark::State& state)
{
    const auto t = ContingencyTable::from_counts({{3, 1, 2, 4}, {2, 4, 1, 3}, {1, 2, 5, 2}});
    for (auto _ : state) benchmark::DoNotOptimize(fisher_exact_rxc(t));
}
BENCHMARK(BM_FisherRxc)->Unit(benchmark::kMillisecond);

static void BM_Screening(benchmark::State& state)
{
    const auto& d = survey(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(screen_univariate(d));
}
BENCHMARK(BM_Screening)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_FitMainEffects(benchmark::State& state)
{
    const auto& d = survey(static_cast<std::size_t>(state.range(0)));
    std::vector<ModelTerm> terms;
    for (const auto& name : predictors(d.schema())) terms.push_back(ModelTerm::main(name));
    const ModelSpec spec(d.schema(), terms);
    for (auto _ : state) benchmark::DoNotOptimize(fit(d, spec).deviance);
}
BENCHMARK(BM_FitMainEffects)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_ForwardSelectMain(benchmark::State& state)
{
    const auto& d = survey(static_cast<std::size_t>(state.range(0)));
    const auto pool = predictors(d.schema());
    SelectionOptions opt;
    opt.jobs = 1;
    for (auto _ : state) benchmark::DoNotOptimize(forward_select(d, pool, {}, opt).final_deviance);
}
BENCHMARK(BM_ForwardSelectMain)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_BuildTree(benchmark::State& state)
{
    const auto& d = survey(static_cast<std::size_t>(state.range(0)));
    const std::vector<std::string> order{"Type of Activity", "Educational Level", "Province", "Gender",
                                         "Social Class", "Age Group"};
    TreeOptions opt;
    opt.min_support = 50;
    for (auto _ : state) benchmark::DoNotOptimize(build_tree(d, order, opt).nodes().size());
}
BENCHMARK(BM_BuildTree)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
