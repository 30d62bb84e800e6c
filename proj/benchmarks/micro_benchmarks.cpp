#include <cegarnn/abstraction.hpp>
#include <cegarnn/classifier.hpp>
#include <cegarnn/driver.hpp>
#include <cegarnn/generate.hpp>
#include <cegarnn/lp.hpp>
#include <cegarnn/partition.hpp>
#include <cegarnn/solver.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace cegarnn;

namespace {

Network random_net(std::size_t width, std::size_t depth, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> w(-2.0, 2.0), b(-1.0, 1.0);
    NetworkData d;
    d.layer_sizes.push_back(5);
    for (std::size_t i = 0; i < depth; ++i)
        d.layer_sizes.push_back(width);
    d.layer_sizes.push_back(1);
    d.weights.resize(d.layer_sizes.size());
    d.biases.resize(d.layer_sizes.size());
    for (std::size_t l = 1; l < d.layer_sizes.size(); ++l) {
        d.weights[l] = Matrix(d.layer_sizes[l], d.layer_sizes[l - 1]);
        for (std::size_t r = 0; r < d.layer_sizes[l]; ++r) {
            for (std::size_t c = 0; c < d.layer_sizes[l - 1]; ++c)
                d.weights[l](r, c) = w(rng);
            d.biases[l].push_back(b(rng));
        }
    }
    return Network(std::move(d));
}

Query unit_box(std::size_t n, double threshold)
{
    Query q;
    q.lower.assign(n, 0.0);
    q.upper.assign(n, 1.0);
    q.threshold = threshold;
    return q;
}

void BM_Evaluate(benchmark::State &state)
{
    const Network net = random_net(static_cast<std::size_t>(state.range(0)), 4, 1);
    const std::vector<double> x(5, 0.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate(net, x));
}
BENCHMARK(BM_Evaluate)->Arg(10)->Arg(50)->Arg(300);

void BM_Classify(benchmark::State &state)
{
    const Network net = random_net(static_cast<std::size_t>(state.range(0)), 4, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(classify(net));
}
BENCHMARK(BM_Classify)->Arg(10)->Arg(50);

void BM_MaterializeSaturated(benchmark::State &state)
{
    const Network classified = classify(random_net(static_cast<std::size_t>(state.range(0)), 4, 3));
    const Partition p = saturate(Partition::identity(classified));
    for (auto _ : state)
        benchmark::DoNotOptimize(materialize(classified, p));
}
BENCHMARK(BM_MaterializeSaturated)->Arg(10)->Arg(50);

void BM_Simplex(benchmark::State &state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LinearProgram lp;
    lp.num_vars = n;
    lp.lower.assign(n, 0.0);
    lp.upper.assign(n, 1.0);
    for (std::size_t k = 0; k < n; ++k)
        lp.objective.push_back(u(rng));
    for (std::size_t r = 0; r < 2 * n; ++r) {
        LpRow row;
        for (std::size_t k = 0; k < n; ++k)
            row.coeffs.push_back(u(rng));
        row.rhs = 0.5;
        lp.rows.push_back(std::move(row));
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_lp(lp));
}
BENCHMARK(BM_Simplex)->Arg(5)->Arg(20);

void BM_VerifyDirect(benchmark::State &state)
{
    const Network net = random_net(static_cast<std::size_t>(state.range(0)), 2, 5);
    const Query q = unit_box(5, 5.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(verify(net, q));
}
BENCHMARK(BM_VerifyDirect)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_CegarHardQuery(benchmark::State &state)
{
    HardCorpusOptions options;
    options.width = 6;
    options.hidden_layers = 2;
    const GeneratedQuery g = hard_unsat_query(options, 0);
    DriverConfig cfg;
    cfg.abstraction = state.range(0) ? AbstractionMode::Saturation : AbstractionMode::None;
    for (auto _ : state)
        benchmark::DoNotOptimize(run(g.network, g.property, cfg));
}
BENCHMARK(BM_CegarHardQuery)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
