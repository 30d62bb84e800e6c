#include "support.hpp"

#include <cegarnn/abstraction.hpp>
#include <cegarnn/bounds.hpp>
#include <cegarnn/classifier.hpp>
#include <cegarnn/driver.hpp>
#include <cegarnn/generate.hpp>
#include <cegarnn/partition.hpp>

#include <doctest.h>

using namespace cegarnn;

TEST_CASE("hard networks keep their shape under classification")
{
    HardCorpusOptions options;
    options.width = 6;
    options.hidden_layers = 3;
    const Network net = hard_network(options, 4);
    CHECK(net.layer_sizes() == std::vector<std::size_t>{5, 6, 6, 6, 1});
    const Network c = classify(net);
    CHECK(c.hidden_count() == net.hidden_count());
    const Network a = materialize(c, saturate(Partition::identity(c))).network;
    CHECK(a.layer_size(1) == 2);
    CHECK(a.layer_size(2) == 1);
    CHECK(a.layer_size(3) == 1);
    CHECK(hard_network(options, 4) == net);
}

TEST_CASE("hard queries are refuted by the saturated abstraction")
{
    HardCorpusOptions options;
    options.width = 5;
    options.hidden_layers = 2;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const GeneratedQuery g = hard_unsat_query(options, seed);
        const double threshold = -g.property.disjuncts.front().constant;
        CHECK(propagate_bounds(g.network, g.property.lower, g.property.upper).output().hi > threshold);
        const VerdictReport report = run(g.network, g.property, {});
        CHECK(report.status == Status::Unsat);
        CHECK(report.stats.refinement_rounds == 0);
        testing::Rng rng(seed);
        for (int s = 0; s < 200; ++s)
            CHECK(evaluate(g.network, testing::random_point(rng, g.property.lower, g.property.upper))[0] < threshold);
    }
}

TEST_CASE("saturated maximum brackets sampled abstract values")
{
    HardCorpusOptions options;
    options.width = 4;
    const Network net = hard_network(options, 9);
    RawProperty box;
    box.lower.assign(5, 0.0);
    box.upper.assign(5, 1.0);
    const double top = saturated_maximum(net, box);
    const Network c = classify(net);
    const Network a = materialize(c, saturate(Partition::identity(c))).network;
    testing::Rng rng(2);
    double sampled = -1e300;
    for (int s = 0; s < 2000; ++s)
        sampled = std::max(sampled, evaluate(a, testing::random_point(rng, box.lower, box.upper))[0]);
    CHECK(sampled <= top + 1e-9);
    CHECK(top <= propagate_bounds(a, box.lower, box.upper).output().hi + 1e-9);
}
