#include "support.hpp"

#include <cegarnn/classifier.hpp>
#include <cegarnn/error.hpp>

#include <doctest.h>

#include <cmath>

using namespace cegarnn;
using testing::Rng;

namespace {

bool close(double a, double b)
{
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b));
}

} // namespace

TEST_CASE("pos/neg split of one neuron")
{
    const Network n1 = split_pos_neg(testing::split_example());
    // v11 -> pos copy (2, 1, 0) and neg copy (0, 0, -3); second neuron (0, 1, 2) pos only; third pos only.
    REQUIRE(n1.layer_size(1) == 4);
    CHECK(n1.info(1, 0).origin == 0);
    CHECK(n1.info(1, 0).sign == Sign::Pos);
    CHECK(n1.info(1, 1).origin == 0);
    CHECK(n1.info(1, 1).sign == Sign::Neg);
    const Matrix &w = n1.weights(2);
    CHECK(w(0, 0) == 2.0);
    CHECK(w(1, 0) == 1.0);
    CHECK(w(2, 0) == 0.0);
    CHECK(w(0, 1) == 0.0);
    CHECK(w(1, 1) == 0.0);
    CHECK(w(2, 1) == -3.0);
    for (std::size_t c = 0; c < 2; ++c) {
        CHECK(n1.weights(1)(0, c) == n1.weights(1)(1, c));
    }
    CHECK(n1.weights(1)(0, 0) == 1.0);
    CHECK(n1.weights(1)(0, 1) == -2.0);
    CHECK(n1.bias(1)[0] == n1.bias(1)[1]);
}

TEST_CASE("inc/dec split yields three copies")
{
    const Network n2 = classify(testing::split_example());
    REQUIRE(n2.layer_size(2) == 3);
    CHECK(n2.info(2, 0).label() == NeuronClass{Sign::Pos, Direction::Inc});
    CHECK(n2.info(2, 1).label() == NeuronClass{Sign::Neg, Direction::Dec});
    CHECK(n2.info(2, 2).label() == NeuronClass{Sign::Pos, Direction::Inc});

    std::size_t copies = 0;
    for (std::size_t j = 0; j < n2.layer_size(1); ++j)
        copies += n2.info(1, j).origin == 0 ? 1 : 0;
    CHECK(copies == 3);
    CHECK(n2.info(1, 0).label() == NeuronClass{Sign::Pos, Direction::Inc});
    CHECK(n2.info(1, 1).label() == NeuronClass{Sign::Pos, Direction::Dec});
    CHECK(n2.info(1, 2).label() == NeuronClass{Sign::Neg, Direction::Dec});

    const Matrix &w = n2.weights(2);
    // +I copy: weight 2 to the first (inc) successor only.
    CHECK(w(0, 0) == 2.0);
    CHECK(w(1, 0) == 0.0);
    CHECK(w(2, 0) == 0.0);
    // +D copy: weight 1 to the dec successor only.
    CHECK(w(0, 1) == 0.0);
    CHECK(w(1, 1) == 1.0);
    CHECK(w(2, 1) == 0.0);
    // -D copy: weight -3 to the last (inc) successor.
    CHECK(w(0, 2) == 0.0);
    CHECK(w(1, 2) == 0.0);
    CHECK(w(2, 2) == -3.0);
    CHECK(check_labels(n2).empty());
}

TEST_CASE("output-adjacent pos neurons are inc")
{
    Rng rng(21);
    const Network n2 = classify(testing::random_network(rng, {2, 5, 4, 1}));
    const std::size_t last = n2.num_layers() - 2;
    for (std::size_t j = 0; j < n2.layer_size(last); ++j) {
        const NeuronInfo &info = n2.info(last, j);
        CHECK(info.direction == (info.sign == Sign::Pos ? Direction::Inc : Direction::Dec));
    }
}

TEST_CASE("all-positive outgoing weights need no split")
{
    Rng rng(22);
    Network net = testing::random_network(rng, {3, 4, 4, 1});
    NetworkData d = net.data();
    for (std::size_t layer = 2; layer < 4; ++layer)
        for (std::size_t r = 0; r < d.weights[layer].rows(); ++r)
            for (auto &v : d.weights[layer].row(r))
                v = std::abs(v);
    const Network pos(d);
    const Network n2 = classify(pos);
    CHECK(n2.layer_sizes() == pos.layer_sizes());
    for (std::size_t layer = 1; layer < 3; ++layer)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(n2.info(layer, j).label() == NeuronClass{Sign::Pos, Direction::Inc});
}

TEST_CASE("classification preserves the function and the size bound")
{
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const Network net = testing::random_network(rng, testing::random_shape(rng, 3, 1, 1, 4, 1, 7));
        const Network n1 = split_pos_neg(net);
        const Network n2 = split_inc_dec(n1);
        CHECK(n2.classified());
        CHECK(n2.hidden_count() <= 4 * net.hidden_count());
        CHECK(check_labels(n2).empty());
        for (std::size_t layer = 1; layer + 1 < net.num_layers(); ++layer)
            CHECK(n2.layer_size(layer) <= 4 * net.layer_size(layer));
        for (int i = 0; i < 20; ++i) {
            const auto x = testing::random_point(rng, {-1, -1, -1}, {1, 1, 1});
            const double y = evaluate(net, x)[0];
            CHECK(close(evaluate(n1, x)[0], y));
            CHECK(close(evaluate(n2, x)[0], y));
        }
    }
}

TEST_CASE("inc neurons raise and dec neurons lower the output")
{
    Rng rng(24);
    for (int trial = 0; trial < 40; ++trial) {
        const Network n2 = classify(testing::random_network(rng, testing::random_shape(rng, 2, 1, 1, 3, 1, 5)));
        for (int probe = 0; probe < 10; ++probe) {
            const std::size_t layer = testing::uniform_int(rng, 1, n2.num_layers() - 2);
            const std::size_t j = testing::uniform_int(rng, 0, n2.layer_size(layer) - 1);
            const auto x = testing::random_point(rng, {-1, -1}, {1, 1});
            const double base = testing::perturbed_output(n2, x, layer, j, 0.0);
            const double up = testing::perturbed_output(n2, x, layer, j, testing::uniform(rng, 0.01, 1.0));
            if (n2.info(layer, j).direction == Direction::Inc)
                CHECK(up >= base - 1e-12);
            else
                CHECK(up <= base + 1e-12);
        }
    }
}

TEST_CASE("classification needs a single output")
{
    Rng rng(25);
    CHECK_THROWS_AS(classify(testing::random_network(rng, {2, 3, 2})), ShapeError);
    CHECK_THROWS_AS(split_inc_dec(testing::random_network(rng, {2, 3, 1})), InvariantError);
}

TEST_CASE("check_labels flags wrong labels")
{
    const Network n2 = classify(testing::split_example());
    NetworkData d = n2.data();
    d.hidden_info[1][0].sign = Sign::Neg;
    CHECK_FALSE(check_labels(Network(d)).empty());
}
