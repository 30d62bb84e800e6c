#include "cegarnn/classifier.hpp"

#include "cegarnn/error.hpp"

#include <functional>

namespace cegarnn {

namespace {

/// One neuron of the rewritten layer: a copy of `source` that keeps only the
/// outgoing weights accepted by `keep` (indexed by successor).
struct Copy {
    std::size_t source;
    std::vector<bool> keep;
    NeuronInfo info;
};

void rewrite_layer(NetworkData &d, std::size_t layer, const std::vector<Copy> &copies)
{
    const Matrix &in_w = d.weights[layer];
    const Matrix &out_w = d.weights[layer + 1];
    const std::size_t n = copies.size();

    Matrix new_in(n, in_w.cols());
    std::vector<double> new_bias(n);
    Matrix new_out(out_w.rows(), n);
    std::vector<NeuronInfo> new_info(n);
    for (std::size_t c = 0; c < n; ++c) {
        const Copy &copy = copies[c];
        auto src = in_w.row(copy.source);
        std::copy(src.begin(), src.end(), new_in.row(c).begin());
        new_bias[c] = d.biases[layer][copy.source];
        for (std::size_t q = 0; q < out_w.rows(); ++q)
            new_out(q, c) = copy.keep[q] ? out_w(q, copy.source) : 0.0;
        new_info[c] = copy.info;
    }
    d.weights[layer] = std::move(new_in);
    d.weights[layer + 1] = std::move(new_out);
    d.biases[layer] = std::move(new_bias);
    d.hidden_info[layer] = std::move(new_info);
    d.layer_sizes[layer] = n;
}

void require_query_ready(const Network &net)
{
    if (!net.query_ready())
        throw ShapeError("classification needs a single-output network, got " + std::to_string(net.output_size()) +
                         " outputs");
}

} // namespace

Network split_pos_neg(const Network &net)
{
    require_query_ready(net);
    NetworkData d = net.data();
    for (std::size_t layer = 1; layer + 1 < d.layer_sizes.size(); ++layer) {
        const Matrix &out_w = d.weights[layer + 1];
        std::vector<Copy> copies;
        for (std::size_t j = 0; j < d.layer_sizes[layer]; ++j) {
            std::vector<bool> pos(out_w.rows()), neg(out_w.rows());
            bool has_pos = false, has_neg = false;
            for (std::size_t q = 0; q < out_w.rows(); ++q) {
                const double w = out_w(q, j);
                pos[q] = w >= 0.0;
                neg[q] = w < 0.0;
                has_pos |= w > 0.0;
                has_neg |= w < 0.0;
            }
            NeuronInfo base = d.hidden_info[layer][j];
            base.direction.reset();
            if (has_pos || !has_neg) {
                NeuronInfo info = base;
                info.sign = Sign::Pos;
                copies.push_back({j, std::move(pos), info});
            }
            if (has_neg) {
                NeuronInfo info = base;
                info.sign = Sign::Neg;
                copies.push_back({j, std::move(neg), info});
            }
        }
        rewrite_layer(d, layer, copies);
    }
    return Network(std::move(d));
}

Network split_inc_dec(const Network &net)
{
    require_query_ready(net);
    NetworkData d = net.data();
    const std::size_t last = d.layer_sizes.size() - 1;
    for (std::size_t layer = last - 1; layer >= 1; --layer) {
        std::vector<Direction> successor(d.layer_sizes[layer + 1], Direction::Inc);
        if (layer + 1 != last)
            for (std::size_t q = 0; q < successor.size(); ++q)
                successor[q] = *d.hidden_info[layer + 1][q].direction;

        const Matrix &out_w = d.weights[layer + 1];
        std::vector<Copy> copies;
        for (std::size_t j = 0; j < d.layer_sizes[layer]; ++j) {
            const NeuronInfo &base = d.hidden_info[layer][j];
            if (!base.sign)
                throw InvariantError("hidden neuron " + std::to_string(j) + " of layer " + std::to_string(layer) +
                                     " has no pos/neg label");
            std::vector<bool> to_inc(out_w.rows()), to_dec(out_w.rows());
            bool any_inc = false, any_dec = false;
            for (std::size_t q = 0; q < out_w.rows(); ++q) {
                const bool inc = successor[q] == Direction::Inc;
                to_inc[q] = inc;
                to_dec[q] = !inc;
                if (out_w(q, j) != 0.0)
                    (inc ? any_inc : any_dec) = true;
            }
            const bool pos = *base.sign == Sign::Pos;
            if (any_inc || !any_dec) {
                NeuronInfo info = base;
                info.direction = pos ? Direction::Inc : Direction::Dec;
                copies.push_back({j, std::move(to_inc), info});
            }
            if (any_dec) {
                NeuronInfo info = base;
                info.direction = pos ? Direction::Dec : Direction::Inc;
                copies.push_back({j, std::move(to_dec), info});
            }
        }
        rewrite_layer(d, layer, copies);
        if (layer == 1)
            break;
    }
    return Network(std::move(d));
}

Network classify(const Network &net)
{
    return split_inc_dec(split_pos_neg(net));
}

std::vector<std::string> check_labels(const Network &net)
{
    std::vector<std::string> problems;
    const std::size_t last = net.num_layers() - 1;
    for (std::size_t layer = 1; layer < last; ++layer) {
        const Matrix &out_w = net.weights(layer + 1);
        for (std::size_t j = 0; j < net.layer_size(layer); ++j) {
            const NeuronInfo &info = net.info(layer, j);
            const std::string where = "neuron " + std::to_string(j) + " of layer " + std::to_string(layer);
            if (!info.classified()) {
                problems.push_back(where + " is unlabeled");
                continue;
            }
            for (std::size_t q = 0; q < out_w.rows(); ++q) {
                const double w = out_w(q, j);
                if (w == 0.0)
                    continue;
                if (*info.sign == Sign::Pos ? w < 0.0 : w > 0.0)
                    problems.push_back(where + " is " + to_string(*info.sign) + " but has outgoing weight " +
                                       std::to_string(w));
                const Direction succ = (layer + 1 == last) ? Direction::Inc : *net.info(layer + 1, q).direction;
                // An inc neuron raises the output iff its weight agrees with the successor's direction.
                const bool raises = (succ == Direction::Inc) == (w > 0.0);
                if ((*info.direction == Direction::Inc) != raises)
                    problems.push_back(where + " is " + to_string(*info.direction) + " but feeds a " +
                                       to_string(succ) + " successor with weight " + std::to_string(w));
            }
        }
    }
    return problems;
}

} // namespace cegarnn
