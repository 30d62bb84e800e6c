#include "cegarnn/network.hpp"

#include "cegarnn/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cegarnn {

std::string to_string(Sign sign)
{
    return sign == Sign::Pos ? "pos" : "neg";
}

std::string to_string(Direction direction)
{
    return direction == Direction::Inc ? "inc" : "dec";
}

std::string to_string(NeuronClass cls)
{
    return "<" + to_string(cls.sign) + "," + to_string(cls.direction) + ">";
}

NeuronClass NeuronInfo::label() const
{
    if (!classified())
        throw InvariantError("neuron has no pos/neg and inc/dec label");
    return {*sign, *direction};
}

Network::Network(NetworkData data)
    : _data(std::move(data))
{
    auto &sizes = _data.layer_sizes;
    const std::size_t n = sizes.size();
    if (n < 2)
        throw ShapeError("a network needs at least an input and an output layer");
    for (std::size_t i = 0; i < n; ++i)
        if (sizes[i] == 0)
            throw ShapeError("layer " + std::to_string(i) + " is empty");

    if (_data.weights.size() != n || _data.biases.size() != n)
        throw ShapeError("expected one weight matrix and bias vector per non-input layer");

    for (std::size_t i = 1; i < n; ++i) {
        const Matrix &w = _data.weights[i];
        if (w.rows() != sizes[i] || w.cols() != sizes[i - 1])
            throw ShapeError("weight matrix of layer " + std::to_string(i) + " has shape " +
                             std::to_string(w.rows()) + "x" + std::to_string(w.cols()) + ", expected " +
                             std::to_string(sizes[i]) + "x" + std::to_string(sizes[i - 1]));
        if (_data.biases[i].size() != sizes[i])
            throw ShapeError("bias vector of layer " + std::to_string(i) + " has wrong length");
        for (double v : w.data())
            if (!std::isfinite(v))
                throw ShapeError("non-finite weight in layer " + std::to_string(i));
        for (double v : _data.biases[i])
            if (!std::isfinite(v))
                throw ShapeError("non-finite bias in layer " + std::to_string(i));
    }
    if (_data.weights[0].rows() != 0 || !_data.biases[0].empty())
        throw ShapeError("the input layer carries no weights or biases");

    auto &info = _data.hidden_info;
    if (info.empty())
        info.resize(n);
    if (info.size() != n)
        throw ShapeError("hidden_info must have one entry per layer");
    for (std::size_t i = 0; i < n; ++i) {
        const bool hidden = i > 0 && i + 1 < n;
        if (!hidden) {
            if (!info[i].empty())
                throw ShapeError("only hidden neurons carry metadata");
            continue;
        }
        if (info[i].empty()) {
            info[i].resize(sizes[i]);
            for (std::size_t j = 0; j < sizes[i]; ++j)
                info[i][j].origin = j;
        }
        if (info[i].size() != sizes[i])
            throw ShapeError("metadata of layer " + std::to_string(i) + " has wrong length");
    }
}

std::size_t Network::hidden_count() const
{
    const auto &s = _data.layer_sizes;
    return std::accumulate(s.begin() + 1, s.end() - 1, std::size_t{0});
}

bool Network::classified() const
{
    for (std::size_t i = 1; i + 1 < num_layers(); ++i)
        for (const auto &info : _data.hidden_info[i])
            if (!info.classified())
                return false;
    return true;
}

const Matrix &Network::weights(std::size_t layer) const
{
    if (layer == 0 || layer >= num_layers())
        throw IndexError("layer " + std::to_string(layer) + " has no incoming weights");
    return _data.weights[layer];
}

const std::vector<double> &Network::bias(std::size_t layer) const
{
    if (layer == 0 || layer >= num_layers())
        throw IndexError("layer " + std::to_string(layer) + " has no bias");
    return _data.biases[layer];
}

const NeuronInfo &Network::info(std::size_t layer, std::size_t neuron) const
{
    if (!is_hidden(layer))
        throw IndexError("layer " + std::to_string(layer) + " is not hidden");
    return _data.hidden_info[layer].at(neuron);
}

namespace {

void check_input(const Network &net, std::span<const double> input)
{
    if (input.size() != net.input_size())
        throw ShapeError("input has " + std::to_string(input.size()) + " entries, network expects " +
                         std::to_string(net.input_size()));
    for (double v : input)
        if (!std::isfinite(v))
            throw ShapeError("input contains a non-finite value");
}

void forward_layer(const Network &net, std::size_t layer, std::span<const double> in, std::vector<double> &out)
{
    const Matrix &w = net.weights(layer);
    const auto &b = net.bias(layer);
    const bool relu = net.is_hidden(layer);
    out.resize(w.rows());
    for (std::size_t j = 0; j < w.rows(); ++j) {
        double sum = b[j];
        auto row = w.row(j);
        for (std::size_t k = 0; k < row.size(); ++k)
            sum += row[k] * in[k];
        out[j] = relu ? std::max(sum, 0.0) : sum;
    }
}

} // namespace

std::vector<double> evaluate_to_layer(const Network &net, std::span<const double> input, std::size_t layer)
{
    check_input(net, input);
    if (layer >= net.num_layers())
        throw IndexError("layer " + std::to_string(layer) + " out of range");
    std::vector<double> current(input.begin(), input.end());
    std::vector<double> next;
    for (std::size_t i = 1; i <= layer; ++i) {
        forward_layer(net, i, current, next);
        current.swap(next);
    }
    return current;
}

std::vector<double> evaluate(const Network &net, std::span<const double> input)
{
    return evaluate_to_layer(net, input, net.num_layers() - 1);
}

Assignment evaluate_all(const Network &net, std::span<const double> input)
{
    check_input(net, input);
    Assignment values(net.num_layers());
    values[0].assign(input.begin(), input.end());
    for (std::size_t i = 1; i < net.num_layers(); ++i)
        forward_layer(net, i, values[i - 1], values[i]);
    return values;
}

Network suffix(const Network &net, std::size_t layer)
{
    if (!net.is_hidden(layer))
        throw IndexError("suffix needs a hidden layer index, got " + std::to_string(layer));
    const auto &src = net.data();
    NetworkData d;
    d.layer_sizes.assign(src.layer_sizes.begin() + static_cast<std::ptrdiff_t>(layer), src.layer_sizes.end());
    d.weights.emplace_back();
    d.biases.emplace_back();
    d.hidden_info.emplace_back();
    for (std::size_t i = layer + 1; i < net.num_layers(); ++i) {
        d.weights.push_back(src.weights[i]);
        d.biases.push_back(src.biases[i]);
        d.hidden_info.push_back(src.hidden_info[i]);
    }
    return Network(std::move(d));
}

Network translate_inputs(const Network &net, std::span<const double> offset)
{
    if (offset.size() != net.input_size())
        throw ShapeError("offset length does not match the input size");
    NetworkData d = net.data();
    const Matrix &w = d.weights[1];
    for (std::size_t j = 0; j < w.rows(); ++j) {
        double shift = 0.0;
        for (std::size_t k = 0; k < w.cols(); ++k)
            shift += w(j, k) * offset[k];
        d.biases[1][j] += shift;
    }
    return Network(std::move(d));
}

} // namespace cegarnn
