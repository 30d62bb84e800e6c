#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cegarnn {

enum class Sign { Pos, Neg };
enum class Direction { Inc, Dec };

struct NeuronClass {
    Sign sign;
    Direction direction;

    bool operator==(const NeuronClass &) const = default;
};

std::string to_string(Sign sign);
std::string to_string(Direction direction);
std::string to_string(NeuronClass cls);

/// Provenance and labels of a hidden neuron. `origin` is the index of the
/// neuron in the same layer of the network the classifier started from, so
/// every copy produced by a split can be traced back to its original.
struct NeuronInfo {
    std::size_t origin = 0;
    std::optional<Sign> sign;
    std::optional<Direction> direction;

    bool classified() const { return sign.has_value() && direction.has_value(); }
    NeuronClass label() const;

    bool operator==(const NeuronInfo &) const = default;
};

/// Dense row-major matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : _rows(rows)
        , _cols(cols)
        , _data(rows * cols, fill)
    {
    }

    std::size_t rows() const { return _rows; }
    std::size_t cols() const { return _cols; }

    double &operator()(std::size_t r, std::size_t c) { return _data[r * _cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return _data[r * _cols + c]; }

    std::span<const double> row(std::size_t r) const { return {_data.data() + r * _cols, _cols}; }
    std::span<double> row(std::size_t r) { return {_data.data() + r * _cols, _cols}; }

    const std::vector<double> &data() const { return _data; }

    bool operator==(const Matrix &) const = default;

private:
    std::size_t _rows = 0;
    std::size_t _cols = 0;
    std::vector<double> _data;
};

/// Raw, unvalidated network contents. Layer 0 is the input layer;
/// `weights[i]` (i >= 1) maps layer i-1 to layer i and has shape
/// layer_sizes[i] x layer_sizes[i-1]. `weights[0]` and `biases[0]` are empty.
/// `hidden_info[i]` is empty for the input and output layers.
struct NetworkData {
    std::vector<std::size_t> layer_sizes;
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
    std::vector<std::vector<NeuronInfo>> hidden_info;

    bool operator==(const NetworkData &) const = default;
};

/// Immutable feedforward ReLU network. Hidden layers apply ReLU, the output
/// layer is affine. Construction validates every shape, so an existing
/// Network is always dimensionally consistent.
class Network {
public:
    /// Throws ShapeError on inconsistent dimensions, fewer than two layers,
    /// empty layers or non-finite parameters. Missing hidden_info is filled
    /// with unlabeled entries whose origin is the neuron's own index.
    explicit Network(NetworkData data);

    std::size_t num_layers() const { return _data.layer_sizes.size(); }
    std::size_t layer_size(std::size_t layer) const { return _data.layer_sizes.at(layer); }
    const std::vector<std::size_t> &layer_sizes() const { return _data.layer_sizes; }
    std::size_t input_size() const { return _data.layer_sizes.front(); }
    std::size_t output_size() const { return _data.layer_sizes.back(); }

    /// Sum of hidden layer sizes.
    std::size_t hidden_count() const;

    bool is_hidden(std::size_t layer) const { return layer > 0 && layer + 1 < num_layers(); }

    /// Single output neuron, as required by the y > c query form.
    bool query_ready() const { return output_size() == 1; }

    /// Every hidden neuron carries both a sign and a direction label.
    bool classified() const;

    const Matrix &weights(std::size_t layer) const;
    const std::vector<double> &bias(std::size_t layer) const;
    double weight(std::size_t layer, std::size_t to, std::size_t from) const
    {
        return weights(layer)(to, from);
    }

    const NeuronInfo &info(std::size_t layer, std::size_t neuron) const;
    const std::vector<NeuronInfo> &layer_info(std::size_t layer) const { return _data.hidden_info.at(layer); }

    const NetworkData &data() const { return _data; }

    bool operator==(const Network &) const = default;

private:
    NetworkData _data;
};

/// Post-activation value of every neuron; entry 0 is the input itself and the
/// last entry the (affine) output.
using Assignment = std::vector<std::vector<double>>;

std::vector<double> evaluate(const Network &net, std::span<const double> input);
Assignment evaluate_all(const Network &net, std::span<const double> input);

/// Evaluates only up to (and including) `layer`, returning its post-activation values.
std::vector<double> evaluate_to_layer(const Network &net, std::span<const double> input, std::size_t layer);

/// The network made of layers `layer`..n-1 with `layer` as the new input
/// layer. Requires 0 < layer < n-1 (a hidden layer).
Network suffix(const Network &net, std::size_t layer);

/// Network computing net(x + offset). Only the first layer's bias changes.
Network translate_inputs(const Network &net, std::span<const double> offset);

} // namespace cegarnn
