#include "support.hpp"

#include <cegarnn/error.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace testing {

using namespace cegarnn;

double uniform(Rng &rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t uniform_int(Rng &rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Network random_network(Rng &rng, const std::vector<std::size_t> &sizes, double wlo, double whi, double blo,
                       double bhi)
{
    NetworkData d;
    d.layer_sizes = sizes;
    d.weights.resize(sizes.size());
    d.biases.resize(sizes.size());
    for (std::size_t layer = 1; layer < sizes.size(); ++layer) {
        Matrix w(sizes[layer], sizes[layer - 1]);
        for (std::size_t r = 0; r < w.rows(); ++r)
            for (std::size_t c = 0; c < w.cols(); ++c)
                w(r, c) = uniform(rng, wlo, whi);
        d.weights[layer] = std::move(w);
        for (std::size_t r = 0; r < sizes[layer]; ++r)
            d.biases[layer].push_back(uniform(rng, blo, bhi));
    }
    return Network(std::move(d));
}

std::vector<std::size_t> random_shape(Rng &rng, std::size_t inputs, std::size_t outputs, std::size_t min_layers,
                                      std::size_t max_layers, std::size_t min_width, std::size_t max_width)
{
    std::vector<std::size_t> sizes{inputs};
    const std::size_t layers = uniform_int(rng, min_layers, max_layers);
    for (std::size_t i = 0; i < layers; ++i)
        sizes.push_back(uniform_int(rng, min_width, max_width));
    sizes.push_back(outputs);
    return sizes;
}

std::vector<double> random_point(Rng &rng, const std::vector<double> &lower, const std::vector<double> &upper)
{
    std::vector<double> x(lower.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        x[k] = uniform(rng, lower[k], upper[k]);
    return x;
}

std::vector<double> reference_evaluate(const Network &net, const std::vector<double> &x)
{
    std::vector<double> current = x;
    const std::size_t last = net.num_layers() - 1;
    for (std::size_t layer = 1; layer <= last; ++layer) {
        std::vector<double> next(net.layer_size(layer));
        for (std::size_t to = 0; to < next.size(); ++to) {
            double acc = net.bias(layer)[to];
            for (std::size_t from = 0; from < current.size(); ++from)
                acc += net.weight(layer, to, from) * current[from];
            next[to] = (layer == last || acc > 0.0) ? acc : 0.0;
        }
        current.swap(next);
    }
    return current;
}

Query box_query(std::size_t n, double lo, double hi, double threshold)
{
    Query q;
    q.lower.assign(n, lo);
    q.upper.assign(n, hi);
    q.threshold = threshold;
    return q;
}

Partition random_partition(Rng &rng, const Partition &identity, double merge_fraction)
{
    Partition p = identity;
    for (std::size_t layer = 1; layer + 1 < p.num_layers(); ++layer) {
        const std::size_t steps = static_cast<std::size_t>(merge_fraction * static_cast<double>(p.layer_size(layer)));
        for (std::size_t s = 0; s < steps; ++s) {
            const auto &groups = p.groups(layer);
            std::vector<std::pair<std::size_t, std::size_t>> pairs;
            for (std::size_t a = 0; a < groups.size(); ++a)
                for (std::size_t b = a + 1; b < groups.size(); ++b)
                    if (p.group_label(layer, a) == p.group_label(layer, b))
                        pairs.emplace_back(a, b);
            if (pairs.empty())
                break;
            const auto [a, b] = pairs[uniform_int(rng, 0, pairs.size() - 1)];
            p = merge(p, layer, a, b);
        }
    }
    return p;
}

Partition rebuild_partition(Rng &rng, const Partition &identity, const Partition &target)
{
    Partition p = identity;
    while (true) {
        // Pending merges: pairs of current groups that belong to the same target group.
        std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> pending;
        for (std::size_t layer = 1; layer + 1 < p.num_layers(); ++layer) {
            const auto &groups = p.groups(layer);
            for (std::size_t a = 0; a < groups.size(); ++a)
                for (std::size_t b = a + 1; b < groups.size(); ++b)
                    if (target.group_of({layer, groups[a].front()}) == target.group_of({layer, groups[b].front()}))
                        pending.emplace_back(layer, a, b);
        }
        if (pending.empty())
            return p;
        const auto [layer, a, b] = pending[uniform_int(rng, 0, pending.size() - 1)];
        p = merge(p, layer, a, b);
    }
}

double perturbed_output(const Network &net, const std::vector<double> &x, std::size_t layer, std::size_t j,
                        double delta)
{
    std::vector<double> values = evaluate_to_layer(net, x, layer);
    values[j] += delta;
    return evaluate(suffix(net, layer), values).front();
}

Network sequential_merge(const Network &classified, const Partition &partition, Rng &rng)
{
    const std::size_t n = classified.num_layers();
    // w[layer][to][from]
    std::vector<std::vector<std::vector<double>>> w(n);
    std::vector<std::vector<double>> bias(n);
    std::vector<std::vector<NeuronInfo>> info(n);
    for (std::size_t layer = 1; layer < n; ++layer) {
        const Matrix &m = classified.weights(layer);
        w[layer].assign(m.rows(), std::vector<double>(m.cols()));
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c)
                w[layer][r][c] = m(r, c);
        bias[layer] = classified.bias(layer);
        if (classified.is_hidden(layer))
            info[layer] = classified.layer_info(layer);
    }

    for (std::size_t layer = n - 2; layer >= 1; --layer) {
        std::vector<std::vector<std::size_t>> groups = partition.groups(layer);
        std::shuffle(groups.begin(), groups.end(), rng);
        std::vector<bool> keep(w[layer].size(), true);
        for (const auto &group : groups) {
            const std::size_t head = group.front();
            const bool inc = *info[layer][head].direction == Direction::Inc;
            auto pick = [inc](double a, double b) { return inc ? std::max(a, b) : std::min(a, b); };
            for (std::size_t i = 1; i < group.size(); ++i) {
                const std::size_t other = group[i];
                for (std::size_t c = 0; c < w[layer][head].size(); ++c)
                    w[layer][head][c] = pick(w[layer][head][c], w[layer][other][c]);
                bias[layer][head] = pick(bias[layer][head], bias[layer][other]);
                for (auto &row : w[layer + 1])
                    row[head] = row[head] + row[other];
                keep[other] = false;
            }
        }
        auto compact_rows = [&](auto &v) {
            std::size_t out = 0;
            for (std::size_t j = 0; j < keep.size(); ++j)
                if (keep[j])
                    v[out++] = v[j];
            v.resize(out);
        };
        compact_rows(w[layer]);
        compact_rows(bias[layer]);
        compact_rows(info[layer]);
        for (auto &row : w[layer + 1])
            compact_rows(row);
    }

    NetworkData d;
    d.layer_sizes.push_back(classified.input_size());
    d.weights.resize(n);
    d.biases.resize(n);
    d.hidden_info.resize(n);
    for (std::size_t layer = 1; layer < n; ++layer) {
        const std::size_t rows = w[layer].size(), cols = w[layer].front().size();
        d.layer_sizes.push_back(rows);
        Matrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                m(r, c) = w[layer][r][c];
        d.weights[layer] = std::move(m);
        d.biases[layer] = bias[layer];
        d.hidden_info[layer] = info[layer];
    }
    return Network(std::move(d));
}

namespace {

/// Solves the square system m y = r in place; false when (nearly) singular.
bool solve_square(std::vector<std::vector<double>> m, std::vector<double> r, std::vector<double> &y)
{
    const std::size_t n = r.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::abs(m[i][col]) > std::abs(m[piv][col]))
                piv = i;
        if (std::abs(m[piv][col]) < 1e-10)
            return false;
        std::swap(m[piv], m[col]);
        std::swap(r[piv], r[col]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col)
                continue;
            const double f = m[i][col] / m[col][col];
            for (std::size_t k = col; k < n; ++k)
                m[i][k] -= f * m[col][k];
            r[i] -= f * r[col];
        }
    }
    y.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = r[i] / m[i][i];
    return true;
}

} // namespace

std::optional<double> vertex_lp_max(const std::vector<std::vector<double>> &a, const std::vector<double> &b,
                                    const std::vector<double> &lo, const std::vector<double> &hi,
                                    const std::vector<double> &c)
{
    const std::size_t n = c.size();
    std::vector<std::vector<double>> rows = a;
    std::vector<double> rhs = b;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> up(n, 0.0), down(n, 0.0);
        up[k] = 1.0;
        down[k] = -1.0;
        rows.push_back(up);
        rhs.push_back(hi[k]);
        rows.push_back(down);
        rhs.push_back(-lo[k]);
    }

    std::optional<double> best;
    std::vector<std::size_t> pick(n);
    // Enumerate n-subsets of the rows in lexicographic order.
    for (std::size_t i = 0; i < n; ++i)
        pick[i] = i;
    while (true) {
        std::vector<std::vector<double>> m;
        std::vector<double> r;
        for (std::size_t i : pick) {
            m.push_back(rows[i]);
            r.push_back(rhs[i]);
        }
        std::vector<double> x;
        if (solve_square(m, r, x)) {
            bool feasible = true;
            for (std::size_t i = 0; i < rows.size() && feasible; ++i) {
                double lhs = 0.0;
                for (std::size_t k = 0; k < n; ++k)
                    lhs += rows[i][k] * x[k];
                feasible = lhs <= rhs[i] + 1e-9 * (1.0 + std::abs(rhs[i]));
            }
            if (feasible) {
                double v = 0.0;
                for (std::size_t k = 0; k < n; ++k)
                    v += c[k] * x[k];
                if (!best || v > *best)
                    best = v;
            }
        }
        std::size_t i = n;
        while (i > 0 && pick[i - 1] == rows.size() - n + (i - 1))
            --i;
        if (i == 0)
            break;
        ++pick[i - 1];
        for (std::size_t j = i; j < n; ++j)
            pick[j] = pick[j - 1] + 1;
    }
    return best;
}

GridMax grid_max(const Network &net, const std::vector<double> &lower, const std::vector<double> &upper,
                 std::size_t steps)
{
    if (lower.size() != 2)
        throw std::invalid_argument("grid_max needs a 2-input network");
    struct Sample {
        double value;
        double x0, x1;
    };
    std::vector<Sample> samples;
    auto scan = [&](double l0, double h0, double l1, double h1, std::size_t k) {
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                const double x0 = l0 + (h0 - l0) * static_cast<double>(i) / static_cast<double>(k - 1);
                const double x1 = l1 + (h1 - l1) * static_cast<double>(j) / static_cast<double>(k - 1);
                const std::vector<double> x{x0, x1};
                samples.push_back({evaluate(net, x).front(), x0, x1});
            }
        }
    };
    scan(lower[0], upper[0], lower[1], upper[1], steps);

    double h0 = (upper[0] - lower[0]) / static_cast<double>(steps - 1);
    double h1 = (upper[1] - lower[1]) / static_cast<double>(steps - 1);
    for (int round = 0; round < 4; ++round) {
        std::partial_sort(samples.begin(), samples.begin() + std::min<std::size_t>(8, samples.size()), samples.end(),
                          [](const Sample &a, const Sample &b) { return a.value > b.value; });
        samples.resize(std::min<std::size_t>(8, samples.size()));
        const std::vector<Sample> top = samples;
        for (const auto &s : top)
            scan(std::max(lower[0], s.x0 - h0), std::min(upper[0], s.x0 + h0), std::max(lower[1], s.x1 - h1),
                 std::min(upper[1], s.x1 + h1), 21);
        h0 /= 10.0;
        h1 /= 10.0;
    }
    const auto best = std::max_element(samples.begin(), samples.end(),
                                       [](const Sample &a, const Sample &b) { return a.value < b.value; });
    return {best->value, {best->x0, best->x1}};
}

Network small_example()
{
    NetworkData d;
    d.layer_sizes = {1, 2, 1};
    d.weights.resize(3);
    d.biases.resize(3);
    d.weights[1] = Matrix(2, 1);
    d.weights[1](0, 0) = 1.0;
    d.weights[1](1, 0) = -1.0;
    d.biases[1] = {0.0, 0.0};
    d.weights[2] = Matrix(1, 2);
    d.weights[2](0, 0) = 1.0;
    d.weights[2](0, 1) = 2.0;
    d.biases[2] = {0.0};
    return Network(std::move(d));
}

Network split_example()
{
    NetworkData d;
    d.layer_sizes = {2, 3, 3, 1};
    d.weights.resize(4);
    d.biases.resize(4);
    d.weights[1] = Matrix(3, 2);
    const double w1[3][2] = {{1, -2}, {0.5, 1}, {-1, 1}};
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 2; ++c)
            d.weights[1](r, c) = w1[r][c];
    d.biases[1] = {0.1, -0.2, 0.3};
    d.weights[2] = Matrix(3, 3);
    const double w2[3][3] = {{2, 0, 0}, {1, 1, 0}, {-3, 2, 1}};
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            d.weights[2](r, c) = w2[r][c];
    d.biases[2] = {0.0, 0.5, -0.5};
    d.weights[3] = Matrix(1, 3);
    d.weights[3](0, 0) = 3;
    d.weights[3](0, 1) = -1;
    d.weights[3](0, 2) = 1;
    d.biases[3] = {0.0};
    return Network(std::move(d));
}

Network merge_example()
{
    NetworkData d;
    d.layer_sizes = {2, 3, 1};
    d.weights.resize(3);
    d.biases.resize(3);
    d.weights[1] = Matrix(3, 2);
    const double in[3][2] = {{1.0, -2.0}, {4.0, -1.0}, {2.0, -3.0}};
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 2; ++c)
            d.weights[1](r, c) = in[r][c];
    d.biases[1] = {0.0, 0.0, 0.0};
    d.weights[2] = Matrix(1, 3);
    d.weights[2](0, 0) = 5.0;
    d.weights[2](0, 1) = 3.0;
    d.weights[2](0, 2) = 4.0;
    d.biases[2] = {0.0};
    return Network(std::move(d));
}

std::string read_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace testing
