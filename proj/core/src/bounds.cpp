#include "cegarnn/bounds.hpp"

#include "cegarnn/error.hpp"

#include <algorithm>

namespace cegarnn {

PhaseMap free_phases(const Network &net)
{
    PhaseMap phases(net.num_layers());
    for (std::size_t layer = 1; layer + 1 < net.num_layers(); ++layer)
        phases[layer].assign(net.layer_size(layer), Phase::Free);
    return phases;
}

Bounds propagate_bounds(const Network &net, std::span<const double> lower, std::span<const double> upper,
                        const PhaseMap *phases)
{
    if (lower.size() != net.input_size() || upper.size() != net.input_size())
        throw ShapeError("bounds box has the wrong number of inputs");

    Bounds bounds;
    const std::size_t n = net.num_layers();
    bounds.pre.resize(n);
    bounds.post.resize(n);
    for (std::size_t k = 0; k < net.input_size(); ++k)
        bounds.pre[0].push_back({lower[k], upper[k]});
    bounds.post[0] = bounds.pre[0];

    for (std::size_t layer = 1; layer < n; ++layer) {
        const Matrix &w = net.weights(layer);
        const auto &b = net.bias(layer);
        const auto &in = bounds.post[layer - 1];
        const bool hidden = net.is_hidden(layer);
        auto &pre = bounds.pre[layer];
        auto &post = bounds.post[layer];
        pre.resize(w.rows());
        post.resize(w.rows());
        for (std::size_t j = 0; j < w.rows(); ++j) {
            double lo = b[j], hi = b[j];
            auto row = w.row(j);
            for (std::size_t k = 0; k < row.size(); ++k) {
                const double c = row[k];
                if (c >= 0.0) {
                    lo += c * in[k].lo;
                    hi += c * in[k].hi;
                } else {
                    lo += c * in[k].hi;
                    hi += c * in[k].lo;
                }
            }
            pre[j] = {lo, hi};
            if (!hidden) {
                post[j] = pre[j];
                continue;
            }
            const Phase phase = phases ? (*phases)[layer][j] : Phase::Free;
            if (phase == Phase::Active) {
                if (hi < 0.0)
                    bounds.feasible = false;
                pre[j].lo = std::max(lo, 0.0);
                pre[j].hi = std::max(hi, pre[j].lo);
                post[j] = pre[j];
            } else if (phase == Phase::Inactive) {
                if (lo > 0.0)
                    bounds.feasible = false;
                pre[j].hi = std::min(hi, 0.0);
                pre[j].lo = std::min(lo, pre[j].hi);
                post[j] = {0.0, 0.0};
            } else {
                post[j] = {std::max(lo, 0.0), std::max(hi, 0.0)};
            }
        }
    }
    return bounds;
}

} // namespace cegarnn
