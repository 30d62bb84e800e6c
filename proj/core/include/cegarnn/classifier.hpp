#pragma once

#include "cegarnn/network.hpp"

#include <string>
#include <vector>

namespace cegarnn {

/// Splits every hidden neuron into a pos copy (keeping the non-negative
/// outgoing weights) and a neg copy (keeping the negative ones). Both copies
/// keep all incoming edges and the bias. A copy left without a nonzero
/// outgoing edge is dropped, except that every neuron keeps at least one
/// copy. The result is equivalent to `net`.
Network split_pos_neg(const Network &net);

/// Walks the hidden layers backwards from the output (which counts as inc)
/// and splits each pos/neg neuron into one copy per successor direction: a
/// pos neuron feeding inc successors is inc, feeding dec successors is dec;
/// neg neurons flip. Requires every hidden neuron to carry a sign.
Network split_inc_dec(const Network &net);

/// split_inc_dec(split_pos_neg(net)): an equivalent network whose hidden
/// neurons are all labeled, at most four times as many of them.
Network classify(const Network &net);

/// Structural label check. Returns one message per violated rule, empty when
/// every pos (neg) neuron has only non-negative (non-positive) outgoing
/// weights and every inc (dec) neuron feeds only successors whose direction
/// matches (flips with) its sign.
std::vector<std::string> check_labels(const Network &net);

} // namespace cegarnn
