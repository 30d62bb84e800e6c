#pragma once

#include "cegarnn/network.hpp"

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace cegarnn {

/// Input/output normalization constants carried by an NNet file. `means` and
/// `ranges` have input_size + 1 entries; the last entry describes the outputs.
struct Normalization {
    std::vector<double> input_mins;
    std::vector<double> input_maxes;
    std::vector<double> means;
    std::vector<double> ranges;

    bool operator==(const Normalization &) const = default;
};

/// A parsed NNet file. The normalization constants are kept as metadata and
/// are not folded into the weights unless apply_normalization is called.
struct NNetModel {
    Network network;
    Normalization normalization;
};

/// Throws ParseError (with the offending line) on malformed input.
NNetModel parse_nnet(std::string_view text);
NNetModel parse_nnet(std::istream &in);
NNetModel load_nnet(const std::string &path);

/// Writes the network in NNet layout. Hidden-neuron labels are not part of
/// the format and are dropped. Values are printed with 17 significant digits
/// so a reparse reproduces them exactly.
std::string serialize_nnet(const Network &net, const Normalization &normalization);

/// Default constants for a network without normalization: zero means, unit
/// ranges and the given input bounds (or +-1e9 when none are known).
Normalization identity_normalization(const Network &net);

/// Folds the normalization into the network so that it accepts raw inputs
/// and produces raw outputs: x_norm = (x - mean) / range on the inputs and
/// y_raw = y_norm * range + mean on every output.
Network apply_normalization(const NNetModel &model);

} // namespace cegarnn
