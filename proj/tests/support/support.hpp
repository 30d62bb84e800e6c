#pragma once

#include <cegarnn/network.hpp>
#include <cegarnn/partition.hpp>
#include <cegarnn/query.hpp>

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace testing {

using Rng = std::mt19937_64;

double uniform(Rng &rng, double lo, double hi);
std::size_t uniform_int(Rng &rng, std::size_t lo, std::size_t hi);

/// Fully connected network with the given layer sizes, weights U[wlo, whi]
/// and biases U[blo, bhi].
cegarnn::Network random_network(Rng &rng, const std::vector<std::size_t> &sizes, double wlo = -2.0,
                                double whi = 2.0, double blo = -1.0, double bhi = 1.0);

/// Layer sizes: `inputs`, then between min_layers and max_layers hidden
/// layers of min_width..max_width neurons, then `outputs`.
std::vector<std::size_t> random_shape(Rng &rng, std::size_t inputs, std::size_t outputs, std::size_t min_layers,
                                      std::size_t max_layers, std::size_t min_width, std::size_t max_width);

std::vector<double> random_point(Rng &rng, const std::vector<double> &lower, const std::vector<double> &upper);

/// Forward pass written independently of the library: reads weights one by
/// one through Network::weight and applies ReLU by hand.
std::vector<double> reference_evaluate(const cegarnn::Network &net, const std::vector<double> &x);

/// Query with box [lo, hi]^n and threshold c.
cegarnn::Query box_query(std::size_t n, double lo, double hi, double threshold);

/// Random partition reached by a random sequence of legal merges.
cegarnn::Partition random_partition(Rng &rng, const cegarnn::Partition &identity, double merge_fraction = 0.5);

/// Reaches `target` from `identity` through a random sequence of merges.
cegarnn::Partition rebuild_partition(Rng &rng, const cegarnn::Partition &identity, const cegarnn::Partition &target);

/// Post-activation values of layer `layer` plus `delta` on neuron `j`, pushed
/// through the rest of the network.
double perturbed_output(const cegarnn::Network &net, const std::vector<double> &x, std::size_t layer, std::size_t j,
                        double delta);

/// Reference for materialize: start from the classified network and apply
/// pairwise merges layer by layer from the output side. Within a layer the
/// groups are processed in a random order and each group's members are
/// folded in increasing order: incoming weights and bias aggregated with
/// max (inc) or min (dec), outgoing weights added.
cegarnn::Network sequential_merge(const cegarnn::Network &classified, const cegarnn::Partition &partition, Rng &rng);

/// maximize c.x s.t. A x <= b, lo <= x <= hi by enumerating every vertex
/// (all n-subsets of the tight constraints). Meant for n <= 3.
std::optional<double> vertex_lp_max(const std::vector<std::vector<double>> &a, const std::vector<double> &b,
                                    const std::vector<double> &lo, const std::vector<double> &hi,
                                    const std::vector<double> &c);

struct GridMax {
    double value;
    std::vector<double> point;
};

/// Maximum of a 2-input single-output network over a steps x steps grid of
/// the box, followed by a few rounds of finer local grids around the best
/// points found so far.
GridMax grid_max(const cegarnn::Network &net, const std::vector<double> &lower, const std::vector<double> &upper,
                 std::size_t steps);

/// One input, two hidden neurons with weights 1 and -1, output weights 1
/// and 2, zero biases.
cegarnn::Network small_example();

/// Two inputs, three pos/inc hidden neurons v1..v3 with incoming weights
/// (1,-2), (4,-1), (2,-3) and output weights 5, 3, 4.
cegarnn::Network merge_example();

/// Two inputs, hidden layers of three neurons, one output. The first neuron
/// of the first hidden layer has incoming weights (1, -2) and outgoing
/// weights 2, 1, -3; the second hidden layer holds a pos/inc, a neg/dec and
/// a pos/inc neuron.
cegarnn::Network split_example();

std::string read_file(const std::string &path);

} // namespace testing
