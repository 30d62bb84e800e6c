#include "cegarnn/solver.hpp"

#include "cegarnn/bounds.hpp"
#include "cegarnn/error.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace cegarnn {

Budget Budget::seconds(double s)
{
    Budget b;
    b.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(s));
    return b;
}

namespace {

/// For every hidden neuron, the first neuron of its layer with the same
/// incoming row and bias. Such neurons always share their pre-activation.
std::vector<std::vector<std::size_t>> find_twins(const Network &net)
{
    std::vector<std::vector<std::size_t>> rep(net.num_layers());
    for (std::size_t layer = 1; layer + 1 < net.num_layers(); ++layer) {
        const Matrix &w = net.weights(layer);
        const auto &b = net.bias(layer);
        auto &r = rep[layer];
        r.resize(w.rows());
        for (std::size_t j = 0; j < w.rows(); ++j) {
            r[j] = j;
            for (std::size_t k = 0; k < j; ++k) {
                if (r[k] != k || b[k] != b[j])
                    continue;
                auto a = w.row(j), c = w.row(k);
                if (std::equal(a.begin(), a.end(), c.begin())) {
                    r[j] = k;
                    break;
                }
            }
        }
    }
    return rep;
}

struct Node {
    PhaseMap phases;
    std::vector<std::pair<std::size_t, std::size_t>> branched;
};

/// Affine form sum_k coeffs[k] x_k + constant.
struct Affine {
    std::vector<double> coeffs;
    double constant = 0.0;
};

class Search {
public:
    Search(const Network &net, const Query &query, const Budget &budget, const SolverOptions &options)
        : _net(net)
        , _query(query)
        , _budget(budget)
        , _options(options)
        , _twins(find_twins(net))
        , _target(query.threshold + query.eps_strict)
    {
    }

    Verdict run()
    {
        Verdict verdict;
        if (_query.box_empty()) {
            verdict.status = VerdictStatus::Unsat;
            return verdict;
        }
        if (probe_center())
            return sat(std::move(verdict));

        std::vector<Node> stack;
        stack.push_back({free_phases(_net), {}});
        while (!stack.empty()) {
            if (_budget.expired() || (_budget.max_nodes > 0 && _stats.nodes >= _budget.max_nodes)) {
                verdict.status = VerdictStatus::Timeout;
                verdict.stats = _stats;
                verdict.message = "verification budget exhausted";
                return verdict;
            }
            Node node = std::move(stack.back());
            stack.pop_back();
            ++_stats.nodes;

            const Bounds bounds = propagate_bounds(_net, _query.lower, _query.upper, &node.phases);
            if (!bounds.feasible || bounds.output().hi < _target) {
                ++_stats.pruned;
                continue;
            }

            std::optional<std::pair<std::size_t, std::size_t>> pick;
            double widest = -1.0;
            for (std::size_t layer = 1; layer + 1 < _net.num_layers(); ++layer) {
                for (std::size_t j = 0; j < _net.layer_size(layer); ++j) {
                    Phase &phase = node.phases[layer][j];
                    if (phase != Phase::Free)
                        continue;
                    const Interval &pre = bounds.pre[layer][j];
                    if (pre.lo >= 0.0)
                        phase = Phase::Active;
                    else if (pre.hi <= 0.0)
                        phase = Phase::Inactive;
                    else if (_twins[layer][j] == j && pre.width() > widest) {
                        widest = pre.width();
                        pick = {layer, j};
                    }
                }
            }

            if (!pick) {
                try {
                    if (solve_leaf(node))
                        return sat(std::move(verdict));
                } catch (const NumericError &e) {
                    verdict.status = VerdictStatus::Inconclusive;
                    verdict.stats = _stats;
                    verdict.message = e.what();
                    return verdict;
                }
                continue;
            }

            ++_stats.splits;
            const auto [layer, rep] = *pick;
            Node inactive = node;
            set_phase(inactive, layer, rep, Phase::Inactive);
            set_phase(node, layer, rep, Phase::Active);
            stack.push_back(std::move(inactive));
            stack.push_back(std::move(node));
        }

        verdict.stats = _stats;
        if (_numeric_doubt) {
            verdict.status = VerdictStatus::Inconclusive;
            verdict.message = "leaf LP optimum did not re-check under evaluation";
        } else {
            verdict.status = VerdictStatus::Unsat;
        }
        return verdict;
    }

private:
    Verdict sat(Verdict verdict)
    {
        verdict.status = VerdictStatus::Sat;
        verdict.witness = _witness;
        verdict.stats = _stats;
        return verdict;
    }

    void set_phase(Node &node, std::size_t layer, std::size_t rep, Phase phase)
    {
        for (std::size_t j = 0; j < _net.layer_size(layer); ++j)
            if (_twins[layer][j] == rep)
                node.phases[layer][j] = phase;
        node.branched.emplace_back(layer, rep);
    }

    bool accept(const std::vector<double> &x)
    {
        if (!_query.satisfies_input(x, _options.witness_slack))
            return false;
        if (evaluate(_net, x).front() < _target - 1e-9)
            return false;
        _witness = x;
        return true;
    }

    bool probe_center()
    {
        std::vector<double> x(_query.num_inputs());
        for (std::size_t k = 0; k < x.size(); ++k)
            x[k] = 0.5 * (_query.lower[k] + _query.upper[k]);
        return accept(x);
    }

    /// Pre-activation affine forms of every neuron under the node's phases.
    std::vector<std::vector<Affine>> affine_forms(const Node &node) const
    {
        const std::size_t n_in = _net.input_size();
        std::vector<std::vector<Affine>> pre(_net.num_layers());
        std::vector<Affine> post(n_in);
        for (std::size_t k = 0; k < n_in; ++k) {
            post[k].coeffs.assign(n_in, 0.0);
            post[k].coeffs[k] = 1.0;
        }
        for (std::size_t layer = 1; layer < _net.num_layers(); ++layer) {
            const Matrix &w = _net.weights(layer);
            const auto &b = _net.bias(layer);
            auto &forms = pre[layer];
            forms.resize(w.rows());
            for (std::size_t j = 0; j < w.rows(); ++j) {
                forms[j].coeffs.assign(n_in, 0.0);
                forms[j].constant = b[j];
                for (std::size_t k = 0; k < w.cols(); ++k) {
                    const double a = w(j, k);
                    if (a == 0.0 || post[k].coeffs.empty())
                        continue;
                    for (std::size_t i = 0; i < n_in; ++i)
                        forms[j].coeffs[i] += a * post[k].coeffs[i];
                    forms[j].constant += a * post[k].constant;
                }
            }
            if (!_net.is_hidden(layer))
                break;
            std::vector<Affine> next(w.rows());
            for (std::size_t j = 0; j < w.rows(); ++j)
                if (node.phases[layer][j] == Phase::Active)
                    next[j] = forms[j];
            post = std::move(next);
        }
        return pre;
    }

    bool solve_leaf(const Node &node)
    {
        ++_stats.leaves;
        const auto forms = affine_forms(node);
        const Affine &out = forms.back().front();

        LinearProgram lp;
        lp.num_vars = _net.input_size();
        lp.objective = out.coeffs;
        lp.lower = _query.lower;
        lp.upper = _query.upper;
        for (const auto &c : _query.constraints)
            lp.rows.push_back({c.coeffs, Relation::LessEqual, c.rhs - _options.conjunct_margin});
        for (const auto &[layer, j] : node.branched) {
            const Affine &f = forms[layer][j];
            const Relation rel =
                node.phases[layer][j] == Phase::Active ? Relation::GreaterEqual : Relation::LessEqual;
            lp.rows.push_back({f.coeffs, rel, -f.constant});
        }

        ++_stats.lp_calls;
        const LpResult r = solve_lp(lp, _options.lp);
        if (r.status == LpStatus::Infeasible)
            return false;
        if (r.status == LpStatus::Unbounded)
            throw NumericError("leaf LP unbounded over a bounded box");
        const double value = r.value + out.constant;
        if (value < _target)
            return false;
        if (accept(r.point))
            return true;
        const double actual = evaluate(_net, r.point).front();
        if (value >= _target + 1e-6 && value - actual > 1e-6)
            _numeric_doubt = true;
        return false;
    }

    const Network &_net;
    const Query &_query;
    const Budget &_budget;
    const SolverOptions &_options;
    std::vector<std::vector<std::size_t>> _twins;
    double _target;
    SolverStats _stats;
    std::vector<double> _witness;
    bool _numeric_doubt = false;
};

} // namespace

Verdict BranchAndBoundVerifier::verify(const Network &net, const Query &query, const Budget &budget)
{
    if (!net.query_ready())
        throw ShapeError("verification needs a single-output network");
    query.validate(net.input_size());
    return Search(net, query, budget, _options).run();
}

Verdict verify(const Network &net, const Query &query, const Budget &budget)
{
    return BranchAndBoundVerifier().verify(net, query, budget);
}

} // namespace cegarnn
