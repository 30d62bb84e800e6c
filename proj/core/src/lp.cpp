#include "cegarnn/lp.hpp"

#include "cegarnn/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cegarnn {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

/// x_i = offset + sum over (column, coefficient) of the standard-form variables.
struct VariableMap {
    double offset = 0.0;
    std::vector<std::pair<std::size_t, double>> terms;
};

struct StandardRow {
    std::vector<double> coeffs;
    Relation relation;
    double rhs;
};

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols)
        : _cols(cols + 1)
        , _data(rows * _cols, 0.0)
        , _obj(_cols, 0.0)
        , basis(rows, 0)
    {
    }

    std::size_t rows() const { return basis.size(); }
    std::size_t cols() const { return _cols - 1; }
    double &at(std::size_t r, std::size_t c) { return _data[r * _cols + c]; }
    double at(std::size_t r, std::size_t c) const { return _data[r * _cols + c]; }
    double &rhs(std::size_t r) { return at(r, cols()); }
    double &obj(std::size_t c) { return _obj[c]; }
    double &obj_rhs() { return _obj[cols()]; }

    void pivot(std::size_t r, std::size_t e)
    {
        const double p = at(r, e);
        for (std::size_t c = 0; c < _cols; ++c)
            at(r, c) /= p;
        at(r, e) = 1.0;
        for (std::size_t i = 0; i < rows(); ++i) {
            if (i == r)
                continue;
            const double f = at(i, e);
            if (f == 0.0)
                continue;
            for (std::size_t c = 0; c < _cols; ++c)
                at(i, c) -= f * at(r, c);
            at(i, e) = 0.0;
        }
        const double f = _obj[e];
        if (f != 0.0) {
            for (std::size_t c = 0; c < _cols; ++c)
                _obj[c] -= f * at(r, c);
            _obj[e] = 0.0;
        }
        basis[r] = e;
    }

    void drop_row(std::size_t r)
    {
        _data.erase(_data.begin() + static_cast<std::ptrdiff_t>(r * _cols),
                    _data.begin() + static_cast<std::ptrdiff_t>((r + 1) * _cols));
        basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(r));
    }

    /// Sets the objective row to reduced costs of `costs` (maximization).
    void load_objective(const std::vector<double> &costs)
    {
        for (std::size_t c = 0; c < cols(); ++c)
            _obj[c] = costs[c];
        _obj[cols()] = 0.0;
        for (std::size_t i = 0; i < rows(); ++i) {
            const double cb = costs[basis[i]];
            if (cb == 0.0)
                continue;
            for (std::size_t c = 0; c <= cols(); ++c)
                _obj[c] -= cb * at(i, c);
        }
    }

private:
    std::size_t _cols;
    std::vector<double> _data;
    std::vector<double> _obj;

public:
    std::vector<std::size_t> basis;
};

enum class Outcome { Optimal, Unbounded };

/// Primal simplex on the current objective row with Bland's rule.
Outcome run_simplex(Tableau &t, const std::vector<bool> &allowed, const LpOptions &options, std::size_t &pivots)
{
    while (true) {
        std::size_t entering = t.cols();
        for (std::size_t c = 0; c < t.cols(); ++c) {
            if (allowed[c] && t.obj(c) > options.pivot_tolerance) {
                entering = c;
                break;
            }
        }
        if (entering == t.cols())
            return Outcome::Optimal;

        std::size_t leaving = t.rows();
        double best_ratio = inf;
        for (std::size_t r = 0; r < t.rows(); ++r) {
            const double a = t.at(r, entering);
            if (a <= options.pivot_tolerance)
                continue;
            const double ratio = std::max(t.rhs(r), 0.0) / a;
            if (ratio < best_ratio - 1e-12 ||
                (std::abs(ratio - best_ratio) <= 1e-12 && t.basis[r] < t.basis[leaving])) {
                best_ratio = ratio;
                leaving = r;
            }
        }
        if (leaving == t.rows())
            return Outcome::Unbounded;

        if (++pivots > options.max_pivots)
            throw NumericError("simplex exceeded " + std::to_string(options.max_pivots) + " pivots");
        t.pivot(leaving, entering);
        for (std::size_t r = 0; r < t.rows(); ++r)
            if (t.rhs(r) < 0.0 && t.rhs(r) > -options.feasibility_tolerance)
                t.rhs(r) = 0.0;
    }
}

} // namespace

LpResult solve_lp(const LinearProgram &lp, const LpOptions &options)
{
    const std::size_t n = lp.num_vars;
    if (lp.objective.size() != n)
        throw ShapeError("objective length does not match the number of variables");
    for (const auto &row : lp.rows)
        if (row.coeffs.size() != n)
            throw ShapeError("constraint row length does not match the number of variables");
    const bool default_bounds = lp.lower.empty() && lp.upper.empty();
    if (!default_bounds && (lp.lower.size() != n || lp.upper.size() != n))
        throw ShapeError("variable bounds do not match the number of variables");

    LpResult result;

    // Map every variable onto non-negative standard-form columns.
    std::vector<VariableMap> vars(n);
    std::vector<StandardRow> rows;
    std::size_t ncols = 0;
    std::vector<std::pair<std::size_t, double>> upper_rows; // column, bound
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = default_bounds ? 0.0 : lp.lower[i];
        const double hi = default_bounds ? inf : lp.upper[i];
        if (lo > hi)
            return result;
        if (std::isfinite(lo)) {
            vars[i] = {lo, {{ncols, 1.0}}};
            if (std::isfinite(hi))
                upper_rows.emplace_back(ncols, hi - lo);
            ++ncols;
        } else if (std::isfinite(hi)) {
            vars[i] = {hi, {{ncols, -1.0}}};
            ++ncols;
        } else {
            vars[i] = {0.0, {{ncols, 1.0}, {ncols + 1, -1.0}}};
            ncols += 2;
        }
    }

    for (const auto &row : lp.rows) {
        StandardRow s{std::vector<double>(ncols, 0.0), row.relation, row.rhs};
        for (std::size_t i = 0; i < n; ++i) {
            const double a = row.coeffs[i];
            if (a == 0.0)
                continue;
            s.rhs -= a * vars[i].offset;
            for (const auto &[col, c] : vars[i].terms)
                s.coeffs[col] += a * c;
        }
        rows.push_back(std::move(s));
    }
    for (const auto &[col, bound] : upper_rows) {
        StandardRow s{std::vector<double>(ncols, 0.0), Relation::LessEqual, bound};
        s.coeffs[col] = 1.0;
        rows.push_back(std::move(s));
    }

    std::vector<double> costs(ncols, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto &[col, c] : vars[i].terms)
            costs[col] += lp.objective[i] * c;
    }

    // Slack/surplus and artificial columns.
    for (auto &s : rows) {
        if (s.rhs < 0.0) {
            s.rhs = -s.rhs;
            for (auto &a : s.coeffs)
                a = -a;
            if (s.relation == Relation::LessEqual)
                s.relation = Relation::GreaterEqual;
            else if (s.relation == Relation::GreaterEqual)
                s.relation = Relation::LessEqual;
        }
    }
    std::size_t slack_count = 0, artificial_count = 0;
    for (const auto &s : rows) {
        if (s.relation != Relation::Equal)
            ++slack_count;
        if (s.relation != Relation::LessEqual)
            ++artificial_count;
    }
    const std::size_t total = ncols + slack_count + artificial_count;
    Tableau t(rows.size(), total);
    std::vector<bool> artificial(total, false);
    std::size_t next_slack = ncols, next_art = ncols + slack_count;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto &s = rows[r];
        for (std::size_t c = 0; c < ncols; ++c)
            t.at(r, c) = s.coeffs[c];
        t.rhs(r) = s.rhs;
        if (s.relation == Relation::LessEqual) {
            t.at(r, next_slack) = 1.0;
            t.basis[r] = next_slack++;
        } else {
            if (s.relation == Relation::GreaterEqual)
                t.at(r, next_slack++) = -1.0;
            t.at(r, next_art) = 1.0;
            artificial[next_art] = true;
            t.basis[r] = next_art++;
        }
    }

    std::vector<bool> allowed(total, true);
    if (artificial_count > 0) {
        std::vector<double> phase1(total, 0.0);
        for (std::size_t c = 0; c < total; ++c)
            if (artificial[c])
                phase1[c] = -1.0;
        t.load_objective(phase1);
        run_simplex(t, allowed, options, result.pivots);
        // obj_rhs holds -(objective value) = sum of artificials.
        if (t.obj_rhs() > options.feasibility_tolerance)
            return result;

        for (std::size_t r = 0; r < t.rows();) {
            if (!artificial[t.basis[r]]) {
                ++r;
                continue;
            }
            std::size_t col = total;
            for (std::size_t c = 0; c < total; ++c) {
                if (!artificial[c] && std::abs(t.at(r, c)) > options.pivot_tolerance) {
                    col = c;
                    break;
                }
            }
            if (col == total) {
                t.drop_row(r);
                continue;
            }
            t.pivot(r, col);
            ++r;
        }
        for (std::size_t c = 0; c < total; ++c)
            if (artificial[c])
                allowed[c] = false;
    }

    std::vector<double> phase2(total, 0.0);
    std::copy(costs.begin(), costs.end(), phase2.begin());
    t.load_objective(phase2);
    if (run_simplex(t, allowed, options, result.pivots) == Outcome::Unbounded) {
        result.status = LpStatus::Unbounded;
        return result;
    }

    std::vector<double> y(total, 0.0);
    for (std::size_t r = 0; r < t.rows(); ++r)
        y[t.basis[r]] = std::max(t.rhs(r), 0.0);
    result.point.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double v = vars[i].offset;
        for (const auto &[col, c] : vars[i].terms)
            v += c * y[col];
        if (!default_bounds)
            v = std::min(std::max(v, lp.lower[i]), lp.upper[i]);
        result.point[i] = v;
    }
    result.value = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        result.value += lp.objective[i] * result.point[i];
    result.status = LpStatus::Optimal;
    return result;
}

} // namespace cegarnn
