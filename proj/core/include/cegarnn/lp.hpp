#pragma once

#include <cstddef>
#include <vector>

namespace cegarnn {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LpRow {
    std::vector<double> coeffs;
    Relation relation = Relation::LessEqual;
    double rhs = 0.0;
};

/// maximize objective . x  subject to  rows, lower <= x <= upper.
/// Bounds may be infinite; an empty `lower`/`upper` means [0, +inf).
struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<double> objective;
    std::vector<LpRow> rows;
    std::vector<double> lower;
    std::vector<double> upper;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    std::vector<double> point;
    std::size_t pivots = 0;
};

struct LpOptions {
    double pivot_tolerance = 1e-9;
    double feasibility_tolerance = 1e-7;
    std::size_t max_pivots = 50000;
};

/// Dense two-phase primal simplex with Bland's anti-cycling rule. Throws
/// ShapeError for inconsistent dimensions and NumericError when the pivot cap
/// is reached.
LpResult solve_lp(const LinearProgram &lp, const LpOptions &options = {});

} // namespace cegarnn
