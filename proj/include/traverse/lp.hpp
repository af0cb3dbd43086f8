// Exact rational linear programming: minimize c.x subject to A x = b, x >= 0,
// via a dense two-phase simplex tableau with Bland's rule (no cycling). The
// returned optimum carries an exactly verified certificate: primal feasibility
// and nonnegative reduced costs are re-checked on the final basis.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "traverse/group.hpp"  // Rat

namespace traverse {

struct LPError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
    LPStatus status = LPStatus::Infeasible;
    Rat value = 0;              // meaningful for Optimal
    std::vector<Rat> x;         // primal optimum, size n, for Optimal
    bool certified = false;     // exact certificate check passed
};

// minimize c.x  s.t.  A x = b,  x >= 0.  A is m x n (row-major rows).
LPResult solve_lp(const std::vector<std::vector<Rat>>& A, const std::vector<Rat>& b,
                  const std::vector<Rat>& c);

}  // namespace traverse
