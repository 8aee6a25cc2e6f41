#pragma once

#include <optional>
#include <vector>

namespace dhne {

// Feasibility of a system of linear inequalities  lhs * x <= rhs.
//
// Solved by Fourier-Motzkin elimination, which is exact at this problem size
// and yields a constructive answer either way:
//   - feasible: a point satisfying every row (built by back-substitution),
//   - infeasible: a Farkas certificate, i.e. multipliers lambda >= 0 with
//     lambda^T lhs = 0 and lambda^T rhs < 0.
struct LinearSystem {
    std::vector<std::vector<double>> lhs;  // m rows of n coefficients
    std::vector<double> rhs;               // m bounds
};

struct FeasibilityResult {
    bool feasible = false;
    std::vector<double> point;        // length n when feasible
    std::vector<double> certificate;  // length m when infeasible
};

FeasibilityResult solve_linear_feasibility(const LinearSystem& system);

}  // namespace dhne
