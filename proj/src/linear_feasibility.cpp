#include "dhne/linear_feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dhne/errors.hpp"

namespace dhne {

namespace {

constexpr double kCoeffZero = 1e-12;
constexpr size_t kRowLimit = 200000;

struct Row {
    std::vector<double> coeff;   // over the original variables
    double bound = 0.0;          // coeff * x <= bound
    std::vector<double> lambda;  // nonneg combination of the original rows
};

bool is_zero(double v) { return std::abs(v) <= kCoeffZero; }

}  // namespace

FeasibilityResult solve_linear_feasibility(const LinearSystem& system) {
    const size_t m = system.lhs.size();
    if (system.rhs.size() != m) throw ShapeError("linear system: lhs/rhs row count mismatch");
    const size_t n = m == 0 ? 0 : system.lhs.front().size();

    std::vector<Row> rows(m);
    for (size_t i = 0; i < m; ++i) {
        if (system.lhs[i].size() != n) throw ShapeError("linear system: ragged lhs");
        rows[i].coeff = system.lhs[i];
        rows[i].bound = system.rhs[i];
        rows[i].lambda.assign(m, 0.0);
        rows[i].lambda[i] = 1.0;
    }

    // Eliminate variables back to front, remembering each level's rows so the
    // point can be recovered by back-substitution.
    std::vector<std::vector<Row>> levels;
    levels.reserve(n);
    for (size_t var = n; var-- > 0;) {
        levels.push_back(rows);
        std::vector<Row> next;
        std::vector<const Row*> uppers, lowers;
        for (const Row& r : rows) {
            if (is_zero(r.coeff[var])) {
                next.push_back(r);
            } else if (r.coeff[var] > 0.0) {
                uppers.push_back(&r);
            } else {
                lowers.push_back(&r);
            }
        }
        for (const Row* up : uppers) {
            for (const Row* lo : lowers) {
                const double wu = 1.0 / up->coeff[var];
                const double wl = 1.0 / -lo->coeff[var];
                Row combined;
                combined.coeff.resize(n);
                for (size_t j = 0; j < n; ++j) {
                    combined.coeff[j] = wu * up->coeff[j] + wl * lo->coeff[j];
                }
                combined.coeff[var] = 0.0;
                combined.bound = wu * up->bound + wl * lo->bound;
                combined.lambda.resize(m);
                for (size_t j = 0; j < m; ++j) {
                    combined.lambda[j] = wu * up->lambda[j] + wl * lo->lambda[j];
                }
                // Drop rows that are trivially satisfied.
                bool vacuous = combined.bound >= 0.0;
                for (size_t j = 0; vacuous && j < n; ++j) vacuous = is_zero(combined.coeff[j]);
                if (!vacuous) next.push_back(std::move(combined));
            }
        }
        if (next.size() > kRowLimit) {
            throw NumericError("linear feasibility: elimination exceeded the row limit");
        }
        rows = std::move(next);
    }

    FeasibilityResult result;
    // All variables eliminated: remaining rows read 0 <= bound.
    for (const Row& r : rows) {
        if (r.bound < -kCoeffZero) {
            result.feasible = false;
            result.certificate = r.lambda;
            return result;
        }
    }

    result.feasible = true;
    result.point.assign(n, 0.0);
    // Back-substitute: levels were pushed for var = n-1 down to 0, so
    // levels[n-1-var] holds the system in which `var` is still present.
    for (size_t var = 0; var < n; ++var) {
        const std::vector<Row>& level = levels[n - 1 - var];
        double lower = -std::numeric_limits<double>::infinity();
        double upper = std::numeric_limits<double>::infinity();
        for (const Row& r : level) {
            if (is_zero(r.coeff[var])) continue;
            // Variables assigned so far are 0..var-1; later ones were already
            // eliminated from this level, so their coefficients vanish.
            double residual = r.bound;
            for (size_t j = 0; j < n; ++j) {
                if (j != var) residual -= r.coeff[j] * result.point[j];
            }
            const double limit = residual / r.coeff[var];
            if (r.coeff[var] > 0.0) {
                upper = std::min(upper, limit);
            } else {
                lower = std::max(lower, limit);
            }
        }
        double value = 0.0;
        if (std::isfinite(lower) && std::isfinite(upper)) {
            value = 0.5 * (lower + upper);
        } else if (std::isfinite(lower)) {
            value = lower;
        } else if (std::isfinite(upper)) {
            value = upper;
        }
        result.point[var] = value;
    }
    return result;
}

}  // namespace dhne
