#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cbm/model.hpp"
#include "cbm/optimal_policy.hpp"

namespace cbm {

// Thrown when the constructed value difference violates its case's defining
// inequalities on the verification grid.
struct RegimeMismatch : NumericError {
    using NumericError::NumericError;
};

enum class CaseLabel { I, II, III, IV };

// The difference of the two auxiliary value functions on one SO period.
// Piecewise exponential; every regime condition of the average-cost
// optimality analysis is a statement about this function, so only the
// difference is materialized.
struct ValueDifference {
    CaseLabel regime;
    double boundary_value;          // value at tau
    std::optional<double> t_star;   // crossing time (cases III/IV)
    double g_bound;                 // run-to-failure cost-rate bound

    // evaluator data: value = level + coef * exp(rate * (tau - t)) per piece
    struct Piece {
        double lo, hi;
        double level, coef, rate;
    };
    std::vector<Piece> pieces;

    double eval(double t) const;
};

// Constructs the value difference for the c_pm_so < c_pm_uso ordering.
// Throws DomainError for other orderings and RegimeMismatch if the
// construction violates its case conditions.
ValueDifference value_difference(const ModelParams& params);

struct RegimeCheck {
    std::string name;
    bool pass;
    double residual;
};

struct RegimeReport {
    CaseLabel case_label;
    bool pass;
    std::vector<RegimeCheck> checks;
};

// Confirms that the case implied by `result.regime` matches the constructed
// value difference and that the case's boundary inequality holds.
RegimeReport check_regime_conditions(const ModelParams& params,
                                     const OptimalPolicyResult& result);

}  // namespace cbm
