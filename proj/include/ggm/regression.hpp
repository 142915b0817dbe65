#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace ggm {

/// Search strategy for the cardinality-constrained minimization.
enum class Strategy {
    Exhaustive,
    BranchAndBound,
};

/// Least-squares fit of variable i on a fixed conditioning subset A:
/// beta = -S_AA^-1 S_Ai and loss = S_ii - S_iA S_AA^-1 S_Ai, the estimated
/// conditional variance of X_i given X_A.
struct SubsetRegression {
    int target = -1;
    std::vector<int> subset;   ///< ascending
    Eigen::VectorXd beta;      ///< aligned with subset
    double loss = 0.0;
};

/// Optimal size-d subset for one target vertex.
struct L0Solution {
    int target = -1;
    std::vector<int> support;  ///< ascending, |support| == d
    Eigen::VectorXd beta;      ///< aligned with support
    double loss = 0.0;
    Strategy strategy_used = Strategy::Exhaustive;
};

/// Box bounds on regression coefficients for the branch-and-bound search.
struct CoefficientBounds {
    double lower = -10.0;
    double upper = 10.0;
};

/// Relative pivot threshold below which a conditioning submatrix is
/// declared singular.
inline constexpr double kSingularPivotRatio = 1e-12;

/// Two losses within this tolerance (scaled by the loss magnitude) are tied;
/// ties resolve to the lexicographically smallest subset.
inline constexpr double kTieTolerance = 1e-12;

/// Solves the subset-restricted least squares via a pivoted symmetric
/// factorization. Throws SingularSubmatrix when the smallest pivot falls
/// under kSingularPivotRatio times the largest.
SubsetRegression subset_regression(const Eigen::MatrixXd& sigma_hat, int i,
                                   std::span<const int> subset);

/// Loss-only evaluation of subset_regression, with closed forms for
/// |subset| <= 2. Returns NaN for a singular conditioning submatrix.
double subset_loss(const Eigen::MatrixXd& sigma_hat, int i,
                   std::span<const int> subset);

/// Minimizes the conditional-variance loss over all size-d subsets of
/// [p] \ {i}. Ties within kTieTolerance resolve to the lexicographically
/// smallest subset, independently of enumeration order. Singular candidate
/// subsets are skipped unless every candidate is singular, which raises
/// SingularSubmatrix.
L0Solution l0_least_squares(const Eigen::MatrixXd& sigma_hat, int i, int d,
                            Strategy strategy = Strategy::Exhaustive);

/// Branch-and-bound search over supports. Node bounds come from the
/// unconstrained quadratic relaxation: the loss of conditioning on every
/// still-admissible vertex, which never exceeds the loss of any size-d
/// completion. Produces the same (support, loss, tie-break) answer as the
/// exhaustive strategy. Throws BoundsTooTight when the certified optimum's
/// coefficients escape [lower, upper].
L0Solution branch_and_bound_l0(const Eigen::MatrixXd& sigma_hat, int i, int d,
                               const CoefficientBounds& bounds);

/// Default coefficient box: symmetric, 10x the largest population-scale
/// coefficient ratio sqrt(S_jj / S_ii).
CoefficientBounds default_coefficient_bounds(const Eigen::MatrixXd& sigma_hat,
                                             int i);

}  // namespace ggm
