#pragma once

namespace ggm {

/// Planner output for one (p, d, kappa, delta) problem.
struct SamplePlan {
    int p = 0;
    int d = 0;
    double kappa = 0.0;
    double delta = 0.0;
    double n_it_lower = 0.0;   ///< information-theoretic lower bound
    long n_dice = 0;           ///< sufficient samples, support-testing path
    long n_slice = 0;          ///< sufficient samples, best-subset path
    double ratio_dice = 0.0;   ///< n_dice / n_it_lower
};

/// log C(n, k) through lgamma; exact enough for p up to 1e6 without
/// overflow.
double log_binomial(int n, int k);

/// Information-theoretic lower bound on the sample count for exact
/// recovery: the larger of
///   (log C(p-d,2) - 1) / (4 kappa^2)
/// and
///   2 (log C(p,d) - 1) / (log(1 + d kappa/(1-kappa)) - d kappa/(1+(d-1)kappa)).
/// Natural logarithms throughout. Requires p > d >= 1 and kappa in (0,1).
double it_lower_bound(int p, int d, double kappa);

/// Smallest integer n satisfying
///   n > 2d + (192/kappa^2) d log p + (64/kappa^2) log(4d/delta).
long dice_sample_bound(int p, int d, double kappa, double delta);

/// The simplified sufficient form (320/kappa^2)(d log p + log(1/delta)),
/// which dominates the exact bound on sensible parameter ranges.
double dice_sample_bound_simplified(int p, int d, double kappa, double delta);

/// Smallest integer n satisfying both
///   n > d + (32/kappa^4) log(4 p^(d+1) / delta)
/// and the post-processing requirement
///   n - d > (64/kappa^2) log(8 d p / delta).
long slice_sample_bound(int p, int d, double kappa, double delta);

/// Evaluates every bound for one parameter point. Requires p > 2d + 1.
SamplePlan make_sample_plan(int p, int d, double kappa, double delta);

}  // namespace ggm
