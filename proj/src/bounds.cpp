#include "ggm/bounds.hpp"

#include <cmath>

#include "ggm/errors.hpp"

namespace ggm {

namespace {

/// Smallest integer strictly greater than x.
long strict_ceil(double x) {
    if (!std::isfinite(x)) throw DomainError("bound evaluated to a non-finite value");
    return static_cast<long>(std::floor(x)) + 1;
}

void check_common(int p, int d, double kappa, double delta) {
    if (d < 1 || p <= d) throw DomainError("need p > d >= 1");
    if (!(kappa > 0.0 && kappa <= 1.0)) throw DomainError("kappa must lie in (0,1]");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
}

}  // namespace

double log_binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) throw DomainError("binomial arguments out of range");
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double it_lower_bound(int p, int d, double kappa) {
    if (d < 1 || p <= d) throw DomainError("need p > d >= 1");
    if (!(kappa > 0.0 && kappa < 1.0)) {
        throw DomainError("kappa must lie in (0,1) strictly");
    }
    if (p - d < 2) throw DomainError("need p - d >= 2");
    const double branch_pairs = (log_binomial(p - d, 2) - 1.0) / (4.0 * kappa * kappa);
    const double denom = std::log1p(d * kappa / (1.0 - kappa)) -
                         d * kappa / (1.0 + (d - 1) * kappa);
    const double branch_subsets = 2.0 * (log_binomial(p, d) - 1.0) / denom;
    return std::max(branch_pairs, branch_subsets);
}

long dice_sample_bound(int p, int d, double kappa, double delta) {
    check_common(p, d, kappa, delta);
    const double k2 = kappa * kappa;
    const double rhs =
        2.0 * d + (192.0 / k2) * d * std::log(p) + (64.0 / k2) * std::log(4.0 * d / delta);
    return strict_ceil(rhs);
}

double dice_sample_bound_simplified(int p, int d, double kappa, double delta) {
    check_common(p, d, kappa, delta);
    return (320.0 / (kappa * kappa)) * (d * std::log(p) + std::log(1.0 / delta));
}

long slice_sample_bound(int p, int d, double kappa, double delta) {
    check_common(p, d, kappa, delta);
    const double k2 = kappa * kappa;
    // log(4 p^(d+1) / delta) expanded to stay in log space for large p.
    const double support_rhs =
        d + (32.0 / (k2 * k2)) *
                (std::log(4.0 / delta) + (d + 1) * std::log(static_cast<double>(p)));
    const double postprocess_rhs =
        d + (64.0 / k2) * std::log(8.0 * static_cast<double>(d) * p / delta);
    return std::max(strict_ceil(support_rhs), strict_ceil(postprocess_rhs));
}

SamplePlan make_sample_plan(int p, int d, double kappa, double delta) {
    if (p <= 2 * d + 1) throw DomainError("need p > 2d + 1");
    SamplePlan plan;
    plan.p = p;
    plan.d = d;
    plan.kappa = kappa;
    plan.delta = delta;
    plan.n_it_lower = it_lower_bound(p, d, kappa);
    plan.n_dice = dice_sample_bound(p, d, kappa, delta);
    plan.n_slice = slice_sample_bound(p, d, kappa, delta);
    plan.ratio_dice = static_cast<double>(plan.n_dice) / plan.n_it_lower;
    return plan;
}

}  // namespace ggm
