#include "ggm/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ggm/errors.hpp"
#include "ggm/subsets.hpp"

namespace ggm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double tie_band(double min_loss) {
    return kTieTolerance * std::max(1.0, std::abs(min_loss));
}

/// Gathers the principal submatrix S[A,A] and the column S[A,i].
void gather(const Eigen::MatrixXd& sigma, int i, std::span<const int> subset,
            Eigen::MatrixXd& sub, Eigen::VectorXd& col) {
    const int k = static_cast<int>(subset.size());
    sub.resize(k, k);
    col.resize(k);
    for (int a = 0; a < k; ++a) {
        col(a) = sigma(subset[static_cast<std::size_t>(a)], i);
        for (int b = 0; b < k; ++b) {
            sub(a, b) = sigma(subset[static_cast<std::size_t>(a)],
                              subset[static_cast<std::size_t>(b)]);
        }
    }
}

bool pivots_regular(const Eigen::LDLT<Eigen::MatrixXd>& ldlt) {
    const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
    return ldlt.info() == Eigen::Success &&
           pivots.minCoeff() >= kSingularPivotRatio * pivots.maxCoeff();
}

}  // namespace

SubsetRegression subset_regression(const Eigen::MatrixXd& sigma_hat, int i,
                                   std::span<const int> subset) {
    for (int v : subset) {
        if (v == i) throw DomainError("conditioning subset must exclude the target");
    }
    SubsetRegression result;
    result.target = i;
    result.subset.assign(subset.begin(), subset.end());
    std::sort(result.subset.begin(), result.subset.end());
    if (result.subset.empty()) {
        result.beta = Eigen::VectorXd();
        result.loss = sigma_hat(i, i);
        return result;
    }
    Eigen::MatrixXd sub;
    Eigen::VectorXd col;
    gather(sigma_hat, i, result.subset, sub, col);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(sub);
    if (!pivots_regular(ldlt)) {
        throw SingularSubmatrix("conditioning submatrix is rank deficient");
    }
    result.beta = -ldlt.solve(col);
    result.loss = sigma_hat(i, i) + col.dot(result.beta);
    return result;
}

double subset_loss(const Eigen::MatrixXd& sigma_hat, int i, std::span<const int> subset) {
    const int k = static_cast<int>(subset.size());
    switch (k) {
        case 0:
            return sigma_hat(i, i);
        case 1: {
            const int a = subset[0];
            const double saa = sigma_hat(a, a);
            if (!(saa > 0.0)) return kNaN;
            const double sia = sigma_hat(i, a);
            return sigma_hat(i, i) - sia * sia / saa;
        }
        case 2: {
            const int a = subset[0], b = subset[1];
            const double saa = sigma_hat(a, a), sbb = sigma_hat(b, b);
            const double sab = sigma_hat(a, b);
            const double det = saa * sbb - sab * sab;
            // Pivots of the diagonally pivoted factorization: the larger
            // diagonal entry, then det over it.
            const double big = std::max(saa, sbb);
            if (!(big > 0.0) || det < kSingularPivotRatio * big * big) return kNaN;
            const double sia = sigma_hat(i, a), sib = sigma_hat(i, b);
            const double quad =
                (sbb * sia * sia - 2.0 * sab * sia * sib + saa * sib * sib) / det;
            return sigma_hat(i, i) - quad;
        }
        default: {
            Eigen::MatrixXd sub;
            Eigen::VectorXd col;
            gather(sigma_hat, i, subset, sub, col);
            Eigen::LDLT<Eigen::MatrixXd> ldlt(sub);
            if (!pivots_regular(ldlt)) return kNaN;
            return sigma_hat(i, i) - col.dot(ldlt.solve(col));
        }
    }
}

L0Solution l0_least_squares(const Eigen::MatrixXd& sigma_hat, int i, int d,
                            Strategy strategy) {
    const int p = static_cast<int>(sigma_hat.rows());
    if (i < 0 || i >= p) throw DomainError("target vertex out of range");
    if (d < 1 || d > p - 1) throw DomainError("need 1 <= d <= p-1");
    if (strategy == Strategy::BranchAndBound) {
        return branch_and_bound_l0(sigma_hat, i, d, default_coefficient_bounds(sigma_hat, i));
    }

    const std::vector<int> pool = vertices_excluding(p, i);
    const std::uint64_t count = subset_count(p - 1, d);
    if (count > 200'000'000ULL) {
        throw Error("exhaustive subset enumeration too large; reduce d or p");
    }
    std::vector<double> losses;
    losses.reserve(static_cast<std::size_t>(count));

    double min_loss = std::numeric_limits<double>::infinity();
    for_each_subset(std::span<const int>(pool), d, [&](std::span<const int> subset) {
        const double loss = subset_loss(sigma_hat, i, subset);
        losses.push_back(loss);
        if (loss < min_loss) min_loss = loss;  // NaN never compares true
        return true;
    });
    if (!std::isfinite(min_loss)) {
        throw SingularSubmatrix("every candidate subset is singular");
    }

    // Second pass: first (lexicographically smallest) subset tied with the
    // exact minimum. Order independent, so a partitioned scan agrees.
    const double band = min_loss + tie_band(min_loss);
    std::size_t rank = 0;
    std::vector<int> winner;
    for_each_subset(std::span<const int>(pool), d, [&](std::span<const int> subset) {
        if (losses[rank++] <= band) {
            winner.assign(subset.begin(), subset.end());
            return false;
        }
        return true;
    });

    SubsetRegression fit = subset_regression(sigma_hat, i, winner);
    L0Solution solution;
    solution.target = i;
    solution.support = std::move(fit.subset);
    solution.beta = std::move(fit.beta);
    solution.loss = fit.loss;
    solution.strategy_used = Strategy::Exhaustive;
    return solution;
}

namespace {

/// Depth-first search state for the support search. Decisions run over the
/// candidate pool in ascending order; including before excluding makes the
/// leaf visit order lexicographic.
struct BnbSearch {
    const Eigen::MatrixXd& sigma;
    int target;
    int d;
    std::vector<int> pool;

    std::vector<int> chosen;
    std::vector<int> franchise;  // chosen + all still-undecided vertices

    double best_loss = std::numeric_limits<double>::infinity();
    bool found_any = false;

    // Phase B outputs.
    double band = 0.0;
    std::vector<int> first_in_band;

    /// Loss of conditioning on everything still admissible at this node.
    /// Any size-d completion conditions on a subset of it, so its loss is a
    /// valid lower bound. Singular supersets yield no bound.
    double node_bound(int depth) {
        franchise = chosen;
        for (std::size_t t = static_cast<std::size_t>(depth); t < pool.size(); ++t) {
            franchise.push_back(pool[t]);
        }
        const double bound = subset_loss(sigma, target, franchise);
        return std::isnan(bound) ? -std::numeric_limits<double>::infinity() : bound;
    }

    void find_min(int depth) {
        const int remaining = static_cast<int>(pool.size()) - depth;
        const int need = d - static_cast<int>(chosen.size());
        if (need == 0) {
            const double loss = subset_loss(sigma, target, chosen);
            if (!std::isnan(loss) && loss < best_loss) {
                best_loss = loss;
                found_any = true;
            }
            return;
        }
        if (need > remaining) return;
        if (static_cast<int>(chosen.size()) + remaining > d && found_any &&
            node_bound(depth) > best_loss) {
            return;
        }
        chosen.push_back(pool[static_cast<std::size_t>(depth)]);
        find_min(depth + 1);
        chosen.pop_back();
        find_min(depth + 1);
    }

    bool find_first_in_band(int depth) {
        const int remaining = static_cast<int>(pool.size()) - depth;
        const int need = d - static_cast<int>(chosen.size());
        if (need == 0) {
            const double loss = subset_loss(sigma, target, chosen);
            if (!std::isnan(loss) && loss <= band) {
                first_in_band = chosen;
                return true;
            }
            return false;
        }
        if (need > remaining) return false;
        if (static_cast<int>(chosen.size()) + remaining > d && node_bound(depth) > band) {
            return false;
        }
        chosen.push_back(pool[static_cast<std::size_t>(depth)]);
        if (find_first_in_band(depth + 1)) return true;
        chosen.pop_back();
        return find_first_in_band(depth + 1);
    }
};

}  // namespace

CoefficientBounds default_coefficient_bounds(const Eigen::MatrixXd& sigma_hat, int i) {
    const int p = static_cast<int>(sigma_hat.rows());
    double max_ratio = 0.0;
    for (int j = 0; j < p; ++j) {
        if (j == i) continue;
        max_ratio = std::max(max_ratio, std::sqrt(sigma_hat(j, j) / sigma_hat(i, i)));
    }
    const double u = 10.0 * std::max(max_ratio, 1e-6);
    return CoefficientBounds{-u, u};
}

L0Solution branch_and_bound_l0(const Eigen::MatrixXd& sigma_hat, int i, int d,
                               const CoefficientBounds& bounds) {
    const int p = static_cast<int>(sigma_hat.rows());
    if (i < 0 || i >= p) throw DomainError("target vertex out of range");
    if (d < 1 || d > p - 1) throw DomainError("need 1 <= d <= p-1");
    if (!(bounds.lower < 0.0 && 0.0 < bounds.upper) || !std::isfinite(bounds.lower) ||
        !std::isfinite(bounds.upper)) {
        throw DomainError("coefficient bounds must satisfy lower < 0 < upper, finite");
    }

    BnbSearch search{sigma_hat, i, d, vertices_excluding(p, i), {}, {}};
    search.chosen.reserve(static_cast<std::size_t>(d));
    search.find_min(0);
    if (!search.found_any) {
        throw SingularSubmatrix("every candidate subset is singular");
    }
    search.band = search.best_loss + tie_band(search.best_loss);
    search.chosen.clear();
    search.find_first_in_band(0);

    SubsetRegression fit = subset_regression(sigma_hat, i, search.first_in_band);
    for (int t = 0; t < fit.beta.size(); ++t) {
        if (fit.beta(t) < bounds.lower || fit.beta(t) > bounds.upper) {
            throw BoundsTooTight("optimal coefficient escapes the stated box");
        }
    }
    L0Solution solution;
    solution.target = i;
    solution.support = std::move(fit.subset);
    solution.beta = std::move(fit.beta);
    solution.loss = fit.loss;
    solution.strategy_used = Strategy::BranchAndBound;
    return solution;
}

}  // namespace ggm
