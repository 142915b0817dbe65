#include <doctest.h>

#include <cmath>
#include <vector>

#include "ggm/errors.hpp"
#include "ggm/model.hpp"
#include "ggm/regression.hpp"
#include "ggm/sampling.hpp"
#include "ggm/subsets.hpp"

using namespace ggm;

namespace {

std::vector<int> v(std::initializer_list<int> values) { return values; }

/// Loss recomputed from the definition through an independent full inverse
/// of the restricted matrix: conditioning on A leaves the reciprocal of the
/// target's diagonal entry in the inverse.
double loss_via_restricted_inverse(const Eigen::MatrixXd& sigma, int i,
                                   const std::vector<int>& subset) {
    std::vector<int> joint = {i};
    joint.insert(joint.end(), subset.begin(), subset.end());
    const int k = static_cast<int>(joint.size());
    Eigen::MatrixXd restricted(k, k);
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            restricted(a, b) = sigma(joint[static_cast<std::size_t>(a)],
                                     joint[static_cast<std::size_t>(b)]);
        }
    }
    return 1.0 / restricted.fullPivLu().inverse()(0, 0);
}

}  // namespace

TEST_CASE("identity covariance yields zero coefficients and unit loss") {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(5, 5);
    const SubsetRegression fit = subset_regression(id, 2, v({0, 3, 4}));
    CHECK(fit.loss == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fit.beta.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("population regression on the true neighborhood recovers precision ratios") {
    const GgmInstance inst = build_instance(TriangleCloudParams{0.4, 0.01, 1000.0, 12});
    const SubsetRegression fit = subset_regression(inst.sigma, 0, v({1, 2}));
    CHECK(fit.beta(0) == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(fit.beta(1) == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(fit.loss == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("loss agrees with the independently inverted restricted matrix") {
    const GgmInstance inst = build_instance(RegularRandomParams{9, 2, 0.2, 0.4, 13});
    const CovarianceEstimate cov = empirical_covariance(sample(inst, 200, 7));
    for (int i : {0, 3, 8}) {
        for (const auto& subset : {v({1, 2}), v({2, 4, 6}), v({7})}) {
            if (std::find(subset.begin(), subset.end(), i) != subset.end()) continue;
            const SubsetRegression fit = subset_regression(cov.sigma_hat, i, subset);
            const double oracle = loss_via_restricted_inverse(cov.sigma_hat, i, subset);
            CHECK(fit.loss == doctest::Approx(oracle).epsilon(1e-10));
            CHECK(subset_loss(cov.sigma_hat, i, subset) ==
                  doctest::Approx(oracle).epsilon(1e-10));
        }
    }
}

TEST_CASE("singular conditioning sets are detected") {
    SampleSet one_sample;
    one_sample.data.resize(1, 3);
    one_sample.data << 1.0, 2.0, 3.0;
    one_sample.n = 1;
    const CovarianceEstimate cov = empirical_covariance(one_sample);
    CHECK_THROWS_AS(subset_regression(cov.sigma_hat, 0, v({1, 2})), SingularSubmatrix);
    CHECK(std::isnan(subset_loss(cov.sigma_hat, 0, v({1, 2}))));
    // Rank one: every size-2 candidate is singular.
    CHECK_THROWS_AS(l0_least_squares(cov.sigma_hat, 0, 2), SingularSubmatrix);
    // Size-1 subsets stay regular.
    CHECK(l0_least_squares(cov.sigma_hat, 0, 1).loss >= 0.0);
}

TEST_CASE("exhaustive minimization breaks ties lexicographically") {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
    const L0Solution sol = l0_least_squares(id, 0, 2);
    CHECK(sol.support == v({1, 2}));
    CHECK(sol.loss == doctest::Approx(1.0).epsilon(1e-15));

    // A strictly better but tolerance-tied later subset still loses.
    Eigen::MatrixXd near_tie = Eigen::MatrixXd::Identity(4, 4);
    near_tie(0, 2) = near_tie(2, 0) = 7e-7;  // loss via {2}: 1 - 4.9e-13
    L0Solution tied = l0_least_squares(near_tie, 0, 1);
    CHECK(tied.support == v({1}));

    // Outside the tolerance the better subset wins.
    near_tie(0, 2) = near_tie(2, 0) = 1e-3;
    tied = l0_least_squares(near_tie, 0, 1);
    CHECK(tied.support == v({2}));
}

TEST_CASE("population best subset finds the true neighborhood") {
    const GgmInstance inst = build_instance(TriangleCloudParams{0.4, 0.01, 1000.0, 10});
    const L0Solution sol = l0_least_squares(inst.sigma, 0, 2);
    CHECK(sol.support == v({1, 2}));
    CHECK(sol.loss == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("population best subset of an independent vertex has zero coefficients") {
    const double sigma2 = 1000.0;
    const GgmInstance inst = build_instance(TriangleCloudParams{0.4, 0.01, sigma2, 10});
    const L0Solution sol = l0_least_squares(inst.sigma, 3, 2);
    CHECK(sol.loss == doctest::Approx(sigma2).epsilon(1e-9));
    CHECK(sol.beta.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(sol.support == v({0, 1}));  // every subset ties, lexicographic pick
}

TEST_CASE("conditioning on more variables never increases the loss") {
    const GgmInstance inst = build_instance(RegularRandomParams{10, 3, 0.2, 0.4, 29});
    const CovarianceEstimate cov = empirical_covariance(sample(inst, 300, 11));
    const std::vector<std::vector<int>> chains = {
        v({1}), v({1, 4}), v({1, 4, 6}), v({1, 4, 6, 8}), v({1, 2, 4, 6, 8, 9})};
    double previous = subset_loss(cov.sigma_hat, 0, v({}));
    for (const auto& subset : chains) {
        const double loss = subset_loss(cov.sigma_hat, 0, subset);
        CHECK(loss <= previous + 1e-10);
        previous = loss;
    }
}

TEST_CASE("population separation property pins the full-conditioning loss") {
    for (const GgmInstance& inst :
         {build_instance(RegularRandomParams{10, 3, 0.2, 0.4, 31}),
          build_instance(TriangleCloudParams{0.3, 0.05, 100.0, 9})}) {
        for (int i = 0; i < inst.p; ++i) {
            const std::vector<int> rest = vertices_excluding(inst.p, i);
            const double full = subset_loss(inst.sigma, i, rest);
            const double neighborhood = subset_loss(inst.sigma, i, inst.neighbors(i));
            const double truth = 1.0 / inst.theta(i, i);
            CHECK(full == doctest::Approx(truth).epsilon(1e-9));
            CHECK(neighborhood == doctest::Approx(truth).epsilon(1e-9));
        }
    }
}

TEST_CASE("noiseless multiplicative gap holds for subsets missing a neighbor") {
    // Exhaustive over every vertex and every size-d subset not covering the
    // neighborhood: the loss ratio to the neighborhood loss is at least
    // 1/(1 - kappa^2).
    for (const GgmInstance& inst :
         {build_instance(ThreeNodeParams{0.3, 0.1}),
          build_instance(FourNodeParams{0.4, 0.2}),
          build_instance(RegularRandomParams{8, 3, 0.2, 0.4, 17})}) {
        const double gap = 1.0 / (1.0 - inst.kappa * inst.kappa);
        for (int i = 0; i < inst.p; ++i) {
            const std::vector<int> truth = inst.neighbors(i);
            if (truth.empty()) continue;
            const double base = subset_loss(inst.sigma, i, truth);
            const std::vector<int> pool = vertices_excluding(inst.p, i);
            for_each_subset(std::span<const int>(pool), inst.d,
                            [&](std::span<const int> subset) {
                                const bool covers = std::includes(
                                    subset.begin(), subset.end(), truth.begin(), truth.end());
                                if (!covers) {
                                    const double loss = subset_loss(inst.sigma, i, subset);
                                    CHECK(loss >= base * gap - 1e-9);
                                }
                                return true;
                            });
        }
    }
}

TEST_CASE("branch and bound equals exhaustive search") {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(6, 6);
    const L0Solution bb = branch_and_bound_l0(id, 0, 2, {-10.0, 10.0});
    CHECK(bb.support == v({1, 2}));
    CHECK(bb.strategy_used == Strategy::BranchAndBound);

    const GgmInstance cloud = build_instance(TriangleCloudParams{0.4, 0.01, 1000.0, 10});
    CHECK(branch_and_bound_l0(cloud.sigma, 0, 2, {-10.0, 10.0}).support == v({1, 2}));

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const GgmInstance inst = build_instance(RegularRandomParams{12, 3, 0.2, 0.4, seed});
        const CovarianceEstimate cov =
            empirical_covariance(sample(inst, 200, seed + 1000));
        for (int i = 0; i < inst.p; ++i) {
            const L0Solution a = l0_least_squares(cov.sigma_hat, i, 3);
            const L0Solution b = l0_least_squares(cov.sigma_hat, i, 3,
                                                  Strategy::BranchAndBound);
            CHECK(a.support == b.support);
            CHECK(a.loss == doctest::Approx(b.loss).epsilon(1e-10));
        }
    }
}

TEST_CASE("overly tight coefficient boxes are reported") {
    const GgmInstance inst = build_instance(TriangleCloudParams{0.4, 0.01, 1000.0, 8});
    CHECK_THROWS_AS(branch_and_bound_l0(inst.sigma, 0, 2, {-0.01, 0.01}), BoundsTooTight);
    CHECK_THROWS_AS(branch_and_bound_l0(inst.sigma, 0, 2, {1.0, 2.0}), DomainError);
}

TEST_CASE("argument validation") {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
    CHECK_THROWS_AS(l0_least_squares(id, 0, 0), DomainError);
    CHECK_THROWS_AS(l0_least_squares(id, 0, 4), DomainError);
    CHECK_THROWS_AS(l0_least_squares(id, 7, 1), DomainError);
    CHECK_THROWS_AS(subset_regression(id, 0, v({0, 1})), DomainError);
}
