#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ggm/bounds.hpp"
#include "ggm/dice.hpp"
#include "ggm/errors.hpp"
#include "ggm/model.hpp"
#include "ggm/sampling.hpp"
#include "ggm/subsets.hpp"

using namespace ggm;

namespace {

std::vector<int> v(std::initializer_list<int> values) { return values; }

bool superset(const std::vector<int>& big, const std::vector<int>& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

TEST_CASE("phase 1 reproduces the precision diagonal on the exact covariance") {
    const GgmInstance inst = build_instance(TriangleCloudParams{0.4, 0.01, 1000.0, 9});
    const Eigen::VectorXd diag = phase1_conditional_variances(inst.sigma, 2);
    for (int i = 0; i < inst.p; ++i) {
        CHECK(diag(i) == doctest::Approx(inst.theta(i, i)).epsilon(1e-9));
    }
}

TEST_CASE("phase 1 on the identity is all ones") {
    const Eigen::VectorXd diag =
        phase1_conditional_variances(Eigen::MatrixXd::Identity(3, 3), 1);
    for (int i = 0; i < 3; ++i) CHECK(diag(i) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("estimated strengths separate neighbors from non-neighbors at population") {
    const GgmInstance inst = build_instance(TriangleCloudParams{0.4, 0.01, 1000.0, 9});
    const Eigen::VectorXd diag = phase1_conditional_variances(inst.sigma, 2);

    const auto strengths = estimate_kappa_hat(inst.sigma, diag, 0, v({1, 2}), v({3, 4}));
    CHECK(strengths.at(1) == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(strengths.at(2) == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(strengths.at(3) == doctest::Approx(0.0).scale(1).epsilon(1e-9));
    CHECK(strengths.at(4) == doctest::Approx(0.0).scale(1).epsilon(1e-9));

    // A candidate that misses both true neighbors is exposed by the
    // adversary containing them.
    const auto exposed = estimate_kappa_hat(inst.sigma, diag, 0, v({3, 4}), v({1, 2}));
    const double worst = std::max(exposed.at(1), exposed.at(2));
    CHECK(worst == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(worst > 0.4 / 2.0);
    CHECK_FALSE(candidate_passes_support_test(inst.sigma, diag, 0, v({3, 4}), 2, 0.4));

    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(6, 6);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(6);
    for (const auto& [j, value] : estimate_kappa_hat(id, ones, 0, v({1, 2}), v({3, 4}))) {
        CHECK(value == 0.0);
    }
}

TEST_CASE("phase 2 returns the true neighborhood on the exact covariance") {
    const GgmInstance inst = build_instance(TriangleCloudParams{0.4, 0.01, 1000.0, 9});
    const Eigen::VectorXd diag = phase1_conditional_variances(inst.sigma, 2);
    const auto survivor = phase2_support_testing(inst.sigma, diag, 0, 2, 0.4);
    REQUIRE(survivor.has_value());
    CHECK(*survivor == v({1, 2}));

    // Diagonal model: the first lexicographic candidate passes.
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(5, 5);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(5);
    const auto first = phase2_support_testing(id, ones, 2, 2, 0.5);
    REQUIRE(first.has_value());
    CHECK(*first == v({0, 1}));
}

TEST_CASE("phase 2 soundness: exactly the neighborhood supersets pass") {
    for (const GgmInstance& inst :
         {build_instance(TriangleCloudParams{0.4, 0.01, 100.0, 8}),
          build_instance(RegularRandomParams{8, 3, 0.25, 0.45, 19})}) {
        const Eigen::VectorXd diag = phase1_conditional_variances(inst.sigma, inst.d);
        for (int i = 0; i < inst.p; ++i) {
            const std::vector<int> truth = inst.neighbors(i);
            const std::vector<int> pool = vertices_excluding(inst.p, i);
            for_each_subset(std::span<const int>(pool), inst.d,
                            [&](std::span<const int> candidate) {
                                const std::vector<int> cand(candidate.begin(), candidate.end());
                                const bool covers = superset(cand, truth);
                                CHECK(candidate_passes_support_test(inst.sigma, diag, i, cand,
                                                                    inst.d, inst.kappa) ==
                                      covers);
                                return true;
                            });
        }
    }
}

TEST_CASE("phase 3 keeps the true neighbors and drops everything else") {
    const GgmInstance inst = build_instance(TriangleCloudParams{0.4, 0.01, 1000.0, 9});
    const Eigen::VectorXd diag = phase1_conditional_variances(inst.sigma, 2);
    CHECK(phase3_eliminate(inst.sigma, diag, 0, v({1, 2}), 2, 0.4) == v({1, 2}));
    CHECK(phase3_eliminate(inst.sigma, diag, 3, v({4, 5}), 2, 0.4).empty());
    CHECK(phase3_eliminate(inst.sigma, diag, 3, v({0, 1}), 2, 0.4).empty());
    // One true neighbor mixed with a non-neighbor.
    CHECK(phase3_eliminate(inst.sigma, diag, 0, v({1, 5}), 2, 0.4) == v({1}));
}

TEST_CASE("dice recovers every family exactly on the population covariance") {
    const std::vector<GgmInstance> instances = {
        build_instance(TriangleCloudParams{0.4, 0.01, 1000.0, 7}),
        build_instance(TriangleCloudParams{0.6, 0.1, 1.0, 12}),
        build_instance(ThreeNodeParams{0.3, 0.1}),
        build_instance(FourNodeParams{0.4, 0.05}),
        build_instance(RegularRandomParams{10, 3, 0.2, 0.4, 23}),
    };
    for (const GgmInstance& inst : instances) {
        const GraphEstimate estimate =
            dice(population_covariance(inst), inst.d, inst.kappa);
        CHECK(estimate.edges == inst.edges);
        CHECK(estimate.no_passing_set.empty());
        CHECK(estimate.asymmetric_pairs.empty());
        for (const auto& nb : estimate.neighborhoods) {
            CHECK(static_cast<int>(nb.size()) <= inst.d);
        }
    }

    GgmInstance diag_model = instance_from_theta(
        Eigen::VectorXd::LinSpaced(6, 1.0, 3.0).asDiagonal().toDenseMatrix(), {});
    const GraphEstimate empty = dice(population_covariance(diag_model), 2, 0.5);
    CHECK(empty.edges.empty());
}

TEST_CASE("dice is identical across job counts") {
    const GgmInstance inst = build_instance(RegularRandomParams{10, 2, 0.3, 0.5, 37});
    const CovarianceEstimate cov = empirical_covariance(sample(inst, 400, 5));
    const GraphEstimate serial = dice(cov, 2, 0.5, {Strategy::Exhaustive, 1});
    const GraphEstimate parallel = dice(cov, 2, 0.5, {Strategy::Exhaustive, 4});
    CHECK(serial.edges == parallel.edges);
    CHECK(serial.neighborhoods == parallel.neighborhoods);
    CHECK(serial.kappa_hat == parallel.kappa_hat);
    CHECK(serial.no_passing_set == parallel.no_passing_set);
    CHECK(serial.asymmetric_pairs == parallel.asymmetric_pairs);
}

TEST_CASE("uniformly entangled covariance leaves no passing candidate") {
    // Equicorrelated variables: every candidate neighborhood is defeated by
    // some adversary once the threshold asks for strength 0.9.
    const int p = 5;
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(p, p, 0.9);
    sigma.diagonal().setOnes();
    CovarianceEstimate cov;
    cov.sigma_hat = sigma;
    cov.n = 100;
    const GraphEstimate estimate = dice(cov, 1, 0.9);
    CHECK(estimate.edges.empty());
    CHECK(estimate.no_passing_set == v({0, 1, 2, 3, 4}));
}

TEST_CASE("support supersets survive phase 2 at the theorem sample size") {
    const int p = 20;
    const GgmInstance inst = build_instance(TriangleCloudParams{0.4, 0.01, 100.0, p});
    const long n = dice_sample_bound(p, 2, 0.4, 0.1);
    CHECK(n == 8947);
    const int trials = 10;
    int good_trials = 0;
    for (int t = 0; t < trials; ++t) {
        const CovarianceEstimate cov = empirical_covariance(
            sample(inst, static_cast<int>(n), 100 + static_cast<std::uint64_t>(t)));
        const Eigen::VectorXd diag = phase1_conditional_variances(cov.sigma_hat, 2);
        bool all_cover = true;
        for (int i = 0; i < p && all_cover; ++i) {
            const auto survivor = phase2_support_testing(cov.sigma_hat, diag, i, 2, 0.4);
            all_cover = survivor.has_value() && superset(*survivor, inst.neighbors(i));
        }
        good_trials += all_cover ? 1 : 0;
    }
    CHECK(good_trials >= 9);
}

TEST_CASE("dice input validation") {
    const GgmInstance inst = build_instance(ThreeNodeParams{0.3, 0.1});
    const CovarianceEstimate cov = population_covariance(inst);
    CHECK_THROWS_AS(dice(cov, 0, 0.4), DomainError);
    CHECK_THROWS_AS(dice(cov, 3, 0.4), DomainError);
    CHECK_THROWS_AS(dice(cov, 2, 0.0), DomainError);
    CHECK_THROWS_AS(dice(cov, 2, 1.5), DomainError);
}
