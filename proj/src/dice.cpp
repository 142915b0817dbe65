#include "ggm/dice.hpp"

#include <algorithm>
#include <cmath>

#include "ggm/errors.hpp"
#include "ggm/parallel.hpp"
#include "ggm/subsets.hpp"

namespace ggm {

namespace {

/// Adversary sets shrink when the graph is too small to host a disjoint
/// size-d set; the support test then runs against every subset of the whole
/// remaining pool.
int adversary_size(int pool_size, int d) { return std::min(d, pool_size); }

std::vector<int> pool_outside(int p, int i, const std::vector<int>& candidate) {
    std::vector<int> pool;
    pool.reserve(static_cast<std::size_t>(p));
    for (int v = 0; v < p; ++v) {
        if (v == i) continue;
        if (std::find(candidate.begin(), candidate.end(), v) != candidate.end()) continue;
        pool.push_back(v);
    }
    return pool;
}

}  // namespace

bool GraphEstimate::has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

double GraphEstimate::kappa_hat_or_zero(int i, int j) const {
    auto it = kappa_hat.find({i, j});
    if (it != kappa_hat.end()) return it->second;
    it = kappa_hat.find({j, i});
    return it == kappa_hat.end() ? 0.0 : it->second;
}

Eigen::VectorXd phase1_conditional_variances(const Eigen::MatrixXd& sigma_hat, int d,
                                             Strategy strategy, int jobs) {
    const int p = static_cast<int>(sigma_hat.rows());
    Eigen::VectorXd theta_diag(p);
    parallel_for(p, jobs, [&](int i) {
        const double loss = l0_least_squares(sigma_hat, i, d, strategy).loss;
        if (!(loss > 0.0)) {
            throw SingularSubmatrix("nonpositive conditional variance estimate");
        }
        theta_diag(i) = 1.0 / loss;
    });
    return theta_diag;
}

std::map<int, double> estimate_kappa_hat(const Eigen::MatrixXd& sigma_hat,
                                         const Eigen::VectorXd& theta_diag_hat, int i,
                                         const std::vector<int>& candidate,
                                         const std::vector<int>& adversary) {
    std::vector<int> joint;
    joint.reserve(candidate.size() + adversary.size());
    joint.insert(joint.end(), candidate.begin(), candidate.end());
    joint.insert(joint.end(), adversary.begin(), adversary.end());
    std::sort(joint.begin(), joint.end());

    const SubsetRegression fit = subset_regression(sigma_hat, i, joint);
    std::map<int, double> strengths;
    for (std::size_t t = 0; t < fit.subset.size(); ++t) {
        const int j = fit.subset[t];
        strengths[j] = std::abs(fit.beta(static_cast<Eigen::Index>(t))) *
                       std::sqrt(theta_diag_hat(i) / theta_diag_hat(j));
    }
    return strengths;
}

bool candidate_passes_support_test(const Eigen::MatrixXd& sigma_hat,
                                   const Eigen::VectorXd& theta_diag_hat, int i,
                                   const std::vector<int>& candidate, int d,
                                   double kappa) {
    const std::vector<int> pool = pool_outside(static_cast<int>(sigma_hat.rows()), i, candidate);
    const int b2 = adversary_size(static_cast<int>(pool.size()), d);
    if (b2 == 0) return true;  // nothing left to test against

    bool passed = true;
    for_each_subset(std::span<const int>(pool), b2, [&](std::span<const int> adversary) {
        const std::vector<int> adv(adversary.begin(), adversary.end());
        const auto strengths = estimate_kappa_hat(sigma_hat, theta_diag_hat, i, candidate, adv);
        for (int j : adv) {
            if (strengths.at(j) > kappa / 2.0) {
                passed = false;
                return false;  // first failing adversary settles it
            }
        }
        return true;
    });
    return passed;
}

std::optional<std::vector<int>> phase2_support_testing(const Eigen::MatrixXd& sigma_hat,
                                                       const Eigen::VectorXd& theta_diag_hat,
                                                       int i, int d, double kappa) {
    const int p = static_cast<int>(sigma_hat.rows());
    if (d > p - 1) throw DomainError("candidate size d exceeds p-1");
    if (!(kappa > 0.0 && kappa <= 1.0)) throw DomainError("kappa must lie in (0,1]");

    const std::vector<int> others = vertices_excluding(p, i);
    std::optional<std::vector<int>> survivor;
    for_each_subset(std::span<const int>(others), d, [&](std::span<const int> candidate) {
        const std::vector<int> cand(candidate.begin(), candidate.end());
        if (candidate_passes_support_test(sigma_hat, theta_diag_hat, i, cand, d, kappa)) {
            survivor = cand;
            return false;  // first passing candidate wins
        }
        return true;
    });
    return survivor;
}

std::vector<int> phase3_eliminate(const Eigen::MatrixXd& sigma_hat,
                                  const Eigen::VectorXd& theta_diag_hat, int i,
                                  const std::vector<int>& surviving, int d, double kappa) {
    const int p = static_cast<int>(sigma_hat.rows());
    const std::vector<int> pool = pool_outside(p, i, surviving);
    const int b2 = adversary_size(static_cast<int>(pool.size()), d);
    const std::vector<int> adversary(pool.begin(), pool.begin() + b2);

    const auto strengths = estimate_kappa_hat(sigma_hat, theta_diag_hat, i, surviving, adversary);
    std::vector<int> kept;
    for (int j : surviving) {
        if (strengths.at(j) > kappa / 2.0) kept.push_back(j);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

GraphEstimate dice(const CovarianceEstimate& cov, int d, double kappa,
                   const DiceOptions& options) {
    const Eigen::MatrixXd& sigma_hat = cov.sigma_hat;
    const int p = static_cast<int>(sigma_hat.rows());
    if (d < 1 || d > p - 1) throw DomainError("need 1 <= d <= p-1");
    if (!(kappa > 0.0 && kappa <= 1.0)) throw DomainError("kappa must lie in (0,1]");
    const int jobs = options.jobs <= 0 ? 1 : options.jobs;

    const Eigen::VectorXd theta_diag =
        phase1_conditional_variances(sigma_hat, d, options.strategy, jobs);

    struct VertexOutcome {
        bool passed = false;
        std::vector<int> kept;
        std::map<int, double> strengths;
    };
    std::vector<VertexOutcome> outcomes(static_cast<std::size_t>(p));
    parallel_for(p, jobs, [&](int i) {
        auto survivor = phase2_support_testing(sigma_hat, theta_diag, i, d, kappa);
        if (!survivor) return;
        VertexOutcome& out = outcomes[static_cast<std::size_t>(i)];
        out.passed = true;
        out.kept = phase3_eliminate(sigma_hat, theta_diag, i, *survivor, d, kappa);
        // Keep the strength estimates of the whole surviving candidate for
        // reporting, not just the retained members.
        const std::vector<int> pool = pool_outside(p, i, *survivor);
        const int b2 = adversary_size(static_cast<int>(pool.size()), d);
        const std::vector<int> adversary(pool.begin(), pool.begin() + b2);
        auto all = estimate_kappa_hat(sigma_hat, theta_diag, i, *survivor, adversary);
        for (int j : *survivor) out.strengths[j] = all.at(j);
    });

    GraphEstimate graph;
    graph.p = p;
    graph.neighborhoods.assign(static_cast<std::size_t>(p), {});
    for (int i = 0; i < p; ++i) {
        const VertexOutcome& out = outcomes[static_cast<std::size_t>(i)];
        if (!out.passed) {
            graph.no_passing_set.push_back(i);
            continue;
        }
        graph.neighborhoods[static_cast<std::size_t>(i)] = out.kept;
        for (const auto& [j, value] : out.strengths) graph.kappa_hat[{i, j}] = value;
    }
    // An edge requires agreement from both endpoints.
    for (int i = 0; i < p; ++i) {
        for (int j : graph.neighborhoods[static_cast<std::size_t>(i)]) {
            if (j <= i) continue;
            const auto& back = graph.neighborhoods[static_cast<std::size_t>(j)];
            if (std::find(back.begin(), back.end(), i) != back.end()) {
                graph.edges.emplace_back(i, j);
            } else {
                graph.asymmetric_pairs.emplace_back(i, j);
            }
        }
    }
    for (int j = 0; j < p; ++j) {
        for (int i : graph.neighborhoods[static_cast<std::size_t>(j)]) {
            if (i >= j) continue;
            const auto& back = graph.neighborhoods[static_cast<std::size_t>(i)];
            if (std::find(back.begin(), back.end(), j) == back.end()) {
                graph.asymmetric_pairs.emplace_back(i, j);
            }
        }
    }
    std::sort(graph.edges.begin(), graph.edges.end());
    std::sort(graph.asymmetric_pairs.begin(), graph.asymmetric_pairs.end());
    return graph;
}

GraphEstimate dice(const SampleSet& samples, int d, double kappa, const DiceOptions& options) {
    return dice(empirical_covariance(samples), d, kappa, options);
}

}  // namespace ggm
