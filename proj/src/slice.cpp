#include "ggm/slice.hpp"

#include <algorithm>
#include <cmath>

#include "ggm/errors.hpp"
#include "ggm/parallel.hpp"

namespace ggm {

double SliceCoefficients::beta(int i, int j) const {
    const L0Solution& solution = per_vertex[static_cast<std::size_t>(i)];
    const auto it = std::lower_bound(solution.support.begin(), solution.support.end(), j);
    if (it == solution.support.end() || *it != j) return 0.0;
    return solution.beta(static_cast<Eigen::Index>(it - solution.support.begin()));
}

SliceCoefficients slice_phase1(const Eigen::MatrixXd& sigma_hat, int d,
                               Strategy strategy, int jobs) {
    const int p = static_cast<int>(sigma_hat.rows());
    SliceCoefficients coefficients;
    coefficients.per_vertex.resize(static_cast<std::size_t>(p));
    parallel_for(p, jobs, [&](int i) {
        coefficients.per_vertex[static_cast<std::size_t>(i)] =
            l0_least_squares(sigma_hat, i, d, strategy);
    });
    return coefficients;
}

GraphEstimate slice_phase2(const SliceCoefficients& coefficients, double kappa) {
    if (!(kappa > 0.0 && kappa <= 1.0)) throw DomainError("kappa must lie in (0,1]");
    const int p = coefficients.p();
    GraphEstimate graph;
    graph.p = p;
    graph.neighborhoods.assign(static_cast<std::size_t>(p), {});
    for (int i = 0; i < p; ++i) {
        for (int j : coefficients.per_vertex[static_cast<std::size_t>(i)].support) {
            const int a = std::min(i, j), b = std::max(i, j);
            if (graph.kappa_hat.count({a, b})) continue;
            graph.kappa_hat[{a, b}] =
                std::sqrt(std::abs(coefficients.beta(a, b) * coefficients.beta(b, a)));
        }
    }
    for (const auto& [pair, strength] : graph.kappa_hat) {
        if (strength > kappa / 2.0) {
            graph.edges.push_back(pair);
            graph.neighborhoods[static_cast<std::size_t>(pair.first)].push_back(pair.second);
            graph.neighborhoods[static_cast<std::size_t>(pair.second)].push_back(pair.first);
        }
    }
    std::sort(graph.edges.begin(), graph.edges.end());
    for (auto& nb : graph.neighborhoods) std::sort(nb.begin(), nb.end());
    return graph;
}

GraphEstimate slice(const CovarianceEstimate& cov, int d, double kappa,
                    Strategy strategy, int jobs) {
    return slice_phase2(slice_phase1(cov.sigma_hat, d, strategy, jobs <= 0 ? 1 : jobs), kappa);
}

GraphEstimate slice(const SampleSet& samples, int d, double kappa, Strategy strategy,
                    int jobs) {
    return slice(empirical_covariance(samples), d, kappa, strategy, jobs);
}

}  // namespace ggm
