#include "ggm/sampling.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

#include "ggm/errors.hpp"
#include "ggm/rng.hpp"

namespace ggm {

GaussianSampler::GaussianSampler(const GgmInstance& instance) : mu_(instance.mu) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(instance.sigma);
    if (solver.info() != Eigen::Success) {
        throw FactorizationFailure("covariance eigendecomposition failed");
    }
    Eigen::VectorXd values = solver.eigenvalues();
    const double scale = values.cwiseAbs().maxCoeff();
    if (values.minCoeff() < -1e-10 * scale) {
        throw FactorizationFailure("covariance is numerically indefinite");
    }
    values = values.cwiseMax(0.0);
    sqrt_sigma_ = solver.eigenvectors() * values.cwiseSqrt().asDiagonal() *
                  solver.eigenvectors().transpose();
}

SampleSet GaussianSampler::draw(int n, std::uint64_t seed, MeanMode mode) const {
    if (n < 1) throw InsufficientSamples("need n >= 1");
    const int p = static_cast<int>(mu_.size());
    Rng rng(seed);
    Eigen::MatrixXd z(n, p);
    for (int k = 0; k < n; ++k) {
        for (int v = 0; v < p; ++v) z(k, v) = rng.normal();
    }
    SampleSet samples;
    samples.data = z * sqrt_sigma_;  // sqrt is symmetric
    samples.data.rowwise() += mu_.transpose();
    samples.n = n;
    samples.seed = seed;
    samples.mean_mode = mode;
    return samples;
}

SampleSet sample(const GgmInstance& instance, int n, std::uint64_t seed, MeanMode mode) {
    return GaussianSampler(instance).draw(n, seed, mode);
}

CovarianceEstimate empirical_covariance(const SampleSet& samples) {
    const int n = samples.n;
    const int p = static_cast<int>(samples.data.cols());
    if (n < 1) throw InsufficientSamples("empty sample set");
    CovarianceEstimate estimate;
    estimate.n = n;
    estimate.mean_mode = samples.mean_mode;
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
    if (samples.mean_mode == MeanMode::KnownZeroMean) {
        gram.selfadjointView<Eigen::Lower>().rankUpdate(samples.data.transpose(), 1.0 / n);
    } else {
        if (n < 2) throw InsufficientSamples("centered covariance needs n >= 2");
        const Eigen::RowVectorXd mean = samples.data.colwise().mean();
        const Eigen::MatrixXd centered = samples.data.rowwise() - mean;
        gram.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(), 1.0 / (n - 1));
    }
    // Mirror the lower triangle so the stored matrix is exactly symmetric.
    estimate.sigma_hat = gram.selfadjointView<Eigen::Lower>();
    return estimate;
}

CovarianceEstimate population_covariance(const GgmInstance& instance) {
    CovarianceEstimate estimate;
    estimate.sigma_hat = instance.sigma;
    estimate.n = 0;
    estimate.mean_mode = MeanMode::KnownZeroMean;
    return estimate;
}

}  // namespace ggm
