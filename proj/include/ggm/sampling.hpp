#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "ggm/model.hpp"

namespace ggm {

/// How the mean is handled when forming the empirical covariance.
enum class MeanMode {
    KnownZeroMean,  ///< (1/n) sum_k x_i x_j, the default
    Centered,       ///< (1/(n-1)) sum_k (x_i - xbar_i)(x_j - xbar_j)
};

/// n x p matrix of i.i.d. draws, one sample per row.
struct SampleSet {
    Eigen::MatrixXd data;
    int n = 0;
    std::uint64_t seed = 0;
    MeanMode mean_mode = MeanMode::KnownZeroMean;
};

/// Symmetric empirical covariance. n == 0 marks an exact population
/// covariance injected for infinite-sample runs.
struct CovarianceEstimate {
    Eigen::MatrixXd sigma_hat;
    int n = 0;
    MeanMode mean_mode = MeanMode::KnownZeroMean;

    bool is_population() const { return n == 0; }
};

/// Reusable sampler holding the symmetric square root of the covariance.
/// The factorization uses an eigendecomposition with eigenvalues clipped at
/// zero, which stays stable in the severely ill-conditioned regimes where a
/// Cholesky factorization would fail. Throws FactorizationFailure when the
/// covariance is indefinite beyond tolerance.
class GaussianSampler {
 public:
    explicit GaussianSampler(const GgmInstance& instance);

    /// Draws n i.i.d. rows, deterministically in `seed`. Normal variates are
    /// consumed row by row (sample k uses draws k*p .. k*p + p - 1).
    SampleSet draw(int n, std::uint64_t seed,
                   MeanMode mode = MeanMode::KnownZeroMean) const;

 private:
    Eigen::MatrixXd sqrt_sigma_;
    Eigen::VectorXd mu_;
};

/// One-shot convenience wrapper around GaussianSampler.
SampleSet sample(const GgmInstance& instance, int n, std::uint64_t seed,
                 MeanMode mode = MeanMode::KnownZeroMean);

/// Forms the empirical covariance in the mode carried by the sample set.
/// Throws InsufficientSamples for Centered mode with n < 2.
CovarianceEstimate empirical_covariance(const SampleSet& samples);

/// Wraps the exact covariance of an instance as a population estimate
/// (n == 0), used to run recovery in the infinite-sample limit.
CovarianceEstimate population_covariance(const GgmInstance& instance);

}  // namespace ggm
