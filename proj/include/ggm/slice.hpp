#pragma once

#include <Eigen/Dense>

#include <vector>

#include "ggm/graph_estimate.hpp"
#include "ggm/regression.hpp"
#include "ggm/sampling.hpp"

namespace ggm {

/// Per-vertex best-subset solutions. Coefficients outside a vertex's
/// optimal support are exactly zero.
struct SliceCoefficients {
    std::vector<L0Solution> per_vertex;

    /// beta_hat_ij, zero when j is outside the support of i.
    double beta(int i, int j) const;

    int p() const { return static_cast<int>(per_vertex.size()); }
};

/// Solves the size-d best-subset regression for every vertex.
SliceCoefficients slice_phase1(const Eigen::MatrixXd& sigma_hat, int d,
                               Strategy strategy = Strategy::Exhaustive,
                               int jobs = 1);

/// Product-and-threshold rule: edge (i,j) present iff
/// sqrt(|beta_ij * beta_ji|) > kappa / 2. Symmetric by construction.
/// kappa_hat holds the geometric-mean strength for every pair where at
/// least one direction is in-support.
GraphEstimate slice_phase2(const SliceCoefficients& coefficients, double kappa);

/// Both phases composed.
GraphEstimate slice(const CovarianceEstimate& cov, int d, double kappa,
                    Strategy strategy = Strategy::Exhaustive, int jobs = 1);
GraphEstimate slice(const SampleSet& samples, int d, double kappa,
                    Strategy strategy = Strategy::Exhaustive, int jobs = 1);

}  // namespace ggm
