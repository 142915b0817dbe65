#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <vector>

#include "ggm/graph_estimate.hpp"
#include "ggm/regression.hpp"
#include "ggm/sampling.hpp"

namespace ggm {

struct DiceOptions {
    Strategy strategy = Strategy::Exhaustive;
    int jobs = 1;  ///< parallelism of the per-vertex loop
};

/// Diagonal precision estimates: 1 / theta_hat_ii is the minimum size-d
/// conditional-variance loss of vertex i.
Eigen::VectorXd phase1_conditional_variances(const Eigen::MatrixXd& sigma_hat,
                                             int d,
                                             Strategy strategy = Strategy::Exhaustive,
                                             int jobs = 1);

/// Regresses i on the union of the candidate and adversary sets and scales
/// each coefficient into an estimated normalized strength
/// kappa_hat_ij = |beta_ij| sqrt(theta_hat_ii / theta_hat_jj).
/// Returns the map over all j in the union.
std::map<int, double> estimate_kappa_hat(const Eigen::MatrixXd& sigma_hat,
                                         const Eigen::VectorXd& theta_diag_hat,
                                         int i,
                                         const std::vector<int>& candidate,
                                         const std::vector<int>& adversary);

/// True when every adversary set leaves all estimated strengths below
/// kappa/2. Adversaries are enumerated lexicographically with early exit on
/// the first failure. Exposed for the exhaustive soundness tests.
bool candidate_passes_support_test(const Eigen::MatrixXd& sigma_hat,
                                   const Eigen::VectorXd& theta_diag_hat,
                                   int i, const std::vector<int>& candidate,
                                   int d, double kappa);

/// Finds the first size-d candidate neighborhood, in lexicographic order,
/// that survives every adversary. Empty optional when no candidate passes,
/// which signals insufficient samples or a misspecified (d, kappa).
///
/// Adversary sets have size min(d, p - 1 - d) so that graphs with p < 2d+1
/// degenerate gracefully to smaller (possibly empty) adversary pools.
std::optional<std::vector<int>> phase2_support_testing(
    const Eigen::MatrixXd& sigma_hat, const Eigen::VectorXd& theta_diag_hat,
    int i, int d, double kappa);

/// Appends the deterministic adversary set (lowest-index vertices outside
/// the surviving candidate) and keeps exactly the members whose estimated
/// strength exceeds kappa/2.
std::vector<int> phase3_eliminate(const Eigen::MatrixXd& sigma_hat,
                                  const Eigen::VectorXd& theta_diag_hat,
                                  int i, const std::vector<int>& surviving,
                                  int d, double kappa);

/// Full three-phase reconstruction. An edge is declared only when both
/// endpoints retain each other; one-sided votes are reported in
/// asymmetric_pairs, and vertices without a passing candidate end up with an
/// empty neighborhood and an entry in no_passing_set.
GraphEstimate dice(const CovarianceEstimate& cov, int d, double kappa,
                   const DiceOptions& options = {});
GraphEstimate dice(const SampleSet& samples, int d, double kappa,
                   const DiceOptions& options = {});

}  // namespace ggm
