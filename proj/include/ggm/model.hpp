#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ggm {

/// Triangle of coupled variables embedded in a cloud of independent ones.
/// Two weak links of strength `kappa`, one strong link of strength
/// 1 - epsilon, and p - 3 independent variables of variance sigma2.
struct TriangleCloudParams {
    double kappa = 0.4;
    double epsilon = 0.01;
    double sigma2 = 1.0;
    int p = 4;
};

/// Three-variable triangle: weak links kappa0, strong link 1 - epsilon.
struct ThreeNodeParams {
    double kappa0 = 0.3;
    double epsilon = 0.1;
};

/// The three-variable triangle plus one isolated vertex.
struct FourNodeParams {
    double kappa = 0.3;
    double epsilon = 0.1;
};

/// Random d-regular graph with unit diagonal and link strengths drawn
/// uniformly from [kappa_min, kappa_max], each with a random sign.
struct RegularRandomParams {
    int p = 10;
    int d = 3;
    double kappa_min = 0.2;
    double kappa_max = 0.4;
    std::uint64_t seed = 0;
};

using ModelFamilySpec =
    std::variant<TriangleCloudParams, ThreeNodeParams, FourNodeParams, RegularRandomParams>;

/// Ground-truth Gaussian graphical model: precision matrix, its inverse,
/// and the derived structural quantities. Immutable after construction.
struct GgmInstance {
    Eigen::MatrixXd theta;                      ///< precision matrix, symmetric PD
    Eigen::MatrixXd sigma;                      ///< covariance, theta^-1
    std::vector<std::pair<int, int>> edges;     ///< 0-based, i < j, sorted
    int p = 0;                                  ///< vertex count
    int d = 0;                                  ///< maximum vertex degree
    double kappa = 0.0;                         ///< min normalized edge strength
    Eigen::VectorXd mu;                         ///< mean vector, zero by default

    std::string family;                         ///< serialization metadata
    std::optional<ModelFamilySpec> spec;        ///< generating parameters, if any
    std::optional<std::uint64_t> seed;

    /// Adjacency of `v` in the true graph, ascending.
    std::vector<int> neighbors(int v) const;

    bool has_edge(int i, int j) const;
};

/// Builds an instance from a family spec. Throws InvalidSpec when the
/// parameters violate the family constraints and NotPositiveDefinite when
/// a generated matrix cannot be made positive definite.
GgmInstance build_instance(const ModelFamilySpec& spec);

/// Constructs an instance directly from a precision matrix, deriving the
/// edge set, degree bound, covariance and kappa. Validates symmetry and
/// positive definiteness.
GgmInstance instance_from_theta(const Eigen::MatrixXd& theta,
                                const Eigen::VectorXd& mu,
                                std::string family = "custom",
                                std::optional<std::uint64_t> seed = std::nullopt);

/// |theta_ij| / sqrt(theta_ii * theta_jj).
double normalized_strength(const Eigen::MatrixXd& theta, int i, int j);

/// Minimum normalized strength over the true edge set. Throws Error on an
/// empty graph.
double true_min_kappa(const GgmInstance& instance);

/// Correlation of X_i and X_j conditioned on X_S, computed by the Schur
/// complement of sigma on S. S may be empty. Throws SingularSubmatrix when
/// sigma[S,S] is not invertible.
double conditional_correlation(const Eigen::MatrixXd& sigma, int i, int j,
                               const std::vector<int>& conditioning);

/// Eigenvalue positive-definiteness test: all eigenvalues greater than
/// 1e-12 times the largest one.
bool is_positive_definite(const Eigen::MatrixXd& m);

}  // namespace ggm
