#include "ggm/model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ggm/errors.hpp"
#include "ggm/rng.hpp"

namespace ggm {

namespace {

constexpr double kPdEigenvalueRatio = 1e-12;
constexpr int kPdRetries = 20;
constexpr int kGraphAttempts = 1000;

std::vector<std::pair<int, int>> edges_from_theta(const Eigen::MatrixXd& theta) {
    const int p = static_cast<int>(theta.rows());
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            if (theta(i, j) != 0.0) edges.emplace_back(i, j);
        }
    }
    return edges;
}

int max_degree(const std::vector<std::pair<int, int>>& edges, int p) {
    std::vector<int> degree(static_cast<std::size_t>(p), 0);
    for (const auto& [i, j] : edges) {
        ++degree[static_cast<std::size_t>(i)];
        ++degree[static_cast<std::size_t>(j)];
    }
    return edges.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
}

/// Inverts a symmetric PD matrix through its eigendecomposition and returns
/// an exactly symmetric result.
Eigen::MatrixXd invert_spd(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) {
        throw NotPositiveDefinite("eigendecomposition failed");
    }
    const Eigen::VectorXd& values = solver.eigenvalues();
    if (values.minCoeff() <= kPdEigenvalueRatio * values.maxCoeff()) {
        throw NotPositiveDefinite("matrix is not positive definite");
    }
    Eigen::MatrixXd inv = solver.eigenvectors() * values.cwiseInverse().asDiagonal() *
                          solver.eigenvectors().transpose();
    inv = ((inv + inv.transpose()) / 2.0).eval();
    return inv;
}

GgmInstance finish_instance(Eigen::MatrixXd theta, std::string family,
                            std::optional<std::uint64_t> seed) {
    GgmInstance instance;
    instance.p = static_cast<int>(theta.rows());
    instance.sigma = invert_spd(theta);
    instance.theta = std::move(theta);
    instance.edges = edges_from_theta(instance.theta);
    instance.d = max_degree(instance.edges, instance.p);
    instance.kappa = instance.edges.empty() ? 0.0 : true_min_kappa(instance);
    instance.mu = Eigen::VectorXd::Zero(instance.p);
    instance.family = std::move(family);
    instance.seed = seed;
    return instance;
}

/// The three coupled variables shared by all triangle families: weak links
/// of strength kappa off vertex 0 and a strong link 1 - epsilon between
/// vertices 1 and 2.
void fill_triangle(Eigen::MatrixXd& theta, double kappa, double epsilon) {
    theta(0, 0) = theta(1, 1) = theta(2, 2) = 1.0;
    theta(0, 1) = theta(1, 0) = kappa;
    theta(0, 2) = theta(2, 0) = kappa;
    theta(1, 2) = theta(2, 1) = 1.0 - epsilon;
}

void check_triangle_params(double kappa, double epsilon, const char* family) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw InvalidSpec(std::string(family) + ": epsilon must lie in (0,1)");
    }
    if (!(kappa > 0.0 && kappa < 1.0 - epsilon)) {
        throw InvalidSpec(std::string(family) + ": kappa must lie in (0, 1-epsilon)");
    }
}

GgmInstance build_triangle_cloud(const TriangleCloudParams& params) {
    check_triangle_params(params.kappa, params.epsilon, "triangle-cloud");
    if (!(params.sigma2 > 0.0)) throw InvalidSpec("triangle-cloud: sigma2 must be positive");
    if (params.p < 4) throw InvalidSpec("triangle-cloud: p must be at least 4");
    Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(params.p, params.p);
    fill_triangle(theta, params.kappa, params.epsilon);
    for (int v = 3; v < params.p; ++v) theta(v, v) = 1.0 / params.sigma2;
    return finish_instance(std::move(theta), "triangle-cloud", std::nullopt);
}

GgmInstance build_three_node(const ThreeNodeParams& params) {
    check_triangle_params(params.kappa0, params.epsilon, "three-node");
    Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(3, 3);
    fill_triangle(theta, params.kappa0, params.epsilon);
    return finish_instance(std::move(theta), "three-node", std::nullopt);
}

GgmInstance build_four_node(const FourNodeParams& params) {
    check_triangle_params(params.kappa, params.epsilon, "four-node");
    Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(4, 4);
    fill_triangle(theta, params.kappa, params.epsilon);
    theta(3, 3) = 1.0;
    return finish_instance(std::move(theta), "four-node", std::nullopt);
}

/// Uniform random d-regular simple graph via the configuration model:
/// shuffle d stubs per vertex, pair them up, and resample on self-loops or
/// repeated edges.
std::vector<std::pair<int, int>> regular_graph(int p, int d, Rng& rng) {
    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(p) * static_cast<std::size_t>(d));
    for (int attempt = 0; attempt < kGraphAttempts; ++attempt) {
        stubs.clear();
        for (int v = 0; v < p; ++v) {
            for (int k = 0; k < d; ++k) stubs.push_back(v);
        }
        rng.shuffle(stubs);
        std::set<std::pair<int, int>> edges;
        bool simple = true;
        for (std::size_t s = 0; s + 1 < stubs.size(); s += 2) {
            int a = stubs[s], b = stubs[s + 1];
            if (a == b) {
                simple = false;
                break;
            }
            if (a > b) std::swap(a, b);
            if (!edges.emplace(a, b).second) {
                simple = false;
                break;
            }
        }
        if (simple) return {edges.begin(), edges.end()};
    }
    throw Error("regular graph generation did not converge");
}

GgmInstance build_regular_random(const RegularRandomParams& params) {
    if (params.p < 2 || params.d < 1 || params.d >= params.p) {
        throw InvalidSpec("regular-random: need p >= 2 and 1 <= d < p");
    }
    if ((static_cast<long>(params.p) * params.d) % 2 != 0) {
        throw InvalidSpec("regular-random: d*p must be even");
    }
    if (!(params.kappa_min > 0.0 && params.kappa_min <= params.kappa_max &&
          params.kappa_max < 1.0)) {
        throw InvalidSpec("regular-random: need 0 < kappa_min <= kappa_max < 1");
    }
    Rng rng(params.seed);
    const auto edges = regular_graph(params.p, params.d, rng);

    Eigen::MatrixXd theta = Eigen::MatrixXd::Identity(params.p, params.p);
    for (const auto& [i, j] : edges) {
        const double strength = rng.sign() * rng.uniform(params.kappa_min, params.kappa_max);
        theta(i, j) = strength;
        theta(j, i) = strength;
    }
    // Unit diagonal with strengths up to kappa_max is not always PD; damp
    // the off-diagonals geometrically until it is.
    for (int attempt = 0; attempt <= kPdRetries; ++attempt) {
        if (is_positive_definite(theta)) {
            return finish_instance(std::move(theta), "regular-random", params.seed);
        }
        for (const auto& [i, j] : edges) {
            theta(i, j) *= 0.9;
            theta(j, i) *= 0.9;
        }
    }
    throw NotPositiveDefinite("regular-random: matrix stayed indefinite after damping");
}

}  // namespace

std::vector<int> GgmInstance::neighbors(int v) const {
    std::vector<int> out;
    for (const auto& [i, j] : edges) {
        if (i == v) out.push_back(j);
        if (j == v) out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool GgmInstance::has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

bool is_positive_definite(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) return false;
    const Eigen::VectorXd& values = solver.eigenvalues();
    return values.minCoeff() > kPdEigenvalueRatio * values.maxCoeff();
}

GgmInstance build_instance(const ModelFamilySpec& spec) {
    return std::visit(
        [](const auto& params) -> GgmInstance {
            using T = std::decay_t<decltype(params)>;
            if constexpr (std::is_same_v<T, TriangleCloudParams>) {
                return build_triangle_cloud(params);
            } else if constexpr (std::is_same_v<T, ThreeNodeParams>) {
                return build_three_node(params);
            } else if constexpr (std::is_same_v<T, FourNodeParams>) {
                return build_four_node(params);
            } else {
                return build_regular_random(params);
            }
        },
        spec);
}

GgmInstance instance_from_theta(const Eigen::MatrixXd& theta, const Eigen::VectorXd& mu,
                                std::string family, std::optional<std::uint64_t> seed) {
    if (theta.rows() != theta.cols()) throw InvalidSpec("theta must be square");
    const double scale = theta.cwiseAbs().maxCoeff();
    if ((theta - theta.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale)) {
        throw InvalidSpec("theta must be symmetric");
    }
    Eigen::MatrixXd sym = (theta + theta.transpose()) / 2.0;
    // Preserve exact zeros so the edge set is not polluted by symmetrization.
    for (int i = 0; i < sym.rows(); ++i) {
        for (int j = 0; j < sym.cols(); ++j) {
            if (theta(i, j) == 0.0 && theta(j, i) == 0.0) sym(i, j) = 0.0;
        }
    }
    GgmInstance instance = finish_instance(std::move(sym), std::move(family), seed);
    if (mu.size() != 0) {
        if (mu.size() != instance.p) throw InvalidSpec("mu length must equal p");
        instance.mu = mu;
    }
    return instance;
}

double normalized_strength(const Eigen::MatrixXd& theta, int i, int j) {
    if (i == j) throw DomainError("normalized strength needs i != j");
    return std::abs(theta(i, j)) / std::sqrt(theta(i, i) * theta(j, j));
}

double true_min_kappa(const GgmInstance& instance) {
    if (instance.edges.empty()) throw Error("graph has no edges");
    double min_strength = std::numeric_limits<double>::infinity();
    for (const auto& [i, j] : instance.edges) {
        min_strength = std::min(min_strength, normalized_strength(instance.theta, i, j));
    }
    return min_strength;
}

double conditional_correlation(const Eigen::MatrixXd& sigma, int i, int j,
                               const std::vector<int>& conditioning) {
    if (i == j) throw DomainError("conditional correlation needs i != j");
    for (int s : conditioning) {
        if (s == i || s == j) throw DomainError("conditioning set must exclude i and j");
    }
    const int k = static_cast<int>(conditioning.size());
    Eigen::Matrix2d cond;
    if (k == 0) {
        cond << sigma(i, i), sigma(i, j), sigma(j, i), sigma(j, j);
    } else {
        Eigen::MatrixXd sigma_ss(k, k);
        Eigen::MatrixXd sigma_ts(2, k);
        for (int a = 0; a < k; ++a) {
            sigma_ts(0, a) = sigma(i, conditioning[static_cast<std::size_t>(a)]);
            sigma_ts(1, a) = sigma(j, conditioning[static_cast<std::size_t>(a)]);
            for (int b = 0; b < k; ++b) {
                sigma_ss(a, b) = sigma(conditioning[static_cast<std::size_t>(a)],
                                       conditioning[static_cast<std::size_t>(b)]);
            }
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(sigma_ss);
        const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
        if (ldlt.info() != Eigen::Success ||
            pivots.minCoeff() < 1e-12 * pivots.maxCoeff()) {
            throw SingularSubmatrix("conditioning submatrix is singular");
        }
        Eigen::Matrix2d top;
        top << sigma(i, i), sigma(i, j), sigma(j, i), sigma(j, j);
        cond = top - sigma_ts * ldlt.solve(sigma_ts.transpose());
    }
    return cond(0, 1) / std::sqrt(cond(0, 0) * cond(1, 1));
}

}  // namespace ggm
