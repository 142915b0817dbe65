#include <doctest.h>

#include <cmath>
#include <fstream>

#include "ggm/errors.hpp"
#include "ggm/io.hpp"
#include "ggm/model.hpp"
#include "ggm/rng.hpp"

using namespace ggm;

namespace {

Eigen::MatrixXd triangle_theta(double kappa, double eps) {
    Eigen::MatrixXd t(3, 3);
    t << 1.0, kappa, kappa, kappa, 1.0, 1.0 - eps, kappa, 1.0 - eps, 1.0;
    return t;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("triangle cloud matches its definition") {
    const GgmInstance inst =
        build_instance(TriangleCloudParams{0.4, 0.01, 1000.0, 200});
    CHECK(inst.p == 200);
    CHECK(inst.d == 2);
    CHECK(inst.theta(0, 1) == 0.4);
    CHECK(inst.theta(0, 2) == 0.4);
    CHECK(inst.theta(1, 2) == doctest::Approx(0.99).epsilon(1e-15));
    for (int v = 3; v < 200; ++v) {
        CHECK(inst.theta(v, v) == doctest::Approx(0.001).epsilon(1e-15));
    }
    const std::vector<std::pair<int, int>> triangle = {{0, 1}, {0, 2}, {1, 2}};
    CHECK(inst.edges == triangle);
    CHECK(inst.kappa == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(inst.mu.isZero());
}

TEST_CASE("three node family is the bare triangle") {
    const GgmInstance inst = build_instance(ThreeNodeParams{0.3, 0.1});
    CHECK(max_abs(inst.theta - triangle_theta(0.3, 0.1)) == 0.0);
    CHECK(inst.kappa == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(inst.d == 2);
}

TEST_CASE("four node family appends one isolated vertex") {
    const GgmInstance inst = build_instance(FourNodeParams{0.25, 0.5});
    CHECK(inst.p == 4);
    CHECK(inst.theta(3, 3) == 1.0);
    CHECK(inst.theta(0, 3) == 0.0);
    CHECK(inst.edges.size() == 3);
    CHECK(inst.neighbors(3).empty());
    CHECK(inst.kappa == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("degenerate family parameters are rejected") {
    CHECK_THROWS_AS(build_instance(TriangleCloudParams{0.4, 0.0, 1000.0, 200}), InvalidSpec);
    CHECK_THROWS_AS(build_instance(TriangleCloudParams{0.995, 0.01, 1000.0, 200}),
                    InvalidSpec);
    CHECK_THROWS_AS(build_instance(TriangleCloudParams{0.4, 0.01, -1.0, 200}), InvalidSpec);
    CHECK_THROWS_AS(build_instance(TriangleCloudParams{0.4, 0.01, 1.0, 3}), InvalidSpec);
    CHECK_THROWS_AS(build_instance(ThreeNodeParams{0.0, 0.1}), InvalidSpec);
    CHECK_THROWS_AS(build_instance(RegularRandomParams{9, 3, 0.2, 0.4, 1}), InvalidSpec);
    CHECK_THROWS_AS(build_instance(RegularRandomParams{10, 3, 0.0, 0.4, 1}), InvalidSpec);
    CHECK_THROWS_AS(build_instance(RegularRandomParams{10, 3, 0.2, 1.0, 1}), InvalidSpec);
}

TEST_CASE("regular random graphs are d-regular with strengths in range") {
    const GgmInstance inst = build_instance(RegularRandomParams{10, 3, 0.2, 0.4, 7});
    CHECK(inst.p == 10);
    CHECK(inst.d == 3);
    for (int v = 0; v < 10; ++v) {
        CHECK(inst.neighbors(v).size() == 3);
        CHECK(inst.theta(v, v) == 1.0);
    }
    for (const auto& [i, j] : inst.edges) {
        const double strength = std::abs(inst.theta(i, j));
        CHECK(strength >= 0.2 * 0.9999);
        CHECK(strength <= 0.4 * 1.0001);
    }
    CHECK(inst.kappa >= 0.2 * 0.9999);

    // Same seed, same instance.
    const GgmInstance again = build_instance(RegularRandomParams{10, 3, 0.2, 0.4, 7});
    CHECK(max_abs(inst.theta - again.theta) == 0.0);
}

TEST_CASE("constant-strength regular graph pins kappa") {
    const GgmInstance inst = build_instance(RegularRandomParams{12, 2, 0.3, 0.3, 11});
    CHECK(inst.kappa == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("covariance inverts the precision matrix on every family") {
    std::vector<GgmInstance> instances;
    for (double sigma2 : {1.0, 1e3, 1e4}) {
        instances.push_back(build_instance(TriangleCloudParams{0.4, 0.01, sigma2, 30}));
    }
    instances.push_back(build_instance(ThreeNodeParams{0.3, 0.1}));
    instances.push_back(build_instance(FourNodeParams{0.4, 0.01}));
    instances.push_back(build_instance(RegularRandomParams{12, 3, 0.2, 0.4, 5}));
    for (const GgmInstance& inst : instances) {
        const Eigen::MatrixXd residual =
            inst.sigma * inst.theta - Eigen::MatrixXd::Identity(inst.p, inst.p);
        CHECK(max_abs(residual) < 1e-8);
        CHECK(max_abs(inst.sigma - inst.sigma.transpose()) == 0.0);
        CHECK(inst.kappa > 0.0);
        for (int v = 0; v < inst.p; ++v) {
            CHECK(static_cast<int>(inst.neighbors(v).size()) <= inst.d);
        }
    }
}

TEST_CASE("normalized strength is symmetric and rescale invariant") {
    const GgmInstance inst = build_instance(RegularRandomParams{10, 3, 0.2, 0.4, 3});
    Rng rng(99);
    Eigen::VectorXd scale(inst.p);
    for (int v = 0; v < inst.p; ++v) scale(v) = rng.uniform(0.1, 10.0);
    const Eigen::MatrixXd rescaled =
        scale.asDiagonal() * inst.theta * scale.asDiagonal();
    for (int i = 0; i < inst.p; ++i) {
        for (int j = 0; j < inst.p; ++j) {
            if (i == j) continue;
            const double s = normalized_strength(inst.theta, i, j);
            CHECK(normalized_strength(inst.theta, j, i) == s);
            CHECK(normalized_strength(rescaled, i, j) == doctest::Approx(s).epsilon(1e-12));
        }
    }
    CHECK(normalized_strength(Eigen::MatrixXd::Identity(4, 4), 1, 3) == 0.0);
    CHECK(normalized_strength(triangle_theta(0.35, 0.2), 0, 1) ==
          doctest::Approx(0.35).epsilon(1e-15));
    // The strong link of the cloud family.
    const GgmInstance cloud = build_instance(TriangleCloudParams{0.4, 0.01, 10.0, 6});
    CHECK(normalized_strength(cloud.theta, 1, 2) == doctest::Approx(0.99).epsilon(1e-15));
}

TEST_CASE("conditional correlation matches the closed form on the isolated-vertex family") {
    // Magnitude of the correlation of the two weak-link endpoints given the
    // isolated vertex: kappa sqrt(eps) / sqrt((1-kappa^2)(2-eps)). The Schur
    // path carries the sign of the covariance, negative here because the
    // precision entries are positive.
    for (double kappa : {0.1, 0.2, 0.4, 0.6, 0.8}) {
        for (double eps : {0.001, 0.01, 0.1, 0.3, 0.5}) {
            if (!(kappa < 1.0 - eps)) continue;
            const GgmInstance inst = build_instance(FourNodeParams{kappa, eps});
            const double rho = conditional_correlation(inst.sigma, 0, 1, {3});
            const double closed =
                kappa * std::sqrt(eps) / std::sqrt((1.0 - kappa * kappa) * (2.0 - eps));
            CHECK(std::abs(rho) == doctest::Approx(closed).epsilon(1e-9));
            CHECK(rho <= 1.0);
            CHECK(rho >= -1.0);
        }
    }
}

TEST_CASE("conditional correlation trivia and errors") {
    Eigen::MatrixXd diag = Eigen::VectorXd::LinSpaced(5, 1.0, 5.0).asDiagonal();
    CHECK(conditional_correlation(diag, 0, 2, {1, 4}) == 0.0);
    CHECK(conditional_correlation(diag, 0, 2, {}) == 0.0);

    Eigen::MatrixXd rank1 = Eigen::MatrixXd::Ones(4, 4);
    CHECK_THROWS_AS(conditional_correlation(rank1, 0, 1, {2, 3}), SingularSubmatrix);
    CHECK_THROWS_AS(conditional_correlation(diag, 0, 0, {1}), DomainError);
    CHECK_THROWS_AS(conditional_correlation(diag, 0, 1, {1}), DomainError);
}

TEST_CASE("model json round trip preserves the instance") {
    const GgmInstance inst = build_instance(RegularRandomParams{10, 3, 0.2, 0.4, 21});
    const std::string path = "model_roundtrip_test.json";
    save_model(inst, path);
    const GgmInstance back = load_model(path);
    CHECK(back.p == inst.p);
    CHECK(back.d == inst.d);
    CHECK(max_abs(back.theta - inst.theta) == 0.0);
    CHECK(back.edges == inst.edges);
    CHECK(back.family == inst.family);
    CHECK(back.seed == inst.seed);
    std::remove(path.c_str());
}

TEST_CASE("instance_from_theta validates its input") {
    Eigen::MatrixXd bad(2, 3);
    bad.setZero();
    CHECK_THROWS_AS(instance_from_theta(bad, {}), InvalidSpec);

    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.5, 0.1, 1.0;
    CHECK_THROWS_AS(instance_from_theta(asym, {}), InvalidSpec);

    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(instance_from_theta(indefinite, {}), NotPositiveDefinite);

    Eigen::VectorXd mu(3);
    mu << 5.0, 5.0, 5.0;
    const GgmInstance inst = instance_from_theta(triangle_theta(0.3, 0.1), mu);
    CHECK(inst.mu(0) == 5.0);
}
