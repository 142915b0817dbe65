#include "ggm/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>

#include <nlohmann/json.hpp>

#include "ggm/bounds.hpp"
#include "ggm/dice.hpp"
#include "ggm/errors.hpp"
#include "ggm/io.hpp"
#include "ggm/parallel.hpp"
#include "ggm/rng.hpp"
#include "ggm/sampling.hpp"
#include "ggm/slice.hpp"

namespace ggm {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Sub-stream tags hung off the per-trial seed (base_seed + trial).
constexpr std::uint64_t kInstanceStream = 0;
constexpr std::uint64_t kSamplingStream = 1;

bool is_triangle_family(const ModelFamilySpec& family) {
    return std::holds_alternative<TriangleCloudParams>(family) ||
           std::holds_alternative<FourNodeParams>(family);
}

bool is_regular_random(const ModelFamilySpec& family) {
    return std::holds_alternative<RegularRandomParams>(family);
}

int family_p(const ModelFamilySpec& family) {
    if (const auto* tc = std::get_if<TriangleCloudParams>(&family)) return tc->p;
    if (std::holds_alternative<ThreeNodeParams>(family)) return 3;
    if (std::holds_alternative<FourNodeParams>(family)) return 4;
    return std::get<RegularRandomParams>(family).p;
}

ModelFamilySpec with_sigma2(const ModelFamilySpec& family, double sigma2) {
    ModelFamilySpec out = family;
    if (auto* tc = std::get_if<TriangleCloudParams>(&out)) tc->sigma2 = sigma2;
    return out;
}

ModelFamilySpec with_seed(const ModelFamilySpec& family, std::uint64_t seed) {
    ModelFamilySpec out = family;
    if (auto* rr = std::get_if<RegularRandomParams>(&out)) rr->seed = seed;
    return out;
}

struct PreparedInstance {
    GgmInstance instance;
    std::unique_ptr<GaussianSampler> sampler;  // null in population mode
};

GraphEstimate run_algorithm(const ExperimentConfig& config, const CovarianceEstimate& cov) {
    if (config.algorithm == Algorithm::Dice) {
        return dice(cov, config.d, config.kappa, {config.strategy, 1});
    }
    return slice(cov, config.d, config.kappa, config.strategy, 1);
}

bool instance_is_per_sweep(const ExperimentConfig& config) {
    return std::holds_alternative<TriangleCloudParams>(config.family) &&
           config.kind != ExperimentKind::SampleComplexityCurve;
}

void validate(const ExperimentConfig& config) {
    if (config.trials < 1) throw InvalidConfig("trials must be >= 1");
    if (config.sweep.empty()) throw InvalidConfig("sweep must be nonempty");
    switch (config.kind) {
        case ExperimentKind::FailureVsSigma:
            if (!std::holds_alternative<TriangleCloudParams>(config.family)) {
                throw InvalidConfig("failure-vs-sigma requires the triangle-cloud family");
            }
            if (config.algorithm != Algorithm::Slice) {
                throw InvalidConfig("failure-vs-sigma is defined for the slice algorithm");
            }
            break;
        case ExperimentKind::ScatterAtSigma:
            if (config.sweep.size() != 1) {
                throw InvalidConfig("scatter-at-sigma takes exactly one sigma2 value");
            }
            if (!std::holds_alternative<TriangleCloudParams>(config.family)) {
                throw InvalidConfig("scatter-at-sigma requires the triangle-cloud family");
            }
            break;
        case ExperimentKind::SampleComplexityCurve:
        case ExperimentKind::PopulationExactness:
            break;
    }
    if (!config.population && config.kind != ExperimentKind::PopulationExactness) {
        if (config.kind != ExperimentKind::SampleComplexityCurve && config.n < 1) {
            throw InvalidConfig("n must be >= 1");
        }
    }
}

TrialResult run_trial(const ExperimentConfig& config, double sweep_value, int trial,
                      const PreparedInstance* shared) {
    TrialResult result;
    result.sweep_value = sweep_value;
    result.trial = trial;
    result.seed = config.base_seed + static_cast<std::uint64_t>(trial);

    const bool population =
        config.population || config.kind == ExperimentKind::PopulationExactness;
    const auto started = std::chrono::steady_clock::now();
    try {
        const GgmInstance* instance = nullptr;
        const GaussianSampler* sampler = nullptr;
        PreparedInstance local;
        if (shared) {
            instance = &shared->instance;
            sampler = shared->sampler.get();
        } else {
            local.instance = build_instance(
                with_seed(config.family, derive_seed(result.seed, kInstanceStream)));
            if (!population) {
                local.sampler = std::make_unique<GaussianSampler>(local.instance);
            }
            instance = &local.instance;
            sampler = local.sampler.get();
        }

        CovarianceEstimate cov;
        if (population) {
            cov = population_covariance(*instance);
        } else {
            int n = config.n;
            if (config.kind == ExperimentKind::SampleComplexityCurve) {
                // Below 2d+2 the conditioning submatrices are rank deficient
                // almost surely, so the sweep clamps there.
                n = std::max(static_cast<int>(std::lround(sweep_value)), 2 * config.d + 2);
            }
            const SampleSet samples =
                sampler->draw(n, derive_seed(result.seed, kSamplingStream));
            cov = empirical_covariance(samples);
        }

        const GraphEstimate estimate = run_algorithm(config, cov);
        result.exact_recovery = estimate.edges == instance->edges;
        if (is_triangle_family(config.family) && instance->p >= 4) {
            result.kappa_hat_12 = estimate.kappa_hat_or_zero(0, 1);
            result.kappa_hat_14 = estimate.kappa_hat_or_zero(0, 3);
            result.failure_criterion = result.kappa_hat_12 <= result.kappa_hat_14;
        } else {
            result.kappa_hat_12 = kNaN;
            result.kappa_hat_14 = kNaN;
            result.failure_criterion = !result.exact_recovery;
        }
    } catch (const std::exception& e) {
        result.errored = true;
        result.error = e.what();
        result.exact_recovery = false;
        result.failure_criterion = true;
        result.kappa_hat_12 = kNaN;
        result.kappa_hat_14 = kNaN;
    }
    if (config.timing) {
        result.wallclock_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                  std::chrono::steady_clock::now() - started)
                                  .count();
    }
    return result;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
    validate(config);
    ExperimentReport report;
    report.config = config;
    report.sweep_param =
        config.kind == ExperimentKind::SampleComplexityCurve ? "n" : "sigma2";

    // Instances that do not vary per trial are built once and shared.
    std::vector<PreparedInstance> shared;
    const bool per_sweep = instance_is_per_sweep(config);
    const bool per_trial = is_regular_random(config.family);
    const bool population =
        config.population || config.kind == ExperimentKind::PopulationExactness;
    if (!per_trial) {
        const std::size_t copies = per_sweep ? config.sweep.size() : 1;
        shared.resize(copies);
        for (std::size_t s = 0; s < copies; ++s) {
            const ModelFamilySpec spec =
                per_sweep ? with_sigma2(config.family, config.sweep[s]) : config.family;
            shared[s].instance = build_instance(spec);
            if (!population) {
                shared[s].sampler = std::make_unique<GaussianSampler>(shared[s].instance);
            }
        }
    }

    const int trials = config.trials;
    const int total = static_cast<int>(config.sweep.size()) * trials;
    report.rows.resize(static_cast<std::size_t>(total));
    const int jobs = config.jobs > 0 ? config.jobs : default_jobs();
    parallel_for(total, jobs, [&](int k) {
        const int sweep_idx = k / trials;
        const int trial = k % trials;
        const PreparedInstance* prepared = nullptr;
        if (!per_trial) {
            prepared = per_sweep ? &shared[static_cast<std::size_t>(sweep_idx)] : &shared[0];
        }
        report.rows[static_cast<std::size_t>(k)] =
            run_trial(config, config.sweep[static_cast<std::size_t>(sweep_idx)], trial, prepared);
    });

    for (std::size_t s = 0; s < config.sweep.size(); ++s) {
        int failures = 0, recovered = 0;
        for (int t = 0; t < trials; ++t) {
            const TrialResult& row = report.rows[s * static_cast<std::size_t>(trials) +
                                                 static_cast<std::size_t>(t)];
            failures += row.failure_criterion ? 1 : 0;
            recovered += row.exact_recovery ? 1 : 0;
        }
        report.failure_probability[config.sweep[s]] =
            static_cast<double>(failures) / trials;
        report.recovery_rate[config.sweep[s]] = static_cast<double>(recovered) / trials;
    }

    if (config.kind == ExperimentKind::SampleComplexityCurve) {
        try {
            const SamplePlan plan =
                make_sample_plan(family_p(config.family), config.d, config.kappa, config.delta);
            report.n_dice_bound = plan.n_dice;
            report.n_slice_bound = plan.n_slice;
        } catch (const DomainError&) {
            // Plan annotations are best effort; leave them unset.
        }
    }
    return report;
}

ExperimentReport run_failure_vs_sigma(const ExperimentConfig& config) {
    ExperimentConfig c = config;
    c.kind = ExperimentKind::FailureVsSigma;
    return run_experiment(c);
}

ExperimentReport run_scatter_at_sigma(const ExperimentConfig& config) {
    ExperimentConfig c = config;
    c.kind = ExperimentKind::ScatterAtSigma;
    return run_experiment(c);
}

ExperimentReport run_sample_complexity_curve(const ExperimentConfig& config) {
    ExperimentConfig c = config;
    c.kind = ExperimentKind::SampleComplexityCurve;
    return run_experiment(c);
}

void write_report_csv(const ExperimentReport& report, std::ostream& out) {
    out << "sweep_param,sweep_value,trial,seed,exact_recovery,failure_criterion,"
           "kappa_hat_12,kappa_hat_14,wallclock_ms\n";
    for (const TrialResult& row : report.rows) {
        out << report.sweep_param << ',' << format_double(row.sweep_value) << ','
            << row.trial << ',' << row.seed << ',' << (row.exact_recovery ? 1 : 0) << ','
            << (row.failure_criterion ? 1 : 0) << ',' << format_double(row.kappa_hat_12)
            << ',' << format_double(row.kappa_hat_14) << ',' << row.wallclock_ms << '\n';
    }
}

namespace {

std::string kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::FailureVsSigma: return "failure-vs-sigma";
        case ExperimentKind::ScatterAtSigma: return "scatter-at-sigma";
        case ExperimentKind::SampleComplexityCurve: return "sample-complexity-curve";
        case ExperimentKind::PopulationExactness: return "population-exactness";
    }
    return "unknown";
}

ExperimentKind kind_from_name(const std::string& name) {
    if (name == "failure-vs-sigma") return ExperimentKind::FailureVsSigma;
    if (name == "scatter-at-sigma") return ExperimentKind::ScatterAtSigma;
    if (name == "sample-complexity-curve") return ExperimentKind::SampleComplexityCurve;
    if (name == "population-exactness") return ExperimentKind::PopulationExactness;
    throw InvalidConfig("unknown experiment kind: " + name);
}

json family_to_json(const ModelFamilySpec& family) {
    json j;
    if (const auto* tc = std::get_if<TriangleCloudParams>(&family)) {
        j["family"] = "triangle-cloud";
        j["params"] = {{"p", tc->p}, {"kappa", tc->kappa}, {"epsilon", tc->epsilon},
                       {"sigma2", tc->sigma2}};
    } else if (const auto* tn = std::get_if<ThreeNodeParams>(&family)) {
        j["family"] = "three-node";
        j["params"] = {{"kappa0", tn->kappa0}, {"epsilon", tn->epsilon}};
    } else if (const auto* fn = std::get_if<FourNodeParams>(&family)) {
        j["family"] = "four-node";
        j["params"] = {{"kappa", fn->kappa}, {"epsilon", fn->epsilon}};
    } else {
        const auto& rr = std::get<RegularRandomParams>(family);
        j["family"] = "regular-random";
        j["params"] = {{"p", rr.p}, {"d", rr.d}, {"kappa_min", rr.kappa_min},
                       {"kappa_max", rr.kappa_max}, {"seed", rr.seed}};
    }
    return j;
}

ModelFamilySpec family_from_json(const json& j) {
    const std::string name = j.at("family").get<std::string>();
    const json params = j.value("params", json::object());
    if (name == "triangle-cloud") {
        TriangleCloudParams tc;
        tc.p = params.value("p", tc.p);
        tc.kappa = params.value("kappa", tc.kappa);
        tc.epsilon = params.value("epsilon", tc.epsilon);
        tc.sigma2 = params.value("sigma2", tc.sigma2);
        return tc;
    }
    if (name == "three-node") {
        ThreeNodeParams tn;
        tn.kappa0 = params.value("kappa0", tn.kappa0);
        tn.epsilon = params.value("epsilon", tn.epsilon);
        return tn;
    }
    if (name == "four-node") {
        FourNodeParams fn;
        fn.kappa = params.value("kappa", fn.kappa);
        fn.epsilon = params.value("epsilon", fn.epsilon);
        return fn;
    }
    if (name == "regular-random") {
        RegularRandomParams rr;
        rr.p = params.value("p", rr.p);
        rr.d = params.value("d", rr.d);
        rr.kappa_min = params.value("kappa_min", rr.kappa_min);
        rr.kappa_max = params.value("kappa_max", rr.kappa_max);
        rr.seed = params.value("seed", rr.seed);
        return rr;
    }
    throw InvalidConfig("unknown model family: " + name);
}

}  // namespace

json report_to_json(const ExperimentReport& report) {
    json j;
    j["experiment"] = kind_name(report.config.kind);
    j["algorithm"] = report.config.algorithm == Algorithm::Dice ? "dice" : "slice";
    j["strategy"] =
        report.config.strategy == Strategy::Exhaustive ? "exhaustive" : "bnb";
    j["model"] = family_to_json(report.config.family);
    j["d"] = report.config.d;
    j["kappa"] = report.config.kappa;
    j["n"] = report.config.n;
    j["trials"] = report.config.trials;
    j["base_seed"] = report.config.base_seed;
    j["population"] = report.config.population;
    j["sweep_param"] = report.sweep_param;
    j["sweep"] = report.config.sweep;
    if (report.n_dice_bound) j["n_dice_bound"] = *report.n_dice_bound;
    if (report.n_slice_bound) j["n_slice_bound"] = *report.n_slice_bound;

    json aggregates = json::array();
    for (const auto& [value, probability] : report.failure_probability) {
        json row;
        row["sweep_value"] = value;
        row["failure_probability"] = probability;
        row["recovery_rate"] = report.recovery_rate.at(value);
        aggregates.push_back(std::move(row));
    }
    j["aggregates"] = std::move(aggregates);

    json rows = json::array();
    json errored = json::array();
    for (const TrialResult& row : report.rows) {
        json r;
        r["sweep_value"] = row.sweep_value;
        r["trial"] = row.trial;
        r["seed"] = row.seed;
        r["exact_recovery"] = row.exact_recovery;
        r["failure_criterion"] = row.failure_criterion;
        if (std::isfinite(row.kappa_hat_12)) r["kappa_hat_12"] = row.kappa_hat_12;
        if (std::isfinite(row.kappa_hat_14)) r["kappa_hat_14"] = row.kappa_hat_14;
        r["wallclock_ms"] = row.wallclock_ms;
        if (row.errored) {
            r["error"] = row.error;
            json item;
            item["sweep_value"] = row.sweep_value;
            item["trial"] = row.trial;
            item["error"] = row.error;
            errored.push_back(std::move(item));
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    j["errored_trials"] = std::move(errored);
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig config;
    if (j.contains("experiment")) config.kind = kind_from_name(j.at("experiment"));
    if (j.contains("algorithm")) {
        const std::string a = j.at("algorithm");
        if (a == "dice") {
            config.algorithm = Algorithm::Dice;
        } else if (a == "slice") {
            config.algorithm = Algorithm::Slice;
        } else {
            throw InvalidConfig("unknown algorithm: " + a);
        }
    }
    if (j.contains("strategy")) {
        const std::string s = j.at("strategy");
        if (s == "exhaustive") {
            config.strategy = Strategy::Exhaustive;
        } else if (s == "bnb") {
            config.strategy = Strategy::BranchAndBound;
        } else {
            throw InvalidConfig("unknown strategy: " + s);
        }
    }
    if (j.contains("model")) config.family = family_from_json(j.at("model"));
    config.d = j.value("d", config.d);
    config.kappa = j.value("kappa", config.kappa);
    config.n = j.value("n", config.n);
    config.trials = j.value("trials", config.trials);
    config.base_seed = j.value("base_seed", config.base_seed);
    if (j.contains("sweep")) config.sweep = j.at("sweep").get<std::vector<double>>();
    config.population = j.value("population", config.population);
    config.delta = j.value("delta", config.delta);
    config.jobs = j.value("jobs", config.jobs);
    config.timing = j.value("timing", config.timing);
    return config;
}

}  // namespace ggm
