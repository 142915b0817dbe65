#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ggm/model.hpp"
#include "ggm/regression.hpp"

#include <nlohmann/json_fwd.hpp>

namespace ggm {

enum class ExperimentKind {
    FailureVsSigma,         ///< sweep sigma2, record the link-ranking failure rate
    ScatterAtSigma,         ///< one sigma2, emit per-trial (kappa_hat_12, kappa_hat_14)
    SampleComplexityCurve,  ///< sweep n, record exact-recovery rate
    PopulationExactness,    ///< infinite-sample recovery across the sweep
};

enum class Algorithm {
    Dice,
    Slice,
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::FailureVsSigma;
    Algorithm algorithm = Algorithm::Slice;
    Strategy strategy = Strategy::Exhaustive;
    ModelFamilySpec family = TriangleCloudParams{};
    int d = 2;                  ///< degree bound handed to the algorithm
    double kappa = 0.4;         ///< strength threshold handed to the algorithm
    int n = 175;                ///< samples per trial (ignored where swept)
    int trials = 50;
    std::uint64_t base_seed = 1;
    std::vector<double> sweep;  ///< sigma2 values or n values, per kind
    bool population = false;    ///< run on the exact covariance instead of samples
    double delta = 0.1;         ///< confidence used for bound annotations
    int jobs = 0;               ///< 0 = default_jobs()
    bool timing = false;        ///< record wall clock (breaks byte reproducibility)
};

/// One (sweep value, trial) outcome. Trials that raise numerical errors are
/// kept, flagged, and counted as failures rather than dropped.
struct TrialResult {
    double sweep_value = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    bool exact_recovery = false;
    bool failure_criterion = false;  ///< kappa_hat_12 <= kappa_hat_14
    double kappa_hat_12 = 0.0;       ///< NaN when the pair is undefined
    double kappa_hat_14 = 0.0;
    long wallclock_ms = 0;
    bool errored = false;
    std::string error;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::string sweep_param;                     ///< "sigma2" or "n"
    std::vector<TrialResult> rows;               ///< sorted by (sweep, trial)
    std::map<double, double> failure_probability;  ///< per sweep value
    std::map<double, double> recovery_rate;        ///< per sweep value

    /// Bound annotations for sample-complexity runs.
    std::optional<long> n_dice_bound;
    std::optional<long> n_slice_bound;
};

/// Runs the configured experiment. Deterministic in (config, base_seed):
/// trial t uses seed base_seed + t, sub-streams are derived per use, and
/// rows are sorted before aggregation, so the report does not depend on the
/// job count.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Results CSV with header
/// sweep_param,sweep_value,trial,seed,exact_recovery,failure_criterion,
/// kappa_hat_12,kappa_hat_14,wallclock_ms.
void write_report_csv(const ExperimentReport& report, std::ostream& out);

nlohmann::json report_to_json(const ExperimentReport& report);

/// Parses a config JSON object (same field names as the CLI flags).
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Dispatch helpers mirroring the experiment kinds.
ExperimentReport run_failure_vs_sigma(const ExperimentConfig& config);
ExperimentReport run_scatter_at_sigma(const ExperimentConfig& config);
ExperimentReport run_sample_complexity_curve(const ExperimentConfig& config);

}  // namespace ggm
