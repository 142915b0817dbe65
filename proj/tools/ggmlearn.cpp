// Command line front end: model generation, sampling, recovery, sample-size
// planning, and the experiment harness.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ggm/bounds.hpp"
#include "ggm/dice.hpp"
#include "ggm/errors.hpp"
#include "ggm/experiment.hpp"
#include "ggm/io.hpp"
#include "ggm/model.hpp"
#include "ggm/parallel.hpp"
#include "ggm/sampling.hpp"
#include "ggm/slice.hpp"

namespace {

using nlohmann::json;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ggm::IoError("cannot open " + path + " for writing");
    out << text;
}

ggm::ModelFamilySpec family_from_flags(const std::string& family, int p, double kappa,
                                       double eps, double sigma2, int d, double kappa_min,
                                       double kappa_max, std::uint64_t seed) {
    if (family == "triangle-cloud") return ggm::TriangleCloudParams{kappa, eps, sigma2, p};
    if (family == "three-node") return ggm::ThreeNodeParams{kappa, eps};
    if (family == "four-node") return ggm::FourNodeParams{kappa, eps};
    if (family == "regular-random") {
        return ggm::RegularRandomParams{p, d, kappa_min, kappa_max, seed};
    }
    throw ggm::InvalidSpec("unknown family: " + family);
}

int run(int argc, char** argv) {
    CLI::App app{"Sparse Gaussian graphical model structure recovery"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "Generate a ground-truth model file");
    std::string gen_family;
    int gen_p = 200, gen_d = 3;
    double gen_kappa = 0.4, gen_eps = 0.01, gen_sigma2 = 1000.0;
    double gen_kmin = 0.2, gen_kmax = 0.4;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--family", gen_family,
                    "triangle-cloud | three-node | four-node | regular-random")
        ->required();
    gen->add_option("--p", gen_p, "vertex count (triangle-cloud, regular-random)");
    gen->add_option("--kappa", gen_kappa, "weak-link strength (triangle families)");
    gen->add_option("--eps", gen_eps, "strong link is 1-eps (triangle families)");
    gen->add_option("--sigma2", gen_sigma2, "independent-node variance (triangle-cloud)");
    gen->add_option("--d", gen_d, "degree (regular-random)");
    gen->add_option("--kappa-min", gen_kmin, "strength range lower end (regular-random)");
    gen->add_option("--kappa-max", gen_kmax, "strength range upper end (regular-random)");
    gen->add_option("--seed", gen_seed, "generation seed (regular-random)");
    gen->add_option("--out", gen_out, "output model JSON path (default stdout)");
    gen->callback([&] {
        const ggm::GgmInstance instance = ggm::build_instance(family_from_flags(
            gen_family, gen_p, gen_kappa, gen_eps, gen_sigma2, gen_d, gen_kmin, gen_kmax,
            gen_seed));
        write_text(gen_out, ggm::model_to_json(instance).dump(2) + "\n");
    });

    // ---- sample ----
    auto* smp = app.add_subcommand("sample", "Draw i.i.d. samples from a model file");
    std::string smp_model, smp_out;
    int smp_n = 0;
    std::uint64_t smp_seed = 0;
    bool smp_header = false;
    smp->add_option("--model", smp_model, "model JSON path")->required();
    smp->add_option("--n", smp_n, "number of samples")->required();
    smp->add_option("--seed", smp_seed, "sampling seed");
    smp->add_flag("--header", smp_header, "write a x1..xp header row");
    smp->add_option("--out", smp_out, "output CSV path (default stdout)");
    smp->callback([&] {
        const ggm::GgmInstance instance = ggm::load_model(smp_model);
        const ggm::SampleSet samples = ggm::sample(instance, smp_n, smp_seed);
        std::ostringstream buffer;
        ggm::write_samples_csv(samples, buffer, smp_header);
        write_text(smp_out, buffer.str());
    });

    // ---- recover ----
    auto* rec = app.add_subcommand("recover", "Reconstruct the graph from samples");
    std::string rec_algo, rec_strategy = "exhaustive", rec_samples, rec_model, rec_out;
    std::string rec_mean = "zero";
    int rec_d = 0, rec_jobs = 0;
    double rec_kappa = 0.0;
    bool rec_population = false;
    rec->add_option("--algo", rec_algo, "dice | slice")->required();
    rec->add_option("--strategy", rec_strategy, "exhaustive | bnb");
    rec->add_option("--d", rec_d, "maximum degree")->required();
    rec->add_option("--kappa", rec_kappa, "minimum normalized edge strength")->required();
    rec->add_option("--samples", rec_samples, "samples CSV path");
    rec->add_option("--model", rec_model, "model JSON path (population mode)");
    rec->add_flag("--population", rec_population,
                  "run on the exact covariance of --model instead of samples");
    rec->add_option("--mean-mode", rec_mean, "zero | centered (covariance estimator)");
    rec->add_option("--jobs", rec_jobs, "per-vertex parallelism (default GGM_JOBS)");
    rec->add_option("--out", rec_out, "output graph JSON path (default stdout)");
    rec->callback([&] {
        ggm::Strategy strategy;
        if (rec_strategy == "exhaustive") {
            strategy = ggm::Strategy::Exhaustive;
        } else if (rec_strategy == "bnb") {
            strategy = ggm::Strategy::BranchAndBound;
        } else {
            throw ggm::InvalidConfig("unknown strategy: " + rec_strategy);
        }
        ggm::CovarianceEstimate cov;
        if (rec_population) {
            if (rec_model.empty()) throw ggm::InvalidConfig("--population needs --model");
            cov = ggm::population_covariance(ggm::load_model(rec_model));
        } else {
            if (rec_samples.empty()) {
                throw ggm::InvalidConfig("provide --samples, or --model with --population");
            }
            ggm::SampleSet samples = ggm::load_samples(rec_samples);
            if (rec_mean == "centered") {
                samples.mean_mode = ggm::MeanMode::Centered;
            } else if (rec_mean != "zero") {
                throw ggm::InvalidConfig("unknown mean mode: " + rec_mean);
            }
            cov = ggm::empirical_covariance(samples);
        }
        const int jobs = rec_jobs > 0 ? rec_jobs : ggm::default_jobs();
        ggm::GraphEstimate graph;
        if (rec_algo == "dice") {
            graph = ggm::dice(cov, rec_d, rec_kappa, {strategy, jobs});
        } else if (rec_algo == "slice") {
            graph = ggm::slice(cov, rec_d, rec_kappa, strategy, jobs);
        } else {
            throw ggm::InvalidConfig("unknown algorithm: " + rec_algo);
        }
        write_text(rec_out, ggm::graph_to_json(graph).dump(2) + "\n");
    });

    // ---- bounds ----
    auto* bnd = app.add_subcommand(
        "bounds", "Print the sample-size plan for (p,d,kappa,delta); natural logarithms");
    int bnd_p = 0, bnd_d = 0;
    double bnd_kappa = 0.0, bnd_delta = 0.1;
    bnd->add_option("--p", bnd_p, "vertex count")->required();
    bnd->add_option("--d", bnd_d, "maximum degree")->required();
    bnd->add_option("--kappa", bnd_kappa, "minimum normalized edge strength")->required();
    bnd->add_option("--delta", bnd_delta, "failure probability budget");
    bnd->callback([&] {
        const ggm::SamplePlan plan = ggm::make_sample_plan(bnd_p, bnd_d, bnd_kappa, bnd_delta);
        json j;
        j["p"] = plan.p;
        j["d"] = plan.d;
        j["kappa"] = plan.kappa;
        j["delta"] = plan.delta;
        j["n_it_lower"] = plan.n_it_lower;
        j["n_dice"] = plan.n_dice;
        j["n_slice"] = plan.n_slice;
        j["ratio_dice"] = plan.ratio_dice;
        std::cout << j.dump(2) << "\n\n";
        std::printf("%-12s %s\n", "quantity", "value");
        std::printf("%-12s %d\n", "p", plan.p);
        std::printf("%-12s %d\n", "d", plan.d);
        std::printf("%-12s %g\n", "kappa", plan.kappa);
        std::printf("%-12s %g\n", "delta", plan.delta);
        std::printf("%-12s %.6f\n", "n_it_lower", plan.n_it_lower);
        std::printf("%-12s %ld\n", "n_dice", plan.n_dice);
        std::printf("%-12s %ld\n", "n_slice", plan.n_slice);
        std::printf("%-12s %.6f\n", "ratio_dice", plan.ratio_dice);
    });

    // ---- experiment ----
    auto* exp = app.add_subcommand("experiment", "Run a trial sweep and write a report");
    std::string exp_config, exp_out, exp_format = "csv";
    std::optional<std::string> exp_kind, exp_algo, exp_strategy;
    std::optional<int> exp_trials, exp_n, exp_d, exp_jobs;
    std::optional<std::uint64_t> exp_seed;
    std::optional<double> exp_kappa;
    std::vector<double> exp_sweep;
    bool exp_population = false, exp_timing = false;
    exp->add_option("--config", exp_config, "experiment config JSON path");
    exp->add_option("--experiment", exp_kind,
                    "failure-vs-sigma | scatter-at-sigma | sample-complexity-curve | "
                    "population-exactness");
    exp->add_option("--algo", exp_algo, "dice | slice");
    exp->add_option("--strategy", exp_strategy, "exhaustive | bnb");
    exp->add_option("--trials", exp_trials, "trials per sweep value");
    exp->add_option("--seed", exp_seed, "base seed (trial t uses base+t)");
    exp->add_option("--n", exp_n, "samples per trial");
    exp->add_option("--d", exp_d, "degree bound for recovery");
    exp->add_option("--kappa", exp_kappa, "strength threshold for recovery");
    exp->add_option("--sweep", exp_sweep, "sweep values")->delimiter(',');
    exp->add_flag("--population", exp_population, "use exact covariances");
    exp->add_flag("--timing", exp_timing,
                  "record per-trial wall clock (breaks byte reproducibility)");
    exp->add_option("--jobs", exp_jobs, "concurrent trials (default GGM_JOBS)");
    exp->add_option("--out", exp_out, "output path (default stdout)");
    exp->add_option("--format", exp_format, "csv | json");
    exp->callback([&] {
        ggm::ExperimentConfig config;
        if (!exp_config.empty()) {
            std::ifstream in(exp_config);
            if (!in) throw ggm::IoError("cannot open " + exp_config);
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw ggm::IoError(std::string("bad config JSON: ") + e.what());
            }
            config = ggm::config_from_json(j);
        }
        if (exp_kind) {
            json j;
            j["experiment"] = *exp_kind;
            config.kind = ggm::config_from_json(j).kind;
        }
        if (exp_algo) {
            if (*exp_algo == "dice") {
                config.algorithm = ggm::Algorithm::Dice;
            } else if (*exp_algo == "slice") {
                config.algorithm = ggm::Algorithm::Slice;
            } else {
                throw ggm::InvalidConfig("unknown algorithm: " + *exp_algo);
            }
        }
        if (exp_strategy) {
            if (*exp_strategy == "exhaustive") {
                config.strategy = ggm::Strategy::Exhaustive;
            } else if (*exp_strategy == "bnb") {
                config.strategy = ggm::Strategy::BranchAndBound;
            } else {
                throw ggm::InvalidConfig("unknown strategy: " + *exp_strategy);
            }
        }
        if (exp_trials) config.trials = *exp_trials;
        if (exp_seed) config.base_seed = *exp_seed;
        if (exp_n) config.n = *exp_n;
        if (exp_d) config.d = *exp_d;
        if (exp_kappa) config.kappa = *exp_kappa;
        if (!exp_sweep.empty()) config.sweep = exp_sweep;
        if (exp_population) config.population = true;
        if (exp_timing) config.timing = true;
        if (exp_jobs) config.jobs = *exp_jobs;

        const ggm::ExperimentReport report = ggm::run_experiment(config);
        if (exp_format == "csv") {
            std::ostringstream buffer;
            ggm::write_report_csv(report, buffer);
            write_text(exp_out, buffer.str());
        } else if (exp_format == "json") {
            write_text(exp_out, ggm::report_to_json(report).dump(2) + "\n");
        } else {
            throw ggm::InvalidConfig("unknown format: " + exp_format);
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ggm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
