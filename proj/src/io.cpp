#include "ggm/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ggm/errors.hpp"

namespace ggm {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw IoError("matrix must be a nonempty array of rows");
    const auto rows = j.size();
    const auto cols = j.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw IoError("ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j[i][c].get<double>();
        }
    }
    return m;
}

std::string pair_key(int i, int j) {
    // 1-based "i,j"
    return std::to_string(i + 1) + "," + std::to_string(j + 1);
}

std::pair<int, int> parse_pair_key(const std::string& key) {
    const auto comma = key.find(',');
    if (comma == std::string::npos) throw IoError("kappa_hat key must be 'i,j'");
    return {std::stoi(key.substr(0, comma)) - 1, std::stoi(key.substr(comma + 1)) - 1};
}

json family_params_json(const GgmInstance& instance) {
    // Reconstructable parameters are not stored on the instance beyond the
    // matrix itself, so persist the structural summary.
    json params = json::object();
    params["kappa"] = instance.kappa;
    return params;
}

}  // namespace

json model_to_json(const GgmInstance& instance) {
    json j;
    j["p"] = instance.p;
    j["d"] = instance.d;
    j["theta"] = matrix_to_json(instance.theta);
    json mu = json::array();
    for (Eigen::Index i = 0; i < instance.mu.size(); ++i) mu.push_back(instance.mu(i));
    j["mu"] = std::move(mu);
    j["family"] = instance.family;
    j["params"] = family_params_json(instance);
    if (instance.seed) {
        j["seed"] = *instance.seed;
    } else {
        j["seed"] = nullptr;
    }
    return j;
}

GgmInstance model_from_json(const json& j) {
    Eigen::MatrixXd theta = matrix_from_json(j.at("theta"));
    Eigen::VectorXd mu;
    if (j.contains("mu") && j.at("mu").is_array() && !j.at("mu").empty()) {
        const auto& values = j.at("mu");
        mu.resize(static_cast<Eigen::Index>(values.size()));
        for (std::size_t t = 0; t < values.size(); ++t) {
            mu(static_cast<Eigen::Index>(t)) = values[t].get<double>();
        }
    }
    std::optional<std::uint64_t> seed;
    if (j.contains("seed") && !j.at("seed").is_null()) {
        seed = j.at("seed").get<std::uint64_t>();
    }
    const std::string family = j.value("family", std::string("custom"));
    GgmInstance instance = instance_from_theta(theta, mu, family, seed);
    if (j.contains("p") && j.at("p").get<int>() != instance.p) {
        throw IoError("model file p disagrees with theta dimensions");
    }
    if (j.contains("d")) {
        const int d = j.at("d").get<int>();
        if (d < instance.d) throw IoError("model file d is below the actual max degree");
        instance.d = d;
    }
    return instance;
}

void save_model(const GgmInstance& instance, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << model_to_json(instance).dump(2) << "\n";
}

GgmInstance load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("bad model JSON in " + path + ": " + e.what());
    }
    return model_from_json(j);
}

json graph_to_json(const GraphEstimate& graph) {
    json j;
    j["p"] = graph.p;
    json edges = json::array();
    for (const auto& [a, b] : graph.edges) edges.push_back(json::array({a + 1, b + 1}));
    j["edges"] = std::move(edges);
    json neighborhoods = json::object();
    for (int v = 0; v < graph.p; ++v) {
        json adjacency = json::array();
        for (int u : graph.neighborhoods[static_cast<std::size_t>(v)]) adjacency.push_back(u + 1);
        neighborhoods[std::to_string(v + 1)] = std::move(adjacency);
    }
    j["neighborhoods"] = std::move(neighborhoods);
    json strengths = json::object();
    for (const auto& [pair, value] : graph.kappa_hat) {
        strengths[pair_key(pair.first, pair.second)] = value;
    }
    j["kappa_hat"] = std::move(strengths);
    json diagnostics;
    json no_pass = json::array();
    for (int v : graph.no_passing_set) no_pass.push_back(v + 1);
    diagnostics["no_passing_set"] = std::move(no_pass);
    json asymmetric = json::array();
    for (const auto& [a, b] : graph.asymmetric_pairs) {
        asymmetric.push_back(json::array({a + 1, b + 1}));
    }
    diagnostics["asymmetric_pairs"] = std::move(asymmetric);
    j["diagnostics"] = std::move(diagnostics);
    return j;
}

GraphEstimate graph_from_json(const json& j) {
    GraphEstimate graph;
    graph.p = j.at("p").get<int>();
    for (const auto& e : j.at("edges")) {
        graph.edges.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
    }
    graph.neighborhoods.assign(static_cast<std::size_t>(graph.p), {});
    if (j.contains("neighborhoods")) {
        for (const auto& [key, value] : j.at("neighborhoods").items()) {
            const int v = std::stoi(key) - 1;
            for (const auto& u : value) {
                graph.neighborhoods[static_cast<std::size_t>(v)].push_back(u.get<int>() - 1);
            }
        }
    }
    if (j.contains("kappa_hat")) {
        for (const auto& [key, value] : j.at("kappa_hat").items()) {
            graph.kappa_hat[parse_pair_key(key)] = value.get<double>();
        }
    }
    if (j.contains("diagnostics")) {
        const auto& diagnostics = j.at("diagnostics");
        for (const auto& v : diagnostics.value("no_passing_set", json::array())) {
            graph.no_passing_set.push_back(v.get<int>() - 1);
        }
        for (const auto& e : diagnostics.value("asymmetric_pairs", json::array())) {
            graph.asymmetric_pairs.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
        }
    }
    return graph;
}

void save_graph(const GraphEstimate& graph, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << graph_to_json(graph).dump(2) << "\n";
}

GraphEstimate load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("bad graph JSON in " + path + ": " + e.what());
    }
    return graph_from_json(j);
}

void write_samples_csv(const SampleSet& samples, std::ostream& out, bool header) {
    const int p = static_cast<int>(samples.data.cols());
    if (header) {
        for (int j = 0; j < p; ++j) {
            if (j) out << ',';
            out << 'x' << (j + 1);
        }
        out << '\n';
    }
    char buffer[64];
    for (int k = 0; k < samples.n; ++k) {
        for (int j = 0; j < p; ++j) {
            if (j) out << ',';
            std::snprintf(buffer, sizeof buffer, "%.17g", samples.data(k, j));
            out << buffer;
        }
        out << '\n';
    }
}

void save_samples(const SampleSet& samples, const std::string& path, bool header) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    write_samples_csv(samples, out, header);
}

SampleSet read_samples_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream fields(line);
        std::string field;
        bool parse_failed = false;
        while (std::getline(fields, field, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(field, &used));
                if (used == 0) parse_failed = true;
            } catch (const std::exception&) {
                parse_failed = true;
                break;
            }
        }
        if (parse_failed) {
            if (first) {
                first = false;  // header line
                continue;
            }
            throw IoError("non-numeric field in samples CSV");
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw IoError("ragged rows in samples CSV");
        }
        rows.push_back(std::move(row));
        first = false;
    }
    if (rows.empty()) throw IoError("samples CSV contains no data rows");
    SampleSet samples;
    samples.n = static_cast<int>(rows.size());
    const int p = static_cast<int>(rows.front().size());
    samples.data.resize(samples.n, p);
    for (int k = 0; k < samples.n; ++k) {
        for (int j = 0; j < p; ++j) {
            samples.data(k, j) = rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        }
    }
    return samples;
}

SampleSet load_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return read_samples_csv(in);
}

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, result.ptr);
}

}  // namespace ggm
