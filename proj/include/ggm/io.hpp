#pragma once

#include <iosfwd>
#include <string>

#include "ggm/graph_estimate.hpp"
#include "ggm/model.hpp"
#include "ggm/sampling.hpp"

#include <nlohmann/json_fwd.hpp>

namespace ggm {

// Vertices are 0-based in memory and 1-based in every file format and in
// CLI output. These helpers own that translation.

/// Model JSON: {"p", "d", "theta" (row-major, full), "mu", "family",
/// "params", "seed" (null unless seeded)}.
nlohmann::json model_to_json(const GgmInstance& instance);
GgmInstance model_from_json(const nlohmann::json& j);
void save_model(const GgmInstance& instance, const std::string& path);
GgmInstance load_model(const std::string& path);

/// Graph JSON: {"p", "edges" (1-based, i<j, sorted), "neighborhoods",
/// "kappa_hat" keyed "i,j", "diagnostics"}.
nlohmann::json graph_to_json(const GraphEstimate& graph);
GraphEstimate graph_from_json(const nlohmann::json& j);
void save_graph(const GraphEstimate& graph, const std::string& path);
GraphEstimate load_graph(const std::string& path);

/// Samples CSV: one row per sample, 17 significant digits so values
/// round-trip exactly. `header` adds column names x1..xp.
void write_samples_csv(const SampleSet& samples, std::ostream& out, bool header = false);
void save_samples(const SampleSet& samples, const std::string& path, bool header = false);

/// Reads a samples CSV, skipping a header line if the first field does not
/// parse as a number.
SampleSet read_samples_csv(std::istream& in);
SampleSet load_samples(const std::string& path);

/// Shortest round-trip decimal formatting used in results CSV files.
std::string format_double(double value);

}  // namespace ggm
