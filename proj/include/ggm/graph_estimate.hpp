#pragma once

#include <map>
#include <utility>
#include <vector>

namespace ggm {

/// Recovered conditional-independence structure. Shared output type of both
/// recovery algorithms.
struct GraphEstimate {
    int p = 0;
    std::vector<std::pair<int, int>> edges;        ///< 0-based, i < j, sorted
    std::vector<std::vector<int>> neighborhoods;   ///< adjacency per vertex
    std::map<std::pair<int, int>, double> kappa_hat;  ///< estimated strengths

    /// Vertices for which no candidate neighborhood passed support testing.
    std::vector<int> no_passing_set;
    /// Pairs kept out of `edges` because only one direction voted for them.
    std::vector<std::pair<int, int>> asymmetric_pairs;

    bool has_edge(int i, int j) const;

    /// kappa_hat lookup that treats missing pairs as zero strength.
    double kappa_hat_or_zero(int i, int j) const;
};

}  // namespace ggm
