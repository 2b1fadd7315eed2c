#pragma once

#include <utility>
#include <vector>

#include "gmfuse/types.hpp"

namespace gmfuse {

/// Undirected sensor network. Edges are stored as normalized (lo, hi)
/// index pairs; self membership in a neighborhood is implicit, so
/// self-loops are rejected.
class SensorGraph {
public:
    SensorGraph(int node_count, std::vector<std::pair<int, int>> edges);

    int node_count() const { return node_count_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    bool has_edge(int i, int j) const;

    /// Neighbor set of node i including i itself, sorted ascending.
    std::vector<int> neighbors(int i) const;

    /// True when every node can reach every other node.
    bool connected() const;

private:
    int node_count_;
    std::vector<std::pair<int, int>> edges_;
};

/// Metropolis-Hastings weight matrix: gamma_ij = 1/max(|N_i|, |N_j|) on
/// edges, diagonal absorbs the remainder, zero elsewhere. Symmetric,
/// nonnegative, doubly stochastic.
Mat mhmc_weights(const SensorGraph& g);

/// Flat per-node consensus state; every node's payload must have the same
/// length within a run.
using ConsensusPayload = Vec;

/// One synchronous averaging round: out_i = sum_j gamma_ij in_j. All nodes
/// read iteration-l values and write iteration-(l+1) values.
std::vector<ConsensusPayload> consensus_round(
    const std::vector<ConsensusPayload>& values, const Mat& gamma);

struct ConsensusResult {
    std::vector<ConsensusPayload> values;
    int iterations = 0;
    bool converged = false;
};

/// Iterates consensus_round until the largest per-node inf-norm change
/// between successive iterates drops below tol, or max_iters is reached.
/// Non-convergence is reported through the flag, never an error.
ConsensusResult run_consensus(const SensorGraph& g,
                              std::vector<ConsensusPayload> init, double tol,
                              int max_iters);

}  // namespace gmfuse
