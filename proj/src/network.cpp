#include "gmfuse/network.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "gmfuse/errors.hpp"

namespace gmfuse {

SensorGraph::SensorGraph(int node_count,
                         std::vector<std::pair<int, int>> edges)
    : node_count_(node_count) {
    if (node_count_ < 1) {
        throw ContractError("graph must have at least one node");
    }
    std::set<std::pair<int, int>> unique;
    for (auto [a, b] : edges) {
        if (a < 0 || a >= node_count_ || b < 0 || b >= node_count_) {
            throw ContractError("edge index out of range: (" +
                                std::to_string(a) + "," + std::to_string(b) +
                                ")");
        }
        if (a == b) {
            throw ContractError("self-loops are not stored");
        }
        unique.emplace(std::min(a, b), std::max(a, b));
    }
    edges_.assign(unique.begin(), unique.end());
}

bool SensorGraph::has_edge(int i, int j) const {
    const auto key = std::make_pair(std::min(i, j), std::max(i, j));
    return std::binary_search(edges_.begin(), edges_.end(), key);
}

std::vector<int> SensorGraph::neighbors(int i) const {
    if (i < 0 || i >= node_count_) {
        throw ContractError("node index out of range");
    }
    std::vector<int> out{i};
    for (auto [a, b] : edges_) {
        if (a == i) out.push_back(b);
        if (b == i) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool SensorGraph::connected() const {
    std::vector<int> stack{0};
    std::vector<bool> seen(static_cast<std::size_t>(node_count_), false);
    seen[0] = true;
    int visited = 1;
    while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        for (auto [a, b] : edges_) {
            const int other = a == cur ? b : (b == cur ? a : -1);
            if (other >= 0 && !seen[static_cast<std::size_t>(other)]) {
                seen[static_cast<std::size_t>(other)] = true;
                ++visited;
                stack.push_back(other);
            }
        }
    }
    return visited == node_count_;
}

Mat mhmc_weights(const SensorGraph& g) {
    const int s = g.node_count();
    std::vector<double> degree(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) {
        degree[static_cast<std::size_t>(i)] =
            static_cast<double>(g.neighbors(i).size());
    }
    Mat gamma = Mat::Zero(s, s);
    for (auto [a, b] : g.edges()) {
        const double w = 1.0 / std::max(degree[static_cast<std::size_t>(a)],
                                        degree[static_cast<std::size_t>(b)]);
        gamma(a, b) = w;
        gamma(b, a) = w;
    }
    for (int i = 0; i < s; ++i) {
        gamma(i, i) = 1.0 - gamma.row(i).sum();
    }
    return gamma;
}

std::vector<ConsensusPayload> consensus_round(
    const std::vector<ConsensusPayload>& values, const Mat& gamma) {
    const int s = static_cast<int>(values.size());
    if (s == 0 || values.front().size() == 0) {
        throw ContractError("consensus payloads must be non-empty");
    }
    if (gamma.rows() != s || gamma.cols() != s) {
        throw ContractError("weight matrix does not match node count");
    }
    const auto len = values.front().size();
    for (const auto& v : values) {
        if (v.size() != len) {
            throw ContractError("payload lengths differ across nodes");
        }
    }
    std::vector<ConsensusPayload> next(values.size(),
                                       ConsensusPayload::Zero(len));
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) {
            if (gamma(i, j) != 0.0) {
                next[static_cast<std::size_t>(i)] +=
                    gamma(i, j) * values[static_cast<std::size_t>(j)];
            }
        }
    }
    return next;
}

ConsensusResult run_consensus(const SensorGraph& g,
                              std::vector<ConsensusPayload> init, double tol,
                              int max_iters) {
    if (!(tol > 0.0) || max_iters < 1) {
        throw ContractError("run_consensus: tol must be > 0, max_iters >= 1");
    }
    if (static_cast<int>(init.size()) != g.node_count()) {
        throw ContractError("run_consensus: one payload per node required");
    }
    // topology fixed while iterating
    const Mat gamma = mhmc_weights(g);
    ConsensusResult result;
    result.values = std::move(init);
    for (int l = 0; l < max_iters; ++l) {
        auto next = consensus_round(result.values, gamma);
        double change = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            change = std::max(
                change, (next[i] - result.values[i]).cwiseAbs().maxCoeff());
        }
        result.values = std::move(next);
        result.iterations = l + 1;
        if (change < tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

}  // namespace gmfuse
