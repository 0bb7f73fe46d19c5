#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "cocite/network.hpp"

namespace cocite {

struct NodeMetrics {
    std::vector<double> betweenness;  // indexed like net.nodes()
    std::vector<std::size_t> pivotal; // node indices, ascending
    std::map<int, std::int64_t> slice_activity;
};

/// Exact weighted betweenness (Brandes) with edge length 1 / weight, normalized
/// per connected component of size n >= 3 by (n - 1)(n - 2) / 2. Nodes of
/// smaller components score 0.
std::vector<double> betweenness(const CoCitationNetwork& net);

/// Nodes in the top (1 - q) betweenness quantile with positive betweenness that
/// have neighbours in at least one other cluster.
std::vector<std::size_t> pivotal_nodes(const CoCitationNetwork& net, std::span<const int> assignment,
                                       std::span<const double> betweenness, double q);

/// Indices of edges with at least one co-citation in the given slice.
/// Throws ContractError for a slice the network does not cover.
std::vector<std::size_t> slice_edge_filter(const CoCitationNetwork& net, int slice_index);

/// Total co-citation count per slice, over every covered slice.
std::map<int, std::int64_t> slice_activity(const CoCitationNetwork& net);

NodeMetrics node_metrics(const CoCitationNetwork& net, std::span<const int> assignment, double pivotal_quantile);

}  // namespace cocite
