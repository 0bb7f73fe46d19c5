#include "cocite/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

#include "cocite/error.hpp"

namespace cocite {

std::vector<double> betweenness(const CoCitationNetwork& net) {
    const std::size_t n = net.node_count();
    const auto& adj = net.adjacency();
    std::vector<double> score(n, 0.0);

    std::vector<double> dist(n);
    std::vector<double> sigma(n);
    std::vector<double> delta(n);
    std::vector<bool> settled(n);
    std::vector<std::vector<std::size_t>> preds(n);
    std::vector<std::size_t> order;
    order.reserve(n);

    using Entry = std::pair<double, std::size_t>;
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), INFINITY);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        std::fill(settled.begin(), settled.end(), false);
        for (auto& p : preds) p.clear();
        order.clear();

        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
        dist[s] = 0.0;
        sigma[s] = 1.0;
        queue.emplace(0.0, s);
        while (!queue.empty()) {
            const auto [d, v] = queue.top();
            queue.pop();
            if (settled[v] || d > dist[v]) continue;
            settled[v] = true;
            order.push_back(v);
            for (const auto& [w, weight] : adj[v]) {
                if (settled[w]) continue;
                const double alt = dist[v] + 1.0 / weight;
                const double tolerance = 1e-10 * std::max(1.0, alt);
                if (alt < dist[w] - tolerance) {
                    dist[w] = alt;
                    sigma[w] = sigma[v];
                    preds[w].assign(1, v);
                    queue.emplace(alt, w);
                } else if (std::fabs(alt - dist[w]) <= tolerance) {
                    sigma[w] += sigma[v];
                    preds[w].push_back(v);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const std::size_t w = *it;
            for (std::size_t v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s) score[w] += delta[w];
        }
    }

    for (const auto& component : connected_components(net)) {
        const double size = static_cast<double>(component.size());
        // Each unordered pair was counted from both ends.
        const double norm = size >= 3 ? (size - 1.0) * (size - 2.0) : 0.0;
        for (std::size_t v : component) score[v] = norm > 0.0 ? score[v] / norm : 0.0;
    }
    return score;
}

std::vector<std::size_t> pivotal_nodes(const CoCitationNetwork& net, std::span<const int> assignment,
                                       std::span<const double> betweenness, double q) {
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("pivotal quantile must lie in (0, 1)");
    if (assignment.size() != net.node_count() || betweenness.size() != net.node_count()) {
        throw ContractError("assignment and betweenness must cover every node");
    }
    std::vector<std::size_t> out;
    const std::size_t n = net.node_count();
    if (n == 0) return out;

    std::vector<double> ranked(betweenness.begin(), betweenness.end());
    std::sort(ranked.begin(), ranked.end(), std::greater<>());
    const auto take = static_cast<std::size_t>(
        std::clamp(std::ceil((1.0 - q) * static_cast<double>(n) - 1e-9), 1.0, static_cast<double>(n)));
    const double threshold = ranked[take - 1];

    for (std::size_t v = 0; v < n; ++v) {
        if (betweenness[v] < threshold || !(betweenness[v] > 0.0)) continue;
        const bool bridges = std::any_of(net.adjacency()[v].begin(), net.adjacency()[v].end(),
                                         [&](const auto& nb) { return assignment[nb.first] != assignment[v]; });
        if (bridges) out.push_back(v);
    }
    return out;
}

std::vector<std::size_t> slice_edge_filter(const CoCitationNetwork& net, int slice_index) {
    const auto& slices = net.slice_indices();
    if (!std::binary_search(slices.begin(), slices.end(), slice_index)) {
        throw ContractError("unknown slice index " + std::to_string(slice_index));
    }
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < net.edge_count(); ++e) {
        const auto& counts = net.edges()[e].per_slice_counts;
        const auto it = counts.find(slice_index);
        if (it != counts.end() && it->second >= 1) out.push_back(e);
    }
    return out;
}

std::map<int, std::int64_t> slice_activity(const CoCitationNetwork& net) {
    std::map<int, std::int64_t> out;
    for (int s : net.slice_indices()) out[s] = 0;
    for (const auto& e : net.edges()) {
        for (const auto& [s, c] : e.per_slice_counts) out[s] += c;
    }
    return out;
}

NodeMetrics node_metrics(const CoCitationNetwork& net, std::span<const int> assignment, double pivotal_quantile) {
    NodeMetrics m;
    m.betweenness = betweenness(net);
    m.pivotal = pivotal_nodes(net, assignment, m.betweenness, pivotal_quantile);
    m.slice_activity = slice_activity(net);
    return m;
}

}  // namespace cocite
