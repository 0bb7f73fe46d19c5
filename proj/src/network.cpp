#include "cocite/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>

#include "cocite/error.hpp"

namespace cocite {

std::vector<TimeSlice> slice_interval(int t_start, int t_end, int slice_len) {
    if (slice_len < 1) throw ConfigError("slice length must be at least 1 year");
    if (t_start > t_end) throw ConfigError("study interval start is after its end");
    std::vector<TimeSlice> slices;
    for (int start = t_start, i = 0; start <= t_end; start += slice_len, ++i) {
        slices.push_back({i, start, std::min(t_end, start + slice_len - 1)});
    }
    return slices;
}

std::optional<int> slice_of(std::span<const TimeSlice> slices, int year) {
    for (const auto& s : slices) {
        if (s.contains(year)) return s.index;
    }
    return std::nullopt;
}

CoCitationNetwork::CoCitationNetwork(std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges,
                                     std::vector<int> slice_indices)
    : slice_indices_(std::move(slice_indices)) {
    std::sort(slice_indices_.begin(), slice_indices_.end());
    if (std::adjacent_find(slice_indices_.begin(), slice_indices_.end()) != slice_indices_.end()) {
        throw ContractError("duplicate slice index in network");
    }

    std::vector<std::size_t> order(nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nodes[a].key < nodes[b].key; });
    std::vector<std::size_t> new_index(nodes.size());
    nodes_.reserve(nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        new_index[order[i]] = i;
        nodes_.push_back(std::move(nodes[order[i]]));
        if (i > 0 && nodes_[i].key == nodes_[i - 1].key) throw ContractError("duplicate node key '" + nodes_[i].key + "'");
    }

    for (auto& e : edges) {
        if (e.source >= nodes_.size() || e.target >= nodes_.size()) throw ContractError("edge endpoint out of range");
        if (e.source == e.target) throw ContractError("self-loop on '" + nodes_[new_index[e.source]].key + "'");
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) throw ContractError("edge weight must be positive");
        e.source = new_index[e.source];
        e.target = new_index[e.target];
        if (e.source > e.target) std::swap(e.source, e.target);
    }
    std::sort(edges.begin(), edges.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
        return std::tie(a.source, a.target) < std::tie(b.source, b.target);
    });
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (edges[i].source == edges[i - 1].source && edges[i].target == edges[i - 1].target) {
            throw ContractError("duplicate edge " + nodes_[edges[i].source].key + " -- " + nodes_[edges[i].target].key);
        }
    }
    edges_ = std::move(edges);
    index();
}

void CoCitationNetwork::index() {
    by_key_.clear();
    for (std::size_t i = 0; i < nodes_.size(); ++i) by_key_.emplace(nodes_[i].key, i);
    adjacency_.assign(nodes_.size(), {});
    for (const auto& e : edges_) {
        adjacency_[e.source].emplace_back(e.target, e.weight);
        adjacency_[e.target].emplace_back(e.source, e.weight);
    }
    for (auto& row : adjacency_) std::sort(row.begin(), row.end());
}

std::optional<std::size_t> CoCitationNetwork::index_of(std::string_view key) const {
    const auto it = by_key_.find(std::string(key));
    if (it == by_key_.end()) return std::nullopt;
    return it->second;
}

double CoCitationNetwork::weight(std::size_t u, std::size_t v) const {
    if (u >= adjacency_.size() || v >= adjacency_.size()) return 0.0;
    const auto& row = adjacency_[u];
    const auto it = std::lower_bound(row.begin(), row.end(), std::pair<std::size_t, double>(v, -INFINITY));
    return it != row.end() && it->first == v ? it->second : 0.0;
}

double CoCitationNetwork::weight(std::string_view u, std::string_view v) const {
    const auto a = index_of(u);
    const auto b = index_of(v);
    return a && b ? weight(*a, *b) : 0.0;
}

double CoCitationNetwork::total_weight() const {
    double m = 0.0;
    for (const auto& e : edges_) m += e.weight;
    return m;
}

CoCitationNetwork CoCitationNetwork::with_weights(std::span<const double> weights) const {
    if (weights.size() != edges_.size()) throw ContractError("weight vector does not match edge count");
    auto edges = edges_;
    for (std::size_t i = 0; i < edges.size(); ++i) edges[i].weight = weights[i];
    return CoCitationNetwork(nodes_, std::move(edges), slice_indices_);
}

std::vector<BibRecord> select_top_cited(std::span<const BibRecord> records, const TimeSlice& slice, std::size_t n) {
    if (n < 1) throw ConfigError("top-n must be at least 1");
    std::vector<BibRecord> inside;
    for (const auto& r : records) {
        if (slice.contains(r.year)) inside.push_back(r);
    }
    std::sort(inside.begin(), inside.end(), [](const BibRecord& a, const BibRecord& b) {
        if (a.times_cited != b.times_cited) return a.times_cited > b.times_cited;
        return a.id < b.id;
    });
    if (inside.size() > n) inside.resize(n);
    return inside;
}

namespace {

// One slice network from per-record item sets: every record adds 1 to each
// unordered pair of its distinct items.
CoCitationNetwork build_slice(const std::vector<std::vector<std::string>>& items_per_record, int slice_index) {
    std::map<std::pair<std::string, std::string>, std::int64_t> pair_counts;
    std::map<std::string, std::int64_t> occurrences;
    for (const auto& items : items_per_record) {
        std::vector<std::string> distinct = items;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (const auto& item : distinct) ++occurrences[item];
        for (std::size_t i = 0; i < distinct.size(); ++i) {
            for (std::size_t j = i + 1; j < distinct.size(); ++j) ++pair_counts[{distinct[i], distinct[j]}];
        }
    }

    std::set<std::string> in_pairs;
    for (const auto& [pair, count] : pair_counts) {
        in_pairs.insert(pair.first);
        in_pairs.insert(pair.second);
    }
    std::vector<NodeRecord> nodes;
    std::map<std::string, std::size_t> index;
    for (const auto& key : in_pairs) {
        index.emplace(key, nodes.size());
        nodes.push_back({key, occurrences[key], slice_index});
    }
    std::vector<EdgeRecord> edges;
    for (const auto& [pair, count] : pair_counts) {
        edges.push_back({index[pair.first], index[pair.second], static_cast<double>(count), {{slice_index, count}}});
    }
    return CoCitationNetwork(std::move(nodes), std::move(edges), {slice_index});
}

}  // namespace

CoCitationNetwork build_cocitation_slice(std::span<const BibRecord> top_records, const TimeSlice& slice) {
    std::vector<std::vector<std::string>> items;
    items.reserve(top_records.size());
    for (const auto& r : top_records) {
        if (!slice.contains(r.year)) {
            throw ContractError("record '" + r.id + "' (" + std::to_string(r.year) + ") lies outside slice " +
                                std::to_string(slice.index));
        }
        if (r.source_tag != SourceTag::citation_indexed) {
            throw ContractError("record '" + r.id + "' carries no citation data");
        }
        std::vector<std::string> keys;
        keys.reserve(r.cited_refs.size());
        for (const auto& k : r.cited_refs) keys.push_back(k.str());
        items.push_back(std::move(keys));
    }
    return build_slice(items, slice.index);
}

CoCitationNetwork merge_slices(std::span<const CoCitationNetwork> slices) {
    std::vector<int> indices;
    std::map<std::string, NodeRecord> nodes;
    std::map<std::pair<std::string, std::string>, EdgeRecord> edges;
    for (const auto& net : slices) {
        indices.insert(indices.end(), net.slice_indices().begin(), net.slice_indices().end());
        for (const auto& n : net.nodes()) {
            auto [it, fresh] = nodes.try_emplace(n.key, n);
            if (!fresh) {
                it->second.total_citations += n.total_citations;
                it->second.first_slice = std::min(it->second.first_slice, n.first_slice);
            }
        }
        for (const auto& e : net.edges()) {
            const auto key = std::make_pair(net.nodes()[e.source].key, net.nodes()[e.target].key);
            auto [it, fresh] = edges.try_emplace(key, e);
            if (fresh) continue;
            it->second.weight += e.weight;
            for (const auto& [s, c] : e.per_slice_counts) it->second.per_slice_counts[s] += c;
        }
    }
    std::vector<int> sorted = indices;
    std::sort(sorted.begin(), sorted.end());
    if (const auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
        throw ContractError("slice index " + std::to_string(*dup) + " appears in more than one network");
    }

    std::vector<NodeRecord> node_list;
    std::map<std::string, std::size_t> index;
    for (auto& [key, n] : nodes) {
        index.emplace(key, node_list.size());
        node_list.push_back(std::move(n));
    }
    std::vector<EdgeRecord> edge_list;
    for (auto& [key, e] : edges) {
        e.source = index[key.first];
        e.target = index[key.second];
        edge_list.push_back(std::move(e));
    }
    return CoCitationNetwork(std::move(node_list), std::move(edge_list), std::move(sorted));
}

CoCitationNetwork build_term_cooccurrence(std::span<const BibRecord> records, std::span<const TimeSlice> slices,
                                          const TermNetworkOptions& options, const StopwordList& stopwords) {
    if (options.top_terms < 1) throw ConfigError("top_terms must be at least 1");

    // Distinct phrases per record, grouped by slice.
    std::map<int, std::vector<std::vector<std::string>>> by_slice;
    for (const auto& s : slices) by_slice[s.index];
    for (const auto& r : records) {
        const auto slice = slice_of(slices, r.year);
        if (!slice) continue;
        std::set<std::string> phrases;
        for (auto& p : record_phrases(r, options.source, stopwords)) phrases.insert(std::move(p.surface));
        by_slice[*slice].emplace_back(phrases.begin(), phrases.end());
    }

    auto top_of = [&](auto&& record_lists) {
        std::map<std::string, std::int64_t> freq;
        for (const auto* list : record_lists) {
            for (const auto& phrases : *list) {
                for (const auto& p : phrases) ++freq[p];
            }
        }
        std::vector<std::pair<std::string, std::int64_t>> ranked(freq.begin(), freq.end());
        std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
        if (ranked.size() > options.top_terms) ranked.resize(options.top_terms);
        std::set<std::string> keep;
        for (auto& [p, f] : ranked) keep.insert(p);
        return keep;
    };

    std::set<std::string> global_top;
    if (!options.per_slice) {
        std::vector<const std::vector<std::vector<std::string>>*> all;
        for (const auto& [s, lists] : by_slice) all.push_back(&lists);
        global_top = top_of(all);
    }

    std::vector<CoCitationNetwork> networks;
    for (const auto& [s, lists] : by_slice) {
        const std::set<std::string> keep =
            options.per_slice ? top_of(std::vector<const std::vector<std::vector<std::string>>*>{&lists}) : global_top;
        std::vector<std::vector<std::string>> items;
        items.reserve(lists.size());
        for (const auto& phrases : lists) {
            std::vector<std::string> kept;
            for (const auto& p : phrases) {
                if (keep.contains(p)) kept.push_back(p);
            }
            items.push_back(std::move(kept));
        }
        networks.push_back(build_slice(items, s));
    }
    return merge_slices(networks);
}

CoCitationNetwork apply_weight_mode(const CoCitationNetwork& net, WeightMode mode) {
    if (mode == WeightMode::raw) return net;
    std::vector<double> weights;
    weights.reserve(net.edge_count());
    for (const auto& e : net.edges()) {
        const double cu = static_cast<double>(std::max<std::int64_t>(1, net.nodes()[e.source].total_citations));
        const double cv = static_cast<double>(std::max<std::int64_t>(1, net.nodes()[e.target].total_citations));
        weights.push_back(e.weight / std::sqrt(cu * cv));
    }
    return net.with_weights(weights);
}

CoCitationNetwork threshold_edges(const CoCitationNetwork& net, double min_weight) {
    std::vector<EdgeRecord> kept;
    std::vector<bool> used(net.node_count(), false);
    for (const auto& e : net.edges()) {
        if (e.weight < min_weight) continue;
        used[e.source] = used[e.target] = true;
        kept.push_back(e);
    }
    std::vector<NodeRecord> nodes;
    std::vector<std::size_t> remap(net.node_count());
    for (std::size_t i = 0; i < net.node_count(); ++i) {
        if (!used[i]) continue;
        remap[i] = nodes.size();
        nodes.push_back(net.nodes()[i]);
    }
    for (auto& e : kept) {
        e.source = remap[e.source];
        e.target = remap[e.target];
    }
    return CoCitationNetwork(std::move(nodes), std::move(kept), net.slice_indices());
}

std::vector<std::vector<std::size_t>> connected_components(const CoCitationNetwork& net) {
    std::vector<std::vector<std::size_t>> components;
    std::vector<bool> seen(net.node_count(), false);
    for (std::size_t start = 0; start < net.node_count(); ++start) {
        if (seen[start]) continue;
        std::vector<std::size_t> members;
        std::queue<std::size_t> frontier;
        frontier.push(start);
        seen[start] = true;
        while (!frontier.empty()) {
            const std::size_t u = frontier.front();
            frontier.pop();
            members.push_back(u);
            for (const auto& [v, w] : net.adjacency()[u]) {
                if (!seen[v]) {
                    seen[v] = true;
                    frontier.push(v);
                }
            }
        }
        std::sort(members.begin(), members.end());
        components.push_back(std::move(members));
    }
    return components;
}

}  // namespace cocite
