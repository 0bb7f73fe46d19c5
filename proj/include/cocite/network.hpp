#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cocite/ingest.hpp"

namespace cocite {

struct TimeSlice {
    int index = 0;
    int start_year = 0;
    int end_year = 0;  // inclusive

    bool contains(int year) const noexcept { return year >= start_year && year <= end_year; }
    bool operator==(const TimeSlice&) const = default;
};

/// Contiguous, non-overlapping slices of slice_len years covering [t_start, t_end].
/// The last slice is truncated at t_end.
std::vector<TimeSlice> slice_interval(int t_start, int t_end, int slice_len);

/// Index of the slice containing year, if any.
std::optional<int> slice_of(std::span<const TimeSlice> slices, int year);

struct NodeRecord {
    std::string key;  // RefKey text or noun-phrase surface
    std::int64_t total_citations = 0;
    int first_slice = 0;

    bool operator==(const NodeRecord&) const = default;
};

struct EdgeRecord {
    std::size_t source = 0;  // node index, source < target
    std::size_t target = 0;
    double weight = 0.0;
    std::map<int, std::int64_t> per_slice_counts;

    bool operator==(const EdgeRecord&) const = default;
};

/// Weighted undirected graph of cited references or terms.
///
/// Nodes are kept sorted by key and edges by (source, target) so that two
/// networks with the same content compare and serialize identically.
class CoCitationNetwork {
public:
    CoCitationNetwork() = default;

    /// Canonicalizes and validates. Throws ContractError on self-loops, duplicate
    /// pairs, dangling endpoints, duplicate node keys or non-positive weights.
    CoCitationNetwork(std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges, std::vector<int> slice_indices);

    const std::vector<NodeRecord>& nodes() const noexcept { return nodes_; }
    const std::vector<EdgeRecord>& edges() const noexcept { return edges_; }
    const std::vector<int>& slice_indices() const noexcept { return slice_indices_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }

    std::optional<std::size_t> index_of(std::string_view key) const;

    /// Weight of the undirected pair; 0 when absent.
    double weight(std::size_t u, std::size_t v) const;
    double weight(std::string_view u, std::string_view v) const;

    /// Incident (neighbor, weight) pairs per node, ordered by neighbor index.
    const std::vector<std::vector<std::pair<std::size_t, double>>>& adjacency() const noexcept { return adjacency_; }

    double total_weight() const;

    /// Same topology with each edge's weight replaced (weights[i] for edges()[i]).
    CoCitationNetwork with_weights(std::span<const double> weights) const;

    bool operator==(const CoCitationNetwork& other) const {
        return nodes_ == other.nodes_ && edges_ == other.edges_ && slice_indices_ == other.slice_indices_;
    }

private:
    void index();

    std::vector<NodeRecord> nodes_;
    std::vector<EdgeRecord> edges_;
    std::vector<int> slice_indices_;
    std::unordered_map<std::string, std::size_t> by_key_;
    std::vector<std::vector<std::pair<std::size_t, double>>> adjacency_;
};

/// The n records with the greatest times_cited among those published inside the
/// slice; ties by ascending id.
std::vector<BibRecord> select_top_cited(std::span<const BibRecord> records, const TimeSlice& slice, std::size_t n);

/// Co-citation network of one slice: each record adds 1 to every unordered pair
/// of distinct references it cites.
CoCitationNetwork build_cocitation_slice(std::span<const BibRecord> top_records, const TimeSlice& slice);

/// Union of slice networks with summed weights and per-slice counts.
CoCitationNetwork merge_slices(std::span<const CoCitationNetwork> slices);

struct TermNetworkOptions {
    std::size_t top_terms = 300;
    bool per_slice = false;
    TextSource source = TextSource::title;
};

/// Noun-phrase co-occurrence network for records without citation data. Records
/// outside every slice are ignored. A phrase pair counts once per record.
CoCitationNetwork build_term_cooccurrence(std::span<const BibRecord> records, std::span<const TimeSlice> slices,
                                          const TermNetworkOptions& options,
                                          const StopwordList& stopwords = StopwordList::english());

enum class WeightMode { raw, cosine };

/// raw keeps counts; cosine maps w(u,v) to w(u,v) / sqrt(c(u) c(v)) with c the
/// node's total_citations.
CoCitationNetwork apply_weight_mode(const CoCitationNetwork& net, WeightMode mode);

/// Drops edges whose weight is below min_weight, then nodes left without edges.
CoCitationNetwork threshold_edges(const CoCitationNetwork& net, double min_weight);

/// Connected components as sorted node-index lists, ordered by smallest member.
std::vector<std::vector<std::size_t>> connected_components(const CoCitationNetwork& net);

}  // namespace cocite
