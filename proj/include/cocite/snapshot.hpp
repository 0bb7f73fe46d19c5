#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cocite/clustering.hpp"
#include "cocite/labeling.hpp"
#include "cocite/layout.hpp"
#include "cocite/metrics.hpp"
#include "cocite/network.hpp"

namespace cocite {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1";

/// Per-cluster labeling output as stored in a snapshot.
struct ClusterLabels {
    std::map<LabelAlgorithm, std::vector<LabelCandidate>> lists;
    std::vector<Citer> representative_citers;
};

/// Everything a snapshot is assembled from.
struct SnapshotParts {
    nlohmann::json config;
    std::vector<TimeSlice> slices;
    const CoCitationNetwork* network = nullptr;
    const ClusterPartition* partition = nullptr;
    std::map<int, ClusterLabels> labels;
    std::map<std::string, const BibRecord*> records;  // citers referenced by representative_citers
    const LayoutResult* layout = nullptr;
    std::map<int, std::vector<Point>> hulls;
    const NodeMetrics* metrics = nullptr;
};

nlohmann::json build_snapshot(const SnapshotParts& parts);

/// Canonical text form: sorted keys, two-space indent, LF endings, reals rounded
/// to nine significant digits and printed in shortest form.
std::string serialize_snapshot(const nlohmann::json& snapshot);

/// Rounds every real in the tree to nine significant digits.
nlohmann::json quantize_reals(nlohmann::json value);

struct Violation {
    std::string kind;  // schema, dangling_reference, duplicate, contiguity, missing, invariant
    std::string message;
};

std::vector<Violation> validate_snapshot(const nlohmann::json& snapshot);

/// Reads and validates a snapshot file. Throws IoError when it cannot be read;
/// unparsable JSON is reported as a schema violation.
std::vector<Violation> validate_snapshot_file(const std::string& path);

/// Side-by-side labeling report for one cluster: tf*idf weights, log-likelihood
/// frequencies, LSA terms on both dimensions and the most representative citers.
std::string format_cluster_labels(const nlohmann::json& snapshot, int cluster_id);

}  // namespace cocite
