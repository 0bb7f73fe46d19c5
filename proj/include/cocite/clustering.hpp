#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cocite/network.hpp"

namespace cocite {

struct SpectralConfig {
    enum class KMode { fixed, automatic };

    KMode k_mode = KMode::automatic;
    int k = 2;       // used when k_mode == fixed
    int k_min = 2;   // auto range, inclusive
    int k_max = 12;
    int kmeans_restarts = 10;
    int kmeans_max_iter = 100;
    std::uint64_t seed = 42;
    std::size_t min_component_size = 3;
    bool row_normalize = true;  // Ng-Jordan-Weiss row normalization of the embedding

    static SpectralConfig fixed(int k) {
        SpectralConfig cfg;
        cfg.k_mode = KMode::fixed;
        cfg.k = k;
        return cfg;
    }
    static SpectralConfig automatic(int k_min, int k_max) {
        SpectralConfig cfg;
        cfg.k_mode = KMode::automatic;
        cfg.k_min = k_min;
        cfg.k_max = k_max;
        return cfg;
    }

    /// Throws ConfigError when an invariant does not hold.
    void validate() const;
};

/// Node-to-cluster assignment (indexed like net.nodes()) with quality measures.
struct ClusterPartition {
    std::vector<int> assignment;
    int k = 0;
    double modularity = 0.0;
    std::vector<double> node_silhouette;
    std::vector<double> cluster_mean_silhouette;
    double mean_silhouette = 0.0;
    bool silhouette_degenerate = false;  // fewer than two clusters

    std::vector<std::vector<std::size_t>> members() const;
};

struct Laplacian {
    Eigen::MatrixXd matrix;           // I - D^-1/2 W D^-1/2 over `nodes`
    std::vector<std::size_t> nodes;   // network node indices, isolated nodes excluded
};

Laplacian normalized_laplacian(const CoCitationNetwork& net);
Laplacian normalized_laplacian(const CoCitationNetwork& net, std::span<const std::size_t> subset);

/// Weighted Newman modularity. Throws NumericError when the network has no edge weight.
double modularity(const CoCitationNetwork& net, std::span<const int> assignment);

struct SilhouetteResult {
    std::vector<double> node;
    std::vector<double> cluster_mean;  // indexed by cluster id; 0 for absent ids
    double mean = 0.0;
    bool degenerate = false;
};

/// Silhouettes with dissimilarity 1 - cosine of weighted adjacency rows, where a
/// node's own entry is its maximum incident weight.
SilhouetteResult silhouette(const CoCitationNetwork& net, std::span<const int> assignment);

struct KMeansResult {
    std::vector<int> labels;
    double inertia = 0.0;  // within-cluster sum of squares
};

/// Lloyd's k-means on the rows of points with farthest-point seeding. Restart r
/// draws its first centre from a generator seeded with (seed, r); the restart
/// with the lowest inertia wins, earlier restarts winning ties.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, int restarts, int max_iter, std::uint64_t seed);

/// Spectral partition of the network. Components smaller than
/// cfg.min_component_size become clusters of their own; the rest are embedded
/// jointly with the smallest eigenvectors of each component's normalized
/// Laplacian and split with k-means. Clusters never span components. Ids are
/// renumbered by descending size.
ClusterPartition spectral_partition(const CoCitationNetwork& net, const SpectralConfig& cfg);

/// Relabels to 0..k-1 by descending cluster size, ties by smallest member index.
std::vector<int> renumber_by_size(std::span<const int> labels);

}  // namespace cocite
