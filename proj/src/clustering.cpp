#include "cocite/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "cocite/error.hpp"

namespace cocite {

void SpectralConfig::validate() const {
    if (k_mode == KMode::fixed && k < 1) throw ConfigError("k must be at least 1");
    if (k_mode == KMode::automatic && (k_min < 2 || k_max < k_min)) {
        throw ConfigError("auto k range requires 2 <= k_min <= k_max");
    }
    if (kmeans_restarts < 1) throw ConfigError("kmeans_restarts must be at least 1");
    if (kmeans_max_iter < 1) throw ConfigError("kmeans_max_iter must be at least 1");
}

std::vector<std::vector<std::size_t>> ClusterPartition::members() const {
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < assignment.size(); ++i) out[static_cast<std::size_t>(assignment[i])].push_back(i);
    return out;
}

Laplacian normalized_laplacian(const CoCitationNetwork& net, std::span<const std::size_t> subset) {
    std::vector<double> degree(net.node_count(), 0.0);
    for (const auto& e : net.edges()) {
        degree[e.source] += e.weight;
        degree[e.target] += e.weight;
    }
    Laplacian lap;
    std::vector<long> local(net.node_count(), -1);
    for (std::size_t i : subset) {
        if (degree[i] > 0.0) {
            local[i] = static_cast<long>(lap.nodes.size());
            lap.nodes.push_back(i);
        }
    }
    const auto n = static_cast<Eigen::Index>(lap.nodes.size());
    lap.matrix = Eigen::MatrixXd::Identity(n, n);
    for (const auto& e : net.edges()) {
        const long a = local[e.source];
        const long b = local[e.target];
        if (a < 0 || b < 0) continue;
        const double v = e.weight / (std::sqrt(degree[e.source]) * std::sqrt(degree[e.target]));
        lap.matrix(a, b) -= v;
        lap.matrix(b, a) -= v;
    }
    return lap;
}

Laplacian normalized_laplacian(const CoCitationNetwork& net) {
    std::vector<std::size_t> all(net.node_count());
    std::iota(all.begin(), all.end(), 0);
    return normalized_laplacian(net, all);
}

double modularity(const CoCitationNetwork& net, std::span<const int> assignment) {
    if (assignment.size() != net.node_count()) throw ContractError("assignment does not cover every node");
    const double m = net.total_weight();
    if (!(m > 0.0)) throw NumericError("modularity is undefined for a network without edge weight");

    std::map<int, double> internal;
    std::map<int, double> volume;
    for (const auto& e : net.edges()) {
        const int cu = assignment[e.source];
        const int cv = assignment[e.target];
        volume[cu] += e.weight;
        volume[cv] += e.weight;
        if (cu == cv) internal[cu] += e.weight;
    }
    double q = 0.0;
    for (const auto& [c, vol] : volume) {
        const double share = vol / (2.0 * m);
        q += internal[c] / m - share * share;
    }
    return q;
}

SilhouetteResult silhouette(const CoCitationNetwork& net, std::span<const int> assignment) {
    const std::size_t n = net.node_count();
    if (assignment.size() != n) throw ContractError("assignment does not cover every node");

    SilhouetteResult result;
    result.node.assign(n, 0.0);
    const int k = n ? *std::max_element(assignment.begin(), assignment.end()) + 1 : 0;
    result.cluster_mean.assign(static_cast<std::size_t>(std::max(k, 0)), 0.0);

    std::vector<std::size_t> size(result.cluster_mean.size(), 0);
    for (int c : assignment) {
        if (c < 0) throw ContractError("negative cluster id");
        ++size[static_cast<std::size_t>(c)];
    }
    const auto populated = std::count_if(size.begin(), size.end(), [](std::size_t s) { return s > 0; });
    if (populated < 2) {
        result.degenerate = true;
        return result;
    }

    // Unit-normalized adjacency rows; a node's own entry is its strongest incident weight.
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        double strongest = 0.0;
        for (const auto& [j, w] : net.adjacency()[i]) {
            rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w;
            strongest = std::max(strongest, w);
        }
        rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = strongest;
        const double norm = rows.row(static_cast<Eigen::Index>(i)).norm();
        if (norm > 0.0) rows.row(static_cast<Eigen::Index>(i)) /= norm;
    }
    const Eigen::MatrixXd cosine = rows * rows.transpose();

    std::vector<double> sums(result.cluster_mean.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(assignment[i]);
        if (size[own] < 2) continue;
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double sim = std::clamp(cosine(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), -1.0, 1.0);
            sums[static_cast<std::size_t>(assignment[j])] += 1.0 - sim;
        }
        const double a = sums[own] / static_cast<double>(size[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < sums.size(); ++c) {
            if (c == own || size[c] == 0) continue;
            b = std::min(b, sums[c] / static_cast<double>(size[c]));
        }
        const double denom = std::max(a, b);
        result.node[i] = denom > 0.0 ? (b - a) / denom : 0.0;
    }

    for (std::size_t i = 0; i < n; ++i) result.cluster_mean[static_cast<std::size_t>(assignment[i])] += result.node[i];
    for (std::size_t c = 0; c < size.size(); ++c) {
        if (size[c] > 0) result.cluster_mean[c] /= static_cast<double>(size[c]);
    }
    result.mean = std::accumulate(result.node.begin(), result.node.end(), 0.0) / static_cast<double>(n);
    return result;
}

namespace {

double squared_distance(const Eigen::MatrixXd& points, Eigen::Index i, const Eigen::MatrixXd& centres, Eigen::Index c) {
    return (points.row(i) - centres.row(c)).squaredNorm();
}

int nearest(const Eigen::MatrixXd& points, Eigen::Index i, const Eigen::MatrixXd& centres, double* dist = nullptr) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centres.rows(); ++c) {
        const double d = squared_distance(points, i, centres, c);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    if (dist) *dist = best_d;
    return best;
}

KMeansResult lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centres, int max_iter) {
    const Eigen::Index n = points.rows();
    const Eigen::Index k = centres.rows();
    KMeansResult out;
    out.labels.assign(static_cast<std::size_t>(n), -1);

    for (int iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            const int c = nearest(points, i, centres);
            if (out.labels[static_cast<std::size_t>(i)] != c) {
                out.labels[static_cast<std::size_t>(i)] = c;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            const int c = out.labels[static_cast<std::size_t>(i)];
            sums.row(c) += points.row(i);
            ++counts[static_cast<std::size_t>(c)];
        }
        for (Eigen::Index c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                centres.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
                continue;
            }
            // Empty cluster: move its centre to the point farthest from its own centre.
            Eigen::Index far = 0;
            double far_d = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double d = squared_distance(points, i, centres, out.labels[static_cast<std::size_t>(i)]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            centres.row(c) = points.row(far);
        }
    }

    out.inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double d = 0.0;
        out.labels[static_cast<std::size_t>(i)] = nearest(points, i, centres, &d);
        out.inertia += d;
    }
    return out;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, int restarts, int max_iter, std::uint64_t seed) {
    const Eigen::Index n = points.rows();
    if (k < 1 || k > n) throw ContractError("k-means needs 1 <= k <= number of points");
    if (restarts < 1) throw ConfigError("kmeans_restarts must be at least 1");

    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(r)};
        std::mt19937_64 rng(seq);
        std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);

        Eigen::MatrixXd centres(k, points.cols());
        std::vector<bool> chosen(static_cast<std::size_t>(n), false);
        Eigen::Index first = pick(rng);
        centres.row(0) = points.row(first);
        chosen[static_cast<std::size_t>(first)] = true;
        std::vector<double> closest(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) closest[static_cast<std::size_t>(i)] = squared_distance(points, i, centres, 0);

        for (int c = 1; c < k; ++c) {
            Eigen::Index far = -1;
            double far_d = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (closest[static_cast<std::size_t>(i)] > far_d) {
                    far_d = closest[static_cast<std::size_t>(i)];
                    far = i;
                }
            }
            if (far < 0) {  // every point coincides with a centre
                for (Eigen::Index i = 0; i < n && far < 0; ++i) {
                    if (!chosen[static_cast<std::size_t>(i)]) far = i;
                }
            }
            chosen[static_cast<std::size_t>(far)] = true;
            centres.row(c) = points.row(far);
            for (Eigen::Index i = 0; i < n; ++i) {
                closest[static_cast<std::size_t>(i)] =
                    std::min(closest[static_cast<std::size_t>(i)], squared_distance(points, i, centres, c));
            }
        }

        KMeansResult run = lloyd(points, std::move(centres), max_iter);
        if (run.inertia < best.inertia) best = std::move(run);
    }
    return best;
}

std::vector<int> renumber_by_size(std::span<const int> labels) {
    std::map<int, std::pair<std::size_t, std::size_t>> stats;  // label -> (size, first index)
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, fresh] = stats.try_emplace(labels[i], 0, i);
        ++it->second.first;
    }
    std::vector<std::pair<int, std::pair<std::size_t, std::size_t>>> order(stats.begin(), stats.end());
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.second.first != b.second.first) return a.second.first > b.second.first;
        return a.second.second < b.second.second;
    });
    std::map<int, int> remap;
    for (std::size_t i = 0; i < order.size(); ++i) remap[order[i].first] = static_cast<int>(i);
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) out[i] = remap[labels[i]];
    return out;
}

namespace {

struct ComponentSpectrum {
    std::vector<std::size_t> nodes;  // network indices, row order of vectors
    Eigen::VectorXd values;          // ascending
    Eigen::MatrixXd vectors;
};

// Assignment for one choice of k over the spectrally clustered components.
// Labels start at `first_label`; unclustered nodes are left untouched.
void cluster_with_k(const std::vector<ComponentSpectrum>& spectra, int k, const SpectralConfig& cfg,
                    std::vector<int>& labels, int first_label) {
    struct Pick {
        double value;
        std::size_t component;
        Eigen::Index column;
    };
    std::vector<Pick> picks;
    std::vector<Pick> rest;
    for (std::size_t c = 0; c < spectra.size(); ++c) {
        picks.push_back({spectra[c].values(0), c, 0});
        for (Eigen::Index j = 1; j < spectra[c].values.size(); ++j) rest.push_back({spectra[c].values(j), c, j});
    }
    std::stable_sort(rest.begin(), rest.end(), [](const Pick& a, const Pick& b) { return a.value < b.value; });
    for (std::size_t i = 0; picks.size() < static_cast<std::size_t>(k) && i < rest.size(); ++i) picks.push_back(rest[i]);

    std::size_t total = 0;
    std::vector<std::size_t> offset;
    for (const auto& s : spectra) {
        offset.push_back(total);
        total += s.nodes.size();
    }
    Eigen::MatrixXd embedding = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(picks.size()));
    for (std::size_t p = 0; p < picks.size(); ++p) {
        const auto& s = spectra[picks[p].component];
        embedding.block(static_cast<Eigen::Index>(offset[picks[p].component]), static_cast<Eigen::Index>(p),
                        static_cast<Eigen::Index>(s.nodes.size()), 1) = s.vectors.col(picks[p].column);
    }
    if (cfg.row_normalize) {
        for (Eigen::Index i = 0; i < embedding.rows(); ++i) {
            const double norm = embedding.row(i).norm();
            if (norm > 0.0) embedding.row(i) /= norm;
        }
    }

    const KMeansResult km = kmeans(embedding, k, cfg.kmeans_restarts, cfg.kmeans_max_iter, cfg.seed);

    // A k-means cluster that straddles components is split along component lines.
    std::map<std::pair<int, std::size_t>, int> ids;
    for (std::size_t c = 0; c < spectra.size(); ++c) {
        for (std::size_t i = 0; i < spectra[c].nodes.size(); ++i) {
            const int km_label = km.labels[offset[c] + i];
            auto [it, fresh] = ids.try_emplace({km_label, c}, first_label + static_cast<int>(ids.size()));
            labels[spectra[c].nodes[i]] = it->second;
        }
    }
}

}  // namespace

ClusterPartition spectral_partition(const CoCitationNetwork& net, const SpectralConfig& cfg) {
    cfg.validate();
    if (net.empty()) throw ContractError("cannot partition an empty network");

    const auto components = connected_components(net);
    std::vector<int> labels(net.node_count(), -1);
    int next_label = 0;
    std::vector<ComponentSpectrum> spectra;
    std::size_t spectral_nodes = 0;
    for (std::size_t c = 0; c < components.size(); ++c) {
        const auto& comp = components[c];
        if (comp.size() < std::max<std::size_t>(cfg.min_component_size, 2)) {
            for (std::size_t i : comp) labels[i] = next_label;
            ++next_label;
            continue;
        }
        Laplacian lap = normalized_laplacian(net, comp);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap.matrix);
        if (solver.info() != Eigen::Success) {
            throw NumericError("eigen-solver did not converge on component " + std::to_string(c));
        }
        spectral_nodes += lap.nodes.size();
        spectra.push_back({std::move(lap.nodes), solver.eigenvalues(), solver.eigenvectors()});
    }

    const bool has_weight = net.total_weight() > 0.0;
    std::vector<int> best_labels = labels;
    if (!spectra.empty()) {
        std::vector<int> candidates;
        if (cfg.k_mode == SpectralConfig::KMode::fixed) {
            candidates.push_back(cfg.k);
        } else {
            for (int k = cfg.k_min; k <= cfg.k_max; ++k) candidates.push_back(k);
        }
        const int lo = static_cast<int>(spectra.size());
        const int hi = static_cast<int>(spectral_nodes);
        std::vector<int> tried;
        double best_q = -std::numeric_limits<double>::infinity();
        for (int requested : candidates) {
            const int k = std::clamp(requested, lo, hi);
            if (std::find(tried.begin(), tried.end(), k) != tried.end()) continue;
            tried.push_back(k);
            std::vector<int> trial = labels;
            cluster_with_k(spectra, k, cfg, trial, next_label);
            if (candidates.size() == 1 || !has_weight) {
                best_labels = std::move(trial);
                break;
            }
            const double q = modularity(net, trial);
            if (q > best_q) {
                best_q = q;
                best_labels = std::move(trial);
            }
        }
    }

    ClusterPartition partition;
    partition.assignment = renumber_by_size(best_labels);
    partition.k = partition.assignment.empty()
                      ? 0
                      : *std::max_element(partition.assignment.begin(), partition.assignment.end()) + 1;
    partition.modularity = has_weight ? modularity(net, partition.assignment) : 0.0;
    SilhouetteResult sil = silhouette(net, partition.assignment);
    partition.node_silhouette = std::move(sil.node);
    partition.cluster_mean_silhouette = std::move(sil.cluster_mean);
    partition.mean_silhouette = sil.mean;
    partition.silhouette_degenerate = sil.degenerate;
    return partition;
}

}  // namespace cocite
