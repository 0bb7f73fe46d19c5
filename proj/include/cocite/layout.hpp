#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "cocite/network.hpp"

namespace cocite {

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

struct Bounds {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;
};

struct LayoutConfig {
    double between_cluster_factor = 0.1;  // beta; 0 drops between-cluster edges
    int iterations = 500;
    std::uint64_t seed = 42;
    double ideal_length = 1.0;
    double initial_step = 0.0;  // 0 picks ideal_length * sqrt(n) / 10
    double cooling = 0.99;      // step multiplier per iteration
    double gravity = 0.05;      // pull towards the centroid, per unit distance
    double box = 1000.0;        // output extent

    void validate() const;
};

struct LayoutResult {
    std::vector<Point> positions;  // indexed like net.nodes()
    Bounds bounds;
    double scale = 1.0;  // output units per raw layout unit
};

/// Edge weights for layout: within-cluster edges keep w, between-cluster edges
/// become beta * w. Indexed like net.edges().
std::vector<double> attenuate_weights(const CoCitationNetwork& net, std::span<const int> assignment, double beta);

/// n deterministic points uniformly distributed on the unit disk.
std::vector<Point> initial_positions(std::size_t n, std::uint64_t seed);

/// Fruchterman-Reingold style spring embedder: attraction w * d^2 / L along
/// edges, repulsion L^2 / d between every pair, steps capped by a geometric
/// cooling schedule. The result is centred on the origin and scaled so its
/// larger side equals cfg.box.
LayoutResult force_layout(const CoCitationNetwork& net, std::span<const double> weights, const LayoutConfig& cfg);
LayoutResult force_layout(const CoCitationNetwork& net, std::span<const double> weights, const LayoutConfig& cfg,
                          std::vector<Point> start);

/// Counter-clockwise convex hull without collinear vertices.
std::vector<Point> convex_hull(std::vector<Point> points);

/// Hull of each cluster's positions grown outward by padding (a polygonal disk
/// of `segments` vertices around every member).
std::map<int, std::vector<Point>> cluster_hulls(std::span<const Point> positions, std::span<const int> assignment,
                                                double padding, int segments = 16);

/// True when p lies inside or on the convex polygon (within tolerance).
bool polygon_contains(std::span<const Point> polygon, Point p, double tolerance = 1e-9);

}  // namespace cocite
