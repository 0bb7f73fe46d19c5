#include "cocite/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cocite/error.hpp"

namespace cocite {

void LayoutConfig::validate() const {
    if (!(between_cluster_factor >= 0.0 && between_cluster_factor <= 1.0)) {
        throw ConfigError("between-cluster factor must lie in [0, 1]");
    }
    if (iterations < 1) throw ConfigError("layout iterations must be at least 1");
    if (!(ideal_length > 0.0)) throw ConfigError("ideal edge length must be positive");
    if (initial_step < 0.0) throw ConfigError("initial step must be non-negative");
    if (!(cooling > 0.0 && cooling <= 1.0)) throw ConfigError("cooling factor must lie in (0, 1]");
    if (gravity < 0.0) throw ConfigError("gravity must be non-negative");
    if (!(box > 0.0)) throw ConfigError("layout box must be positive");
}

std::vector<double> attenuate_weights(const CoCitationNetwork& net, std::span<const int> assignment, double beta) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("between-cluster factor must lie in [0, 1]");
    if (assignment.size() != net.node_count()) throw ContractError("assignment does not cover every node");
    std::vector<double> out;
    out.reserve(net.edge_count());
    for (const auto& e : net.edges()) {
        out.push_back(assignment[e.source] == assignment[e.target] ? e.weight : beta * e.weight);
    }
    return out;
}

std::vector<Point> initial_positions(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point> out(n);
    for (auto& p : out) {
        const double r = std::sqrt(unit(rng));
        const double theta = 2.0 * std::numbers::pi * unit(rng);
        p = {r * std::cos(theta), r * std::sin(theta)};
    }
    return out;
}

namespace {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Unit direction for separating coincident nodes i and j at a given iteration.
Point jitter_direction(std::uint64_t seed, std::size_t i, std::size_t j, int iteration) {
    const std::uint64_t h = mix(seed ^ mix(i * 0x100000001b3ULL ^ mix(j ^ mix(static_cast<std::uint64_t>(iteration)))));
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(h >> 11) * 0x1.0p-53;
    return {std::cos(theta), std::sin(theta)};
}

}  // namespace

LayoutResult force_layout(const CoCitationNetwork& net, std::span<const double> weights, const LayoutConfig& cfg) {
    return force_layout(net, weights, cfg, initial_positions(net.node_count(), cfg.seed));
}

LayoutResult force_layout(const CoCitationNetwork& net, std::span<const double> weights, const LayoutConfig& cfg,
                          std::vector<Point> pos) {
    cfg.validate();
    const std::size_t n = net.node_count();
    if (n == 0) throw ContractError("cannot lay out an empty network");
    if (weights.size() != net.edge_count()) throw ContractError("weight vector does not match edge count");
    if (pos.size() != n) throw ContractError("initial positions do not match node count");

    const double k = cfg.ideal_length;
    const double k2 = k * k;
    double step = cfg.initial_step > 0.0 ? cfg.initial_step : std::max(0.1, std::sqrt(static_cast<double>(n)) / 10.0) * k;
    std::vector<Point> disp(n);

    for (int iter = 0; iter < cfg.iterations; ++iter) {
        std::fill(disp.begin(), disp.end(), Point{});

        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double dx = pos[i].x - pos[j].x;
                double dy = pos[i].y - pos[j].y;
                double d = std::hypot(dx, dy);
                if (d < 1e-9 * k) {
                    const Point u = jitter_direction(cfg.seed, i, j, iter);
                    dx = u.x * 1e-6 * k;
                    dy = u.y * 1e-6 * k;
                    d = 1e-6 * k;
                }
                const double f = k2 / d;
                disp[i].x += dx / d * f;
                disp[i].y += dy / d * f;
                disp[j].x -= dx / d * f;
                disp[j].y -= dy / d * f;
            }
        }

        for (std::size_t e = 0; e < net.edge_count(); ++e) {
            const double w = weights[e];
            if (w <= 0.0) continue;
            const std::size_t a = net.edges()[e].source;
            const std::size_t b = net.edges()[e].target;
            const double dx = pos[a].x - pos[b].x;
            const double dy = pos[a].y - pos[b].y;
            const double d = std::hypot(dx, dy);
            if (d <= 0.0) continue;
            const double f = w * d * d / k;
            disp[a].x -= dx / d * f;
            disp[a].y -= dy / d * f;
            disp[b].x += dx / d * f;
            disp[b].y += dy / d * f;
        }

        if (cfg.gravity > 0.0) {
            Point c;
            for (const auto& p : pos) {
                c.x += p.x;
                c.y += p.y;
            }
            c.x /= static_cast<double>(n);
            c.y /= static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) {
                disp[i].x -= cfg.gravity * (pos[i].x - c.x);
                disp[i].y -= cfg.gravity * (pos[i].y - c.y);
            }
        }

        for (std::size_t i = 0; i < n; ++i) {
            const double len = std::hypot(disp[i].x, disp[i].y);
            if (len <= 0.0) continue;
            const double move = std::min(len, step);
            pos[i].x += disp[i].x / len * move;
            pos[i].y += disp[i].y / len * move;
        }
        step *= cfg.cooling;
    }

    double min_x = pos[0].x, max_x = pos[0].x, min_y = pos[0].y, max_y = pos[0].y;
    for (const auto& p : pos) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double extent = std::max(max_x - min_x, max_y - min_y);
    LayoutResult out;
    out.scale = extent > 0.0 ? cfg.box / extent : 1.0;
    const double cx = (min_x + max_x) / 2.0;
    const double cy = (min_y + max_y) / 2.0;
    out.positions.reserve(n);
    for (const auto& p : pos) out.positions.push_back({(p.x - cx) * out.scale, (p.y - cy) * out.scale});
    out.bounds = {(min_x - cx) * out.scale, (min_y - cy) * out.scale, (max_x - cx) * out.scale,
                  (max_y - cy) * out.scale};
    return out;
}

std::vector<Point> convex_hull(std::vector<Point> points) {
    std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() < 3) return points;

    auto cross = [](const Point& o, const Point& a, const Point& b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    std::vector<Point> hull(2 * points.size());
    std::size_t h = 0;
    for (const auto& p : points) {
        while (h >= 2 && cross(hull[h - 2], hull[h - 1], p) <= 0.0) --h;
        hull[h++] = p;
    }
    for (std::size_t i = points.size() - 1, lower = h + 1; i-- > 0;) {
        while (h >= lower && cross(hull[h - 2], hull[h - 1], points[i]) <= 0.0) --h;
        hull[h++] = points[i];
    }
    hull.resize(h - 1);
    return hull;
}

std::map<int, std::vector<Point>> cluster_hulls(std::span<const Point> positions, std::span<const int> assignment,
                                                double padding, int segments) {
    if (positions.size() != assignment.size()) throw ContractError("positions do not cover every node");
    if (padding < 0.0) throw ConfigError("hull padding must be non-negative");
    if (segments < 3) throw ConfigError("hull padding needs at least 3 segments");

    std::map<int, std::vector<Point>> grouped;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        auto& pts = grouped[assignment[i]];
        if (padding == 0.0) {
            pts.push_back(positions[i]);
            continue;
        }
        for (int s = 0; s < segments; ++s) {
            const double theta = 2.0 * std::numbers::pi * s / segments;
            pts.push_back({positions[i].x + padding * std::cos(theta), positions[i].y + padding * std::sin(theta)});
        }
    }
    std::map<int, std::vector<Point>> hulls;
    for (auto& [cluster, pts] : grouped) hulls[cluster] = convex_hull(std::move(pts));
    return hulls;
}

bool polygon_contains(std::span<const Point> polygon, Point p, double tolerance) {
    if (polygon.empty()) return false;
    if (polygon.size() == 1) return std::hypot(p.x - polygon[0].x, p.y - polygon[0].y) <= tolerance;
    if (polygon.size() == 2) {
        const Point a = polygon[0];
        const Point b = polygon[1];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        const double t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / (len * len);
        const double tc = std::clamp(t, 0.0, 1.0);
        return std::hypot(p.x - (a.x + tc * (b.x - a.x)), p.y - (a.y + tc * (b.y - a.y))) <= tolerance;
    }
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const Point a = polygon[i];
        const Point b = polygon[(i + 1) % polygon.size()];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if (cross < -tolerance * len) return false;
    }
    return true;
}

}  // namespace cocite
