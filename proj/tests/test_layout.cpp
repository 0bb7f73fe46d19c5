#include <doctest.h>

#include <chrono>
#include <random>

#include "cocite/error.hpp"
#include "cocite/layout.hpp"
#include "oracles.hpp"

using namespace cocite;

namespace {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Two 6-cliques (0-5 and 6-11) joined by the single edge 5-6.
oracle::Graph bridged_cliques() {
    oracle::Graph g(12);
    for (std::size_t base : {0u, 6u}) {
        for (std::size_t i = 0; i < 6; ++i) {
            for (std::size_t j = i + 1; j < 6; ++j) g.link(base + i, base + j, 1.0);
        }
    }
    g.link(5, 6, 1.0);
    return g;
}

double separation_ratio(const std::vector<Point>& pos) {
    double between = 0.0, within = 0.0;
    int nb = 0, nw = 0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        for (std::size_t j = i + 1; j < pos.size(); ++j) {
            if (i / 6 == j / 6) {
                within += distance(pos[i], pos[j]);
                ++nw;
            } else {
                between += distance(pos[i], pos[j]);
                ++nb;
            }
        }
    }
    return (between / nb) / (within / nw);
}

}  // namespace

TEST_CASE("between-cluster attenuation") {
    const auto net = oracle::to_network(bridged_cliques());
    std::vector<int> assignment(12, 0);
    for (std::size_t i = 6; i < 12; ++i) assignment[i] = 1;

    const auto tenth = attenuate_weights(net, assignment, 0.1);
    const auto same = attenuate_weights(net, assignment, 1.0);
    const auto none = attenuate_weights(net, assignment, 0.0);
    for (std::size_t e = 0; e < net.edge_count(); ++e) {
        const auto& edge = net.edges()[e];
        const bool bridge = edge.source == 5 && edge.target == 6;
        CHECK(same[e] == edge.weight);
        CHECK(tenth[e] == (bridge ? 0.1 : 1.0));
        CHECK(none[e] == (bridge ? 0.0 : 1.0));
    }
    CHECK_THROWS_AS(attenuate_weights(net, assignment, 1.5), ConfigError);
    CHECK_THROWS_AS(attenuate_weights(net, std::vector<int>(3, 0), 0.1), ContractError);
}

TEST_CASE("initial positions lie on the unit disk and follow the seed") {
    const auto a = initial_positions(200, 5);
    for (const auto& p : a) CHECK(std::hypot(p.x, p.y) <= 1.0);
    CHECK(a == initial_positions(200, 5));
    CHECK(a != initial_positions(200, 6));
}

TEST_CASE("a single node sits at the origin") {
    const CoCitationNetwork net({{"only", 1, 0}}, {}, {0});
    const auto out = force_layout(net, std::vector<double>{}, LayoutConfig{});
    REQUIRE(out.positions.size() == 1);
    CHECK(out.positions[0] == Point{0.0, 0.0});
}

TEST_CASE("two linked nodes settle near the ideal length") {
    const CoCitationNetwork net({{"a", 1, 0}, {"b", 1, 0}}, {{0, 1, 1.0, {{0, 1}}}}, {0});
    for (double ideal : {1.0, 2.5}) {
        LayoutConfig cfg;
        cfg.ideal_length = ideal;
        const auto out = force_layout(net, std::vector<double>{1.0}, cfg);
        const double raw = distance(out.positions[0], out.positions[1]) / out.scale;
        CHECK(std::fabs(raw - ideal) <= 0.1 * ideal);
        CHECK(out.positions[0].x == doctest::Approx(-out.positions[1].x));
        CHECK(out.positions[0].y == doctest::Approx(-out.positions[1].y));
    }

    // Without gravity the equilibrium of w d^2 / L = L^2 / d is d = L / cbrt(w).
    LayoutConfig cfg;
    cfg.gravity = 0.0;
    cfg.iterations = 2000;
    const auto out = force_layout(net, std::vector<double>{8.0}, cfg);
    CHECK(distance(out.positions[0], out.positions[1]) / out.scale == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("output is centred and fills the box") {
    std::mt19937_64 rng(3);
    const auto net = oracle::to_network(oracle::random_graph(40, 0.1, 3, rng));
    std::vector<double> w;
    for (const auto& e : net.edges()) w.push_back(e.weight);
    const auto out = force_layout(net, w, LayoutConfig{});
    CHECK(std::max(out.bounds.max_x - out.bounds.min_x, out.bounds.max_y - out.bounds.min_y) ==
          doctest::Approx(1000.0));
    CHECK(out.bounds.min_x == doctest::Approx(-out.bounds.max_x));
    CHECK(out.bounds.min_y == doctest::Approx(-out.bounds.max_y));
    for (const auto& p : out.positions) {
        CHECK(std::isfinite(p.x));
        CHECK(std::isfinite(p.y));
        CHECK(p.x >= out.bounds.min_x - 1e-9);
        CHECK(p.x <= out.bounds.max_x + 1e-9);
    }
    const auto again = force_layout(net, w, LayoutConfig{});
    CHECK(again.positions == out.positions);
}

TEST_CASE("attenuating the bridge separates two cliques") {
    const auto net = oracle::to_network(bridged_cliques());
    std::vector<int> assignment(12, 0);
    for (std::size_t i = 6; i < 12; ++i) assignment[i] = 1;
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        LayoutConfig cfg;
        cfg.seed = seed;
        const double attenuated = separation_ratio(force_layout(net, attenuate_weights(net, assignment, 0.1), cfg).positions);
        const double plain = separation_ratio(force_layout(net, attenuate_weights(net, assignment, 1.0), cfg).positions);
        wins += attenuated > plain ? 1 : 0;
    }
    CHECK(wins >= 19);
}

TEST_CASE("300 nodes lay out in well under five seconds") {
    std::mt19937_64 rng(11);
    const auto net = oracle::to_network(oracle::random_graph(300, 0.02, 4, rng));
    std::vector<double> w;
    for (const auto& e : net.edges()) w.push_back(e.weight);
    const auto start = std::chrono::steady_clock::now();
    const auto out = force_layout(net, w, LayoutConfig{});
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(out.positions.size() == 300);
    CHECK(seconds < 5.0);
}

TEST_CASE("convex hulls") {
    SUBCASE("a triangle is its own hull") {
        const auto hull = convex_hull({{0, 0}, {4, 0}, {1, 3}});
        CHECK(hull == std::vector<Point>{{0, 0}, {4, 0}, {1, 3}});
    }
    SUBCASE("interior and collinear points are dropped") {
        const auto hull = convex_hull({{0, 0}, {2, 0}, {4, 0}, {4, 4}, {0, 4}, {1, 1}, {0, 4}});
        CHECK(hull == std::vector<Point>{{0, 0}, {4, 0}, {4, 4}, {0, 4}});
    }
    SUBCASE("degenerate inputs") {
        CHECK(convex_hull({}).empty());
        CHECK(convex_hull({{1, 1}, {1, 1}}).size() == 1);
    }
}

TEST_CASE("cluster hulls") {
    SUBCASE("padding 0 around three points") {
        const std::vector<Point> pos{{0, 0}, {4, 0}, {1, 3}};
        const auto hulls = cluster_hulls(pos, std::vector<int>{0, 0, 0}, 0.0);
        CHECK(hulls.at(0) == std::vector<Point>{{0, 0}, {4, 0}, {1, 3}});
    }
    SUBCASE("a lone node becomes a disk of the padding radius") {
        const std::vector<Point> pos{{10, -5}};
        const auto hull = cluster_hulls(pos, std::vector<int>{3}, 20.0).at(3);
        CHECK(hull.size() == 16);
        for (const auto& p : hull) CHECK(distance(p, pos[0]) == doctest::Approx(20.0));
    }
    SUBCASE("hulls cover their members, checked by ray casting") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> coord(-500.0, 500.0);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 1 + rng() % 40;
            std::vector<Point> pos(n);
            std::vector<int> assignment(n);
            for (std::size_t i = 0; i < n; ++i) {
                pos[i] = {coord(rng), coord(rng)};
                assignment[i] = static_cast<int>(rng() % 4);
            }
            const double padding = trial % 2 ? 20.0 : 0.0;
            const auto hulls = cluster_hulls(pos, assignment, padding);
            for (std::size_t i = 0; i < n; ++i) {
                const auto& hull = hulls.at(assignment[i]);
                CHECK(oracle::covers(hull, pos[i], 1e-6));
                CHECK(polygon_contains(hull, pos[i], 1e-6));
            }
        }
    }
    CHECK_THROWS_AS(cluster_hulls(std::vector<Point>{{0, 0}}, std::vector<int>{0}, -1.0), ConfigError);
}

TEST_CASE("point in polygon agrees with ray casting") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point> cloud(3 + rng() % 12);
        for (auto& p : cloud) p = {coord(rng), coord(rng)};
        const auto hull = convex_hull(cloud);
        if (hull.size() < 3) continue;
        for (int probe = 0; probe < 100; ++probe) {
            const Point p{coord(rng), coord(rng)};
            bool near_edge = false;
            for (std::size_t i = 0; i < hull.size(); ++i) {
                near_edge |= oracle::distance_to_segment(p, hull[i], hull[(i + 1) % hull.size()]) < 1e-6;
            }
            if (near_edge) continue;
            CHECK(polygon_contains(hull, p) == oracle::inside_polygon(hull, p));
        }
    }
}

TEST_CASE("layout contracts") {
    const CoCitationNetwork net({{"a", 1, 0}, {"b", 1, 0}}, {{0, 1, 1.0, {{0, 1}}}}, {0});
    CHECK_THROWS_AS(force_layout(net, std::vector<double>{}, LayoutConfig{}), ContractError);
    CHECK_THROWS_AS(force_layout(CoCitationNetwork{}, std::vector<double>{}, LayoutConfig{}), ContractError);
    LayoutConfig bad;
    bad.cooling = 0.0;
    CHECK_THROWS_AS(force_layout(net, std::vector<double>{1.0}, bad), ConfigError);
    bad = {};
    bad.iterations = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
