#include <doctest.h>

#include <random>

#include "cocite/error.hpp"
#include "cocite/network.hpp"
#include "oracles.hpp"

using namespace cocite;

namespace {

BibRecord citing(std::string id, int year, std::vector<std::string> refs, std::int64_t times_cited = 0) {
    BibRecord r;
    r.id = std::move(id);
    r.year = year;
    r.title = "t";
    r.times_cited = times_cited;
    for (auto& k : refs) r.cited_refs.emplace_back(std::move(k));
    return r;
}

BibRecord titled(std::string id, int year, std::string title) {
    BibRecord r;
    r.id = std::move(id);
    r.year = year;
    r.title = std::move(title);
    r.source_tag = SourceTag::term_only;
    return r;
}

const TimeSlice kSlice0{0, 2000, 2000};

}  // namespace

TEST_CASE("slicing an interval") {
    CHECK(slice_interval(1994, 2008, 1).size() == 15);
    CHECK(slice_interval(2000, 2000, 1) == std::vector<TimeSlice>{{0, 2000, 2000}});
    CHECK(slice_interval(2000, 2004, 2) == std::vector<TimeSlice>{{0, 2000, 2001}, {1, 2002, 2003}, {2, 2004, 2004}});
    CHECK_THROWS_AS(slice_interval(2000, 2004, 0), ConfigError);
    CHECK_THROWS_AS(slice_interval(2005, 2004, 1), ConfigError);

    const auto slices = slice_interval(2000, 2004, 2);
    CHECK(slice_of(slices, 2003) == 1);
    CHECK(slice_of(slices, 2004) == 2);
    CHECK_FALSE(slice_of(slices, 1999).has_value());
}

TEST_CASE("top-cited selection") {
    SUBCASE("fewer records than n") {
        const std::vector<BibRecord> rs{citing("a", 2000, {}), citing("b", 2000, {})};
        CHECK(select_top_cited(rs, kSlice0, 30).size() == 2);
    }
    SUBCASE("highest counts win") {
        const std::vector<BibRecord> rs{citing("a", 2000, {}, 5), citing("b", 2000, {}, 9), citing("c", 2000, {}, 9),
                                        citing("d", 2000, {}, 1)};
        const auto top = select_top_cited(rs, kSlice0, 2);
        REQUIRE(top.size() == 2);
        CHECK(top[0].times_cited == 9);
        CHECK(top[1].times_cited == 9);
    }
    SUBCASE("ties go to the smaller id") {
        const std::vector<BibRecord> rs{citing("B", 2000, {}, 7), citing("A", 2000, {}, 7)};
        const auto top = select_top_cited(rs, kSlice0, 1);
        REQUIRE(top.size() == 1);
        CHECK(top[0].id == "A");
    }
    SUBCASE("records outside the slice are ignored") {
        const std::vector<BibRecord> rs{citing("a", 1999, {}, 50), citing("b", 2000, {}, 1)};
        const auto top = select_top_cited(rs, kSlice0, 1);
        REQUIRE(top.size() == 1);
        CHECK(top[0].id == "b");
    }
    CHECK_THROWS_AS(select_top_cited({}, kSlice0, 0), ConfigError);
}

TEST_CASE("co-citation within one slice") {
    SUBCASE("one record citing three references") {
        const std::vector<BibRecord> rs{citing("r", 2000, {"A", "B", "C"})};
        const auto net = build_cocitation_slice(rs, kSlice0);
        CHECK(net.edge_count() == 3);
        CHECK(net.weight("A", "B") == 1.0);
        CHECK(net.weight("A", "C") == 1.0);
        CHECK(net.weight("B", "C") == 1.0);
    }
    SUBCASE("two records") {
        const std::vector<BibRecord> rs{citing("r1", 2000, {"A", "B"}), citing("r2", 2000, {"A", "B", "C"})};
        const auto net = build_cocitation_slice(rs, kSlice0);
        CHECK(net.weight("A", "B") == 2.0);
        CHECK(net.weight("A", "C") == 1.0);
        CHECK(net.weight("B", "C") == 1.0);
        const auto a = *net.index_of("A");
        CHECK(net.nodes()[a].total_citations == 2);
        CHECK(net.edges().front().per_slice_counts == std::map<int, std::int64_t>{{0, 2}});
    }
    SUBCASE("a single reference contributes nothing") {
        const std::vector<BibRecord> rs{citing("r", 2000, {"A"})};
        const auto net = build_cocitation_slice(rs, kSlice0);
        CHECK(net.empty());
        CHECK(net.edge_count() == 0);
    }
    SUBCASE("contract violations") {
        const std::vector<BibRecord> outside{citing("r", 2001, {"A", "B"})};
        CHECK_THROWS_AS(build_cocitation_slice(outside, kSlice0), ContractError);
        auto term = citing("r", 2000, {"A", "B"});
        term.source_tag = SourceTag::term_only;
        const std::vector<BibRecord> terms{term};
        CHECK_THROWS_AS(build_cocitation_slice(terms, kSlice0), ContractError);
    }
}

TEST_CASE("co-citation weights equal the pair-enumeration oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto corpus = oracle::random_corpus(100, 25, 2000, 2000, rng);
        const auto net = build_cocitation_slice(corpus, kSlice0);
        const auto expected = oracle::cocitation_counts(corpus);
        REQUIRE(net.edge_count() == expected.size());
        for (const auto& [pair, count] : expected) {
            CHECK(net.weight(pair.first, pair.second) == static_cast<double>(count));
        }
    }
}

TEST_CASE("merging slices") {
    const std::vector<BibRecord> r0{citing("r0", 2000, {"A", "B"})};
    const std::vector<BibRecord> r1{citing("r1", 2001, {"A", "B"}), citing("r2", 2001, {"C", "D"})};
    const auto s0 = build_cocitation_slice(r0, {0, 2000, 2000});
    const auto s1 = build_cocitation_slice(r1, {1, 2001, 2001});

    SUBCASE("one network is unchanged") {
        const std::vector<CoCitationNetwork> one{s1};
        CHECK(merge_slices(one) == s1);
    }
    SUBCASE("weights add and slice counts are kept") {
        const std::vector<CoCitationNetwork> both{s0, s1};
        const auto merged = merge_slices(both);
        CHECK(merged.weight("A", "B") == 2.0);
        CHECK(merged.edges().front().per_slice_counts == std::map<int, std::int64_t>{{0, 1}, {1, 1}});
        CHECK(merged.nodes()[*merged.index_of("A")].first_slice == 0);
        CHECK(merged.nodes()[*merged.index_of("C")].first_slice == 1);
        CHECK(merged.slice_indices() == std::vector<int>{0, 1});
    }
    SUBCASE("a slice may not appear twice") {
        const std::vector<CoCitationNetwork> twice{s0, s0};
        CHECK_THROWS_AS(merge_slices(twice), ContractError);
    }
}

TEST_CASE("merged totals match the oracle over per-slice top sets") {
    std::mt19937_64 rng(5);
    const auto corpus = oracle::random_corpus(150, 20, 2000, 2004, rng);
    const auto slices = slice_interval(2000, 2004, 1);
    std::vector<CoCitationNetwork> parts;
    std::vector<BibRecord> selected;
    for (const auto& s : slices) {
        auto top = select_top_cited(corpus, s, 12);
        parts.push_back(build_cocitation_slice(top, s));
        selected.insert(selected.end(), top.begin(), top.end());
    }
    const auto merged = merge_slices(parts);
    const auto expected = oracle::cocitation_counts(selected);
    REQUIRE(merged.edge_count() == expected.size());
    for (const auto& [pair, count] : expected) CHECK(merged.weight(pair.first, pair.second) == static_cast<double>(count));
    for (const auto& e : merged.edges()) {
        std::int64_t sum = 0;
        for (const auto& [s, c] : e.per_slice_counts) sum += c;
        CHECK(static_cast<double>(sum) == e.weight);
    }
}

TEST_CASE("network construction rejects broken input") {
    const std::vector<NodeRecord> nodes{{"A", 1, 0}, {"B", 1, 0}};
    CHECK_THROWS_AS(CoCitationNetwork(nodes, {{0, 0, 1.0, {}}}, {0}), ContractError);
    CHECK_THROWS_AS(CoCitationNetwork(nodes, {{0, 2, 1.0, {}}}, {0}), ContractError);
    CHECK_THROWS_AS(CoCitationNetwork(nodes, {{0, 1, 0.0, {}}}, {0}), ContractError);
    CHECK_THROWS_AS(CoCitationNetwork(nodes, {{0, 1, 1.0, {}}, {1, 0, 1.0, {}}}, {0}), ContractError);
    CHECK_THROWS_AS(CoCitationNetwork({{"A", 1, 0}, {"A", 1, 0}}, {}, {0}), ContractError);
}

TEST_CASE("nodes are canonicalized by key") {
    const CoCitationNetwork net({{"B", 1, 0}, {"A", 2, 0}}, {{1, 0, 3.0, {{0, 3}}}}, {0});
    CHECK(net.nodes()[0].key == "A");
    CHECK(net.edges()[0].source == 0);
    CHECK(net.edges()[0].target == 1);
    CHECK(net.weight(0, 1) == 3.0);
    CHECK(net.weight(1, 0) == 3.0);
    CHECK(net.total_weight() == 3.0);
}

TEST_CASE("term co-occurrence") {
    const auto slices = slice_interval(2000, 2001, 1);
    SUBCASE("one record with three phrases") {
        const std::vector<BibRecord> rs{titled("a", 2000, "alpha; beta; gamma")};
        TermNetworkOptions opt;
        opt.top_terms = 3;
        const auto net = build_term_cooccurrence(rs, slices, opt);
        CHECK(net.node_count() == 3);
        CHECK(net.edge_count() == 3);
        for (const auto& e : net.edges()) CHECK(e.weight == 1.0);
    }
    SUBCASE("only the most frequent terms survive") {
        std::vector<BibRecord> rs;
        for (int i = 0; i < 5; ++i) {
            std::string title = "xray";
            if (i < 3) title += ", yoke";
            if (i < 1) title += ", zinc";
            rs.push_back(titled("r" + std::to_string(i), 2000, title));
        }
        TermNetworkOptions opt;
        opt.top_terms = 2;
        const auto net = build_term_cooccurrence(rs, slices, opt);
        REQUIRE(net.node_count() == 2);
        CHECK(net.weight("xray", "yoke") == 3.0);
        CHECK_FALSE(net.index_of("zinc").has_value());
    }
    SUBCASE("per-slice selection over disjoint slices is a disjoint union") {
        const std::vector<BibRecord> rs{titled("a", 2000, "alpha, beta"), titled("b", 2001, "gamma, delta")};
        TermNetworkOptions opt;
        opt.top_terms = 2;
        opt.per_slice = true;
        const auto net = build_term_cooccurrence(rs, slices, opt);
        CHECK(net.node_count() == 4);
        CHECK(net.edge_count() == 2);
        CHECK(net.weight("alpha", "beta") == 1.0);
        CHECK(net.weight("gamma", "delta") == 1.0);
        CHECK(net.weight("alpha", "gamma") == 0.0);
        CHECK(connected_components(net).size() == 2);
    }
    SUBCASE("a phrase repeated in one record counts once") {
        const std::vector<BibRecord> rs{titled("a", 2000, "alpha, beta, alpha")};
        const auto net = build_term_cooccurrence(rs, slices, {});
        CHECK(net.weight("alpha", "beta") == 1.0);
    }
    TermNetworkOptions zero;
    zero.top_terms = 0;
    CHECK_THROWS_AS(build_term_cooccurrence({}, slices, zero), ConfigError);
}

TEST_CASE("weight modes and thresholds") {
    const CoCitationNetwork net({{"A", 4, 0}, {"B", 1, 0}, {"C", 9, 0}},
                                {{0, 1, 2.0, {{0, 2}}}, {0, 2, 3.0, {{0, 3}}}, {1, 2, 1.0, {{0, 1}}}}, {0});
    CHECK(apply_weight_mode(net, WeightMode::raw) == net);
    const auto cosine = apply_weight_mode(net, WeightMode::cosine);
    CHECK(cosine.weight("A", "B") == doctest::Approx(2.0 / std::sqrt(4.0)));
    CHECK(cosine.weight("A", "C") == doctest::Approx(3.0 / 6.0));
    CHECK(cosine.edges()[0].per_slice_counts == net.edges()[0].per_slice_counts);

    const auto cut = threshold_edges(net, 2.0);
    CHECK(cut.edge_count() == 2);
    CHECK(cut.node_count() == 3);
    const auto harder = threshold_edges(net, 3.0);
    CHECK(harder.edge_count() == 1);
    CHECK(harder.node_count() == 2);
    CHECK_FALSE(harder.index_of("B").has_value());
}

TEST_CASE("connected components are sorted") {
    oracle::Graph g(6);
    g.link(0, 3, 1);
    g.link(3, 5, 1);
    g.link(1, 4, 1);
    const auto comps = connected_components(oracle::to_network(g));
    CHECK(comps == std::vector<std::vector<std::size_t>>{{0, 3, 5}, {1, 4}, {2}});
}
