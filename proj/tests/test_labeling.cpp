#include <doctest.h>

#include <random>

#include "cocite/error.hpp"
#include "cocite/labeling.hpp"
#include "oracles.hpp"

using namespace cocite;

namespace {

BibRecord titled(std::string id, std::string title, std::vector<std::string> refs = {}) {
    BibRecord r;
    r.id = std::move(id);
    r.year = 2000;
    r.title = std::move(title);
    for (auto& k : refs) r.cited_refs.emplace_back(std::move(k));
    return r;
}

std::set<std::string> terms_of(const std::vector<LabelCandidate>& list) {
    std::set<std::string> out;
    for (const auto& c : list) out.insert(c.term);
    return out;
}

double score_of(const std::vector<LabelCandidate>& list, const std::string& term) {
    for (const auto& c : list) {
        if (c.term == term) return c.score;
    }
    return std::nan("");
}

// The oracle's view of one LSA dimension: selected terms must be a top-scoring
// set of the right size, with ties at the cut free to go either way.
void check_dimension(const std::vector<LabelCandidate>& got, const oracle::Matrix& a, const oracle::Svd& svd,
                     std::size_t dim, std::size_t per_dim, const std::vector<std::string>& terms) {
    std::map<std::string, double> score;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double coefficient = std::fabs(svd.u[i][dim]);
        if (coefficient > 1e-7) score[terms[i]] = svd.sigma[dim] * coefficient;
    }
    CHECK(got.size() == std::min(per_dim, score.size()));
    const auto chosen = terms_of(got);
    double lowest_chosen = INFINITY;
    double highest_left = -INFINITY;
    for (const auto& [term, s] : score) {
        if (chosen.contains(term)) {
            lowest_chosen = std::min(lowest_chosen, s);
        } else {
            highest_left = std::max(highest_left, s);
        }
    }
    for (const auto& c : got) CHECK(score.contains(c.term));
    CHECK(lowest_chosen >= highest_left - 1e-7);
}

}  // namespace

TEST_CASE("citer sets") {
    const std::vector<BibRecord> corpus{titled("r1", "x", {"A"}), titled("r2", "x", {"C"}), titled("r3", "x", {"A", "B"})};
    const auto set = citer_set(4, {"A", "B"}, corpus);
    CHECK(set.cluster_id == 4);
    CHECK(set.citers == std::vector<Citer>{{"r3", 2}, {"r1", 1}});
    CHECK(citer_set(0, {"A", "B"}, std::vector<BibRecord>{titled("r1", "x", {"A"}), titled("r2", "x", {"C"})}).citers ==
          std::vector<Citer>{{"r1", 1}});
}

TEST_CASE("a record citing 13 of 45 members") {
    std::set<std::string> members;
    std::vector<std::string> refs;
    for (int i = 0; i < 45; ++i) members.insert("M" + std::to_string(i));
    for (int i = 0; i < 13; ++i) refs.push_back("M" + std::to_string(i * 3));
    refs.push_back("OTHER");
    const std::vector<BibRecord> corpus{titled("big", "x", refs), titled("small", "x", {"M1"})};
    const auto set = citer_set(0, members, corpus);
    const auto top = representative_citers(set, 1);
    REQUIRE(top.size() == 1);
    CHECK(top[0] == Citer{"big", 13});
}

TEST_CASE("citer coverage matches set intersection on random corpora") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto corpus = oracle::random_corpus(60, 30, 2000, 2003, rng);
        std::set<std::string> members;
        for (const auto& r : corpus) {
            for (const auto& k : r.cited_refs) {
                if (rng() % 3 == 0) members.insert(k.str());
            }
        }
        const auto set = citer_set(0, members, corpus);
        std::map<std::string, std::int64_t> got;
        for (const auto& c : set.citers) got[c.record_id] = c.coverage;
        for (const auto& r : corpus) {
            std::set<std::string> refs;
            for (const auto& k : r.cited_refs) refs.insert(k.str());
            std::vector<std::string> both;
            std::set_intersection(refs.begin(), refs.end(), members.begin(), members.end(), std::back_inserter(both));
            if (both.empty()) {
                CHECK_FALSE(got.contains(r.id));
            } else {
                CHECK(got[r.id] == static_cast<std::int64_t>(both.size()));
            }
        }
    }
}

TEST_CASE("term citer sets count distinct member phrases") {
    const std::vector<BibRecord> corpus{titled("a", "alpha, beta, alpha"), titled("b", "gamma")};
    const PhraseIndex index(corpus, TextSource::title);
    const auto set = term_citer_set(0, {"alpha", "beta"}, corpus, index);
    CHECK(set.citers == std::vector<Citer>{{"a", 2}});
}

TEST_CASE("tf*idf weights") {
    const std::vector<BibRecord> corpus{titled("r0", "xenon, xenon, xenon, xenon, xenon, neon"), titled("r1", "argon, neon"),
                                        titled("r2", "krypton, neon"), titled("r3", "radon, neon")};
    const PhraseIndex index(corpus, TextSource::title);
    std::vector<CiterSet> sets;
    for (int c = 0; c < 4; ++c) sets.push_back({c, {{"r" + std::to_string(c), 1}}});
    const auto labels = tfidf_labels(sets, index, 10);
    REQUIRE(labels.size() == 4);
    CHECK(std::fabs(score_of(labels[0], "xenon") - 5.0 * std::log(4.0)) <= 1e-9);
    for (const auto& list : labels) CHECK(score_of(list, "neon") == 0.0);
    CHECK(labels[0].front().term == "xenon");
    CHECK(labels[0].front().frequency == 5);
}

TEST_CASE("tf*idf with per-article document frequency") {
    const std::vector<BibRecord> corpus{titled("r0", "xenon"), titled("r1", "xenon, argon"), titled("r2", "argon"),
                                        titled("r3", "radon")};
    const PhraseIndex index(corpus, TextSource::title);
    const std::vector<CiterSet> sets{{0, {{"r0", 1}, {"r1", 1}}}, {1, {{"r2", 1}, {"r3", 1}}}};
    const auto labels = tfidf_labels(sets, index, 10, IdfUnit::article);
    CHECK(score_of(labels[0], "xenon") == doctest::Approx(2.0 * std::log(4.0 / 2.0)));
    CHECK(score_of(labels[1], "radon") == doctest::Approx(std::log(4.0)));
}

TEST_CASE("tf*idf lists are truncated and ordered") {
    const std::vector<BibRecord> corpus{titled("r0", "beryl, amber, coral, coral"), titled("r1", "dune")};
    const PhraseIndex index(corpus, TextSource::title);
    const std::vector<CiterSet> sets{{0, {{"r0", 1}}}, {1, {{"r1", 1}}}};
    const auto labels = tfidf_labels(sets, index, 2);
    REQUIRE(labels[0].size() == 2);
    CHECK(labels[0][0].term == "coral");
    CHECK(labels[0][1].term == "amber");  // equal score and frequency: alphabetical
}

TEST_CASE("G^2 fixtures against the contingency oracle") {
    CHECK(std::fabs(g_squared(10, 20, 100, 200)) <= 1e-9);
    CHECK(std::fabs(g_squared(3, 6, 9, 18)) <= 1e-9);
    const double expected = 2.0 * (10 * std::log(10.0) + 90 * std::log(90.0 / 99.0) + 900 * std::log(900.0 / 891.0));
    CHECK(g_squared(10, 0, 90, 900) == doctest::Approx(46.99).epsilon(0.0002));
    CHECK(std::fabs(g_squared(10, 0, 90, 900) - expected) <= 1e-9);
    CHECK(std::fabs(g_squared(10, 0, 90, 900) - oracle::g_squared(10, 0, 90, 900)) <= 1e-9);

    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 200; ++trial) {
        const double k[4] = {double(rng() % 50), double(rng() % 50), double(rng() % 500), double(rng() % 500 + 1)};
        CHECK(std::fabs(g_squared(k[0], k[1], k[2], k[3]) - oracle::g_squared(k[0], k[1], k[2], k[3])) <= 1e-9);
    }
}

TEST_CASE("log-likelihood labels prefer cluster-unique phrases") {
    // Both clusters share "sky survey"; each has one phrase of its own.
    std::vector<BibRecord> corpus;
    std::vector<CiterSet> sets{{0, {}}, {1, {}}};
    for (int i = 0; i < 10; ++i) {
        const std::string a = "a" + std::to_string(i);
        const std::string b = "b" + std::to_string(i);
        corpus.push_back(titled(a, i < 6 ? "sky survey: methane dwarf" : "sky survey"));
        corpus.push_back(titled(b, i < 6 ? "sky survey: red galaxy" : "sky survey"));
        sets[0].citers.push_back({a, 1});
        sets[1].citers.push_back({b, 1});
    }
    const PhraseIndex index(corpus, TextSource::title);
    const auto llr = llr_labels(sets, index, 5);
    REQUIRE(!llr[0].empty());
    REQUIRE(!llr[1].empty());
    CHECK(llr[0].front().term == "methane dwarf");
    CHECK(llr[1].front().term == "red galaxy");
    CHECK(llr[0].front().frequency == 6);
    // the shared phrase is not over-represented anywhere
    CHECK(std::isnan(score_of(llr[0], "sky survey")));

    const std::vector<CiterSet> lonely{{0, {{"a0", 1}}}, {1, {}}};
    CHECK_THROWS_AS(llr_labels(lonely, index, 5), ContractError);
}

TEST_CASE("LSA fixtures") {
    SUBCASE("two tied terms on the first dimension") {
        Eigen::MatrixXd m(3, 2);
        m << 2, 0, 0, 1, 2, 0;
        const std::vector<std::string> terms{"t1", "t2", "t3"};
        const auto lsa = lsa_select(m, terms, 2);
        CHECK(terms_of(lsa.dim1) == std::set<std::string>{"t1", "t3"});
        CHECK(lsa.dim1[0].score == lsa.dim1[1].score);
        CHECK(lsa.dim1[0].score == doctest::Approx(std::sqrt(8.0) / std::sqrt(2.0)));
        CHECK(terms_of(lsa.dim2) == std::set<std::string>{"t2"});
        CHECK_FALSE(lsa.rank_one);
    }
    SUBCASE("a single non-zero row") {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
        m.row(1) << 1, 2, 3;
        const std::vector<std::string> terms{"a", "b", "c"};
        const auto lsa = lsa_select(m, terms, 5);
        REQUIRE(lsa.dim1.size() == 1);
        CHECK(lsa.dim1[0].term == "b");
        CHECK(lsa.dim2.empty());
        CHECK(lsa.rank_one);
    }
    SUBCASE("degenerate inputs") {
        const std::vector<std::string> one{"a"};
        CHECK_THROWS_AS(lsa_select(Eigen::MatrixXd::Ones(1, 3), one, 2), NumericError);
        const std::vector<std::string> two{"a", "b"};
        CHECK_THROWS_AS(lsa_select(Eigen::MatrixXd::Zero(2, 2), two, 2), NumericError);
        CHECK_THROWS_AS(lsa_select(Eigen::MatrixXd::Ones(3, 2), two, 2), ContractError);
    }
}

TEST_CASE("LSA term sets match the Gram-matrix SVD oracle") {
    std::mt19937_64 rng(43);
    int compared = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t rows = 2 + rng() % 9;
        const std::size_t cols = 2 + rng() % 9;
        oracle::Matrix a(rows, std::vector<double>(cols, 0.0));
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        std::vector<std::string> terms;
        for (std::size_t i = 0; i < rows; ++i) {
            terms.push_back("term" + std::to_string(i));
            for (std::size_t j = 0; j < cols; ++j) {
                a[i][j] = rng() % 3 == 0 ? static_cast<double>(1 + rng() % 4) : 0.0;
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[i][j];
            }
        }
        const auto svd = oracle::svd_left(a);
        if (!(svd.sigma[0] > 0.0)) continue;
        // Repeated singular values leave the vectors undetermined; such
        // matrices are ties of a different kind and are skipped.
        const double s3 = svd.sigma.size() > 2 ? svd.sigma[2] : 0.0;
        if (svd.sigma[0] - svd.sigma[1] < 1e-6 * svd.sigma[0] || (svd.sigma[1] > 1e-9 && svd.sigma[1] - s3 < 1e-6 * svd.sigma[0])) {
            continue;
        }
        const std::size_t per_dim = 1 + rng() % 4;
        const auto lsa = lsa_select(m, terms, per_dim);
        CHECK(lsa.rank_one == (svd.sigma[1] <= 1e-10 * svd.sigma[0]));
        check_dimension(lsa.dim1, a, svd, 0, per_dim, terms);
        if (!lsa.rank_one) check_dimension(lsa.dim2, a, svd, 1, per_dim, terms);
        ++compared;

        // Reordering documents must not change which terms are chosen.
        std::vector<Eigen::Index> order(cols);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        Eigen::MatrixXd permuted(m.rows(), m.cols());
        for (std::size_t j = 0; j < cols; ++j) permuted.col(static_cast<Eigen::Index>(j)) = m.col(order[j]);
        const auto again = lsa_select(permuted, terms, per_dim);
        CHECK(terms_of(again.dim1) == terms_of(lsa.dim1));
        CHECK(terms_of(again.dim2) == terms_of(lsa.dim2));
    }
    CHECK(compared > 300);
}

TEST_CASE("LSA labels over a citer set") {
    const std::vector<BibRecord> corpus{titled("r0", "sky survey: methane dwarf"), titled("r1", "sky survey: red galaxy"),
                                        titled("r2", "sky survey")};
    const PhraseIndex index(corpus, TextSource::title);
    const CiterSet set{0, {{"r0", 1}, {"r1", 1}, {"r2", 1}}};
    const auto words = lsa_labels(set, index, 2);
    CHECK(terms_of(words.dim1) == std::set<std::string>{"sky", "survey"});
    const auto phrases = lsa_labels(set, index, 1, LsaUnit::phrase);
    CHECK(terms_of(phrases.dim1) == std::set<std::string>{"sky survey"});
    for (const auto& c : phrases.dim1) CHECK(c.frequency == 3);
}

TEST_CASE("representative citers") {
    CHECK(representative_citers({0, {}}, 3).empty());
    const CiterSet set{0, {{"r1", 13}, {"r2", 4}, {"r3", 4}}};
    CHECK(representative_citers(set, 2) == std::vector<Citer>{{"r1", 13}, {"r2", 4}});

    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<BibRecord> corpus;
        std::set<std::string> members{"M0", "M1", "M2", "M3", "M4"};
        for (int r = 0; r < 30; ++r) {
            std::vector<std::string> refs;
            for (const auto& m : members) {
                if (rng() % 2) refs.push_back(m);
            }
            corpus.push_back(titled("R" + std::to_string(100 + rng() % 900) + "-" + std::to_string(r), "x", refs));
        }
        auto expected = citer_set(0, members, corpus).citers;
        // brute-force ordering: insertion sort on (-coverage, id)
        for (std::size_t i = 1; i < expected.size(); ++i) {
            for (std::size_t j = i; j > 0; --j) {
                auto& x = expected[j - 1];
                auto& y = expected[j];
                if (x.coverage < y.coverage || (x.coverage == y.coverage && x.record_id > y.record_id)) std::swap(x, y);
            }
        }
        expected.resize(std::min<std::size_t>(expected.size(), 7));
        CHECK(representative_citers(citer_set(0, members, corpus), 7) == expected);
    }
}
