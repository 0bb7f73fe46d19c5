#include <doctest.h>

#include <random>
#include <sstream>

#include "cocite/error.hpp"
#include "cocite/text.hpp"

using namespace cocite;

namespace {

std::vector<std::string> surfaces(const std::vector<NounPhrase>& phrases) {
    std::vector<std::string> out;
    for (const auto& p : phrases) out.push_back(p.surface);
    return out;
}

}  // namespace

TEST_CASE("reference keys follow surname-year-venue-volume-page") {
    CHECK(normalize_reference("York D, 2000, ASTRON J, V120, P1579").str() == "YORK-2000-ASTRON J-V120-P1579");
    CHECK(normalize_reference("  york d,  2000, astron j, V120, P1579. ").str() == "YORK-2000-ASTRON J-V120-P1579");
    CHECK(normalize_reference("York D, 2000, ASTRON J, V120, P1579, DOI 10.1086/301513").str() ==
          "YORK-2000-ASTRON J-V120-P1579");
}

TEST_CASE("references without volume or page keep what they have") {
    CHECK(normalize_reference("Salton G, 1983, INTRO MODERN INFORMA").str() == "SALTON-1983-INTRO MODERN INFORMA");
    CHECK(normalize_reference("Kuhn TS, 1962, STRUCTURE SCI REVOLU").str() == "KUHN-1962-STRUCTURE SCI REVOLU");
    CHECK(normalize_reference("ANONYMOUS").str() == "ANONYMOUS");
}

TEST_CASE("a blank reference is rejected") {
    CHECK_THROWS_AS(normalize_reference("   "), ParseError);
    CHECK_THROWS_AS(normalize_reference(""), ParseError);
}

TEST_CASE("normalization is idempotent on random raw strings") {
    std::mt19937_64 rng(7);
    const std::string alphabet = "abcXYZ 0123456789,.-VP";
    for (int trial = 0; trial < 500; ++trial) {
        std::string raw;
        const auto len = 1 + rng() % 40;
        for (std::size_t i = 0; i < len; ++i) raw.push_back(alphabet[rng() % alphabet.size()]);
        RefKey once;
        try {
            once = normalize_reference(raw);
        } catch (const ParseError&) {
            continue;
        }
        CHECK_MESSAGE(normalize_reference(once.str()) == once, raw);
    }
}

TEST_CASE("plural stemming") {
    CHECK(stem_plural("quasars") == "quasar");
    CHECK(stem_plural("galaxies") == "galaxy");
    CHECK(stem_plural("classes") == "class");
    CHECK(stem_plural("boxes") == "box");
    CHECK(stem_plural("branches") == "branch");
    CHECK(stem_plural("analysis") == "analysis");
    CHECK(stem_plural("status") == "status");
    CHECK(stem_plural("glass") == "glass");
    CHECK(stem_plural("gas") == "gas");
    CHECK(stem_plural("ties") == "tie");  // not "ty"
}

TEST_CASE("stemming is idempotent") {
    for (const char* w : {"quasars", "galaxies", "classes", "dwarfs", "surveys", "analyses", "series", "bias"}) {
        const auto once = stem_plural(w);
        CHECK_MESSAGE(stem_plural(once) == once, w);
    }
}

TEST_CASE("noun phrases are stopword-delimited chunks") {
    CHECK(surfaces(extract_noun_phrases("the discovery of a second field methane brown dwarf")) ==
          std::vector<std::string>{"discovery", "second field methane brown dwarf"});
    CHECK(surfaces(extract_noun_phrases("quasars")) == std::vector<std::string>{"quasar"});
    CHECK(extract_noun_phrases("").empty());
    CHECK(extract_noun_phrases("of the and").empty());
}

TEST_CASE("punctuation and digits end a chunk") {
    CHECK(surfaces(extract_noun_phrases("Sloan Digital Sky Survey: early data release")) ==
          std::vector<std::string>{"sloan digital sky survey", "early data release"});
    CHECK(surfaces(extract_noun_phrases("galaxies at z 6 and quasars")) ==
          std::vector<std::string>{"galaxy", "quasar"});
}

TEST_CASE("hyphenated words and possessives") {
    CHECK(surfaces(extract_noun_phrases("High-Redshift Quasars")) == std::vector<std::string>{"high-redshift quasar"});
    CHECK(surfaces(extract_noun_phrases("Hubble's constant")) == std::vector<std::string>{"hubble constant"});
}

TEST_CASE("chunks longer than the limit are split") {
    const auto phrases = extract_noun_phrases("alpha beta gamma delta epsilon zeta eta");
    REQUIRE(phrases.size() == 2);
    CHECK(phrases[0].tokens.size() == kMaxPhraseTokens);
    CHECK(phrases[1].surface == "zeta eta");
}

TEST_CASE("custom stopword lists") {
    std::istringstream in("# comment\nsecond\n\nfield\n");
    const auto list = StopwordList::load(in);
    CHECK(list.size() == 2);
    CHECK(list.contains("second"));
    CHECK_FALSE(list.contains("# comment"));
    CHECK(surfaces(extract_noun_phrases("second field methane dwarf", list)) ==
          std::vector<std::string>{"methane dwarf"});
}

TEST_CASE("the built-in list covers common function words") {
    const auto& en = StopwordList::english();
    for (const char* w : {"the", "of", "a", "and", "in", "with", "for"}) CHECK(en.contains(w));
    CHECK_FALSE(en.contains("second"));
    CHECK_FALSE(en.contains("survey"));
}
