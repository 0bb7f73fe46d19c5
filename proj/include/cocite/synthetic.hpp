#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cocite {

/// Web of Science style corpus with three planted research topics.
///
/// Each topic owns twelve cited references. Topics 0 and 1 share a boilerplate
/// title phrase; every topic also has one phrase of its own that appears in a
/// minority of its titles (a majority for topic 2, which lacks the boilerplate).
/// Some topic 2 papers also cite one reference of topic 0 or 1, which links the
/// co-citation clusters weakly.
struct SyntheticCitationCorpus {
    std::string wos_text;
    std::map<std::string, int> reference_topic;  // normalized reference key -> topic
    std::vector<std::string> topic_phrases;      // stemmed noun phrase per topic
    std::string boilerplate;                     // stemmed noun phrase
    int first_year = 2000;
    int last_year = 2005;
    std::size_t record_count = 0;
};

SyntheticCitationCorpus synthetic_citation_corpus(std::uint64_t seed = 2009);

/// JSON Lines award corpus, 1999-2008, 40 awards per year. Each year has 30
/// "hot" terms that appear four times in that year's titles; every other title
/// word appears once. Consecutive years share a few hot terms, so the union of
/// the per-year top 30 is known in advance.
struct SyntheticAwardCorpus {
    std::string jsonl;
    std::vector<std::vector<std::string>> hot_terms;  // per year, first year first
    std::size_t unique_hot_terms = 0;
    int first_year = 1999;
    int last_year = 2008;
};

SyntheticAwardCorpus synthetic_award_corpus(std::uint64_t seed = 2009);

}  // namespace cocite
