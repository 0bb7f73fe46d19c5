#pragma once

#include <compare>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace cocite {

/// Canonical identity of a cited reference: "FIRSTAUTHOR-YEAR-VENUE-VOL-PAGE",
/// uppercase, with missing components omitted.
class RefKey {
public:
    RefKey() = default;
    explicit RefKey(std::string key) : key_(std::move(key)) {}

    const std::string& str() const noexcept { return key_; }
    bool empty() const noexcept { return key_.empty(); }

    auto operator<=>(const RefKey&) const = default;

private:
    std::string key_;
};

/// Normalizes a raw cited-reference string (e.g. a WoS `CR` line) into a RefKey.
/// Idempotent. Throws ParseError when nothing survives cleaning.
RefKey normalize_reference(std::string_view raw);

class StopwordList {
public:
    /// The list compiled in from data/stopwords.txt.
    static const StopwordList& english();

    /// One word per line; blank lines and lines starting with '#' are ignored.
    static StopwordList load(std::istream& in);
    static StopwordList from_words(const std::vector<std::string>& words);

    bool contains(std::string_view word) const;
    std::size_t size() const noexcept { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

struct NounPhrase {
    std::vector<std::string> tokens;  // lowercased, plural-stemmed
    std::string surface;              // tokens joined by single spaces

    bool operator==(const NounPhrase&) const = default;
};

inline constexpr std::size_t kMaxPhraseTokens = 5;

/// Plural stemming on a single lowercased word. Idempotent.
std::string stem_plural(std::string_view word);

/// Splits text into stopword-delimited chunks and returns them as noun phrases.
/// Chunks break at stopwords, punctuation, digit-only tokens and tokens shorter
/// than two characters; chunks longer than kMaxPhraseTokens are cut into
/// consecutive pieces of at most that length.
std::vector<NounPhrase> extract_noun_phrases(std::string_view text,
                                             const StopwordList& stopwords = StopwordList::english());

}  // namespace cocite
