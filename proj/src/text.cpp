#include "cocite/text.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "cocite/default_stopwords.hpp"
#include "cocite/error.hpp"

namespace cocite {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_trailing_junk(char c) { return is_space(c) || c == '.' || c == ',' || c == ';' || c == ':'; }

// Uppercase and collapse every whitespace run into one space.
std::string upper_collapsed(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    return out;
}

std::string strip_edges(std::string_view s) {
    std::size_t b = 0;
    while (b < s.size() && is_space(s[b])) ++b;
    std::size_t e = s.size();
    while (e > b && is_trailing_junk(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

// Cuts the text at the first DOI marker ("DOI 10...", "DOI:10...", "[DOI ...").
std::string cut_doi(const std::string& s) {
    for (std::size_t pos = s.find("DOI"); pos != std::string::npos; pos = s.find("DOI", pos + 1)) {
        const bool boundary_before =
            pos == 0 || s[pos - 1] == ' ' || s[pos - 1] == ',' || s[pos - 1] == '[';
        const bool boundary_after = pos + 3 == s.size() || s[pos + 3] == ' ' || s[pos + 3] == ':';
        if (boundary_before && boundary_after) {
            std::size_t cut = pos;
            if (cut > 0 && s[cut - 1] == '[') --cut;
            return s.substr(0, cut);
        }
    }
    return s;
}

bool is_year(std::string_view c) {
    return c.size() == 4 && std::all_of(c.begin(), c.end(), is_digit);
}

// WoS volume/page components: "V120", "P1579", "PL23".
bool is_numbered(std::string_view c, char prefix) {
    if (c.size() < 2 || c[0] != prefix || c.find(' ') != std::string_view::npos) return false;
    std::size_t i = 1;
    if (is_alpha(c[i]) && i + 1 < c.size()) ++i;
    return is_digit(c[i]);
}

bool is_initials(std::string_view t) {
    return !t.empty() && t.size() <= 3 && std::all_of(t.begin(), t.end(), is_alpha);
}

std::string surname_of(const std::string& author) {
    std::vector<std::string> tokens;
    std::istringstream in(author);
    for (std::string t; in >> t;) tokens.push_back(t);
    if (tokens.size() > 1 && is_initials(tokens.back())) tokens.pop_back();
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

}  // namespace

RefKey normalize_reference(std::string_view raw) {
    const std::string text = cut_doi(upper_collapsed(raw));

    if (text.find(',') == std::string::npos) {
        std::string cleaned = strip_edges(text);
        if (cleaned.empty()) throw ParseError("reference reduces to empty after cleaning", 0);
        return RefKey(std::move(cleaned));
    }

    std::vector<std::string> parts;
    {
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t comma = text.find(',', start);
            if (comma == std::string::npos) comma = text.size();
            std::string part = strip_edges(std::string_view(text).substr(start, comma - start));
            if (!part.empty()) parts.push_back(std::move(part));
            start = comma + 1;
        }
    }
    if (parts.empty()) throw ParseError("reference reduces to empty after cleaning", 0);

    std::string author;
    std::string year;
    std::string venue;
    std::string volume;
    std::string page;

    std::size_t year_at = parts.size();
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (is_year(parts[i])) {
            year = parts[i];
            year_at = i;
            break;
        }
    }
    if (year_at != 0) author = surname_of(parts[0]);

    const std::size_t venue_at = year_at < parts.size() ? year_at + 1 : 1;
    if (venue_at < parts.size() && venue_at != year_at && !is_numbered(parts[venue_at], 'V') &&
        !is_numbered(parts[venue_at], 'P')) {
        venue = parts[venue_at];
    }
    for (const auto& p : parts) {
        if (volume.empty() && is_numbered(p, 'V')) volume = p;
        else if (page.empty() && is_numbered(p, 'P')) page = p;
    }

    std::string key;
    for (const std::string* c : {&author, &year, &venue, &volume, &page}) {
        if (c->empty()) continue;
        if (!key.empty()) key.push_back('-');
        key += *c;
    }
    if (key.empty()) throw ParseError("reference reduces to empty after cleaning", 0);
    return RefKey(std::move(key));
}

const StopwordList& StopwordList::english() {
    static const StopwordList list = [] {
        std::istringstream in(detail::kDefaultStopwords);
        return load(in);
    }();
    return list;
}

StopwordList StopwordList::load(std::istream& in) {
    StopwordList list;
    for (std::string line; std::getline(in, line);) {
        std::string word = strip_edges(line);
        if (word.empty() || word.front() == '#') continue;
        std::transform(word.begin(), word.end(), word.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        list.words_.insert(std::move(word));
    }
    return list;
}

StopwordList StopwordList::from_words(const std::vector<std::string>& words) {
    StopwordList list;
    list.words_.insert(words.begin(), words.end());
    return list;
}

bool StopwordList::contains(std::string_view word) const {
    return words_.find(std::string(word)) != words_.end();
}

std::string stem_plural(std::string_view word) {
    std::string w(word);
    auto ends_with = [&](std::string_view suffix) {
        return w.size() >= suffix.size() && w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (w.size() <= 3) return w;
    if (ends_with("ies") && w.size() > 4) {
        w.resize(w.size() - 3);
        w.push_back('y');
    } else if (ends_with("sses") || ends_with("xes") || ends_with("ches") || ends_with("shes")) {
        w.resize(w.size() - 2);
    } else if (ends_with("s") && !ends_with("ss") && !ends_with("us") && !ends_with("is")) {
        w.pop_back();
    }
    return w;
}

std::vector<NounPhrase> extract_noun_phrases(std::string_view text, const StopwordList& stopwords) {
    std::vector<NounPhrase> out;
    std::vector<std::string> chunk;

    auto flush = [&] {
        for (std::size_t begin = 0; begin < chunk.size(); begin += kMaxPhraseTokens) {
            const std::size_t end = std::min(chunk.size(), begin + kMaxPhraseTokens);
            NounPhrase phrase;
            phrase.tokens.assign(chunk.begin() + static_cast<std::ptrdiff_t>(begin),
                                 chunk.begin() + static_cast<std::ptrdiff_t>(end));
            for (const auto& t : phrase.tokens) {
                if (!phrase.surface.empty()) phrase.surface.push_back(' ');
                phrase.surface += t;
            }
            out.push_back(std::move(phrase));
        }
        chunk.clear();
    };

    auto accept = [&](std::string token) {
        if (token.size() >= 2 && token.compare(token.size() - 2, 2, "'s") == 0) token.resize(token.size() - 2);
        while (!token.empty() && (token.back() == '-' || token.back() == '\'')) token.pop_back();
        while (!token.empty() && (token.front() == '-' || token.front() == '\'')) token.erase(token.begin());
        if (token.empty()) return;
        if (std::all_of(token.begin(), token.end(), is_digit) || stopwords.contains(token)) {
            flush();
            return;
        }
        std::string stemmed = stem_plural(token);
        if (stemmed.size() < 2 || stopwords.contains(stemmed)) {
            flush();
            return;
        }
        chunk.push_back(std::move(stemmed));
    };

    std::string token;
    for (char raw : text) {
        const auto c = static_cast<unsigned char>(raw);
        const bool word_char = std::isalnum(c) || c >= 0x80 || raw == '-' || raw == '\'';
        if (word_char) {
            token.push_back(static_cast<char>(std::tolower(c)));
            continue;
        }
        if (!token.empty()) accept(std::move(token));
        token.clear();
        if (!is_space(raw)) flush();
    }
    if (!token.empty()) accept(std::move(token));
    flush();
    return out;
}

}  // namespace cocite
