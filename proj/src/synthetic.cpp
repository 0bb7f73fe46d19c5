#include "cocite/synthetic.hpp"

#include <array>
#include <numeric>
#include <random>
#include <sstream>

#include "cocite/ingest.hpp"
#include "cocite/text.hpp"

namespace cocite {

namespace {

// Engine output is fixed by the standard; the library distributions are not,
// so draws are reduced by hand to keep the corpora identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

constexpr std::string_view kConsonants = "bdfgklmnprtvz";
constexpr std::string_view kVowels = "aeiou";

// The index-th pronounceable word of `syllables` consonant-vowel pairs.
std::string made_up_word(std::size_t index, int syllables) {
    std::string out;
    for (int s = 0; s < syllables; ++s) {
        const std::size_t syl = index % (kConsonants.size() * kVowels.size());
        index /= kConsonants.size() * kVowels.size();
        out.push_back(kConsonants[syl / kVowels.size()]);
        out.push_back(kVowels[syl % kVowels.size()]);
    }
    return out;
}

std::string capitalized(std::string w) {
    if (!w.empty()) w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
}

void write_field(std::ostream& out, const char* tag, const std::vector<std::string>& lines) {
    for (std::size_t i = 0; i < lines.size(); ++i) out << (i == 0 ? std::string(tag) + " " : std::string("   ")) << lines[i] << "\n";
}

// Splits long text over continuation lines the way exports do.
std::vector<std::string> wrap(const std::string& text, std::size_t width) {
    std::vector<std::string> lines;
    std::istringstream words(text);
    std::string word;
    std::string line;
    while (words >> word) {
        if (!line.empty() && line.size() + 1 + word.size() > width) {
            lines.push_back(line);
            line.clear();
        }
        line += (line.empty() ? "" : " ") + word;
    }
    if (!line.empty()) lines.push_back(line);
    return lines;
}

}  // namespace

SyntheticCitationCorpus synthetic_citation_corpus(std::uint64_t seed) {
    constexpr int kTopics = 3;
    constexpr std::size_t kRefsPerTopic = 12;
    constexpr int kRecordsPerYear = 20;
    const std::array<std::string, kTopics> planted_surface = {"Field Methane Dwarfs", "High-Redshift Quasars",
                                                              "Luminous Red Galaxies"};
    // Planted phrase share of each topic's titles.
    const std::array<double, kTopics> planted_share = {0.3, 0.3, 0.6};
    const std::vector<std::string> fillers = {
        "Stellar Kinematics",    "Photometric Calibration", "Spectroscopic Pipeline",  "Color Selection",
        "Proper Motions",        "Radial Velocities",       "Number Counts",           "Luminosity Function",
        "Clustering Amplitude",  "Emission Lines",          "Absorption Features",     "Target Selection",
        "Image Processing",      "Astrometric Accuracy",    "Variability Census",      "Redshift Distribution",
        "Morphological Types",   "Infrared Excess",         "Metallicity Gradients",   "Dust Extinction",
        "Star Formation Rates",  "Survey Completeness",     "Catalog Construction",    "Spectral Templates"};
    const std::vector<std::string> venues = {"ASTROPHYS J", "ASTRON J", "MON NOT R ASTRON SOC", "PUBL ASTRON SOC PAC"};

    Rng rng(seed);
    SyntheticCitationCorpus out;
    out.boilerplate = "sloan digital sky survey";
    out.topic_phrases = {"field methane dwarf", "high-redshift quasar", "luminous red galaxy"};

    std::array<std::vector<std::string>, kTopics> refs;
    std::size_t surname = 4000;
    for (int t = 0; t < kTopics; ++t) {
        for (std::size_t i = 0; i < kRefsPerTopic; ++i) {
            const std::string raw = capitalized(made_up_word(surname++ * 37 % 274625, 3)) + " " +
                                    static_cast<char>('A' + rng.below(26)) + ", " + std::to_string(1988 + rng.below(12)) +
                                    ", " + venues[rng.below(venues.size())] + ", V" + std::to_string(100 + rng.below(600)) +
                                    ", P" + std::to_string(1 + rng.below(999));
            out.reference_topic[normalize_reference(raw).str()] = t;
            refs[t].push_back(raw);
        }
    }

    // Which records of each topic carry the planted phrase.
    const int per_topic = (out.last_year - out.first_year + 1) * kRecordsPerYear / kTopics;
    std::array<std::vector<bool>, kTopics> planted;
    for (int t = 0; t < kTopics; ++t) {
        std::vector<int> order(static_cast<std::size_t>(per_topic));
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        planted[t].assign(static_cast<std::size_t>(per_topic), false);
        const auto chosen = static_cast<std::size_t>(planted_share[t] * per_topic + 0.5);
        for (std::size_t i = 0; i < chosen; ++i) planted[t][static_cast<std::size_t>(order[i])] = true;
    }

    std::ostringstream wos;
    wos << "FN Clarivate Analytics Web of Science\nVR 1.0\n";
    int serial = 0;
    std::array<int, kTopics> seen{};
    for (int year = out.first_year; year <= out.last_year; ++year) {
        for (int r = 0; r < kRecordsPerYear; ++r, ++serial) {
            const int t = serial % kTopics;
            const bool has_planted = planted[t][static_cast<std::size_t>(seen[t]++)];

            std::vector<std::string> segments;
            if (has_planted) segments.push_back(planted_surface[t]);
            const std::size_t n_fillers = 1 + rng.below(2);
            for (std::size_t f = 0; f < n_fillers; ++f) {
                const std::string& filler = fillers[rng.below(fillers.size())];
                if (std::find(segments.begin(), segments.end(), filler) == segments.end()) segments.push_back(filler);
            }
            std::string rest;
            for (std::size_t i = 0; i < segments.size(); ++i) {
                rest += (i == 0 ? "" : i + 1 == segments.size() ? " and " : ", ") + segments[i];
            }
            const std::string title = t < 2 ? "The Sloan Digital Sky Survey: " + rest : rest;
            std::vector<std::string> keywords = segments;
            if (t < 2) keywords.insert(keywords.begin(), "Sloan Digital Sky Survey");

            std::vector<std::string> own = refs[t];
            rng.shuffle(own);
            own.resize(4 + rng.below(3));
            if (t == 2 && rng.below(4) == 0) own.push_back(refs[rng.below(2)][rng.below(kRefsPerTopic)]);

            std::string keyword_line;
            for (const auto& k : keywords) keyword_line += (keyword_line.empty() ? "" : "; ") + k;

            wos << "\nPT J\n";
            write_field(wos, "AU", {capitalized(made_up_word(9000 + static_cast<std::size_t>(serial) * 101, 3)) + ", " +
                                    static_cast<char>('A' + rng.below(26))});
            write_field(wos, "TI", wrap(title, 60));
            write_field(wos, "SO", {venues[rng.below(venues.size())]});
            write_field(wos, "DE", wrap(keyword_line, 60));
            write_field(wos, "CR", own);
            write_field(wos, "TC", {std::to_string(rng.below(150))});
            write_field(wos, "PY", {std::to_string(year)});
            char ut[32];
            std::snprintf(ut, sizeof ut, "WOS:%015d", 170000000 + serial * 7919);
            write_field(wos, "UT", {ut});
            wos << "ER\n";
        }
    }
    wos << "\nEF\n";
    out.wos_text = wos.str();
    out.record_count = static_cast<std::size_t>(serial);
    return out;
}

SyntheticAwardCorpus synthetic_award_corpus(std::uint64_t seed) {
    constexpr std::size_t kHot = 30;
    constexpr int kPerYear = 40;
    constexpr std::size_t kTermsPerTitle = 3;
    // New hot terms entering each year after the first.
    const std::array<std::size_t, 9> strides = {27, 27, 27, 27, 26, 26, 26, 26, 26};

    Rng rng(seed);
    SyntheticAwardCorpus out;
    const std::size_t total = kHot + std::accumulate(strides.begin(), strides.end(), std::size_t{0});
    std::vector<std::size_t> ids(65 * 65 * 65);
    std::iota(ids.begin(), ids.end(), 0);
    rng.shuffle(ids);
    std::vector<std::string> terms;
    for (std::size_t i = 0; i < total; ++i) terms.push_back(made_up_word(ids[i], 3));
    out.unique_hot_terms = total;

    std::vector<BibRecord> records;
    std::size_t offset = 0;
    std::size_t noise = 0;
    for (int year = out.first_year; year <= out.last_year; ++year) {
        const auto y = static_cast<std::size_t>(year - out.first_year);
        if (y > 0) offset += strides[y - 1];
        std::vector<std::string> hot(terms.begin() + static_cast<std::ptrdiff_t>(offset),
                                     terms.begin() + static_cast<std::ptrdiff_t>(offset + kHot));
        out.hot_terms.push_back(hot);
        rng.shuffle(hot);
        // Cycling through the shuffled list gives each term exactly four titles,
        // and three consecutive entries are always distinct.
        for (int r = 0; r < kPerYear; ++r) {
            std::vector<std::string> words;
            for (std::size_t j = 0; j < kTermsPerTitle; ++j) {
                words.push_back(hot[(static_cast<std::size_t>(r) * kTermsPerTitle + j) % kHot]);
            }
            rng.shuffle(words);
            const std::string filler = made_up_word(noise++ * 7 + 11, 4);
            BibRecord rec;
            rec.id = "AWD-" + std::to_string(year) + "-" + std::to_string(1000 + r * 13 + static_cast<int>(rng.below(13)));
            rec.year = year;
            rec.title = capitalized(words[0]) + ", " + words[1] + " and " + words[2] + " with " + filler;
            rec.source_tag = SourceTag::term_only;
            records.push_back(std::move(rec));
        }
    }
    std::ostringstream jsonl;
    write_line_records(jsonl, records);
    out.jsonl = jsonl.str();
    return out;
}

}  // namespace cocite
