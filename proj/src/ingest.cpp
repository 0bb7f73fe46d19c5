#include "cocite/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "cocite/error.hpp"

namespace cocite {

namespace {

bool is_tag_char(char c) { return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); }

std::string trim(std::string_view s) {
    std::size_t b = 0;
    while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
    std::size_t e = s.size();
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
    return std::string(s.substr(b, e - b));
}

struct FieldLine {
    std::string value;
    std::size_t line = 0;
};

struct Block {
    std::map<std::string, std::vector<FieldLine>> fields;
    std::size_t first_line = 0;
    bool empty() const { return fields.empty(); }
};

std::int64_t parse_int(const FieldLine& f, const char* what) {
    const std::string v = trim(f.value);
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
        throw ParseError(std::string("invalid ") + what + " value '" + v + "'", f.line);
    }
    return out;
}

std::string joined(const std::vector<FieldLine>& lines) {
    std::string out;
    for (const auto& l : lines) {
        const std::string v = trim(l.value);
        if (v.empty()) continue;
        if (!out.empty()) out.push_back(' ');
        out += v;
    }
    return out;
}

void append_terms(std::vector<std::string>& terms, const std::vector<FieldLine>& lines) {
    const std::string all = joined(lines);
    std::size_t start = 0;
    while (start <= all.size()) {
        std::size_t semi = all.find(';', start);
        if (semi == std::string::npos) semi = all.size();
        std::string term = trim(std::string_view(all).substr(start, semi - start));
        if (!term.empty() && std::find(terms.begin(), terms.end(), term) == terms.end()) {
            terms.push_back(std::move(term));
        }
        start = semi + 1;
    }
}

}  // namespace

ParseResult parse_field_tagged(std::istream& in) {
    ParseResult result;
    std::unordered_set<std::string> seen_ids;
    Block block;
    std::string last_tag;
    std::size_t ordinal = 0;

    auto finish = [&] {
        if (block.empty()) return;
        ++ordinal;
        Block b = std::move(block);
        block = Block{};
        last_tag.clear();

        const auto ti = b.fields.find("TI");
        const auto py = b.fields.find("PY");
        if (ti == b.fields.end() || py == b.fields.end() || joined(ti->second).empty()) {
            ++result.skipped_incomplete;
            return;
        }

        BibRecord rec;
        rec.source_tag = SourceTag::citation_indexed;
        rec.title = joined(ti->second);
        rec.year = static_cast<int>(parse_int(py->second.front(), "PY"));
        if (auto tc = b.fields.find("TC"); tc != b.fields.end()) {
            rec.times_cited = parse_int(tc->second.front(), "TC");
            if (rec.times_cited < 0) throw ParseError("negative TC value", tc->second.front().line);
        }
        if (auto ut = b.fields.find("UT"); ut != b.fields.end()) rec.id = joined(ut->second);
        if (rec.id.empty()) rec.id = "REC" + std::to_string(ordinal);
        if (!seen_ids.insert(rec.id).second) {
            ++result.skipped_duplicate;
            return;
        }
        if (auto cr = b.fields.find("CR"); cr != b.fields.end()) {
            std::set<RefKey> seen;
            for (const auto& line : cr->second) {
                const std::string raw = trim(line.value);
                if (raw.empty()) continue;
                RefKey key;
                try {
                    key = normalize_reference(raw);
                } catch (const ParseError&) {
                    continue;
                }
                if (seen.insert(key).second) rec.cited_refs.push_back(std::move(key));
            }
        }
        for (const char* tag : {"DE", "ID"}) {
            if (auto it = b.fields.find(tag); it != b.fields.end()) append_terms(rec.index_terms, it->second);
        }
        result.records.push_back(std::move(rec));
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;

        if (line.rfind("   ", 0) == 0) {
            if (last_tag.empty()) throw ParseError("continuation line without a preceding tag", line_no);
            block.fields[last_tag].push_back({line.substr(3), line_no});
            continue;
        }
        if (line.size() < 2 || !is_tag_char(line[0]) || !is_tag_char(line[1]) ||
            (line.size() > 2 && line[2] != ' ')) {
            throw ParseError("malformed tag line '" + line + "'", line_no);
        }
        const std::string tag = line.substr(0, 2);
        const std::string content = line.size() > 3 ? line.substr(3) : std::string();

        if (tag == "EF") break;
        if (tag == "ER") {
            finish();
            continue;
        }
        if ((tag == "FN" || tag == "VR") && block.empty()) continue;  // file header
        if (block.empty()) block.first_line = line_no;
        block.fields[tag].push_back({content, line_no});
        last_tag = tag;
    }
    finish();
    return result;
}

std::vector<BibRecord> parse_line_records(std::istream& in) {
    using nlohmann::json;
    std::vector<BibRecord> records;
    std::unordered_set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;

        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
        }
        if (!obj.is_object()) throw ParseError("record is not an object", line_no);

        BibRecord rec;
        rec.source_tag = SourceTag::term_only;
        const auto id = obj.find("id");
        if (id == obj.end() || !id->is_string() || id->get<std::string>().empty()) {
            throw ParseError("missing or empty 'id'", line_no);
        }
        rec.id = id->get<std::string>();
        const auto year = obj.find("year");
        if (year == obj.end() || !year->is_number_integer()) throw ParseError("missing integer 'year'", line_no);
        rec.year = year->get<int>();
        const auto title = obj.find("title");
        if (title == obj.end() || !title->is_string()) throw ParseError("missing string 'title'", line_no);
        rec.title = title->get<std::string>();
        if (const auto terms = obj.find("terms"); terms != obj.end()) {
            if (!terms->is_array()) throw ParseError("'terms' must be an array of strings", line_no);
            for (const auto& t : *terms) {
                if (!t.is_string()) throw ParseError("'terms' must be an array of strings", line_no);
                rec.index_terms.push_back(t.get<std::string>());
            }
        }
        if (!ids.insert(rec.id).second) throw ParseError("duplicate id '" + rec.id + "'", line_no);
        records.push_back(std::move(rec));
    }
    return records;
}

void write_line_records(std::ostream& out, const std::vector<BibRecord>& records) {
    for (const auto& r : records) {
        nlohmann::json obj = {{"id", r.id}, {"year", r.year}, {"title", r.title}, {"terms", r.index_terms}};
        out << obj.dump() << '\n';
    }
}

std::vector<BibRecord> filter_years(std::vector<BibRecord> records, int from_year, int to_year) {
    std::erase_if(records, [&](const BibRecord& r) { return r.year < from_year || r.year > to_year; });
    return records;
}

std::vector<NounPhrase> record_phrases(const BibRecord& record, TextSource source,
                                       const StopwordList& stopwords) {
    if (source == TextSource::title) return extract_noun_phrases(record.title, stopwords);
    std::vector<NounPhrase> out;
    for (const auto& term : record.index_terms) {
        auto phrases = extract_noun_phrases(term, stopwords);
        out.insert(out.end(), std::make_move_iterator(phrases.begin()), std::make_move_iterator(phrases.end()));
    }
    return out;
}

}  // namespace cocite
