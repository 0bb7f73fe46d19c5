#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "cocite/text.hpp"

namespace cocite {

enum class SourceTag { citation_indexed, term_only };

/// One publication or award record.
struct BibRecord {
    std::string id;
    int year = 0;
    std::string title;
    std::vector<std::string> index_terms;
    std::vector<RefKey> cited_refs;  // distinct, in first-seen order
    std::int64_t times_cited = 0;
    SourceTag source_tag = SourceTag::citation_indexed;

    bool operator==(const BibRecord&) const = default;
};

struct ParseResult {
    std::vector<BibRecord> records;
    std::size_t skipped_incomplete = 0;  // blocks without PY or TI
    std::size_t skipped_duplicate = 0;   // blocks whose UT was already seen
};

/// Parses the Web of Science field-tagged export format.
///
/// Each line is a two-character tag, a space and content; continuation lines
/// start with three spaces and belong to the previous tag. `ER` ends a record
/// and `EF` ends the file. Recognized tags: UT (id), TI, PY, TC, CR (one
/// reference per line), DE and ID (index terms, `;`-separated). Records lacking
/// a UT get a positional id "REC<n>".
ParseResult parse_field_tagged(std::istream& in);

/// Parses JSON Lines with keys id, year, title and optional terms. Every record
/// is term_only. Throws ParseError on malformed lines and duplicate ids.
std::vector<BibRecord> parse_line_records(std::istream& in);

/// Writes records in the format read by parse_line_records.
void write_line_records(std::ostream& out, const std::vector<BibRecord>& records);

/// Keeps records whose year lies in [from_year, to_year].
std::vector<BibRecord> filter_years(std::vector<BibRecord> records, int from_year, int to_year);

enum class TextSource { title, index_terms };

/// Noun phrases of one record drawn from its title or its index terms.
std::vector<NounPhrase> record_phrases(const BibRecord& record, TextSource source,
                                       const StopwordList& stopwords = StopwordList::english());

}  // namespace cocite
