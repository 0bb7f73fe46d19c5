#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cocite/ingest.hpp"

namespace cocite {

enum class LabelAlgorithm { tfidf, llr, lsa_dim1, lsa_dim2 };

const char* to_string(LabelAlgorithm algorithm);

struct LabelCandidate {
    std::string term;
    double score = 0.0;
    LabelAlgorithm algorithm = LabelAlgorithm::tfidf;
    std::int64_t frequency = 0;  // occurrences in the cluster's citer set

    bool operator==(const LabelCandidate&) const = default;
};

struct Citer {
    std::string record_id;
    std::int64_t coverage = 0;  // cluster members the record cites

    bool operator==(const Citer&) const = default;
};

/// Records citing at least one member of a cluster, by descending coverage then id.
struct CiterSet {
    int cluster_id = 0;
    std::vector<Citer> citers;
};

CiterSet citer_set(int cluster_id, const std::set<std::string>& members, std::span<const BibRecord> corpus);

/// Noun phrases of every record, keyed by record id.
class PhraseIndex {
public:
    PhraseIndex(std::span<const BibRecord> corpus, TextSource source,
                const StopwordList& stopwords = StopwordList::english());

    /// Phrases of one record in text order, repetitions kept. Empty for unknown ids.
    const std::vector<NounPhrase>& phrases(const std::string& record_id) const;

private:
    std::map<std::string, std::vector<NounPhrase>> phrases_;
};

/// Citer set of a term cluster: records whose phrases include a member;
/// coverage counts the distinct members they contain.
CiterSet term_citer_set(int cluster_id, const std::set<std::string>& members, std::span<const BibRecord> corpus,
                        const PhraseIndex& index);

enum class IdfUnit { cluster, article };

/// tf*idf with each cluster's citer set as one document:
/// weight = tf(t, c) * ln(K / df(t)). Result is indexed like citer_sets.
std::vector<std::vector<LabelCandidate>> tfidf_labels(std::span<const CiterSet> citer_sets, const PhraseIndex& index,
                                                      std::size_t top_n, IdfUnit unit = IdfUnit::cluster);

/// Dunning's G^2 for a 2x2 contingency table, with 0 ln 0 = 0.
double g_squared(double k11, double k12, double k21, double k22);

/// Log-likelihood ratio labels: phrases over-represented in a cluster's citers
/// relative to all other clusters' citers, ranked by G^2. Throws ContractError
/// when fewer than two clusters have citers.
std::vector<std::vector<LabelCandidate>> llr_labels(std::span<const CiterSet> citer_sets, const PhraseIndex& index,
                                                    std::size_t top_n);

enum class LsaUnit { word, phrase };
enum class LsaScoring { weighted, raw };

struct LsaLabels {
    std::vector<LabelCandidate> dim1;
    std::vector<LabelCandidate> dim2;
    bool rank_one = false;  // dim2 left empty
};

/// Term selection from a term x document count matrix: terms with the strongest
/// (sigma_j-weighted) coefficients on the first two left singular vectors.
/// Throws NumericError when the matrix has fewer than two rows or columns or is zero.
LsaLabels lsa_select(const Eigen::MatrixXd& counts, std::span<const std::string> terms, std::size_t per_dim,
                     LsaScoring scoring = LsaScoring::weighted);

LsaLabels lsa_labels(const CiterSet& citers, const PhraseIndex& index, std::size_t per_dim = 5,
                     LsaUnit unit = LsaUnit::word, LsaScoring scoring = LsaScoring::weighted);

std::vector<Citer> representative_citers(const CiterSet& citers, std::size_t top_n);

}  // namespace cocite
