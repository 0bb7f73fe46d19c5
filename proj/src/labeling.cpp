#include "cocite/labeling.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "cocite/error.hpp"

namespace cocite {

const char* to_string(LabelAlgorithm algorithm) {
    switch (algorithm) {
        case LabelAlgorithm::tfidf: return "tfidf";
        case LabelAlgorithm::llr: return "llr";
        case LabelAlgorithm::lsa_dim1: return "lsa_dim1";
        case LabelAlgorithm::lsa_dim2: return "lsa_dim2";
    }
    return "unknown";
}

namespace {

void sort_citers(std::vector<Citer>& citers) {
    std::sort(citers.begin(), citers.end(), [](const Citer& a, const Citer& b) {
        if (a.coverage != b.coverage) return a.coverage > b.coverage;
        return a.record_id < b.record_id;
    });
}

// Score descending, then frequency descending, then term.
void rank(std::vector<LabelCandidate>& list, std::size_t top_n) {
    std::sort(list.begin(), list.end(), [](const LabelCandidate& a, const LabelCandidate& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.frequency != b.frequency) return a.frequency > b.frequency;
        return a.term < b.term;
    });
    if (list.size() > top_n) list.resize(top_n);
}

using Counts = std::map<std::string, std::int64_t>;

Counts cluster_counts(const CiterSet& set, const PhraseIndex& index) {
    Counts counts;
    for (const auto& c : set.citers) {
        for (const auto& p : index.phrases(c.record_id)) ++counts[p.surface];
    }
    return counts;
}

double xlogx_ratio(double observed, double expected) {
    return observed > 0.0 ? observed * std::log(observed / expected) : 0.0;
}

double round_significant(double v, int digits) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    const double magnitude = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::fabs(v)))));
    return std::round(v * magnitude) / magnitude;
}

}  // namespace

CiterSet citer_set(int cluster_id, const std::set<std::string>& members, std::span<const BibRecord> corpus) {
    CiterSet out{cluster_id, {}};
    for (const auto& r : corpus) {
        std::int64_t coverage = 0;
        for (const auto& ref : r.cited_refs) coverage += members.contains(ref.str()) ? 1 : 0;
        if (coverage > 0) out.citers.push_back({r.id, coverage});
    }
    sort_citers(out.citers);
    return out;
}

PhraseIndex::PhraseIndex(std::span<const BibRecord> corpus, TextSource source, const StopwordList& stopwords) {
    for (const auto& r : corpus) phrases_[r.id] = record_phrases(r, source, stopwords);
}

const std::vector<NounPhrase>& PhraseIndex::phrases(const std::string& record_id) const {
    static const std::vector<NounPhrase> none;
    const auto it = phrases_.find(record_id);
    return it == phrases_.end() ? none : it->second;
}

CiterSet term_citer_set(int cluster_id, const std::set<std::string>& members, std::span<const BibRecord> corpus,
                        const PhraseIndex& index) {
    CiterSet out{cluster_id, {}};
    for (const auto& r : corpus) {
        std::set<std::string> hit;
        for (const auto& p : index.phrases(r.id)) {
            if (members.contains(p.surface)) hit.insert(p.surface);
        }
        if (!hit.empty()) out.citers.push_back({r.id, static_cast<std::int64_t>(hit.size())});
    }
    sort_citers(out.citers);
    return out;
}

std::vector<std::vector<LabelCandidate>> tfidf_labels(std::span<const CiterSet> citer_sets, const PhraseIndex& index,
                                                      std::size_t top_n, IdfUnit unit) {
    std::vector<Counts> tf;
    tf.reserve(citer_sets.size());
    for (const auto& set : citer_sets) tf.push_back(cluster_counts(set, index));

    std::map<std::string, std::int64_t> df;
    double documents = 0.0;
    if (unit == IdfUnit::cluster) {
        for (const auto& counts : tf) {
            for (const auto& [term, n] : counts) ++df[term];
        }
        documents = static_cast<double>(std::count_if(citer_sets.begin(), citer_sets.end(),
                                                      [](const CiterSet& s) { return !s.citers.empty(); }));
    } else {
        std::set<std::string> articles;
        for (const auto& set : citer_sets) {
            for (const auto& c : set.citers) articles.insert(c.record_id);
        }
        for (const auto& id : articles) {
            std::set<std::string> distinct;
            for (const auto& p : index.phrases(id)) distinct.insert(p.surface);
            for (const auto& term : distinct) ++df[term];
        }
        documents = static_cast<double>(articles.size());
    }

    std::vector<std::vector<LabelCandidate>> out(citer_sets.size());
    for (std::size_t c = 0; c < citer_sets.size(); ++c) {
        for (const auto& [term, n] : tf[c]) {
            const double idf = std::log(documents / static_cast<double>(df[term]));
            out[c].push_back({term, static_cast<double>(n) * idf, LabelAlgorithm::tfidf, n});
        }
        rank(out[c], top_n);
    }
    return out;
}

double g_squared(double k11, double k12, double k21, double k22) {
    const double total = k11 + k12 + k21 + k22;
    if (!(total > 0.0)) return 0.0;
    const double row1 = k11 + k12;
    const double row2 = k21 + k22;
    const double col1 = k11 + k21;
    const double col2 = k12 + k22;
    const double sum = xlogx_ratio(k11, row1 * col1 / total) + xlogx_ratio(k12, row1 * col2 / total) +
                       xlogx_ratio(k21, row2 * col1 / total) + xlogx_ratio(k22, row2 * col2 / total);
    return std::max(0.0, 2.0 * sum);
}

std::vector<std::vector<LabelCandidate>> llr_labels(std::span<const CiterSet> citer_sets, const PhraseIndex& index,
                                                    std::size_t top_n) {
    const auto populated = std::count_if(citer_sets.begin(), citer_sets.end(),
                                         [](const CiterSet& s) { return !s.citers.empty(); });
    if (populated < 2) throw ContractError("log-likelihood labeling needs at least two clusters with citers");

    std::vector<Counts> counts;
    std::vector<double> totals;
    Counts everywhere;
    double grand_total = 0.0;
    for (const auto& set : citer_sets) {
        counts.push_back(cluster_counts(set, index));
        double t = 0.0;
        for (const auto& [term, n] : counts.back()) {
            t += static_cast<double>(n);
            everywhere[term] += n;
        }
        totals.push_back(t);
        grand_total += t;
    }

    std::vector<std::vector<LabelCandidate>> out(citer_sets.size());
    for (std::size_t c = 0; c < citer_sets.size(); ++c) {
        const double inside_total = totals[c];
        const double outside_total = grand_total - inside_total;
        for (const auto& [term, n] : counts[c]) {
            const double k11 = static_cast<double>(n);
            const double k12 = static_cast<double>(everywhere[term] - n);
            const double k21 = inside_total - k11;
            const double k22 = outside_total - k12;
            const double inside_rate = k11 / inside_total;
            const double outside_rate = outside_total > 0.0 ? k12 / outside_total : 0.0;
            if (!(inside_rate > outside_rate)) continue;
            out[c].push_back({term, g_squared(k11, k12, k21, k22), LabelAlgorithm::llr, n});
        }
        rank(out[c], top_n);
    }
    return out;
}

LsaLabels lsa_select(const Eigen::MatrixXd& counts, std::span<const std::string> terms, std::size_t per_dim,
                     LsaScoring scoring) {
    if (counts.rows() != static_cast<Eigen::Index>(terms.size())) throw ContractError("term list does not match matrix rows");
    if (counts.rows() < 2 || counts.cols() < 2) {
        throw NumericError("latent semantic labeling needs at least two documents and two terms");
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(counts, Eigen::ComputeThinU);
    const Eigen::VectorXd& sigma = svd.singularValues();
    if (!(sigma(0) > 0.0)) throw NumericError("latent semantic labeling on an all-zero matrix");
    Eigen::MatrixXd u = svd.matrixU();

    // Make the largest-magnitude entry of each singular vector positive.
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        Eigen::Index at = 0;
        for (Eigen::Index i = 1; i < u.rows(); ++i) {
            if (std::fabs(u(i, j)) > std::fabs(u(at, j))) at = i;
        }
        if (u(at, j) < 0.0) u.col(j) *= -1.0;
    }

    const double rank_tolerance = 1e-10 * sigma(0);
    const bool rank_one = sigma.size() < 2 || sigma(1) <= rank_tolerance;

    auto dimension = [&](Eigen::Index j, LabelAlgorithm algorithm) {
        std::vector<LabelCandidate> list;
        const double scale = scoring == LsaScoring::weighted ? sigma(j) : 1.0;
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            const double coefficient = std::fabs(u(i, j));
            if (coefficient <= 1e-9) continue;
            list.push_back({terms[static_cast<std::size_t>(i)], round_significant(scale * coefficient, 12), algorithm,
                            static_cast<std::int64_t>(std::llround(counts.row(i).sum()))});
        }
        std::sort(list.begin(), list.end(), [](const LabelCandidate& a, const LabelCandidate& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.term < b.term;
        });
        if (list.size() > per_dim) list.resize(per_dim);
        return list;
    };

    LsaLabels out;
    out.dim1 = dimension(0, LabelAlgorithm::lsa_dim1);
    out.rank_one = rank_one;
    if (!rank_one) out.dim2 = dimension(1, LabelAlgorithm::lsa_dim2);
    return out;
}

LsaLabels lsa_labels(const CiterSet& citers, const PhraseIndex& index, std::size_t per_dim, LsaUnit unit,
                     LsaScoring scoring) {
    std::vector<Counts> docs;
    std::set<std::string> vocabulary;
    for (const auto& c : citers.citers) {
        Counts doc;
        for (const auto& p : index.phrases(c.record_id)) {
            if (unit == LsaUnit::phrase) {
                ++doc[p.surface];
            } else {
                for (const auto& t : p.tokens) ++doc[t];
            }
        }
        for (const auto& [t, n] : doc) vocabulary.insert(t);
        docs.push_back(std::move(doc));
    }
    const std::vector<std::string> terms(vocabulary.begin(), vocabulary.end());
    Eigen::MatrixXd matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(terms.size()),
                                                   static_cast<Eigen::Index>(docs.size()));
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& [t, n] : docs[d]) {
            const auto row = std::lower_bound(terms.begin(), terms.end(), t) - terms.begin();
            matrix(row, static_cast<Eigen::Index>(d)) = static_cast<double>(n);
        }
    }
    return lsa_select(matrix, terms, per_dim, scoring);
}

std::vector<Citer> representative_citers(const CiterSet& citers, std::size_t top_n) {
    std::vector<Citer> out(citers.citers.begin(),
                           citers.citers.begin() + static_cast<std::ptrdiff_t>(std::min(top_n, citers.citers.size())));
    return out;
}

}  // namespace cocite
