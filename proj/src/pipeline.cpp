#include "cocite/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "cocite/error.hpp"
#include "cocite/ingest.hpp"
#include "cocite/metrics.hpp"
#include "cocite/snapshot.hpp"

namespace cocite {

using nlohmann::json;

const char* to_string(NetworkMode mode) {
    switch (mode) {
        case NetworkMode::cocitation: return "cocitation";
        case NetworkMode::terms: return "terms";
        case NetworkMode::terms_per_slice: return "terms-per-slice";
    }
    return "?";
}

const char* to_string(InputFormat format) { return format == InputFormat::wos ? "wos" : "lines"; }

namespace {

template <typename Enum>
Enum parse_enum(const json& value, const char* what, std::initializer_list<std::pair<const char*, Enum>> names) {
    if (value.is_string()) {
        for (const auto& [name, e] : names) {
            if (value.get<std::string>() == name) return e;
        }
    }
    std::string allowed;
    for (const auto& [name, e] : names) allowed += (allowed.empty() ? "" : "|") + std::string(name);
    throw ConfigError(std::string(what) + " must be one of " + allowed + ", got " + value.dump());
}

LabelAlgorithm parse_algorithm(const json& value) {
    return parse_enum<LabelAlgorithm>(value, "label algorithm",
                                      {{"tfidf", LabelAlgorithm::tfidf},
                                       {"llr", LabelAlgorithm::llr},
                                       {"lsa_dim1", LabelAlgorithm::lsa_dim1},
                                       {"lsa_dim2", LabelAlgorithm::lsa_dim2}});
}

// Typed read of one optional key; wrong types surface as ConfigError.
template <typename T>
void read(const json& obj, const char* key, T& out) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
            if (!it->is_number_integer()) throw ConfigError("");
            if constexpr (std::is_unsigned_v<T>) {
                if (it->get<long long>() < 0) throw ConfigError("");
            }
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!it->is_number()) throw ConfigError("");
        } else if constexpr (std::is_same_v<T, bool>) {
            if (!it->is_boolean()) throw ConfigError("");
        }
        out = it->get<T>();
    } catch (const std::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type: " + it->dump());
    }
}

void reject_unknown(const json& obj, const char* where, std::initializer_list<const char*> known) {
    if (!obj.is_object()) throw ConfigError(std::string(where) + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
            throw ConfigError(std::string("unknown config key '") + (where[0] ? std::string(where) + "." : "") + key + "'");
        }
    }
}

}  // namespace

void PipelineConfig::validate() const {
    if (inputs.empty()) throw ConfigError("no input files given");
    if (from_year && to_year && *from_year > *to_year) throw ConfigError("from_year must not exceed to_year");
    if (slice_years < 1) throw ConfigError("slice length must be at least 1 year");
    if (top_n < 1) throw ConfigError("top_n must be at least 1");
    if (!(min_edge_weight >= 0.0)) throw ConfigError("min_edge_weight must be non-negative");
    spectral.validate();
    if (labels.top_n < 1 || labels.lsa_per_dim < 1) throw ConfigError("label list lengths must be at least 1");
    layout.validate();
    if (hull_padding < 0.0) throw ConfigError("hull padding must be non-negative");
    if (!(pivotal_quantile > 0.0 && pivotal_quantile < 1.0)) throw ConfigError("pivotal quantile must lie in (0, 1)");
}

json PipelineConfig::to_json() const {
    json algorithms = json::array();
    for (auto a : labels.algorithms) algorithms.push_back(cocite::to_string(a));
    json k = spectral.k_mode == SpectralConfig::KMode::fixed ? json(spectral.k) : json("auto");
    return {
        {"inputs", inputs},
        {"format", cocite::to_string(format)},
        {"from_year", from_year ? json(*from_year) : json(nullptr)},
        {"to_year", to_year ? json(*to_year) : json(nullptr)},
        {"slice_years", slice_years},
        {"top_n", top_n},
        {"mode", cocite::to_string(mode)},
        {"weight_mode", weight_mode == WeightMode::raw ? "raw" : "cosine"},
        {"min_edge_weight", min_edge_weight},
        {"seed", seed},
        {"stopwords", stopwords_path},
        {"pivotal_quantile", pivotal_quantile},
        {"clustering",
         {{"k", k},
          {"k_min", spectral.k_min},
          {"k_max", spectral.k_max},
          {"kmeans_restarts", spectral.kmeans_restarts},
          {"kmeans_max_iter", spectral.kmeans_max_iter},
          {"min_component_size", spectral.min_component_size},
          {"row_normalize", spectral.row_normalize}}},
        {"labels",
         {{"source", labels.source == TextSource::title ? "title" : "index"},
          {"algorithms", algorithms},
          {"top_n", labels.top_n},
          {"lsa_per_dim", labels.lsa_per_dim},
          {"representative_citers", labels.representative_citers},
          {"idf_unit", labels.idf_unit == IdfUnit::cluster ? "cluster" : "article"},
          {"lsa_unit", labels.lsa_unit == LsaUnit::word ? "word" : "phrase"},
          {"lsa_scoring", labels.lsa_scoring == LsaScoring::weighted ? "weighted" : "raw"}}},
        {"layout",
         {{"between_cluster_factor", layout.between_cluster_factor},
          {"iterations", layout.iterations},
          {"ideal_length", layout.ideal_length},
          {"initial_step", layout.initial_step},
          {"cooling", layout.cooling},
          {"gravity", layout.gravity},
          {"box", layout.box},
          {"hull_padding", hull_padding}}},
    };
}

PipelineConfig PipelineConfig::from_json(const json& doc) { return from_json(doc, PipelineConfig{}); }

PipelineConfig PipelineConfig::from_json(const json& doc, PipelineConfig cfg) {
    reject_unknown(doc, "",
                   {"inputs", "format", "from_year", "to_year", "slice_years", "top_n", "mode", "weight_mode",
                    "min_edge_weight", "seed", "stopwords", "pivotal_quantile", "clustering", "labels", "layout",
                    "output"});
    if (doc.contains("inputs")) {
        const auto& in = doc["inputs"];
        if (in.is_string()) {
            cfg.inputs = {in.get<std::string>()};
        } else if (in.is_array() && std::all_of(in.begin(), in.end(), [](const json& j) { return j.is_string(); })) {
            cfg.inputs = in.get<std::vector<std::string>>();
        } else {
            throw ConfigError("config key 'inputs' must be a path or a list of paths");
        }
    }
    if (doc.contains("format")) {
        cfg.format = parse_enum<InputFormat>(doc["format"], "format", {{"wos", InputFormat::wos}, {"lines", InputFormat::lines}});
    }
    for (const auto& [key, target] : {std::pair{"from_year", &cfg.from_year}, std::pair{"to_year", &cfg.to_year}}) {
        if (!doc.contains(key)) continue;
        if (doc[key].is_null()) {
            target->reset();
        } else {
            int year = 0;
            read(doc, key, year);
            *target = year;
        }
    }
    read(doc, "slice_years", cfg.slice_years);
    read(doc, "top_n", cfg.top_n);
    if (doc.contains("mode")) {
        cfg.mode = parse_enum<NetworkMode>(doc["mode"], "mode",
                                           {{"cocitation", NetworkMode::cocitation},
                                            {"terms", NetworkMode::terms},
                                            {"terms-per-slice", NetworkMode::terms_per_slice}});
    }
    if (doc.contains("weight_mode")) {
        cfg.weight_mode = parse_enum<WeightMode>(doc["weight_mode"], "weight_mode",
                                                 {{"raw", WeightMode::raw}, {"cosine", WeightMode::cosine}});
    }
    read(doc, "min_edge_weight", cfg.min_edge_weight);
    read(doc, "seed", cfg.seed);
    read(doc, "stopwords", cfg.stopwords_path);
    read(doc, "pivotal_quantile", cfg.pivotal_quantile);
    read(doc, "output", cfg.output);

    if (doc.contains("clustering")) {
        const auto& c = doc["clustering"];
        reject_unknown(c, "clustering",
                       {"k", "k_min", "k_max", "kmeans_restarts", "kmeans_max_iter", "min_component_size", "row_normalize"});
        if (c.contains("k")) {
            if (c["k"] == "auto") {
                cfg.spectral.k_mode = SpectralConfig::KMode::automatic;
            } else {
                read(c, "k", cfg.spectral.k);
                cfg.spectral.k_mode = SpectralConfig::KMode::fixed;
            }
        }
        read(c, "k_min", cfg.spectral.k_min);
        read(c, "k_max", cfg.spectral.k_max);
        read(c, "kmeans_restarts", cfg.spectral.kmeans_restarts);
        read(c, "kmeans_max_iter", cfg.spectral.kmeans_max_iter);
        read(c, "min_component_size", cfg.spectral.min_component_size);
        read(c, "row_normalize", cfg.spectral.row_normalize);
    }
    if (doc.contains("labels")) {
        const auto& l = doc["labels"];
        reject_unknown(l, "labels",
                       {"source", "algorithms", "top_n", "lsa_per_dim", "representative_citers", "idf_unit", "lsa_unit",
                        "lsa_scoring"});
        if (l.contains("source")) {
            cfg.labels.source = parse_enum<TextSource>(l["source"], "label source",
                                                       {{"title", TextSource::title}, {"index", TextSource::index_terms}});
        }
        if (l.contains("algorithms")) {
            if (!l["algorithms"].is_array()) throw ConfigError("config key 'labels.algorithms' must be a list");
            cfg.labels.algorithms.clear();
            for (const auto& a : l["algorithms"]) {
                const auto algorithm = parse_algorithm(a);
                if (std::find(cfg.labels.algorithms.begin(), cfg.labels.algorithms.end(), algorithm) ==
                    cfg.labels.algorithms.end()) {
                    cfg.labels.algorithms.push_back(algorithm);
                }
            }
        }
        read(l, "top_n", cfg.labels.top_n);
        read(l, "lsa_per_dim", cfg.labels.lsa_per_dim);
        read(l, "representative_citers", cfg.labels.representative_citers);
        if (l.contains("idf_unit")) {
            cfg.labels.idf_unit = parse_enum<IdfUnit>(l["idf_unit"], "idf_unit",
                                                      {{"cluster", IdfUnit::cluster}, {"article", IdfUnit::article}});
        }
        if (l.contains("lsa_unit")) {
            cfg.labels.lsa_unit = parse_enum<LsaUnit>(l["lsa_unit"], "lsa_unit",
                                                      {{"word", LsaUnit::word}, {"phrase", LsaUnit::phrase}});
        }
        if (l.contains("lsa_scoring")) {
            cfg.labels.lsa_scoring = parse_enum<LsaScoring>(l["lsa_scoring"], "lsa_scoring",
                                                            {{"weighted", LsaScoring::weighted}, {"raw", LsaScoring::raw}});
        }
    }
    if (doc.contains("layout")) {
        const auto& l = doc["layout"];
        reject_unknown(l, "layout",
                       {"between_cluster_factor", "iterations", "ideal_length", "initial_step", "cooling", "gravity",
                        "box", "hull_padding"});
        read(l, "between_cluster_factor", cfg.layout.between_cluster_factor);
        read(l, "iterations", cfg.layout.iterations);
        read(l, "ideal_length", cfg.layout.ideal_length);
        read(l, "initial_step", cfg.layout.initial_step);
        read(l, "cooling", cfg.layout.cooling);
        read(l, "gravity", cfg.layout.gravity);
        read(l, "box", cfg.layout.box);
        read(l, "hull_padding", cfg.hull_padding);
    }
    return cfg;
}

namespace {

// Runs one stage, converting anything but configuration and I/O problems into a
// StageError that names the stage.
template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const ConfigError&) {
        throw;
    } catch (const IoError&) {
        throw;
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("error while reading '" + path + "'");
    return buffer.str();
}

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(4);
    out << std::fixed << v;
    return out.str();
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    PipelineResult result;
    auto& log = result.log;

    StopwordList custom_stopwords;
    const StopwordList* stopwords = &StopwordList::english();
    if (!cfg.stopwords_path.empty()) {
        std::istringstream in(read_file(cfg.stopwords_path));
        custom_stopwords = StopwordList::load(in);
        stopwords = &custom_stopwords;
    }

    // ingest
    std::vector<BibRecord> corpus = stage("ingest", [&] {
        std::vector<BibRecord> records;
        std::set<std::string> seen;
        std::size_t incomplete = 0;
        std::size_t duplicates = 0;
        for (const auto& path : cfg.inputs) {
            std::istringstream in(read_file(path));
            std::vector<BibRecord> batch;
            try {
                if (cfg.format == InputFormat::wos) {
                    auto parsed = parse_field_tagged(in);
                    incomplete += parsed.skipped_incomplete;
                    duplicates += parsed.skipped_duplicate;
                    batch = std::move(parsed.records);
                } else {
                    batch = parse_line_records(in);
                }
            } catch (const ParseError& e) {
                throw ParseError(path + ": " + e.what(), 0);
            }
            for (auto& r : batch) {
                if (!seen.insert(r.id).second) {
                    ++duplicates;
                    continue;
                }
                records.push_back(std::move(r));
            }
        }
        log.push_back("ingest: " + std::to_string(records.size()) + " records read, " + std::to_string(incomplete) +
                      " skipped as incomplete, " + std::to_string(duplicates) + " skipped as duplicate");
        if (records.empty()) throw ContractError("no usable records in the input");
        return records;
    });

    // slicing
    const auto slices = stage("slicing", [&] {
        int lo = corpus.front().year;
        int hi = lo;
        for (const auto& r : corpus) {
            lo = std::min(lo, r.year);
            hi = std::max(hi, r.year);
        }
        const int from = cfg.from_year.value_or(lo);
        const int to = cfg.to_year.value_or(hi);
        corpus = filter_years(std::move(corpus), from, to);
        auto out = slice_interval(from, to, cfg.slice_years);
        log.push_back("slicing: " + std::to_string(from) + "-" + std::to_string(to) + " in " +
                      std::to_string(out.size()) + " slices, " + std::to_string(corpus.size()) + " records inside");
        return out;
    });

    // networks and merge
    const CoCitationNetwork network = stage("network", [&] {
        CoCitationNetwork merged;
        if (cfg.mode == NetworkMode::cocitation) {
            std::vector<BibRecord> cited;
            std::copy_if(corpus.begin(), corpus.end(), std::back_inserter(cited),
                         [](const BibRecord& r) { return r.source_tag == SourceTag::citation_indexed; });
            std::vector<CoCitationNetwork> per_slice;
            for (const auto& s : slices) {
                const auto top = select_top_cited(cited, s, cfg.top_n);
                per_slice.push_back(build_cocitation_slice(top, s));
            }
            merged = merge_slices(per_slice);
        } else {
            TermNetworkOptions options;
            options.top_terms = cfg.top_n;
            options.per_slice = cfg.mode == NetworkMode::terms_per_slice;
            options.source = cfg.labels.source;
            merged = build_term_cooccurrence(corpus, slices, options, *stopwords);
        }
        log.push_back("network: " + std::to_string(merged.node_count()) + " nodes, " +
                      std::to_string(merged.edge_count()) + " edges merged over " + std::to_string(slices.size()) +
                      " slices");
        // The floor is a co-citation count, so it applies before any normalization.
        auto weighted = apply_weight_mode(threshold_edges(merged, cfg.min_edge_weight), cfg.weight_mode);
        if (weighted.edge_count() == 0) throw ContractError("empty network after thresholds");
        log.push_back("threshold: " + std::to_string(weighted.node_count()) + " nodes, " +
                      std::to_string(weighted.edge_count()) + " edges kept");
        return weighted;
    });

    // partition
    const ClusterPartition partition = stage("clustering", [&] {
        SpectralConfig sc = cfg.spectral;
        sc.seed = cfg.seed;
        auto p = spectral_partition(network, sc);
        log.push_back("clustering: k = " + std::to_string(p.k) + ", modularity " + fmt(p.modularity) +
                      ", mean silhouette " + fmt(p.mean_silhouette));
        return p;
    });

    // metrics
    const NodeMetrics metrics = stage("metrics", [&] {
        auto m = node_metrics(network, partition.assignment, cfg.pivotal_quantile);
        log.push_back("metrics: " + std::to_string(m.pivotal.size()) + " pivotal nodes");
        return m;
    });

    // labeling
    const auto labels = stage("labeling", [&] {
        const PhraseIndex index(corpus, cfg.labels.source, *stopwords);
        const auto members = partition.members();
        std::vector<CiterSet> sets;
        for (int c = 0; c < partition.k; ++c) {
            std::set<std::string> keys;
            for (std::size_t v : members[static_cast<std::size_t>(c)]) keys.insert(network.nodes()[v].key);
            sets.push_back(cfg.mode == NetworkMode::cocitation ? citer_set(c, keys, corpus)
                                                                : term_citer_set(c, keys, corpus, index));
        }
        const auto wants = [&](LabelAlgorithm a) {
            return std::find(cfg.labels.algorithms.begin(), cfg.labels.algorithms.end(), a) != cfg.labels.algorithms.end();
        };
        std::map<int, ClusterLabels> out;
        for (int c = 0; c < partition.k; ++c) {
            out[c].representative_citers = representative_citers(sets[static_cast<std::size_t>(c)], cfg.labels.representative_citers);
        }
        if (wants(LabelAlgorithm::tfidf)) {
            const auto lists = tfidf_labels(sets, index, cfg.labels.top_n, cfg.labels.idf_unit);
            for (int c = 0; c < partition.k; ++c) out[c].lists[LabelAlgorithm::tfidf] = lists[static_cast<std::size_t>(c)];
        }
        const auto populated = std::count_if(sets.begin(), sets.end(), [](const CiterSet& s) { return !s.citers.empty(); });
        if (wants(LabelAlgorithm::llr)) {
            if (populated >= 2) {
                const auto lists = llr_labels(sets, index, cfg.labels.top_n);
                for (int c = 0; c < partition.k; ++c) out[c].lists[LabelAlgorithm::llr] = lists[static_cast<std::size_t>(c)];
            } else {
                log.push_back("labeling: log-likelihood labels skipped, fewer than two clusters have citers");
            }
        }
        const bool dim1 = wants(LabelAlgorithm::lsa_dim1);
        const bool dim2 = wants(LabelAlgorithm::lsa_dim2);
        std::size_t lsa_skipped = 0;
        if (dim1 || dim2) {
            for (int c = 0; c < partition.k; ++c) {
                LsaLabels lsa;
                try {
                    lsa = lsa_labels(sets[static_cast<std::size_t>(c)], index, cfg.labels.lsa_per_dim,
                                     cfg.labels.lsa_unit, cfg.labels.lsa_scoring);
                } catch (const NumericError&) {
                    ++lsa_skipped;  // too few citers or terms for two dimensions
                }
                if (dim1) out[c].lists[LabelAlgorithm::lsa_dim1] = std::move(lsa.dim1);
                if (dim2) out[c].lists[LabelAlgorithm::lsa_dim2] = std::move(lsa.dim2);
            }
        }
        std::size_t citers = 0;
        for (const auto& s : sets) citers += s.citers.size();
        log.push_back("labeling: " + std::to_string(populated) + " of " + std::to_string(partition.k) +
                      " clusters have citers (" + std::to_string(citers) + " citer links), LSA skipped on " +
                      std::to_string(lsa_skipped));
        return out;
    });

    // layout
    const LayoutResult layout = stage("layout", [&] {
        LayoutConfig lc = cfg.layout;
        lc.seed = cfg.seed;
        const auto weights = attenuate_weights(network, partition.assignment, lc.between_cluster_factor);
        auto l = force_layout(network, weights, lc);
        log.push_back("layout: " + std::to_string(lc.iterations) + " iterations, scale " + fmt(l.scale));
        return l;
    });
    const auto hulls = stage("layout", [&] {
        return cluster_hulls(layout.positions, partition.assignment, cfg.hull_padding);
    });

    // snapshot
    result.snapshot = stage("snapshot", [&] {
        SnapshotParts parts;
        parts.config = cfg.to_json();
        parts.slices = slices;
        parts.network = &network;
        parts.partition = &partition;
        parts.labels = labels;
        for (const auto& r : corpus) parts.records[r.id] = &r;
        parts.layout = &layout;
        parts.hulls = hulls;
        parts.metrics = &metrics;
        auto doc = quantize_reals(build_snapshot(parts));
        const auto violations = validate_snapshot(doc);
        if (!violations.empty()) {
            throw ContractError("snapshot failed validation: " + violations.front().kind + ": " +
                                violations.front().message);
        }
        log.push_back("snapshot: " + std::to_string(network.node_count()) + " nodes, " +
                      std::to_string(partition.k) + " clusters");
        return doc;
    });
    return result;
}

}  // namespace cocite
