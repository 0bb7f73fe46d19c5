#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cocite/clustering.hpp"
#include "cocite/labeling.hpp"
#include "cocite/layout.hpp"
#include "cocite/network.hpp"

namespace cocite {

enum class InputFormat { wos, lines };
enum class NetworkMode { cocitation, terms, terms_per_slice };

struct LabelConfig {
    TextSource source = TextSource::title;
    std::vector<LabelAlgorithm> algorithms{LabelAlgorithm::tfidf, LabelAlgorithm::llr, LabelAlgorithm::lsa_dim1,
                                           LabelAlgorithm::lsa_dim2};
    std::size_t top_n = 5;
    std::size_t lsa_per_dim = 5;
    std::size_t representative_citers = 5;
    IdfUnit idf_unit = IdfUnit::cluster;
    LsaUnit lsa_unit = LsaUnit::word;
    LsaScoring lsa_scoring = LsaScoring::weighted;
};

struct PipelineConfig {
    std::vector<std::string> inputs;
    InputFormat format = InputFormat::wos;
    std::optional<int> from_year;  // defaults to the earliest record year
    std::optional<int> to_year;    // defaults to the latest record year
    int slice_years = 1;
    std::size_t top_n = 30;
    NetworkMode mode = NetworkMode::cocitation;
    WeightMode weight_mode = WeightMode::raw;
    double min_edge_weight = 1.0;
    SpectralConfig spectral;
    LabelConfig labels;
    LayoutConfig layout;
    double hull_padding = 20.0;
    double pivotal_quantile = 0.9;
    std::uint64_t seed = 42;          // drives k-means and layout
    std::string stopwords_path;       // empty: built-in English list
    std::string output;               // not echoed into the snapshot

    /// Throws ConfigError when an invariant does not hold.
    void validate() const;

    /// Everything except the output path, in the same key layout from_json reads.
    nlohmann::json to_json() const;

    /// Overlays the keys present in `doc` onto `base`. Unknown keys are an error
    /// so that typos do not silently fall back to defaults.
    static PipelineConfig from_json(const nlohmann::json& doc, PipelineConfig base);
    static PipelineConfig from_json(const nlohmann::json& doc);
};

struct PipelineResult {
    nlohmann::json snapshot;
    std::vector<std::string> log;  // one line per stage with its counts
};

/// ingest -> slicing -> per-slice networks -> merge -> spectral partition ->
/// metrics -> labeling -> layout -> snapshot. ConfigError and IoError pass
/// through; any other failure is rethrown as StageError naming the stage.
PipelineResult run_pipeline(const PipelineConfig& cfg);

const char* to_string(NetworkMode mode);
const char* to_string(InputFormat format);

}  // namespace cocite
