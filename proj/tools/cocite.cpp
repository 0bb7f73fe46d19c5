// Command-line front end: build, validate, serve, labels, synth.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cocite/error.hpp"
#include "cocite/pipeline.hpp"
#include "cocite/server.hpp"
#include "cocite/snapshot.hpp"
#include "cocite/synthetic.hpp"

namespace {

enum Exit { kOk = 0, kInvalid = 1, kIo = 2, kStage = 3 };

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cocite::IoError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || !out.flush()) throw cocite::IoError("cannot write '" + path + "'");
}

nlohmann::json parse_snapshot(const std::string& path) {
    try {
        return nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw cocite::ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
}

cocite::SnapshotServer* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Co-citation and term network analysis: build snapshots, inspect cluster labels, serve them to the viewer"};
    app.set_version_flag("--version", cocite::kVersion);
    app.require_subcommand(1);

    // build: every flag overrides the matching key of --config.
    auto* build = app.add_subcommand("build", "Run the pipeline and write a snapshot");
    std::string config_path;
    std::vector<std::string> inputs;
    std::string format, mode, k, label_source, weight_mode, out_path, stopwords;
    int from_year = 0, to_year = 0, slice_years = 0, iterations = 0;
    std::size_t top_n = 0;
    std::uint64_t seed = 0;
    double min_edge_weight = 0.0, beta = 0.0;
    build->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    build->add_option("--input", inputs, "Input file (repeatable)");
    build->add_option("--format", format, "wos or lines")->check(CLI::IsMember({"wos", "lines"}));
    build->add_option("--from", from_year, "First year of the study interval");
    build->add_option("--to", to_year, "Last year of the study interval");
    build->add_option("--slice-years", slice_years, "Slice length in years");
    build->add_option("--top-n", top_n, "Records per slice (cocitation) or terms (term modes)");
    build->add_option("--mode", mode, "cocitation, terms or terms-per-slice")
        ->check(CLI::IsMember({"cocitation", "terms", "terms-per-slice"}));
    build->add_option("--k", k, "auto or a fixed cluster count");
    build->add_option("--label-source", label_source, "title or index")->check(CLI::IsMember({"title", "index"}));
    build->add_option("--weight-mode", weight_mode, "raw or cosine")->check(CLI::IsMember({"raw", "cosine"}));
    build->add_option("--min-edge-weight", min_edge_weight, "Drop edges lighter than this");
    build->add_option("--beta", beta, "Layout weight factor for between-cluster edges");
    build->add_option("--iterations", iterations, "Layout iterations");
    build->add_option("--stopwords", stopwords, "Stopword file replacing the built-in list");
    build->add_option("--seed", seed, "Seed for every random choice");
    build->add_option("--out", out_path, "Snapshot path");
    bool quiet = false;
    build->add_flag("--quiet", quiet, "Do not print stage counts");

    auto* validate = app.add_subcommand("validate", "Check a snapshot for consistency");
    std::string validate_path;
    validate->add_option("path", validate_path, "Snapshot file")->required();

    auto* serve = app.add_subcommand("serve", "Serve a snapshot read-only over HTTP");
    std::string serve_path, host = "127.0.0.1", assets;
    int port = 8080;
    serve->add_option("path", serve_path, "Snapshot file")->required();
    serve->add_option("--port", port, "TCP port (0 picks a free one)")->capture_default_str()->check(CLI::Range(0, 65535));
    serve->add_option("--host", host, "Interface to bind")->capture_default_str();
    serve->add_option("--assets", assets, "Directory of viewer files to serve at /");

    auto* labels = app.add_subcommand("labels", "Compare the labeling algorithms for one cluster");
    std::string labels_path;
    int cluster = 0;
    labels->add_option("path", labels_path, "Snapshot file")->required();
    labels->add_option("--cluster", cluster, "Cluster id")->required();

    auto* synth = app.add_subcommand("synth", "Write one of the synthetic corpora");
    std::string synth_kind, synth_out;
    std::uint64_t synth_seed = 2009;
    synth->add_option("kind", synth_kind, "citations or awards")->required()->check(CLI::IsMember({"citations", "awards"}));
    synth->add_option("--out", synth_out, "Output file")->required();
    synth->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (*build) {
            cocite::PipelineConfig cfg;
            if (!config_path.empty()) {
                nlohmann::json doc;
                try {
                    doc = nlohmann::json::parse(read_text(config_path));
                } catch (const nlohmann::json::parse_error& e) {
                    throw cocite::ConfigError("config '" + config_path + "' is not valid JSON: " + e.what());
                }
                cfg = cocite::PipelineConfig::from_json(doc);
            }
            nlohmann::json overrides = nlohmann::json::object();
            if (!inputs.empty()) overrides["inputs"] = inputs;
            if (build->count("--format")) overrides["format"] = format;
            if (build->count("--from")) overrides["from_year"] = from_year;
            if (build->count("--to")) overrides["to_year"] = to_year;
            if (build->count("--slice-years")) overrides["slice_years"] = slice_years;
            if (build->count("--top-n")) overrides["top_n"] = top_n;
            if (build->count("--mode")) overrides["mode"] = mode;
            if (build->count("--weight-mode")) overrides["weight_mode"] = weight_mode;
            if (build->count("--min-edge-weight")) overrides["min_edge_weight"] = min_edge_weight;
            if (build->count("--stopwords")) overrides["stopwords"] = stopwords;
            if (build->count("--seed")) overrides["seed"] = seed;
            if (build->count("--out")) overrides["output"] = out_path;
            if (build->count("--k")) {
                if (k == "auto") {
                    overrides["clustering"]["k"] = "auto";
                } else {
                    try {
                        std::size_t used = 0;
                        const int value = std::stoi(k, &used);
                        if (used != k.size()) throw std::invalid_argument(k);
                        overrides["clustering"]["k"] = value;
                    } catch (const std::exception&) {
                        throw cocite::ConfigError("--k must be 'auto' or an integer, got '" + k + "'");
                    }
                }
            }
            if (build->count("--label-source")) overrides["labels"]["source"] = label_source;
            if (build->count("--beta")) overrides["layout"]["between_cluster_factor"] = beta;
            if (build->count("--iterations")) overrides["layout"]["iterations"] = iterations;
            cfg = cocite::PipelineConfig::from_json(overrides, cfg);
            if (cfg.output.empty()) throw cocite::ConfigError("no output path: pass --out or set 'output' in the config");

            const auto result = cocite::run_pipeline(cfg);
            if (!quiet) {
                for (const auto& line : result.log) std::cerr << line << "\n";
            }
            write_text(cfg.output, cocite::serialize_snapshot(result.snapshot));
            if (!quiet) std::cerr << "wrote " << cfg.output << "\n";
            return kOk;
        }
        if (*validate) {
            const auto violations = cocite::validate_snapshot_file(validate_path);
            if (violations.empty()) {
                std::cout << validate_path << ": ok\n";
                return kOk;
            }
            std::cout << validate_path << ": " << violations.size() << " violation(s)\n";
            for (const auto& v : violations) std::cout << "  [" << v.kind << "] " << v.message << "\n";
            return kInvalid;
        }
        if (*serve) {
            cocite::SnapshotServer server(serve_path, assets);
            const int bound = server.bind(host, port);
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "serving " << serve_path << " on http://" << host << ":" << bound << "\n";
            server.run();
            g_server = nullptr;
            return kOk;
        }
        if (*labels) {
            std::cout << cocite::format_cluster_labels(parse_snapshot(labels_path), cluster);
            return kOk;
        }
        if (*synth) {
            if (synth_kind == "citations") {
                write_text(synth_out, cocite::synthetic_citation_corpus(synth_seed).wos_text);
            } else {
                write_text(synth_out, cocite::synthetic_award_corpus(synth_seed).jsonl);
            }
            return kOk;
        }
    } catch (const cocite::InvalidSnapshotError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const cocite::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kInvalid;
    } catch (const cocite::ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const cocite::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const cocite::StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kStage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kStage;
    }
    return kOk;
}
