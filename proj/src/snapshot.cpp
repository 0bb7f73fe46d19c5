#include "cocite/snapshot.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "cocite/error.hpp"

namespace cocite {

using nlohmann::json;

namespace {

json point_json(Point p) { return json::array({p.x, p.y}); }

json candidate_list(const std::vector<LabelCandidate>& list) {
    json out = json::array();
    for (const auto& c : list) out.push_back({{"term", c.term}, {"score", c.score}, {"frequency", c.frequency}});
    return out;
}

}  // namespace

json build_snapshot(const SnapshotParts& parts) {
    if (!parts.network || !parts.partition || !parts.layout || !parts.metrics) {
        throw ContractError("snapshot parts are incomplete");
    }
    const auto& net = *parts.network;
    const auto& partition = *parts.partition;
    const auto key = [&](std::size_t i) -> const std::string& { return net.nodes()[i].key; };

    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["config"] = parts.config;

    json slices = json::array();
    for (const auto& s : parts.slices) {
        slices.push_back({{"index", s.index}, {"start_year", s.start_year}, {"end_year", s.end_year}});
    }
    doc["slices"] = std::move(slices);

    json nodes = json::array();
    for (const auto& n : net.nodes()) {
        nodes.push_back({{"key", n.key}, {"total_citations", n.total_citations}, {"first_slice", n.first_slice}});
    }
    doc["nodes"] = std::move(nodes);

    json edges = json::array();
    for (const auto& e : net.edges()) {
        json counts = json::object();
        for (const auto& [s, c] : e.per_slice_counts) counts[std::to_string(s)] = c;
        edges.push_back({{"source", key(e.source)},
                         {"target", key(e.target)},
                         {"weight", e.weight},
                         {"per_slice_counts", std::move(counts)}});
    }
    doc["edges"] = std::move(edges);

    json assignment = json::object();
    json node_sil = json::object();
    for (std::size_t i = 0; i < net.node_count(); ++i) {
        assignment[key(i)] = partition.assignment[i];
        node_sil[key(i)] = partition.node_silhouette[i];
    }
    json cluster_sil = json::object();
    for (std::size_t c = 0; c < partition.cluster_mean_silhouette.size(); ++c) {
        cluster_sil[std::to_string(c)] = partition.cluster_mean_silhouette[c];
    }
    doc["partition"] = {{"k", partition.k},
                        {"assignment", std::move(assignment)},
                        {"modularity", partition.modularity},
                        {"node_silhouette", std::move(node_sil)},
                        {"cluster_mean_silhouette", std::move(cluster_sil)},
                        {"mean_silhouette", partition.mean_silhouette},
                        {"silhouette_degenerate", partition.silhouette_degenerate}};

    json labels = json::object();
    json citers = json::object();
    for (int c = 0; c < partition.k; ++c) {
        const std::string id = std::to_string(c);
        json per_algorithm = json::object();
        json reps = json::array();
        if (const auto it = parts.labels.find(c); it != parts.labels.end()) {
            for (const auto& [algorithm, list] : it->second.lists) per_algorithm[to_string(algorithm)] = candidate_list(list);
            for (const auto& citer : it->second.representative_citers) {
                json entry = {{"id", citer.record_id}, {"coverage", citer.coverage}};
                if (const auto rec = parts.records.find(citer.record_id); rec != parts.records.end()) {
                    entry["title"] = rec->second->title;
                    entry["year"] = rec->second->year;
                }
                reps.push_back(std::move(entry));
            }
        }
        labels[id] = std::move(per_algorithm);
        citers[id] = std::move(reps);
    }
    doc["labels"] = std::move(labels);
    doc["representative_citers"] = std::move(citers);

    json positions = json::object();
    for (std::size_t i = 0; i < net.node_count(); ++i) positions[key(i)] = point_json(parts.layout->positions[i]);
    json hulls = json::object();
    for (const auto& [c, polygon] : parts.hulls) {
        json poly = json::array();
        for (const auto& p : polygon) poly.push_back(point_json(p));
        hulls[std::to_string(c)] = std::move(poly);
    }
    const auto& b = parts.layout->bounds;
    doc["layout"] = {{"positions", std::move(positions)},
                     {"hulls", std::move(hulls)},
                     {"bounds", {{"min_x", b.min_x}, {"min_y", b.min_y}, {"max_x", b.max_x}, {"max_y", b.max_y}}}};

    json betweenness = json::object();
    for (std::size_t i = 0; i < net.node_count(); ++i) betweenness[key(i)] = parts.metrics->betweenness[i];
    json pivotal = json::array();
    for (std::size_t i : parts.metrics->pivotal) pivotal.push_back(key(i));
    json activity = json::object();
    for (const auto& [s, c] : parts.metrics->slice_activity) activity[std::to_string(s)] = c;
    doc["metrics"] = {{"betweenness", std::move(betweenness)},
                      {"pivotal", std::move(pivotal)},
                      {"slice_activity", std::move(activity)}};
    return doc;
}

json quantize_reals(json value) {
    if (value.is_number_float()) {
        const double v = value.get<double>();
        if (!std::isfinite(v)) return nullptr;
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.9g", v);
        const double q = std::strtod(buf, nullptr);
        return q == 0.0 ? 0.0 : q;  // no negative zero
    }
    if (value.is_array() || value.is_object()) {
        for (auto& child : value) child = quantize_reals(std::move(child));
    }
    return value;
}

std::string serialize_snapshot(const json& snapshot) {
    return quantize_reals(snapshot).dump(2) + "\n";
}

namespace {

class Validator {
public:
    explicit Validator(const json& doc) : doc_(doc) {}

    std::vector<Violation> run() {
        if (!check_shape()) return std::move(out_);
        collect_slices();
        collect_nodes();
        check_edges();
        check_partition();
        check_labels();
        check_layout();
        check_metrics();
        for (const auto& [id, where] : dangling_) {
            std::string places;
            for (const auto& w : where) places += (places.empty() ? "" : ", ") + w;
            add("dangling_reference", "'" + id + "' is referenced but not defined (" + places + ")");
        }
        return std::move(out_);
    }

private:
    void add(std::string kind, std::string message) { out_.push_back({std::move(kind), std::move(message)}); }

    void dangling(const std::string& id, const std::string& where) {
        auto& places = dangling_[id];
        if (std::find(places.begin(), places.end(), where) == places.end()) places.push_back(where);
    }

    bool check_shape() {
        if (!doc_.is_object()) {
            add("schema", "snapshot is not a JSON object");
            return false;
        }
        const std::pair<const char*, json::value_t> fields[] = {
            {"schema_version", json::value_t::string}, {"config", json::value_t::object},
            {"slices", json::value_t::array},          {"nodes", json::value_t::array},
            {"edges", json::value_t::array},           {"partition", json::value_t::object},
            {"labels", json::value_t::object},         {"representative_citers", json::value_t::object},
            {"layout", json::value_t::object},         {"metrics", json::value_t::object}};
        bool ok = true;
        for (const auto& [name, type] : fields) {
            const auto it = doc_.find(name);
            if (it == doc_.end() || it->type() != type) {
                add("schema", std::string("missing or mistyped field '") + name + "'");
                ok = false;
            }
        }
        if (ok && doc_["schema_version"] != kSchemaVersion) {
            add("schema", "unsupported schema_version '" + doc_["schema_version"].get<std::string>() + "'");
            ok = false;
        }
        if (!ok) return false;
        const auto require = [&](const json& parent, const char* path, const char* name, json::value_t type) {
            const auto it = parent.find(name);
            bool matches = it != parent.end() && it->type() == type;
            if (it != parent.end() && type == json::value_t::number_float) matches = it->is_number();
            if (it != parent.end() && type == json::value_t::number_integer) matches = it->is_number_integer();
            if (!matches) {
                add("schema", std::string("missing or mistyped field '") + path + "." + name + "'");
                ok = false;
            }
        };
        const auto& p = doc_["partition"];
        require(p, "partition", "k", json::value_t::number_integer);
        require(p, "partition", "assignment", json::value_t::object);
        require(p, "partition", "modularity", json::value_t::number_float);
        require(p, "partition", "node_silhouette", json::value_t::object);
        require(p, "partition", "cluster_mean_silhouette", json::value_t::object);
        require(p, "partition", "mean_silhouette", json::value_t::number_float);
        const auto& l = doc_["layout"];
        require(l, "layout", "positions", json::value_t::object);
        require(l, "layout", "hulls", json::value_t::object);
        const auto& m = doc_["metrics"];
        require(m, "metrics", "betweenness", json::value_t::object);
        require(m, "metrics", "pivotal", json::value_t::array);
        require(m, "metrics", "slice_activity", json::value_t::object);
        return ok;
    }

    void collect_slices() {
        for (const auto& s : doc_["slices"]) {
            if (!s.is_object() || !s.contains("index") || !s["index"].is_number_integer()) {
                add("schema", "slice entry without an integer index");
                continue;
            }
            const int index = s["index"].get<int>();
            if (!slices_.insert(index).second) add("duplicate", "slice index " + std::to_string(index) + " repeated");
            if (s.contains("start_year") && s.contains("end_year") && s["start_year"] > s["end_year"]) {
                add("invariant", "slice " + std::to_string(index) + " starts after it ends");
            }
        }
    }

    void collect_nodes() {
        for (const auto& n : doc_["nodes"]) {
            if (!n.is_object() || !n.contains("key") || !n["key"].is_string()) {
                add("schema", "node entry without a string key");
                continue;
            }
            const std::string key = n["key"].get<std::string>();
            if (!nodes_.insert(key).second) add("duplicate", "node '" + key + "' repeated");
            if (n.contains("first_slice") && n["first_slice"].is_number_integer() &&
                !slices_.contains(n["first_slice"].get<int>())) {
                dangling("slice " + std::to_string(n["first_slice"].get<int>()), "nodes");
            }
        }
    }

    bool raw_weights() const {
        const auto& cfg = doc_["config"];
        return !cfg.contains("weight_mode") || cfg["weight_mode"] == "raw";
    }

    void check_edges() {
        std::set<std::pair<std::string, std::string>> pairs;
        for (std::size_t i = 0; i < doc_["edges"].size(); ++i) {
            const auto& e = doc_["edges"][i];
            const std::string where = "edges";
            if (!e.is_object() || !e.contains("source") || !e.contains("target") || !e["source"].is_string() ||
                !e["target"].is_string() || !e.contains("weight") || !e["weight"].is_number() ||
                !e.contains("per_slice_counts") || !e["per_slice_counts"].is_object()) {
                add("schema", "edge " + std::to_string(i) + " is malformed");
                continue;
            }
            std::string a = e["source"].get<std::string>();
            std::string b = e["target"].get<std::string>();
            if (!nodes_.contains(a)) dangling(a, where);
            if (!nodes_.contains(b)) dangling(b, where);
            if (a == b) add("invariant", "self-loop on '" + a + "'");
            if (b < a) std::swap(a, b);
            if (!pairs.insert({a, b}).second) add("duplicate", "edge '" + a + "' -- '" + b + "' repeated");
            const double w = e["weight"].get<double>();
            if (!(w > 0.0) || !std::isfinite(w)) add("invariant", "edge '" + a + "' -- '" + b + "' has non-positive weight");
            double total = 0.0;
            for (const auto& [s, c] : e["per_slice_counts"].items()) {
                if (!slices_.contains(std::atoi(s.c_str()))) dangling("slice " + s, "edges.per_slice_counts");
                if (!c.is_number_integer() || c.get<long long>() < 1) {
                    add("invariant", "edge '" + a + "' -- '" + b + "' has a non-positive slice count");
                    continue;
                }
                total += c.get<double>();
            }
            if (raw_weights() && std::fabs(total - w) > 1e-6 * std::max(1.0, w)) {
                add("invariant", "edge '" + a + "' -- '" + b + "' weight differs from its slice counts");
            }
        }
    }

    void check_partition() {
        const auto& p = doc_["partition"];
        std::map<int, std::size_t> sizes;
        for (const auto& [key, c] : p["assignment"].items()) {
            if (!nodes_.contains(key)) dangling(key, "partition.assignment");
            if (!c.is_number_integer() || c.get<long long>() < 0) {
                add("invariant", "node '" + key + "' has an invalid cluster id");
                continue;
            }
            ++sizes[c.get<int>()];
            assignment_[key] = c.get<int>();
        }
        for (const auto& key : nodes_) {
            if (!assignment_.contains(key)) add("missing", "node '" + key + "' has no cluster");
        }
        for (const auto& [c, n] : sizes) clusters_.insert(c);
        cluster_sizes_ = sizes;
        const int k = p["k"].get<int>();
        int expected = 0;
        bool contiguous = true;
        for (int c : clusters_) contiguous = contiguous && (c == expected++);
        if (!contiguous) {
            std::string ids;
            for (int c : clusters_) ids += (ids.empty() ? "" : ", ") + std::to_string(c);
            add("contiguity", "cluster ids {" + ids + "} are not contiguous from 0");
        } else if (static_cast<int>(clusters_.size()) != k) {
            add("invariant", "k = " + std::to_string(k) + " but " + std::to_string(clusters_.size()) + " clusters are used");
        }

        const double q = p["modularity"].get<double>();
        if (q < -0.5 - 1e-9 || q > 1.0 + 1e-9) add("invariant", "modularity outside [-0.5, 1]");

        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& [key, s] : p["node_silhouette"].items()) {
            if (!nodes_.contains(key)) dangling(key, "partition.node_silhouette");
            if (!s.is_number()) {
                add("schema", "silhouette of '" + key + "' is not a number");
                continue;
            }
            const double v = s.get<double>();
            if (v < -1.0 - 1e-9 || v > 1.0 + 1e-9) add("invariant", "silhouette of '" + key + "' outside [-1, 1]");
            sum += v;
            ++count;
        }
        if (count > 0 && std::fabs(sum / static_cast<double>(count) - p["mean_silhouette"].get<double>()) > 1e-6) {
            add("invariant", "mean_silhouette is not the mean of node silhouettes");
        }
        for (const auto& [c, s] : p["cluster_mean_silhouette"].items()) check_cluster_ref(c, "partition.cluster_mean_silhouette");
    }

    void check_cluster_ref(const std::string& id, const std::string& where) {
        char* end = nullptr;
        const long c = std::strtol(id.c_str(), &end, 10);
        if (end == id.c_str() || *end != '\0' || !clusters_.contains(static_cast<int>(c))) dangling("cluster " + id, where);
    }

    void check_labels() {
        for (const auto& [c, algorithms] : doc_["labels"].items()) {
            check_cluster_ref(c, "labels");
            if (!algorithms.is_object()) {
                add("schema", "labels of cluster " + c + " are not an object");
                continue;
            }
            for (const auto& [algorithm, list] : algorithms.items()) {
                if (!list.is_array()) {
                    add("schema", "labels." + c + "." + algorithm + " is not a list");
                    continue;
                }
                double previous = INFINITY;
                for (const auto& cand : list) {
                    if (!cand.is_object() || !cand.contains("term") || !cand.contains("score") || !cand["score"].is_number() ||
                        !cand.contains("frequency") || !cand["frequency"].is_number_integer()) {
                        add("schema", "malformed label candidate in cluster " + c);
                        continue;
                    }
                    const double score = cand["score"].get<double>();
                    if (score > previous) add("invariant", "labels." + c + "." + algorithm + " is not sorted by score");
                    previous = score;
                    if (cand["frequency"].get<long long>() < 1) add("invariant", "label with zero frequency in cluster " + c);
                }
            }
        }
        for (const auto& [c, list] : doc_["representative_citers"].items()) {
            check_cluster_ref(c, "representative_citers");
            if (!list.is_array()) {
                add("schema", "representative_citers." + c + " is not a list");
                continue;
            }
            const auto size_it = cluster_sizes_.find(std::atoi(c.c_str()));
            for (const auto& citer : list) {
                if (!citer.is_object() || !citer.contains("id") || !citer.contains("coverage") ||
                    !citer["coverage"].is_number_integer()) {
                    add("schema", "malformed representative citer in cluster " + c);
                    continue;
                }
                const auto coverage = citer["coverage"].get<long long>();
                if (coverage < 1 || (size_it != cluster_sizes_.end() && coverage > static_cast<long long>(size_it->second))) {
                    add("invariant", "citer coverage out of range in cluster " + c);
                }
            }
        }
    }

    static bool read_point(const json& j, Point& p) {
        if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) return false;
        p = {j[0].get<double>(), j[1].get<double>()};
        return std::isfinite(p.x) && std::isfinite(p.y);
    }

    void check_layout() {
        const auto& layout = doc_["layout"];
        std::map<std::string, Point> positions;
        for (const auto& [key, xy] : layout["positions"].items()) {
            if (!nodes_.contains(key)) dangling(key, "layout.positions");
            Point p;
            if (!read_point(xy, p)) {
                add("invariant", "position of '" + key + "' is not a finite pair");
                continue;
            }
            positions[key] = p;
        }
        for (const auto& key : nodes_) {
            if (!positions.contains(key)) add("missing", "node '" + key + "' has no position");
        }
        for (const auto& [c, poly] : layout["hulls"].items()) {
            check_cluster_ref(c, "layout.hulls");
            std::vector<Point> polygon;
            bool ok = poly.is_array();
            for (const auto& xy : ok ? poly : json::array()) {
                Point p;
                ok = ok && read_point(xy, p);
                polygon.push_back(p);
            }
            if (!ok) {
                add("invariant", "hull of cluster " + c + " is malformed");
                continue;
            }
            const int cluster = std::atoi(c.c_str());
            for (const auto& [key, p] : positions) {
                const auto a = assignment_.find(key);
                if (a == assignment_.end() || a->second != cluster || !nodes_.contains(key)) continue;
                if (!polygon_contains(polygon, p, 1e-3)) {
                    add("invariant", "hull of cluster " + c + " does not contain '" + key + "'");
                }
            }
        }
    }

    void check_metrics() {
        const auto& m = doc_["metrics"];
        for (const auto& [key, v] : m["betweenness"].items()) {
            if (!nodes_.contains(key)) dangling(key, "metrics.betweenness");
            if (!v.is_number() || v.get<double>() < 0.0) add("invariant", "betweenness of '" + key + "' is negative");
        }
        for (const auto& key : m["pivotal"]) {
            if (!key.is_string()) {
                add("schema", "pivotal entry is not a node key");
                continue;
            }
            if (!nodes_.contains(key.get<std::string>())) dangling(key.get<std::string>(), "metrics.pivotal");
        }
        std::map<int, double> totals;
        for (const auto& e : doc_["edges"]) {
            if (!e.is_object() || !e.contains("per_slice_counts") || !e["per_slice_counts"].is_object()) continue;
            for (const auto& [s, c] : e["per_slice_counts"].items()) {
                if (c.is_number()) totals[std::atoi(s.c_str())] += c.get<double>();
            }
        }
        for (const auto& [s, v] : m["slice_activity"].items()) {
            const int index = std::atoi(s.c_str());
            if (!slices_.contains(index)) dangling("slice " + s, "metrics.slice_activity");
            if (!v.is_number() || std::fabs(v.get<double>() - totals[index]) > 1e-6) {
                add("invariant", "slice_activity of slice " + s + " differs from the edge counts");
            }
        }
    }

    const json& doc_;
    std::vector<Violation> out_;
    std::set<int> slices_;
    std::set<std::string> nodes_;
    std::map<std::string, int> assignment_;
    std::set<int> clusters_;
    std::map<int, std::size_t> cluster_sizes_;
    std::map<std::string, std::vector<std::string>> dangling_;
};

}  // namespace

std::vector<Violation> validate_snapshot(const json& snapshot) { return Validator(snapshot).run(); }

std::vector<Violation> validate_snapshot_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read snapshot '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    json doc;
    try {
        doc = json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        return {{"schema", std::string("not valid JSON: ") + e.what()}};
    }
    return validate_snapshot(doc);
}

namespace {

std::string fixed(double v, int digits) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << v;
    return out.str();
}

}  // namespace

std::string format_cluster_labels(const json& snapshot, int cluster_id) {
    const std::string id = std::to_string(cluster_id);
    const auto& partition = snapshot.at("partition");
    std::size_t size = 0;
    for (const auto& [key, c] : partition.at("assignment").items()) size += c.get<int>() == cluster_id ? 1 : 0;
    if (size == 0) throw ContractError("snapshot has no cluster " + id);

    double silhouette = 0.0;
    if (const auto& means = partition.at("cluster_mean_silhouette"); means.contains(id)) {
        silhouette = means.at(id).get<double>();
    }
    const json empty = json::object();
    const json& labels = snapshot.at("labels").contains(id) ? snapshot.at("labels").at(id) : empty;

    auto row = [&](const char* algorithm, bool show_frequency, bool show_score) {
        std::string line;
        if (!labels.contains(algorithm)) return std::string("-");
        for (const auto& c : labels.at(algorithm)) {
            if (!line.empty()) line += "; ";
            if (show_score) line += "(" + fixed(c.at("score").get<double>(), 2) + ") ";
            if (show_frequency) line += "(" + std::to_string(c.at("frequency").get<long long>()) + ") ";
            line += c.at("term").get<std::string>();
        }
        return line.empty() ? std::string("-") : line;
    };

    std::ostringstream out;
    out << "Cluster #" << id << "  size " << size << "  mean silhouette " << fixed(silhouette, 4) << "\n";
    out << "  tf*idf          : " << row("tfidf", false, true) << "\n";
    out << "  log-likelihood  : " << row("llr", true, false) << "\n";
    out << "  LSA dimension 1 : " << row("lsa_dim1", false, false) << "\n";
    out << "  LSA dimension 2 : " << row("lsa_dim2", false, false) << "\n";
    out << "  Most representative citers:\n";
    const auto& reps = snapshot.at("representative_citers");
    if (!reps.contains(id) || reps.at(id).empty()) out << "    -\n";
    if (reps.contains(id)) {
        for (const auto& c : reps.at(id)) {
            out << "    " << c.at("coverage").get<long long>() << " / " << size << "  ";
            if (c.contains("title")) out << c.at("title").get<std::string>();
            out << " [" << c.at("id").get<std::string>();
            if (c.contains("year")) out << ", " << c.at("year").get<int>();
            out << "]\n";
        }
    }
    return out.str();
}

}  // namespace cocite
