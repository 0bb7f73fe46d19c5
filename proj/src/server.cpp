#include "cocite/server.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>

namespace cocite {

namespace {

std::string summarize(const std::vector<Violation>& violations) {
    std::string out = std::to_string(violations.size()) + " snapshot violation(s)";
    for (const auto& v : violations) out += "\n  [" + v.kind + "] " + v.message;
    return out;
}

}  // namespace

InvalidSnapshotError::InvalidSnapshotError(std::vector<Violation> violations)
    : Error(summarize(violations)), violations_(std::move(violations)) {}

struct SnapshotServer::Impl {
    httplib::Server http;
    bool bound = false;
};

SnapshotServer::SnapshotServer(const std::string& snapshot_path, const std::string& assets_dir)
    : impl_(std::make_unique<Impl>()) {
    std::ifstream in(snapshot_path, std::ios::binary);
    if (!in) throw IoError("cannot read snapshot '" + snapshot_path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    document_ = buffer.str();

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document_);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidSnapshotError({{"schema", std::string("not valid JSON: ") + e.what()}});
    }
    if (auto violations = validate_snapshot(doc); !violations.empty()) {
        throw InvalidSnapshotError(std::move(violations));
    }

    const std::string health =
        nlohmann::json{{"status", "ok"}, {"schema_version", kSchemaVersion}, {"version", kVersion}}.dump() + "\n";
    auto& http = impl_->http;
    // httplib defaults to SO_REUSEPORT, which would let a second server share a
    // busy port. Plain SO_REUSEADDR still allows quick restarts.
    http.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    http.Get("/api/snapshot", [this](const httplib::Request&, httplib::Response& res) {
        res.set_content(document_, "application/json");
    });
    http.Get("/api/health", [health](const httplib::Request&, httplib::Response& res) {
        res.set_content(health, "application/json");
    });
    if (!assets_dir.empty()) {
        if (!std::filesystem::is_directory(assets_dir)) throw IoError("assets directory '" + assets_dir + "' not found");
        http.set_mount_point("/", assets_dir);
    }
    // Read-only: other methods on the API are refused rather than silently ignored.
    const auto refuse = [](const httplib::Request&, httplib::Response& res) { res.status = 405; };
    for (const char* path : {"/api/snapshot", "/api/health"}) {
        http.Post(path, refuse);
        http.Put(path, refuse);
        http.Delete(path, refuse);
    }
}

SnapshotServer::~SnapshotServer() { stop(); }

int SnapshotServer::bind(const std::string& host, int port) {
    auto& http = impl_->http;
    int bound = port;
    if (port == 0) {
        bound = http.bind_to_any_port(host);
        if (bound < 0) throw IoError("cannot bind to any port on " + host);
    } else if (!http.bind_to_port(host, port)) {
        throw IoError("cannot bind to " + host + ":" + std::to_string(port) + " (port busy or not permitted)");
    }
    impl_->bound = true;
    return bound;
}

void SnapshotServer::run() {
    if (!impl_->bound) throw ContractError("bind() must succeed before run()");
    impl_->http.listen_after_bind();
}

void SnapshotServer::stop() {
    if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

void SnapshotServer::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace cocite
