#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cocite/error.hpp"
#include "cocite/snapshot.hpp"

namespace cocite {

/// Raised when a snapshot handed to the server does not validate.
class InvalidSnapshotError : public Error {
public:
    explicit InvalidSnapshotError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// Read-only HTTP view of one snapshot file.
///
///   GET /api/snapshot  the file's bytes, unchanged
///   GET /api/health    {"schema_version", "status", "version"}
///
/// Anything else is 404 unless an assets directory is mounted at "/". The
/// document is loaded once; concurrent requests only read it.
class SnapshotServer {
public:
    /// Loads and validates the snapshot. Throws IoError when it cannot be read
    /// and InvalidSnapshotError when it has violations.
    explicit SnapshotServer(const std::string& snapshot_path, const std::string& assets_dir = "");
    ~SnapshotServer();

    SnapshotServer(const SnapshotServer&) = delete;
    SnapshotServer& operator=(const SnapshotServer&) = delete;

    /// Binds the listening socket; port 0 picks a free one. Returns the bound
    /// port. Throws IoError when the port is unavailable.
    int bind(const std::string& host, int port);

    /// Serves until stop() is called. bind() must have succeeded.
    void run();
    void stop();
    void wait_until_ready() const;

    const std::string& document() const noexcept { return document_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::string document_;
};

}  // namespace cocite
