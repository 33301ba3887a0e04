// Copyright 2026 The QMosaic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Asynchronous run service: a persisted job registry, a worker pool and the
// HTTP front end used by the studio.

#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "qmosaic/image.h"
#include "qmosaic/run.h"

namespace httplib {
class Server;
}

namespace qmosaic {

/// Environment variable naming the workspace root for `serve`.
inline constexpr const char *kWorkspaceEnv = "QMOSAIC_WORKSPACE";

enum class RunState { kQueued, kRunning, kDone, kFailed };

std::string to_string(RunState state);
RunState run_state_from_string(const std::string &name);

struct RunStatus {
    std::string id;
    RunState state = RunState::kQueued;
    int progress_done = 0;
    int progress_total = 0;
    std::string error;
    std::string output_hash;
    std::string created;  // UTC, ISO 8601

    bool terminal() const { return state == RunState::kDone || state == RunState::kFailed; }
    nlohmann::json to_json() const;
    static RunStatus from_json(const nlohmann::json &j);
};

struct ServiceOptions {
    std::filesystem::path workspace;
    int workers = 4;
};

/// Artifacts stored per finished run, by API name.
inline const std::vector<std::string> kArtifactNames = {"image", "sidecar", "trace", "template", "legend",
                                                        "request"};

class RunService {
  public:
    explicit RunService(ServiceOptions options);
    ~RunService();

    RunService(const RunService &) = delete;
    RunService &operator=(const RunService &) = delete;

    /// Validates, persists and queues a run; returns its id. Throws
    /// RequestError for bad requests or undecodable images.
    std::string submit(const RunRequest &request, std::span<const std::uint8_t> image);

    std::optional<RunStatus> status(const std::string &id) const;
    std::vector<RunStatus> list() const;

    enum class CancelResult { kCancelled, kNotFound, kTerminal };
    CancelResult cancel(const std::string &id);

    /// Path of a finished run's artifact; nullopt for unknown names or ids.
    std::optional<std::filesystem::path> artifact(const std::string &id, const std::string &name) const;

    /// Blocks until the run is terminal or the timeout expires.
    std::optional<RunStatus> wait(const std::string &id, std::chrono::milliseconds timeout) const;

    std::filesystem::path run_dir(const std::string &id) const;
    const ServiceOptions &options() const { return options_; }

  private:
    struct Entry {
        RunStatus status;
        bool cancel_requested = false;
    };

    void load_existing();
    void worker_loop();
    void execute(const std::string &id);
    void persist_status(const RunStatus &status) const;
    // Applies `update` unless the run is already terminal; persists on change.
    bool update(const std::string &id, const std::function<void(RunStatus &)> &update);

    ServiceOptions options_;
    mutable std::mutex mu_;
    mutable std::condition_variable changed_;
    std::condition_variable work_ready_;
    std::map<std::string, Entry> runs_;
    std::deque<std::string> queue_;
    std::uint64_t next_id_ = 1;
    bool stopping_ = false;
    std::vector<std::thread> workers_;
};

/// JSON/PNG HTTP API over a RunService.
class HttpFrontend {
  public:
    explicit HttpFrontend(RunService &service);
    ~HttpFrontend();

    /// Binds to host:port (port 0 picks a free one); returns the bound port
    /// or -1.
    int bind(const std::string &host, int port);
    /// Serves until stop(); call after bind().
    void run();
    void stop();

  private:
    RunService &service_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace qmosaic
