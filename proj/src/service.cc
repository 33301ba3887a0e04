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

#include "qmosaic/service.h"

#include <cstdio>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "httplib.h"

#include "qmosaic/template.h"

namespace qmosaic {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Cancelled : std::runtime_error {
    Cancelled() : std::runtime_error("cancelled") {}
};

struct ArtifactInfo {
    const char *file;
    const char *content_type;
};

const std::map<std::string, ArtifactInfo> &artifact_table() {
    static const std::map<std::string, ArtifactInfo> table = {
        {"image", {"output.png", "image/png"}},
        {"sidecar", {"output.qmplan", "application/json"}},
        {"trace", {"trace.json", "application/json"}},
        {"template", {"template.png", "image/png"}},
        {"legend", {"legend.csv", "text/csv"}},
        {"request", {"request.json", "application/json"}},
    };
    return table;
}

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string format_id(std::uint64_t n) {
    std::ostringstream os;
    os << "run-" << std::setw(6) << std::setfill('0') << n;
    return os.str();
}

// Write-then-rename so readers never see a half-written file.
void write_atomic(const fs::path &path, std::span<const std::uint8_t> data) {
    const fs::path tmp = path.string() + ".tmp";
    write_file(tmp, data);
    fs::rename(tmp, path);
}

void write_atomic(const fs::path &path, const std::string &text) {
    write_atomic(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t *>(text.data()),
                                                      text.size()));
}

}  // namespace

std::string to_string(RunState state) {
    switch (state) {
        case RunState::kQueued:
            return "queued";
        case RunState::kRunning:
            return "running";
        case RunState::kDone:
            return "done";
        case RunState::kFailed:
            return "failed";
    }
    return "failed";
}

RunState run_state_from_string(const std::string &name) {
    if (name == "queued") return RunState::kQueued;
    if (name == "running") return RunState::kRunning;
    if (name == "done") return RunState::kDone;
    if (name == "failed") return RunState::kFailed;
    throw std::invalid_argument("unknown run state '" + name + "'");
}

json RunStatus::to_json() const {
    json j{{"id", id},
           {"state", to_string(state)},
           {"progress", {{"done", progress_done}, {"total", progress_total}}},
           {"created", created}};
    j["error"] = error.empty() ? json(nullptr) : json(error);
    j["output_hash"] = output_hash.empty() ? json(nullptr) : json(output_hash);
    if (state == RunState::kDone) {
        json links = json::object();
        for (const auto &name : kArtifactNames) links[name] = "/api/runs/" + id + "/" + name;
        j["artifacts"] = std::move(links);
    }
    return j;
}

RunStatus RunStatus::from_json(const json &j) {
    RunStatus s;
    s.id = j.at("id").get<std::string>();
    s.state = run_state_from_string(j.at("state").get<std::string>());
    s.progress_done = j.at("progress").value("done", 0);
    s.progress_total = j.at("progress").value("total", 0);
    s.created = j.value("created", std::string());
    if (j.contains("error") && !j["error"].is_null()) s.error = j["error"].get<std::string>();
    if (j.contains("output_hash") && !j["output_hash"].is_null()) s.output_hash = j["output_hash"].get<std::string>();
    return s;
}

RunService::RunService(ServiceOptions options) : options_(std::move(options)) {
    if (options_.workspace.empty()) {
        throw std::invalid_argument("service needs a workspace directory");
    }
    if (options_.workers < 1) {
        throw std::invalid_argument("service needs at least one worker");
    }
    fs::create_directories(options_.workspace / "runs");
    load_existing();
    for (int i = 0; i < options_.workers; ++i) {
        workers_.emplace_back([this] { worker_loop(); });
    }
}

RunService::~RunService() {
    {
        std::lock_guard lock(mu_);
        stopping_ = true;
        for (auto &[id, entry] : runs_) {
            if (entry.status.state == RunState::kRunning) entry.cancel_requested = true;
        }
    }
    work_ready_.notify_all();
    for (auto &t : workers_) t.join();
}

fs::path RunService::run_dir(const std::string &id) const {
    return options_.workspace / "runs" / id;
}

void RunService::load_existing() {
    std::vector<std::string> requeue;
    for (const auto &dir : fs::directory_iterator(options_.workspace / "runs")) {
        const fs::path status_file = dir.path() / "status.json";
        if (!dir.is_directory() || !fs::exists(status_file)) continue;
        RunStatus s;
        try {
            s = RunStatus::from_json(json::parse(read_text_file(status_file)));
        } catch (const std::exception &e) {
            std::fprintf(stderr, "skipping %s: %s\n", dir.path().c_str(), e.what());
            continue;
        }
        if (s.id.rfind("run-", 0) == 0) {
            try {
                next_id_ = std::max<std::uint64_t>(next_id_, std::stoull(s.id.substr(4)) + 1);
            } catch (const std::exception &) {
            }
        }
        // Interrupted runs start over; their outputs were never published.
        if (!s.terminal()) {
            s.state = RunState::kQueued;
            s.progress_done = 0;
            persist_status(s);
            requeue.push_back(s.id);
        }
        runs_[s.id] = Entry{s, false};
    }
    std::sort(requeue.begin(), requeue.end());
    queue_.insert(queue_.end(), requeue.begin(), requeue.end());
}

void RunService::persist_status(const RunStatus &status) const {
    write_atomic(run_dir(status.id) / "status.json", status.to_json().dump(2) + "\n");
}

std::string RunService::submit(const RunRequest &request, std::span<const std::uint8_t> image) {
    request.validate();
    Image decoded;
    try {
        decoded = decode_image(image);
    } catch (const ImageError &e) {
        throw RequestError(e.what());
    }
    if (request.region) {
        try {
            slice(decoded, *request.region, request.grid.rows, request.grid.columns);
        } catch (const std::invalid_argument &e) {
            throw RequestError(e.what());
        }
    }

    std::string id;
    {
        std::lock_guard lock(mu_);
        id = format_id(next_id_++);
    }
    const fs::path dir = run_dir(id);
    fs::create_directories(dir);
    write_atomic(dir / "input.bin", image);
    write_atomic(dir / "request.json", request_to_json(request).dump(2) + "\n");

    RunStatus s;
    s.id = id;
    s.progress_total = (request.steps + 1) * (request.mode == PlanMode::kMirroredEvolution ? 2 : 1);
    s.created = utc_now();
    persist_status(s);
    {
        std::lock_guard lock(mu_);
        runs_[id] = Entry{s, false};
        queue_.push_back(id);
    }
    work_ready_.notify_one();
    changed_.notify_all();
    return id;
}

std::optional<RunStatus> RunService::status(const std::string &id) const {
    std::lock_guard lock(mu_);
    const auto it = runs_.find(id);
    if (it == runs_.end()) return std::nullopt;
    return it->second.status;
}

std::vector<RunStatus> RunService::list() const {
    std::lock_guard lock(mu_);
    std::vector<RunStatus> out;
    out.reserve(runs_.size());
    for (const auto &[id, entry] : runs_) out.push_back(entry.status);
    return out;
}

RunService::CancelResult RunService::cancel(const std::string &id) {
    std::lock_guard lock(mu_);
    const auto it = runs_.find(id);
    if (it == runs_.end()) return CancelResult::kNotFound;
    RunStatus &s = it->second.status;
    if (s.terminal()) return CancelResult::kTerminal;
    it->second.cancel_requested = true;
    s.state = RunState::kFailed;
    s.error = "cancelled";
    persist_status(s);
    changed_.notify_all();
    return CancelResult::kCancelled;
}

std::optional<fs::path> RunService::artifact(const std::string &id, const std::string &name) const {
    const auto info = artifact_table().find(name);
    if (info == artifact_table().end()) return std::nullopt;
    const auto s = status(id);
    if (!s || s->state != RunState::kDone) return std::nullopt;
    return run_dir(id) / info->second.file;
}

std::optional<RunStatus> RunService::wait(const std::string &id, std::chrono::milliseconds timeout) const {
    std::unique_lock lock(mu_);
    const auto it = runs_.find(id);
    if (it == runs_.end()) return std::nullopt;
    changed_.wait_for(lock, timeout, [&] { return it->second.status.terminal(); });
    return it->second.status;
}

bool RunService::update(const std::string &id, const std::function<void(RunStatus &)> &fn) {
    std::lock_guard lock(mu_);
    auto &entry = runs_.at(id);
    if (entry.status.terminal()) return false;
    fn(entry.status);
    persist_status(entry.status);
    changed_.notify_all();
    return true;
}

void RunService::worker_loop() {
    for (;;) {
        std::string id;
        {
            std::unique_lock lock(mu_);
            work_ready_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
            if (stopping_) return;
            id = queue_.front();
            queue_.pop_front();
            auto &entry = runs_.at(id);
            if (entry.status.state != RunState::kQueued) continue;
            entry.status.state = RunState::kRunning;
            persist_status(entry.status);
        }
        changed_.notify_all();
        execute(id);
    }
}

void RunService::execute(const std::string &id) {
    const fs::path dir = run_dir(id);
    try {
        const RunRequest request = parse_request(json::parse(read_text_file(dir / "request.json")));
        const Bytes input = read_file(dir / "input.bin");
        const RunOutput out = run_pipeline(request, input, [&](int done, int total) {
            {
                std::lock_guard lock(mu_);
                if (runs_.at(id).cancel_requested || stopping_) throw Cancelled();
            }
            update(id, [&](RunStatus &s) {
                s.progress_done = done;
                s.progress_total = total;
            });
        });
        const Image tmpl = render_template(out.image, sidecar_grid(out.sidecar), out.sidecar.plan);
        write_atomic(dir / "output.png", out.png);
        write_atomic(dir / "output.qmplan", out.sidecar_text);
        write_atomic(dir / "trace.json", trace_matrix_json(out.sidecar).dump() + "\n");
        write_atomic(dir / "template.png", encode_png(tmpl));
        write_atomic(dir / "legend.csv", legend_csv(out.sidecar.plan));
        update(id, [&](RunStatus &s) {
            s.state = RunState::kDone;
            s.output_hash = out.sidecar.output_hash;
        });
    } catch (const Cancelled &) {
        // Either cancel() already marked the run failed, or the service is
        // shutting down and the run stays non-terminal for the next start.
    } catch (const std::exception &e) {
        update(id, [&](RunStatus &s) {
            s.state = RunState::kFailed;
            s.error = e.what();
        });
    }
}

// ---------------------------------------------------------------------------

namespace {

void send_json(httplib::Response &res, int code, const json &body) {
    res.status = code;
    res.set_content(body.dump(2) + "\n", "application/json");
}

void send_error(httplib::Response &res, int code, const std::string &message) {
    send_json(res, code, json{{"error", message}});
}

}  // namespace

HttpFrontend::HttpFrontend(RunService &service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
    auto &srv = *server_;
    srv.set_payload_max_length(std::size_t{256} << 20);
    srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                             {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                             {"Access-Control-Allow-Headers", "Content-Type"}});

    srv.Options(R"(/api/.*)", [](const httplib::Request &, httplib::Response &res) { res.status = 204; });

    srv.Get("/api/health", [](const httplib::Request &, httplib::Response &res) {
        send_json(res, 200, json{{"status", "ok"}});
    });

    srv.Post("/api/runs", [this](const httplib::Request &req, httplib::Response &res) {
        if (!req.is_multipart_form_data()) {
            send_error(res, 400, "expected multipart/form-data with 'request' and 'image' parts");
            return;
        }
        if (!req.has_file("image")) {
            send_error(res, 400, "missing 'image' part");
            return;
        }
        json body = json::object();
        if (req.has_file("request")) {
            try {
                body = json::parse(req.get_file_value("request").content);
            } catch (const json::parse_error &e) {
                send_error(res, 400, std::string("request is not valid JSON: ") + e.what());
                return;
            }
        }
        const auto &image = req.get_file_value("image").content;
        try {
            const RunRequest request = parse_request(body);
            const std::string id = service_.submit(
                request, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t *>(image.data()),
                                                       image.size()));
            res.set_header("Location", "/api/runs/" + id);
            send_json(res, 202, service_.status(id)->to_json());
        } catch (const RequestError &e) {
            send_error(res, 400, e.what());
        }
    });

    srv.Get("/api/runs", [this](const httplib::Request &, httplib::Response &res) {
        json runs = json::array();
        for (const auto &s : service_.list()) runs.push_back(s.to_json());
        send_json(res, 200, json{{"runs", std::move(runs)}});
    });

    srv.Get(R"(/api/runs/([A-Za-z0-9_-]+))", [this](const httplib::Request &req, httplib::Response &res) {
        const auto s = service_.status(req.matches[1]);
        if (!s) return send_error(res, 404, "unknown run " + std::string(req.matches[1]));
        send_json(res, 200, s->to_json());
    });

    srv.Get(R"(/api/runs/([A-Za-z0-9_-]+)/([a-z]+))", [this](const httplib::Request &req, httplib::Response &res) {
        const std::string id = req.matches[1];
        const std::string name = req.matches[2];
        const auto info = artifact_table().find(name);
        if (info == artifact_table().end()) return send_error(res, 404, "unknown artifact '" + name + "'");
        const auto s = service_.status(id);
        if (!s) return send_error(res, 404, "unknown run " + id);
        if (s->state != RunState::kDone) {
            return send_error(res, 409, "run " + id + " is " + to_string(s->state) + ", artifacts need a done run");
        }
        try {
            const Bytes data = read_file(*service_.artifact(id, name));
            res.status = 200;
            res.set_content(std::string(data.begin(), data.end()), info->second.content_type);
        } catch (const std::exception &e) {
            send_error(res, 500, e.what());
        }
    });

    srv.Delete(R"(/api/runs/([A-Za-z0-9_-]+))", [this](const httplib::Request &req, httplib::Response &res) {
        const std::string id = req.matches[1];
        switch (service_.cancel(id)) {
            case RunService::CancelResult::kNotFound:
                return send_error(res, 404, "unknown run " + id);
            case RunService::CancelResult::kTerminal:
                return send_error(res, 409, "run " + id + " is already " + to_string(service_.status(id)->state));
            case RunService::CancelResult::kCancelled:
                return send_json(res, 200, service_.status(id)->to_json());
        }
    });

    srv.set_exception_handler([](const httplib::Request &, httplib::Response &res, std::exception_ptr ep) {
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception &e) {
            send_error(res, 500, e.what());
        } catch (...) {
            send_error(res, 500, "internal error");
        }
    });
}

HttpFrontend::~HttpFrontend() = default;

int HttpFrontend::bind(const std::string &host, int port) {
    if (port == 0) return server_->bind_to_any_port(host);
    return server_->bind_to_port(host, port) ? port : -1;
}

void HttpFrontend::run() { server_->listen_after_bind(); }

void HttpFrontend::stop() { server_->stop(); }

}  // namespace qmosaic
