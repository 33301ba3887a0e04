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

#include <chrono>
#include <filesystem>
#include <random>
#include <thread>

#include "gtest/gtest.h"
#include "httplib.h"
#include "json.hpp"

#include "qmosaic/image.h"
#include "qmosaic/run.h"
#include "qmosaic/service.h"

using namespace qmosaic;
using namespace std::chrono_literals;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

Bytes noise_png(int w, int h, std::uint64_t seed) {
    Image img(w, h, 3);
    std::mt19937_64 rng(seed);
    for (auto &b : img.pixels) b = static_cast<std::uint8_t>(rng());
    return encode_png(img);
}

std::span<const std::uint8_t> span_of(const std::string &s) {
    return {reinterpret_cast<const std::uint8_t *>(s.data()), s.size()};
}

class Workspace {
  public:
    Workspace() {
        path_ = fs::temp_directory_path() /
                (std::string("qmosaic_svc_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(path_);
    }
    ~Workspace() { fs::remove_all(path_); }
    const fs::path &path() const { return path_; }

  private:
    fs::path path_;
};

// Service plus HTTP front end on a free loopback port.
class Server {
  public:
    explicit Server(const fs::path &workspace, int workers = 4)
        : service_(ServiceOptions{.workspace = workspace, .workers = workers}), frontend_(service_) {
        port_ = frontend_.bind("127.0.0.1", 0);
        thread_ = std::thread([this] { frontend_.run(); });
    }
    ~Server() {
        frontend_.stop();
        thread_.join();
    }
    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port_);
        c.set_read_timeout(30, 0);
        return c;
    }
    RunService &service() { return service_; }
    int port() const { return port_; }

  private:
    RunService service_;
    HttpFrontend frontend_;
    int port_ = -1;
    std::thread thread_;
};

httplib::Result post_run(httplib::Client &c, const json &request, const Bytes &image) {
    httplib::MultipartFormDataItems items = {
        {"request", request.dump(), "request.json", "application/json"},
        {"image", std::string(image.begin(), image.end()), "in.png", "image/png"},
    };
    return c.Post("/api/runs", items);
}

json poll_until_terminal(httplib::Client &c, const std::string &id) {
    const auto deadline = std::chrono::steady_clock::now() + 60s;
    for (;;) {
        auto res = c.Get("/api/runs/" + id);
        if (!res || res->status != 200) return json();
        json j = json::parse(res->body);
        if (j["state"] == "done" || j["state"] == "failed") return j;
        if (std::chrono::steady_clock::now() > deadline) return j;
        std::this_thread::sleep_for(10ms);
    }
}

}  // namespace

TEST(RunStatusJson, round_trip) {
    RunStatus s;
    s.id = "run-000042";
    s.state = RunState::kDone;
    s.progress_done = 13;
    s.progress_total = 13;
    s.output_hash = "abcd";
    s.created = "2026-01-01T00:00:00Z";
    const json j = s.to_json();
    EXPECT_EQ(j["artifacts"]["image"], "/api/runs/run-000042/image");
    const RunStatus back = RunStatus::from_json(j);
    EXPECT_EQ(back.id, s.id);
    EXPECT_EQ(back.state, s.state);
    EXPECT_EQ(back.progress_done, 13);
    EXPECT_EQ(back.output_hash, "abcd");
    EXPECT_THROW(run_state_from_string("sleeping"), std::invalid_argument);
}

TEST(Service, runs_match_direct_pipeline) {
    Workspace ws;
    RunService svc(ServiceOptions{.workspace = ws.path(), .workers = 4});
    const Bytes png = noise_png(64, 52, 1);
    std::vector<std::string> ids;
    std::vector<RunRequest> requests;
    for (int i = 0; i < 8; ++i) {
        requests.push_back(parse_request(json{{"seed", i}, {"shots", 1024}}));
        ids.push_back(svc.submit(requests.back(), png));
    }
    EXPECT_EQ(ids.front(), "run-000001");
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto s = svc.wait(ids[i], 60s);
        ASSERT_TRUE(s);
        ASSERT_EQ(s->state, RunState::kDone) << s->error;
        EXPECT_EQ(s->progress_done, s->progress_total);
        const RunOutput direct = run_pipeline(requests[i], png);
        EXPECT_EQ(read_file(*svc.artifact(ids[i], "image")), direct.png);
        EXPECT_EQ(read_text_file(*svc.artifact(ids[i], "sidecar")), direct.sidecar_text);
        EXPECT_EQ(s->output_hash, direct.sidecar.output_hash);
    }
    EXPECT_EQ(svc.list().size(), 8u);
    EXPECT_FALSE(svc.artifact(ids[0], "nonsense"));
    EXPECT_FALSE(svc.artifact("run-999999", "image"));
}

TEST(Service, rejects_bad_submissions) {
    Workspace ws;
    RunService svc(ServiceOptions{.workspace = ws.path(), .workers = 1});
    const std::string junk = "not an image";
    EXPECT_THROW(svc.submit(parse_request(json::object()), span_of(junk)), RequestError);
    RunRequest req = parse_request(json::object());
    req.region = Rect{0, 0, 500, 500};
    EXPECT_THROW(svc.submit(req, noise_png(64, 52, 2)), RequestError);
    req.region.reset();
    req.steps = 3;
    EXPECT_THROW(svc.submit(req, noise_png(64, 52, 2)), RequestError);
    EXPECT_TRUE(svc.list().empty());
}

TEST(Service, cancel_and_terminal_states) {
    Workspace ws;
    RunService svc(ServiceOptions{.workspace = ws.path(), .workers = 1});
    const Bytes png = noise_png(64, 52, 3);
    // The first run occupies the only worker while the second is cancelled
    // in the queue.
    const std::string busy = svc.submit(parse_request(json{{"shots", 3000000}}), png);
    const std::string queued = svc.submit(parse_request(json::object()), png);
    EXPECT_EQ(svc.cancel(queued), RunService::CancelResult::kCancelled);
    EXPECT_EQ(svc.status(queued)->state, RunState::kFailed);
    EXPECT_EQ(svc.status(queued)->error, "cancelled");
    EXPECT_EQ(svc.cancel(queued), RunService::CancelResult::kTerminal);
    EXPECT_EQ(svc.cancel("run-123456"), RunService::CancelResult::kNotFound);
    const auto done = svc.wait(busy, 120s);
    ASSERT_TRUE(done);
    EXPECT_EQ(done->state, RunState::kDone);
    EXPECT_FALSE(svc.artifact(queued, "image"));
}

TEST(Service, restart_requeues_interrupted_runs) {
    Workspace ws;
    std::string finished;
    {
        RunService svc(ServiceOptions{.workspace = ws.path(), .workers = 1});
        finished = svc.submit(parse_request(json{{"seed", 1}}), noise_png(64, 52, 4));
        ASSERT_EQ(svc.wait(finished, 60s)->state, RunState::kDone);
    }
    // Fake a run that was mid-flight when the process died.
    const fs::path dir = ws.path() / "runs" / "run-000007";
    fs::create_directories(dir);
    write_file(dir / "input.bin", noise_png(64, 52, 5));
    write_text_file(dir / "request.json", request_to_json(parse_request(json{{"seed", 2}})).dump());
    RunStatus s;
    s.id = "run-000007";
    s.state = RunState::kRunning;
    s.progress_done = 4;
    s.progress_total = 13;
    write_text_file(dir / "status.json", s.to_json().dump());

    RunService svc(ServiceOptions{.workspace = ws.path(), .workers = 2});
    EXPECT_EQ(svc.status(finished)->state, RunState::kDone);
    const auto resumed = svc.wait("run-000007", 60s);
    ASSERT_TRUE(resumed);
    EXPECT_EQ(resumed->state, RunState::kDone) << resumed->error;
    const std::string next = svc.submit(parse_request(json::object()), noise_png(64, 52, 6));
    EXPECT_EQ(next, "run-000008");
    // Status survives on disk.
    const json on_disk = json::parse(read_text_file(dir / "status.json"));
    EXPECT_EQ(on_disk["state"], "done");
}

TEST(Http, full_run_cycle) {
    Workspace ws;
    Server server(ws.path());
    ASSERT_GT(server.port(), 0);
    auto c = server.client();

    auto health = c.Get("/api/health");
    ASSERT_TRUE(health);
    EXPECT_EQ(health->status, 200);
    EXPECT_EQ(health->get_header_value("Access-Control-Allow-Origin"), "*");

    const Bytes png = noise_png(64, 52, 7);
    const json request{{"seed", 3}, {"shots", 1024}};
    auto posted = post_run(c, request, png);
    ASSERT_TRUE(posted);
    ASSERT_EQ(posted->status, 202) << posted->body;
    const std::string id = json::parse(posted->body)["id"];
    EXPECT_EQ(posted->get_header_value("Location"), "/api/runs/" + id);

    const json final = poll_until_terminal(c, id);
    ASSERT_EQ(final["state"], "done") << final.dump();

    const RunOutput direct = run_pipeline(parse_request(request), png);
    auto image = c.Get("/api/runs/" + id + "/image");
    ASSERT_TRUE(image);
    EXPECT_EQ(image->status, 200);
    EXPECT_EQ(image->get_header_value("Content-Type"), "image/png");
    EXPECT_EQ(image->body, std::string(direct.png.begin(), direct.png.end()));
    auto sidecar = c.Get("/api/runs/" + id + "/sidecar");
    ASSERT_TRUE(sidecar);
    EXPECT_EQ(sidecar->body, direct.sidecar_text);
    auto trace = c.Get("/api/runs/" + id + "/trace");
    ASSERT_TRUE(trace);
    EXPECT_EQ(json::parse(trace->body)["traces"][0]["num_slices"], 13);
    for (const char *name : {"template", "legend", "request"}) {
        auto r = c.Get("/api/runs/" + id + "/" + name);
        ASSERT_TRUE(r);
        EXPECT_EQ(r->status, 200) << name;
    }

    auto listed = c.Get("/api/runs");
    ASSERT_TRUE(listed);
    EXPECT_EQ(json::parse(listed->body)["runs"].size(), 1u);

    auto del = c.Delete("/api/runs/" + id);
    ASSERT_TRUE(del);
    EXPECT_EQ(del->status, 409);

    auto pre = c.Options("/api/runs");
    ASSERT_TRUE(pre);
    EXPECT_EQ(pre->status, 204);
}

TEST(Http, error_statuses) {
    Workspace ws;
    Server server(ws.path(), 1);
    auto c = server.client();
    const Bytes png = noise_png(64, 52, 8);

    auto missing = c.Get("/api/runs/run-424242");
    ASSERT_TRUE(missing);
    EXPECT_EQ(missing->status, 404);
    auto missing_artifact = c.Get("/api/runs/run-424242/image");
    ASSERT_TRUE(missing_artifact);
    EXPECT_EQ(missing_artifact->status, 404);
    auto missing_delete = c.Delete("/api/runs/run-424242");
    ASSERT_TRUE(missing_delete);
    EXPECT_EQ(missing_delete->status, 404);

    auto bad_mode = post_run(c, json{{"mode", "spiral"}}, png);
    ASSERT_TRUE(bad_mode);
    EXPECT_EQ(bad_mode->status, 400);
    EXPECT_TRUE(json::parse(bad_mode->body).contains("error"));
    auto bad_steps = post_run(c, json{{"steps", 2}}, png);
    ASSERT_TRUE(bad_steps);
    EXPECT_EQ(bad_steps->status, 400);
    auto bad_image = post_run(c, json::object(), Bytes{1, 2, 3});
    ASSERT_TRUE(bad_image);
    EXPECT_EQ(bad_image->status, 400);
    auto not_multipart = c.Post("/api/runs", "{}", "application/json");
    ASSERT_TRUE(not_multipart);
    EXPECT_EQ(not_multipart->status, 400);
    httplib::MultipartFormDataItems broken = {{"request", "{not json", "", "application/json"},
                                              {"image", std::string(png.begin(), png.end()), "in.png", "image/png"}};
    auto broken_json = c.Post("/api/runs", broken);
    ASSERT_TRUE(broken_json);
    EXPECT_EQ(broken_json->status, 400);

    // A slow run holds the single worker; the next one waits in the queue.
    auto slow = post_run(c, json{{"shots", 3000000}}, png);
    ASSERT_TRUE(slow);
    ASSERT_EQ(slow->status, 202);
    auto waiting = post_run(c, json::object(), png);
    ASSERT_TRUE(waiting);
    const std::string id = json::parse(waiting->body)["id"];
    auto early = c.Get("/api/runs/" + id + "/image");
    ASSERT_TRUE(early);
    EXPECT_EQ(early->status, 409);
    auto unknown_artifact = c.Get("/api/runs/" + id + "/bogus");
    ASSERT_TRUE(unknown_artifact);
    EXPECT_EQ(unknown_artifact->status, 404);
    auto cancelled = c.Delete("/api/runs/" + id);
    ASSERT_TRUE(cancelled);
    EXPECT_EQ(cancelled->status, 200);
    EXPECT_EQ(json::parse(cancelled->body)["state"], "failed");
    EXPECT_EQ(poll_until_terminal(c, json::parse(slow->body)["id"])["state"], "done");
}

TEST(Http, concurrent_clients) {
    Workspace ws;
    Server server(ws.path(), 4);
    const Bytes png = noise_png(64, 52, 9);
    std::vector<std::thread> clients;
    std::vector<std::string> states(8);
    for (int i = 0; i < 8; ++i) {
        clients.emplace_back([&, i] {
            auto c = server.client();
            auto posted = post_run(c, json{{"seed", i}, {"shots", 1024}}, png);
            if (!posted || posted->status != 202) return;
            states[i] = poll_until_terminal(c, json::parse(posted->body)["id"])["state"];
        });
    }
    for (auto &t : clients) t.join();
    for (int i = 0; i < 8; ++i) EXPECT_EQ(states[i], "done") << i;
    EXPECT_EQ(server.service().list().size(), 8u);
}
