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

#include "qmosaic/cli.h"

#include <algorithm>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qmosaic/run.h"
#include "qmosaic/service.h"
#include "qmosaic/template.h"
#include "qmosaic/text_formats.h"

namespace qmosaic {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Flags that feed a RunRequest. Unset flags leave the config file (or the
// built-in defaults) alone.
struct RequestFlags {
    std::string config;
    std::optional<std::string> mode;
    std::optional<int> columns;
    std::optional<int> rows;
    std::optional<std::string> region;
    std::optional<std::string> origin;
    std::optional<std::string> couplings;
    std::optional<std::string> j;
    std::optional<std::string> hz;
    std::optional<std::string> hx;
    bool open_boundary = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> seed_a;
    std::optional<std::uint64_t> seed_b;
    std::optional<double> dt;
    std::optional<double> total_time;
    std::optional<int> steps;
    std::optional<std::int64_t> shots;
    bool exact = false;
    std::optional<double> shift_strength;
    std::optional<std::string> pins_file;
    std::optional<std::string> palette_file;
    bool include_initial = false;
};

void add_coupling_flags(CLI::App *app, RequestFlags &f) {
    app->add_option("--couplings", f.couplings,
                    "All three coupling arrays: a number, a comma list, 'random' or LOW:HIGH");
    app->add_option("--j", f.j, "ZZ couplings J_n (same syntax as --couplings)");
    app->add_option("--hz", f.hz, "Longitudinal fields (same syntax as --couplings)");
    app->add_option("--hx", f.hx, "Transverse fields (same syntax as --couplings)");
    app->add_flag("--open-boundary", f.open_boundary, "Drop the bond between the last and first site");
    app->add_option("--seed", f.seed, "Seed for random couplings (and sampling in row/colour mode)");
    app->add_option("--dt", f.dt, "Trotter step size (default 0.1)");
    app->add_option("--time", f.total_time, "Total evolution time; sets dt = time / steps");
    app->add_option("--steps", f.steps, "Trotter steps (must match the grid)");
    app->add_option("--shots", f.shots, "Shots per time slice for the sampled backend (default 4096)");
    app->add_flag("--exact", f.exact, "Use exact expectation values instead of sampling");
}

void add_request_flags(CLI::App *app, RequestFlags &f) {
    app->add_option("--config", f.config, "JSON request file; flags override its fields");
    app->add_option("--mode", f.mode, "row, mirrored or colors")->check(CLI::IsMember({"row", "mirrored", "colors"}));
    app->add_option("--cols", f.columns, "Grid columns (= qubits)");
    app->add_option("--rows", f.rows, "Grid rows");
    app->add_option("--region", f.region, "Transformed region X,Y,WIDTH,HEIGHT (default: whole image)");
    app->add_option("--origin", f.origin, "Row holding the first time slice: bottom or top")
        ->check(CLI::IsMember({"bottom", "top"}));
    add_coupling_flags(app, f);
    app->add_option("--seed-a", f.seed_a, "Mirrored mode: sampling seed of the upper run");
    app->add_option("--seed-b", f.seed_b, "Mirrored mode: sampling seed of the lower run");
    app->add_option("-c,--shift-strength", f.shift_strength, "Reordering strength c (default 10)");
    app->add_option("--pins", f.pins_file, "Pin mask file, one 'row,col' per line");
    app->add_option("--palette", f.palette_file, "Colour mode palette file, one hex colour per line");
    app->add_flag("--include-initial", f.include_initial, "Mirrored mode: show slice 0 in the outermost rows");
}

template <typename T>
T parse_number(const std::string &text, const char *what) {
    std::size_t used = 0;
    T value{};
    try {
        if constexpr (std::is_integral_v<T>) {
            value = static_cast<T>(std::stoll(text, &used));
        } else {
            value = std::stod(text, &used);
        }
    } catch (const std::logic_error &) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw RequestError(std::string("bad ") + what + " '" + text + "'");
    return value;
}

json coupling_value(const std::string &text) {
    if (text == "random") return "random";
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        return json{{"low", parse_number<double>(text.substr(0, colon), "coupling bound")},
                    {"high", parse_number<double>(text.substr(colon + 1), "coupling bound")}};
    }
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(parse_number<double>(item, "coupling value"));
    if (values.empty()) throw RequestError("empty coupling value");
    return values.size() == 1 ? json(values[0]) : json(values);
}

Rect parse_region(const std::string &text) {
    std::vector<int> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(parse_number<int>(item, "region field"));
    if (v.size() != 4) throw RequestError("region must be X,Y,WIDTH,HEIGHT");
    return Rect{v[0], v[1], v[2], v[3]};
}

json load_config(const std::string &path) {
    if (path.empty()) return json::object();
    try {
        json j = json::parse(read_text_file(path));
        if (!j.is_object()) throw RequestError("config must be a JSON object");
        return j;
    } catch (const json::parse_error &e) {
        throw RequestError("config " + path + " is not valid JSON: " + e.what());
    }
}

void apply_coupling_flags(json &j, const RequestFlags &f) {
    if (f.couplings) j["couplings"] = coupling_value(*f.couplings);
    if (f.j || f.hz || f.hx) {
        json c = j.value("couplings", json());
        const bool per_term = c.is_object() && !c.contains("kind") && !c.contains("values") && !c.contains("low");
        if (!per_term) {
            const json shared = c.is_null() ? json("random") : c;
            c = json{{"j", shared}, {"hz", shared}, {"hx", shared}};
        }
        if (f.j) c["j"] = coupling_value(*f.j);
        if (f.hz) c["hz"] = coupling_value(*f.hz);
        if (f.hx) c["hx"] = coupling_value(*f.hx);
        j["couplings"] = c;
    }
    if (f.open_boundary) j["periodic"] = false;
    if (f.seed) {
        j["seed"] = *f.seed;
        // A config written out by a previous run pins each random term's seed;
        // an explicit --seed wins over those.
        if (j.contains("couplings") && j["couplings"].is_object()) {
            auto reseed = [&](json &term) {
                if (term.is_object() && term.value("kind", "") == "random_uniform") term["seed"] = *f.seed;
            };
            reseed(j["couplings"]);
            for (const char *key : {"j", "hz", "hx"}) {
                if (j["couplings"].contains(key)) reseed(j["couplings"][key]);
            }
        }
    }
    if (f.dt) j["dt"] = *f.dt;
    if (f.total_time) {
        j["total_time"] = *f.total_time;
        j.erase("dt");
    }
    if (f.steps) j["steps"] = *f.steps;
    if (f.shots) {
        j["shots"] = *f.shots;
        j["backend"] = "sampled";
    }
    if (f.exact) j["backend"] = "exact";
}

// flags > config file > defaults
RunRequest build_request(const RequestFlags &f) {
    json j = load_config(f.config);
    if (f.mode) j["mode"] = *f.mode;
    if ((f.mode || f.rows) && !f.steps) j.erase("steps");  // re-derive from the new grid
    if (f.columns || f.rows || f.origin) {
        json g = j.value("grid", json::object());
        if (f.columns) g["columns"] = *f.columns;
        if (f.rows) g["rows"] = *f.rows;
        if (f.origin) g["origin_row"] = *f.origin;
        j["grid"] = g;
    }
    if (f.region) j["region"] = parse_region(*f.region);
    apply_coupling_flags(j, f);
    if (f.seed_a) j["seed_a"] = *f.seed_a;
    if (f.seed_b) j["seed_b"] = *f.seed_b;
    if (f.shift_strength) j["shift_strength"] = *f.shift_strength;
    if (f.pins_file) j["pins"] = parse_pin_mask(read_text_file(*f.pins_file));
    if (f.palette_file) {
        json colours = json::array();
        for (const auto &c : parse_palette(read_text_file(*f.palette_file))) colours.push_back(to_hex(c));
        j["palette"] = colours;
    }
    if (f.include_initial) j["include_initial_slice"] = true;
    return parse_request(j);
}

fs::path default_output(const fs::path &input) {
    fs::path out = input;
    out.replace_filename(input.stem().string() + ".qm.png");
    return out;
}

fs::path sidecar_path_for(const fs::path &output) {
    fs::path p = output;
    p.replace_extension(kSidecarExtension);
    return p;
}

ProgressFn stderr_progress(bool quiet) {
    if (quiet) return {};
    return [](int done, int total) {
        std::fprintf(stderr, "\rsimulating slice %d/%d", done, total);
        if (done == total) std::fputc('\n', stderr);
    };
}

int cmd_transform(const RequestFlags &f, const std::string &image, std::string output, std::string sidecar,
                  bool quiet) {
    const RunRequest request = build_request(f);
    const Bytes input = read_file(image);
    const RunOutput out = run_pipeline(request, input, stderr_progress(quiet));
    if (output.empty()) output = default_output(image).string();
    if (sidecar.empty()) sidecar = sidecar_path_for(output).string();
    write_file(output, out.png);
    write_text_file(sidecar, out.sidecar_text);
    std::cout << "wrote " << output << " and " << sidecar << " (output hash " << out.sidecar.output_hash << ")\n";
    return kExitOk;
}

int cmd_simulate(const RequestFlags &f, int sites, const std::string &initial, const std::string &output) {
    json j = load_config(f.config);
    apply_coupling_flags(j, f);
    const std::uint64_t seed = j.value("seed", std::uint64_t{0});
    json probe = j;
    probe["grid"] = json{{"columns", sites}, {"rows", 2}};
    probe["steps"] = 1;
    const RunRequest parsed = parse_request(probe);  // validates couplings and shots

    const int steps = j.value("steps", 10);
    if (steps < 0) throw RequestError("steps must be >= 0");
    double dt = j.value("dt", kDefaultDt);
    if (j.contains("total_time")) {
        if (steps < 1) throw RequestError("total_time needs at least one step");
        dt = j["total_time"].get<double>() / steps;
    }
    const TrotterSchedule schedule = TrotterSchedule::from_dt(dt, steps);
    const IsingParams params = resolve_params(parsed);

    StateVector init(sites);
    if (!initial.empty()) {
        if (static_cast<int>(initial.size()) != sites) {
            throw RequestError("initial bitstring must have " + std::to_string(sites) + " characters");
        }
        init = StateVector::from_bitstring(initial);
    }
    std::optional<SamplingOptions> sampling;
    if (parsed.backend == Backend::kSampled) {
        sampling = SamplingOptions{.shots = parsed.shots, .seed = seed, .keep_counts = false};
    }
    const EvolutionTrace trace = simulate_trace(init, params, schedule, sampling);

    json out{{"params", params},
             {"couplings", parsed.couplings},
             {"schedule", schedule},
             {"backend", to_string(parsed.backend)},
             {"seed", seed},
             {"initial", initial.empty() ? std::string(static_cast<std::size_t>(sites), '0') : initial},
             {"trace", trace}};
    const std::string text = out.dump(2) + "\n";
    if (output.empty() || output == "-") {
        std::cout << text;
    } else {
        write_text_file(output, text);
        std::cerr << "wrote " << output << "\n";
    }
    return kExitOk;
}

int cmd_frames(const RequestFlags &f, const std::string &image, const std::string &outdir, bool quiet) {
    const RunRequest request = build_request(f);
    const Image input = decode_image(read_file(image));
    const RunOutput out = run_pipeline(request, input, stderr_progress(quiet));
    const auto frames = render_frames(out.sidecar, input);
    fs::create_directories(outdir);
    for (std::size_t s = 0; s < frames.size(); ++s) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%03zu.png", s);
        write_png(fs::path(outdir) / name, frames[s]);
    }
    write_text_file(fs::path(outdir) / ("frames" + std::string(kSidecarExtension)), out.sidecar_text);
    std::cout << "wrote " << frames.size() << " frames to " << outdir << "\n";
    return kExitOk;
}

int cmd_template(const std::string &sidecar_path, const std::string &image, const std::string &output,
                 std::string legend_path) {
    const Sidecar sc = read_sidecar(read_text_file(sidecar_path));
    const ReplayResult r = replay(sc, decode_image(read_file(image)));
    if (!r.input_matches) {
        std::cerr << "warning: input image differs from the one recorded in the sidecar\n";
    }
    write_png(output, render_template(r.image, sidecar_grid(sc), sc.plan));
    if (legend_path.empty()) {
        fs::path p = output;
        p.replace_extension(".csv");
        legend_path = p.string();
    }
    write_text_file(legend_path, legend_csv(sc.plan));
    std::cout << "wrote " << output << " and " << legend_path << "\n";
    return kExitOk;
}

int cmd_replay(const std::string &sidecar_path, const std::string &image, const std::string &output,
               bool resimulate) {
    const Sidecar sc = read_sidecar(read_text_file(sidecar_path));
    const Image input = decode_image(read_file(image));
    const ReplayResult r = replay(sc, input);
    if (!output.empty()) write_file(output, r.png);
    std::cout << "input hash  " << (r.input_matches ? "matches" : "DIFFERS") << "\n";
    std::cout << "output hash " << (r.output_matches ? "matches" : "DIFFERS") << " (" << sc.output_hash << ")\n";
    bool ok = r.input_matches && r.output_matches;
    if (resimulate) {
        const bool same = resimulate_matches(sc, input);
        std::cout << "resimulation " << (same ? "matches" : "DIFFERS") << "\n";
        ok = ok && same;
    }
    return ok ? kExitOk : kExitMismatch;
}

HttpFrontend *g_frontend = nullptr;

int cmd_serve(const std::string &host, int port, std::string workspace, int workers) {
    if (workspace.empty()) {
        const char *env = std::getenv(kWorkspaceEnv);
        workspace = env && *env ? env : "qmosaic-workspace";
    }
    RunService service(ServiceOptions{.workspace = workspace, .workers = workers});
    HttpFrontend frontend(service);
    const int bound = frontend.bind(host, port);
    if (bound < 0) {
        std::cerr << "cannot bind " << host << ":" << port << "\n";
        return kExitFailure;
    }
    g_frontend = &frontend;
    std::signal(SIGINT, [](int) {
        if (g_frontend) g_frontend->stop();
    });
    std::signal(SIGTERM, [](int) {
        if (g_frontend) g_frontend->stop();
    });
    std::cout << "serving on http://" << host << ":" << bound << " (workspace " << workspace << ", " << workers
              << " workers)" << std::endl;
    frontend.run();
    g_frontend = nullptr;
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string> &args) {
    CLI::App app{"qmosaic: image transformations driven by simulated Ising-chain dynamics"};
    app.name("qmosaic");
    app.require_subcommand(1);

    RequestFlags flags;
    std::string image, output, sidecar, outdir = "frames", legend, initial, host = "127.0.0.1", workspace;
    int sites = 4, port = 8080, workers = 4;
    bool quiet = false, resimulate = false;

    auto *transform = app.add_subcommand("transform", "Simulate, plan and transform an image");
    transform->add_option("-i,--image", image, "Input PNG or JPEG")->required()->check(CLI::ExistingFile);
    transform->add_option("-o,--output", output, "Output PNG (default <input>.qm.png)");
    transform->add_option("--sidecar", sidecar, "Sidecar path (default: output with .qmplan)");
    transform->add_flag("-q,--quiet", quiet, "No progress output");
    add_request_flags(transform, flags);

    auto *simulate = app.add_subcommand("simulate", "Write an expectation-value trace without images");
    simulate->add_option("--config", flags.config, "JSON file with couplings/seed/dt/steps/shots");
    simulate->add_option("-n,--sites", sites, "Chain length")->check(CLI::Range(1, kMaxQubits));
    simulate->add_option("--initial", initial, "Initial basis state as a bitstring, qubit N-1 first");
    simulate->add_option("-o,--output", output, "Trace JSON (default stdout)");
    add_coupling_flags(simulate, flags);

    auto *frames = app.add_subcommand("frames", "Write one PNG per time slice");
    frames->add_option("-i,--image", image, "Input PNG or JPEG")->required()->check(CLI::ExistingFile);
    frames->add_option("--outdir", outdir, "Directory for frame_NNN.png files");
    frames->add_flag("-q,--quiet", quiet, "No progress output");
    add_request_flags(frames, flags);

    auto *tmpl = app.add_subcommand("template", "Numbered painting template and legend from a sidecar");
    tmpl->add_option("--sidecar", sidecar, "Sidecar of the run")->required()->check(CLI::ExistingFile);
    tmpl->add_option("-i,--image", image, "Original input image")->required()->check(CLI::ExistingFile);
    tmpl->add_option("-o,--output", output, "Template PNG")->required();
    tmpl->add_option("--legend", legend, "Legend CSV (default: output with .csv)");

    auto *serve = app.add_subcommand("serve", "Run the HTTP job service");
    serve->add_option("--host", host, "Listen address");
    serve->add_option("--port", port, "Listen port (0 picks a free one)");
    serve->add_option("--workspace", workspace, std::string("Run directory root (default $") + kWorkspaceEnv + ")");
    serve->add_option("--workers", workers, "Concurrent jobs")->check(CLI::Range(1, 64));

    auto *rep = app.add_subcommand("replay", "Re-apply a sidecar's plan and check the recorded hashes");
    rep->add_option("--sidecar", sidecar, "Sidecar to replay")->required()->check(CLI::ExistingFile);
    rep->add_option("-i,--image", image, "Original input image")->required()->check(CLI::ExistingFile);
    rep->add_option("-o,--output", output, "Write the replayed PNG here");
    rep->add_flag("--resimulate", resimulate, "Also re-run the simulation and compare traces and plan");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? kExitOk : kExitBadRequest;
    }

    try {
        if (*transform) return cmd_transform(flags, image, output, sidecar, quiet);
        if (*simulate) return cmd_simulate(flags, sites, initial, output);
        if (*frames) return cmd_frames(flags, image, outdir, quiet);
        if (*tmpl) return cmd_template(sidecar, image, output, legend);
        if (*serve) return cmd_serve(host, port, workspace, workers);
        if (*rep) return cmd_replay(sidecar, image, output, resimulate);
    } catch (const RequestError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadRequest;
    } catch (const SidecarError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadRequest;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadRequest;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitBadRequest;
}

}  // namespace qmosaic
