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

#include "qmosaic/run.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "qmosaic/measure.h"
#include "qmosaic/text_formats.h"

namespace qmosaic {

using nlohmann::json;

namespace {

// Above this the state vector alone needs more than 256 MiB.
constexpr int kMaxColumns = 24;

GridSpec default_grid(PlanMode mode) {
    switch (mode) {
        case PlanMode::kMirroredEvolution:
            return GridSpec{.columns = 16, .rows = 20};
        case PlanMode::kGlobalColorReorder:
            return GridSpec{.columns = 12, .rows = 16};
        case PlanMode::kRowEvolution:
            break;
    }
    return GridSpec{.columns = 16, .rows = 13};
}

CouplingSpec parse_term(const json &j, std::uint64_t seed) {
    if (j.is_number()) {
        return CouplingSpec::fixed({j.get<double>()});
    }
    if (j.is_array()) {
        return CouplingSpec::fixed(j.get<std::vector<double>>());
    }
    if (j.is_string()) {
        if (j.get<std::string>() != "random") {
            throw RequestError("coupling term must be a number, a list, \"random\" or an object");
        }
        return CouplingSpec::random_uniform(-1.0, 1.0, seed);
    }
    if (j.is_object()) {
        if (j.contains("kind")) {
            CouplingSpec spec = j.get<CouplingSpec>();
            if (spec.kind == CouplingSpec::Kind::kRandomUniform && !j.contains("seed")) {
                spec.seed = seed;
            }
            return spec;
        }
        if (j.contains("values")) {
            return CouplingSpec::fixed(j.at("values").get<std::vector<double>>());
        }
        return CouplingSpec::random_uniform(j.value("low", -1.0), j.value("high", 1.0),
                                            j.value("seed", seed));
    }
    throw RequestError("unsupported coupling value: " + j.dump());
}

CouplingSet parse_couplings(const json &j, PlanMode mode, std::uint64_t seed) {
    CouplingSet set;
    if (j.is_null()) {
        const CouplingSpec spec = mode == PlanMode::kGlobalColorReorder
                                      ? CouplingSpec::fixed({1.0})
                                      : CouplingSpec::random_uniform(-1.0, 1.0, seed);
        set.j = set.hz = set.hx = spec;
        return set;
    }
    if (!j.is_object() || j.contains("kind") || j.contains("values") || j.contains("low")) {
        set.j = set.hz = set.hx = parse_term(j, seed);
        return set;
    }
    const auto term = [&](const char *key) {
        return j.contains(key) ? parse_term(j.at(key), seed)
                               : CouplingSpec::random_uniform(-1.0, 1.0, seed);
    };
    set.j = term("j");
    set.hz = term("hz");
    set.hx = term("hx");
    set.periodic = j.value("periodic", true);
    return set;
}

template <typename T>
T get_or(const json &j, const char *key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return fallback;
    }
    return j.at(key).get<T>();
}

std::optional<SamplingOptions> sampling_for(const RunRequest &r, std::uint64_t seed) {
    if (r.backend == Backend::kExact) {
        return std::nullopt;
    }
    return SamplingOptions{.shots = r.shots, .seed = seed, .keep_counts = false};
}

Image decode_input(std::span<const std::uint8_t> bytes) {
    try {
        return decode_image(bytes);
    } catch (const ImageError &e) {
        throw RequestError(e.what());
    }
}

}  // namespace

int RunRequest::derived_steps() const {
    return mode == PlanMode::kMirroredEvolution ? grid.rows / 2 : grid.rows - 1;
}

void RunRequest::validate() const {
    if (grid.columns < 1 || grid.rows < 1) {
        throw RequestError("grid needs at least one row and one column");
    }
    if (grid.columns > kMaxColumns) {
        throw RequestError("at most " + std::to_string(kMaxColumns) + " columns (qubits) supported, got " +
                           std::to_string(grid.columns));
    }
    if (mode == PlanMode::kMirroredEvolution && grid.rows % 2 != 0) {
        throw RequestError("mirrored mode needs an even number of rows, got " + std::to_string(grid.rows));
    }
    if (steps != derived_steps()) {
        throw RequestError(to_string(mode) + " mode with " + std::to_string(grid.rows) + " rows needs " +
                           std::to_string(derived_steps()) + " steps, got " + std::to_string(steps));
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw RequestError("dt must be positive and finite");
    }
    if (backend == Backend::kSampled && shots < 1) {
        throw RequestError("shots must be at least 1");
    }
    if (!(shift_strength > 0.0) || !std::isfinite(shift_strength)) {
        throw RequestError("shift strength must be positive and finite");
    }
    for (const auto &cell : pins.cells) {
        if (cell.row < 0 || cell.row >= grid.rows || cell.column < 0 || cell.column >= grid.columns) {
            throw RequestError("pinned cell (" + std::to_string(cell.row) + "," + std::to_string(cell.column) +
                               ") lies outside the grid");
        }
    }
    if (mode == PlanMode::kGlobalColorReorder) {
        if (!pins.cells.empty()) {
            throw RequestError("pins apply to row and mirrored modes only");
        }
        const auto cells = static_cast<std::size_t>(grid.rows * grid.columns);
        if (!palette.empty() && palette.size() != cells) {
            throw RequestError("palette has " + std::to_string(palette.size()) + " colours, grid has " +
                               std::to_string(cells) + " cells");
        }
    } else if (!palette.empty()) {
        throw RequestError("a palette applies to colour mode only");
    }
    try {
        resolve_params(*this);
    } catch (const std::invalid_argument &e) {
        throw RequestError(std::string("couplings: ") + e.what());
    }
}

RunRequest parse_request(const json &j) {
    if (!j.is_object()) {
        throw RequestError("request must be a JSON object");
    }
    static const std::set<std::string> known = {
        "mode", "grid", "region", "couplings", "periodic", "seed", "seed_a", "seed_b", "dt", "total_time",
        "steps", "backend", "shots", "shift_strength", "pins", "palette", "include_initial_slice"};
    for (const auto &[key, value] : j.items()) {
        if (!known.contains(key)) {
            throw RequestError("unknown request field '" + key + "'");
        }
    }
    try {
        RunRequest r;
        r.mode = plan_mode_from_string(get_or<std::string>(j, "mode", "row"));
        r.grid = default_grid(r.mode);
        if (j.contains("grid")) {
            const json &g = j.at("grid");
            r.grid.columns = get_or(g, "columns", r.grid.columns);
            r.grid.rows = get_or(g, "rows", r.grid.rows);
            r.grid.origin_row = origin_from_string(get_or<std::string>(g, "origin_row", "bottom"));
        }
        if (j.contains("region") && !j.at("region").is_null()) {
            r.region = j.at("region").get<Rect>();
        }
        r.seed = get_or<std::uint64_t>(j, "seed", 0);
        r.seed_a = get_or<std::uint64_t>(j, "seed_a", r.seed);
        r.seed_b = get_or<std::uint64_t>(j, "seed_b", r.seed + 1);
        r.couplings = parse_couplings(j.value("couplings", json()), r.mode, r.seed);
        if (j.contains("periodic")) {
            r.couplings.periodic = j.at("periodic").get<bool>();
        }
        r.steps = get_or(j, "steps", r.derived_steps());
        r.dt = get_or(j, "dt", kDefaultDt);
        if (j.contains("total_time") && !j.at("total_time").is_null()) {
            if (j.contains("dt") && !j.at("dt").is_null()) {
                throw RequestError("give either dt or total_time, not both");
            }
            if (r.steps < 1) {
                throw RequestError("total_time needs at least one step");
            }
            r.dt = j.at("total_time").get<double>() / r.steps;
        }
        r.backend = backend_from_string(get_or<std::string>(j, "backend", "sampled"));
        r.shots = get_or<std::int64_t>(j, "shots", kDefaultShots);
        r.shift_strength = get_or(j, "shift_strength", kDefaultShiftStrength);
        if (j.contains("pins") && !j.at("pins").is_null()) {
            r.pins = j.at("pins").get<PinMask>();
        }
        if (j.contains("palette") && !j.at("palette").is_null()) {
            for (const auto &c : j.at("palette")) {
                r.palette.push_back(rgb_from_hex(c.get<std::string>()));
            }
        }
        r.include_initial_slice = get_or(j, "include_initial_slice", false);
        r.validate();
        return r;
    } catch (const RequestError &) {
        throw;
    } catch (const std::exception &e) {
        throw RequestError(std::string("invalid request: ") + e.what());
    }
}

json request_to_json(const RunRequest &r) {
    json j;
    j["mode"] = to_string(r.mode);
    j["grid"] = r.grid;
    j["region"] = r.region ? json(*r.region) : json(nullptr);
    j["couplings"] = r.couplings;
    j["seed"] = r.seed;
    if (r.mode == PlanMode::kMirroredEvolution) {
        j["seed_a"] = r.seed_a;
        j["seed_b"] = r.seed_b;
        j["include_initial_slice"] = r.include_initial_slice;
    }
    j["dt"] = r.dt;
    j["steps"] = r.steps;
    j["backend"] = to_string(r.backend);
    j["shots"] = r.shots;
    if (r.mode != PlanMode::kGlobalColorReorder) {
        j["shift_strength"] = r.shift_strength;
        j["pins"] = r.pins;
    }
    if (!r.palette.empty()) {
        json colours = json::array();
        for (const auto &c : r.palette) colours.push_back(to_hex(c));
        j["palette"] = std::move(colours);
    }
    return j;
}

IsingParams resolve_params(const RunRequest &r) {
    return make_params(r.grid.columns, r.couplings.j, r.couplings.hz, r.couplings.hx, r.couplings.periodic);
}

RunOutput run_pipeline(const RunRequest &request, std::span<const std::uint8_t> input_bytes,
                       const ProgressFn &progress) {
    return run_pipeline(request, decode_input(input_bytes), progress);
}

RunOutput run_pipeline(const RunRequest &request, const Image &input, const ProgressFn &progress) {
    request.validate();
    const Rect region = request.region.value_or(full_region(input));
    TileGrid tiles;
    try {
        tiles = slice(input, region, request.grid.rows, request.grid.columns);
    } catch (const std::invalid_argument &e) {
        throw RequestError(e.what());
    }

    const IsingParams params = resolve_params(request);
    const TrotterSchedule schedule = TrotterSchedule::from_dt(request.dt, request.steps);
    const int slices = request.steps + 1;
    const int runs = request.mode == PlanMode::kMirroredEvolution ? 2 : 1;
    const int total = slices * runs;
    const auto report = [&](int offset) -> ProgressFn {
        if (!progress) return {};
        return [&progress, offset, total](int done, int) { progress(offset + done, total); };
    };

    Sidecar sc;
    sc.mode = request.mode;
    sc.image_width = input.width;
    sc.image_height = input.height;
    sc.region = region;
    sc.couplings = request.couplings;
    sc.schedule = schedule;
    sc.backend = request.backend;
    if (request.backend == Backend::kSampled) {
        sc.shots = request.shots;
    }
    sc.request = request_to_json(request);
    sc.input_hash = pixel_hash(input);

    const int n = request.grid.columns;
    switch (request.mode) {
        case PlanMode::kRowEvolution: {
            sc.seeds = {request.seed};
            sc.traces.push_back(simulate_trace(StateVector(n), params, schedule,
                                               sampling_for(request, request.seed), report(0)));
            sc.plan = plan_row_evolution(sc.traces[0], request.grid, request.shift_strength, request.pins);
            break;
        }
        case PlanMode::kMirroredEvolution: {
            sc.seeds = {request.seed, request.seed_a, request.seed_b};
            sc.traces.push_back(simulate_trace(StateVector(n), params, schedule,
                                               sampling_for(request, request.seed_a), report(0)));
            sc.traces.push_back(simulate_trace(StateVector(n), params, schedule,
                                               sampling_for(request, request.seed_b), report(slices)));
            sc.plan = plan_mirrored(sc.traces[0], sc.traces[1], request.grid, request.shift_strength,
                                    request.pins,
                                    MirrorOptions{.include_initial_slice = request.include_initial_slice});
            break;
        }
        case PlanMode::kGlobalColorReorder: {
            sc.seeds = {request.seed};
            const int palette_size = request.grid.rows * request.grid.columns;
            std::vector<double> probs(static_cast<std::size_t>(n));
            for (int site = 0; site < n; ++site) {
                probs[static_cast<std::size_t>(site)] = static_cast<double>(site) / palette_size;
            }
            sc.traces.push_back(simulate_trace(prepare_ry_product(n, probs), params, schedule,
                                               sampling_for(request, request.seed), report(0)));
            sc.plan = plan_global_color(sc.traces[0], request.grid, palette_size);
            sc.palette = request.palette.empty() ? extract_palette(input, tiles, request.grid.origin_row)
                                                 : request.palette;
            break;
        }
    }
    sc.plan.provenance = PlanProvenance{.params = std::vector<IsingParams>(static_cast<std::size_t>(runs), params),
                                        .schedule = schedule,
                                        .shots = sc.shots,
                                        .seeds = sc.seeds};
    sc.resampled = request.mode != PlanMode::kGlobalColorReorder && !tiles.uniform();

    RunOutput out;
    out.image = apply_plan(input, tiles, sc.plan, sc.palette);
    sc.output_hash = pixel_hash(out.image);
    out.png = encode_png(out.image);
    out.sidecar_text = write_sidecar(sc);
    out.sidecar = std::move(sc);
    return out;
}

TileGrid sidecar_grid(const Sidecar &sidecar) {
    return slice(sidecar.image_width, sidecar.image_height, sidecar.region, sidecar.plan.grid.rows,
                 sidecar.plan.grid.columns);
}

ReplayResult replay(const Sidecar &sidecar, const Image &input) {
    if (input.width != sidecar.image_width || input.height != sidecar.image_height) {
        throw RequestError("input is " + std::to_string(input.width) + "x" + std::to_string(input.height) +
                           " but the sidecar was made for " + std::to_string(sidecar.image_width) + "x" +
                           std::to_string(sidecar.image_height));
    }
    ReplayResult r;
    r.input_matches = pixel_hash(input) == sidecar.input_hash;
    r.image = apply_plan(input, sidecar_grid(sidecar), sidecar.plan, sidecar.palette);
    r.output_matches = pixel_hash(r.image) == sidecar.output_hash;
    r.png = encode_png(r.image);
    return r;
}

bool resimulate_matches(const Sidecar &sidecar, const Image &input) {
    const RunOutput fresh = run_pipeline(parse_request(sidecar.request), input);
    return fresh.sidecar.traces == sidecar.traces && fresh.sidecar.plan == sidecar.plan &&
           fresh.sidecar.output_hash == sidecar.output_hash;
}

std::vector<Image> render_frames(const Sidecar &sidecar, const Image &input) {
    if (sidecar.mode == PlanMode::kGlobalColorReorder) {
        throw RequestError("frames are defined for row and mirrored modes only");
    }
    if (sidecar.traces.empty()) {
        throw RequestError("sidecar carries no trace");
    }
    const TileGrid tiles = sidecar_grid(sidecar);
    const int columns = sidecar.plan.grid.columns;
    std::vector<int> identity(static_cast<std::size_t>(columns));
    for (int c = 0; c < columns; ++c) identity[static_cast<std::size_t>(c)] = c;

    std::vector<Image> frames;
    for (int s = 0; s < sidecar.traces[0].num_slices; ++s) {
        TransformPlan partial = sidecar.plan;
        for (auto &perm : partial.row_permutations) {
            if (perm.slice_index > s) perm.order = identity;
        }
        frames.push_back(apply_plan(input, tiles, partial));
    }
    return frames;
}

json trace_matrix_json(const Sidecar &sidecar) {
    json traces = json::array();
    for (std::size_t k = 0; k < sidecar.traces.size(); ++k) {
        json t = sidecar.traces[k];
        t.erase("shot_counts");
        t["run"] = k;
        traces.push_back(std::move(t));
    }
    return json{{"traces", std::move(traces)}};
}

}  // namespace qmosaic
