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

#include "qmosaic/sidecar.h"

#include "qmosaic/text_formats.h"

namespace qmosaic {

using nlohmann::json;

std::string to_string(Backend backend) {
    return backend == Backend::kExact ? "exact" : "sampled";
}

Backend backend_from_string(const std::string &name) {
    if (name == "exact") return Backend::kExact;
    if (name == "sampled") return Backend::kSampled;
    throw std::invalid_argument("unknown backend '" + name + "' (expected exact or sampled)");
}

std::string to_string(OriginRow origin) {
    return origin == OriginRow::kBottom ? "bottom" : "top";
}

OriginRow origin_from_string(const std::string &name) {
    if (name == "bottom") return OriginRow::kBottom;
    if (name == "top") return OriginRow::kTop;
    throw std::invalid_argument("unknown origin row '" + name + "' (expected bottom or top)");
}

void to_json(json &j, const IsingParams &p) {
    j = json{{"num_sites", p.num_sites}, {"j", p.j}, {"hz", p.hz}, {"hx", p.hx},
             {"periodic", p.periodic}};
}

void from_json(const json &j, IsingParams &p) {
    j.at("num_sites").get_to(p.num_sites);
    j.at("j").get_to(p.j);
    j.at("hz").get_to(p.hz);
    j.at("hx").get_to(p.hx);
    j.at("periodic").get_to(p.periodic);
}

void to_json(json &j, const CouplingSpec &c) {
    if (c.kind == CouplingSpec::Kind::kFixed) {
        j = json{{"kind", "fixed"}, {"values", c.values}};
    } else {
        j = json{{"kind", "random_uniform"}, {"low", c.low}, {"high", c.high}, {"seed", c.seed}};
    }
}

void from_json(const json &j, CouplingSpec &c) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "fixed") {
        c = CouplingSpec::fixed(j.at("values").get<std::vector<double>>());
    } else if (kind == "random_uniform") {
        c = CouplingSpec::random_uniform(j.value("low", -1.0), j.value("high", 1.0),
                                         j.value("seed", std::uint64_t{0}));
    } else {
        throw std::invalid_argument("unknown coupling kind '" + kind + "'");
    }
}

void to_json(json &j, const CouplingSet &c) {
    j = json{{"j", c.j}, {"hz", c.hz}, {"hx", c.hx}, {"periodic", c.periodic}};
}

void from_json(const json &j, CouplingSet &c) {
    j.at("j").get_to(c.j);
    j.at("hz").get_to(c.hz);
    j.at("hx").get_to(c.hx);
    c.periodic = j.value("periodic", true);
}

void to_json(json &j, const TrotterSchedule &s) {
    j = json{{"total_time", s.total_time}, {"num_steps", s.num_steps}, {"dt", s.dt()}};
}

void from_json(const json &j, TrotterSchedule &s) {
    j.at("total_time").get_to(s.total_time);
    j.at("num_steps").get_to(s.num_steps);
    s.validate();
}

void to_json(json &j, const EvolutionTrace &t) {
    json rows = json::array();
    for (int s = 0; s < t.num_slices; ++s) {
        const auto slice = t.slice(s);
        rows.push_back(std::vector<double>(slice.begin(), slice.end()));
    }
    j = json{{"num_slices", t.num_slices}, {"num_sites", t.num_sites}, {"expectations", rows}};
    j["shots"] = t.shots ? json(*t.shots) : json(nullptr);
    if (!t.shot_counts.empty()) {
        json counts = json::array();
        for (const auto &c : t.shot_counts) {
            json histogram = json::object();
            for (const auto &[index, n] : c.by_index) {
                histogram[to_bitstring(index, c.num_qubits)] = n;
            }
            counts.push_back(std::move(histogram));
        }
        j["shot_counts"] = std::move(counts);
    }
}

void from_json(const json &j, EvolutionTrace &t) {
    j.at("num_slices").get_to(t.num_slices);
    j.at("num_sites").get_to(t.num_sites);
    t.expectations.clear();
    for (const auto &row : j.at("expectations")) {
        const auto values = row.get<std::vector<double>>();
        if (values.size() != static_cast<std::size_t>(t.num_sites)) {
            throw std::invalid_argument("trace row length differs from num_sites");
        }
        t.expectations.insert(t.expectations.end(), values.begin(), values.end());
    }
    t.shots.reset();
    if (j.contains("shots") && !j.at("shots").is_null()) {
        t.shots = j.at("shots").get<std::int64_t>();
    }
    t.shot_counts.clear();
    if (j.contains("shot_counts")) {
        for (const auto &histogram : j.at("shot_counts")) {
            Counts c{.num_qubits = t.num_sites, .by_index = {}};
            for (const auto &[bits, n] : histogram.items()) {
                if (bits.size() != static_cast<std::size_t>(t.num_sites)) {
                    throw std::invalid_argument("bitstring '" + bits + "' has the wrong length");
                }
                c.by_index[parse_bitstring(bits)] = n.get<std::uint64_t>();
            }
            t.shot_counts.push_back(std::move(c));
        }
    }
    t.validate();
}

void to_json(json &j, const GridSpec &g) {
    j = json{{"columns", g.columns}, {"rows", g.rows}, {"origin_row", to_string(g.origin_row)}};
}

void from_json(const json &j, GridSpec &g) {
    j.at("columns").get_to(g.columns);
    j.at("rows").get_to(g.rows);
    g.origin_row = origin_from_string(j.value("origin_row", std::string("bottom")));
}

void to_json(json &j, const Rect &r) {
    j = json{{"x", r.x}, {"y", r.y}, {"width", r.width}, {"height", r.height}};
}

void from_json(const json &j, Rect &r) {
    j.at("x").get_to(r.x);
    j.at("y").get_to(r.y);
    j.at("width").get_to(r.width);
    j.at("height").get_to(r.height);
}

void to_json(json &j, const PinMask &p) {
    j = json::array();
    for (const auto &cell : p.cells) {
        j.push_back(json::array({cell.row, cell.column}));
    }
}

void from_json(const json &j, PinMask &p) {
    p.cells.clear();
    for (const auto &pair : j) {
        if (!pair.is_array() || pair.size() != 2) {
            throw std::invalid_argument("pins must be [row, col] pairs");
        }
        p.cells.insert(Cell{pair[0].get<int>(), pair[1].get<int>()});
    }
}

namespace {

json provenance_json(const PlanProvenance &p) {
    json j{{"params", p.params}, {"schedule", p.schedule}, {"seeds", p.seeds}};
    j["shots"] = p.shots ? json(*p.shots) : json(nullptr);
    return j;
}

PlanProvenance provenance_from(const json &j) {
    PlanProvenance p;
    j.at("params").get_to(p.params);
    j.at("schedule").get_to(p.schedule);
    j.at("seeds").get_to(p.seeds);
    if (!j.at("shots").is_null()) {
        p.shots = j.at("shots").get<std::int64_t>();
    }
    return p;
}

}  // namespace

void to_json(json &j, const TransformPlan &p) {
    j = json{{"mode", to_string(p.mode)}, {"grid", p.grid}, {"provenance", provenance_json(p.provenance)}};
    if (p.mode == PlanMode::kGlobalColorReorder) {
        j["palette_size"] = p.palette_size;
        j["color_ranks"] = p.color_ranks;
        j["color_values"] = p.color_values;
        return;
    }
    j["shift_strength"] = p.shift_strength;
    j["pins"] = p.pins;
    json rows = json::array();
    for (std::size_t r = 0; r < p.row_permutations.size(); ++r) {
        const auto &perm = p.row_permutations[r];
        rows.push_back(json{{"row", r},
                            {"run", perm.run},
                            {"slice", perm.slice_index},
                            {"order", perm.order},
                            {"i_values", perm.i_values}});
    }
    j["rows"] = std::move(rows);
}

void from_json(const json &j, TransformPlan &p) {
    p = TransformPlan{};
    p.mode = plan_mode_from_string(j.at("mode").get<std::string>());
    j.at("grid").get_to(p.grid);
    p.provenance = provenance_from(j.at("provenance"));
    if (p.mode == PlanMode::kGlobalColorReorder) {
        j.at("palette_size").get_to(p.palette_size);
        j.at("color_ranks").get_to(p.color_ranks);
        j.at("color_values").get_to(p.color_values);
    } else {
        j.at("shift_strength").get_to(p.shift_strength);
        j.at("pins").get_to(p.pins);
        for (const auto &row : j.at("rows")) {
            RowPermutation perm;
            row.at("run").get_to(perm.run);
            row.at("slice").get_to(perm.slice_index);
            row.at("order").get_to(perm.order);
            row.at("i_values").get_to(perm.i_values);
            p.row_permutations.push_back(std::move(perm));
        }
    }
    p.validate();
}

std::string write_sidecar(const Sidecar &s) {
    json j;
    j["format"] = kSidecarFormat;
    j["version"] = s.version;
    j["mode"] = to_string(s.mode);
    j["image"] = json{{"width", s.image_width}, {"height", s.image_height}, {"input_hash", s.input_hash}};
    j["region"] = s.region;
    j["resampled"] = s.resampled;
    j["couplings"] = s.couplings;
    j["seeds"] = s.seeds;
    j["schedule"] = s.schedule;
    j["backend"] = to_string(s.backend);
    j["shots"] = s.shots ? json(*s.shots) : json(nullptr);
    j["traces"] = s.traces;
    j["plan"] = s.plan;
    if (!s.palette.empty()) {
        json colours = json::array();
        for (const auto &c : s.palette) {
            colours.push_back(to_hex(c));
        }
        j["palette"] = std::move(colours);
    }
    j["output_hash"] = s.output_hash;
    j["request"] = s.request;
    return j.dump(2) + "\n";
}

Sidecar read_sidecar(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw SidecarError(std::string("sidecar is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("format") || j["format"] != kSidecarFormat) {
        throw SidecarError("not a qmosaic sidecar (missing or foreign 'format' tag)");
    }
    if (!j.contains("version") || !j["version"].is_number_integer()) {
        throw SidecarError("sidecar has no integer 'version' field");
    }
    const int version = j["version"].get<int>();
    if (version != kSidecarVersion) {
        throw SidecarError("unsupported sidecar version " + std::to_string(version) +
                           " (this build reads version " + std::to_string(kSidecarVersion) + ")");
    }
    try {
        Sidecar s;
        s.version = version;
        s.mode = plan_mode_from_string(j.at("mode").get<std::string>());
        const json &image = j.at("image");
        image.at("width").get_to(s.image_width);
        image.at("height").get_to(s.image_height);
        image.at("input_hash").get_to(s.input_hash);
        j.at("region").get_to(s.region);
        j.at("resampled").get_to(s.resampled);
        j.at("couplings").get_to(s.couplings);
        j.at("seeds").get_to(s.seeds);
        j.at("schedule").get_to(s.schedule);
        s.backend = backend_from_string(j.at("backend").get<std::string>());
        if (!j.at("shots").is_null()) {
            s.shots = j.at("shots").get<std::int64_t>();
        }
        j.at("traces").get_to(s.traces);
        j.at("plan").get_to(s.plan);
        if (j.contains("palette")) {
            for (const auto &c : j.at("palette")) {
                s.palette.push_back(rgb_from_hex(c.get<std::string>()));
            }
        }
        j.at("output_hash").get_to(s.output_hash);
        s.request = j.value("request", json::object());
        if (s.plan.mode != s.mode) {
            throw SidecarError("sidecar mode and plan mode disagree");
        }
        return s;
    } catch (const SidecarError &) {
        throw;
    } catch (const std::exception &e) {
        throw SidecarError(std::string("malformed sidecar: ") + e.what());
    }
}

}  // namespace qmosaic
