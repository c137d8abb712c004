// Copyright 2026 The cohswap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cohswap/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <Eigen/Core>
#include <fmt/format.h>
#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#ifndef COHSWAP_YAML_CPP_VERSION
#define COHSWAP_YAML_CPP_VERSION "unknown"
#endif

namespace cohswap {

namespace {

// --- YAML reading -----------------------------------------------------------

class Reader {
  public:
    [[noreturn]] void fail(const YAML::Node &node, const std::string &field,
                           const std::string &message) const {
        throw ConfigError({issue(node, field, message)});
    }

    static ConfigIssue issue(const YAML::Node &node, const std::string &field,
                             const std::string &message) {
        ConfigIssue out;
        out.field = field;
        out.message = message;
        if (node.IsDefined()) {
            const YAML::Mark mark = node.Mark();
            if (mark.line >= 0) {
                out.line = mark.line + 1;
                out.column = mark.column + 1;
            }
        }
        return out;
    }

    void expect_map(const YAML::Node &node, const std::string &field,
                    std::initializer_list<std::string_view> allowed) const {
        if (!node.IsMap()) {
            fail(node, field, "expected a mapping");
        }
        for (const auto &kv : node) {
            const auto key = kv.first.as<std::string>();
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                fail(kv.first, join(field, key), "unknown key '" + key + "'");
            }
        }
    }

    YAML::Node require(const YAML::Node &parent, const std::string &parent_field,
                       const std::string &key) const {
        YAML::Node child = parent[key];
        if (!child.IsDefined() || child.IsNull()) {
            fail(parent, join(parent_field, key), "missing required field '" + key + "'");
        }
        return child;
    }

    std::string scalar_string(const YAML::Node &node, const std::string &field) const {
        if (!node.IsScalar()) {
            fail(node, field, "expected a scalar");
        }
        return node.as<std::string>();
    }

    double number(const YAML::Node &node, const std::string &field) const {
        const std::string text = scalar_string(node, field);
        if (auto v = parse_phase_literal(text)) {
            return *v;
        }
        fail(node, field, "expected a number, got '" + text + "'");
    }

    std::uint64_t count(const YAML::Node &node, const std::string &field) const {
        const std::string text = scalar_string(node, field);
        try {
            std::size_t used = 0;
            const long long v = std::stoll(text, &used);
            if (used == text.size() && v >= 0) {
                return static_cast<std::uint64_t>(v);
            }
        } catch (const std::exception &) {
        }
        fail(node, field, "expected a non-negative integer, got '" + text + "'");
    }

    bool boolean(const YAML::Node &node, const std::string &field) const {
        try {
            return node.as<bool>();
        } catch (const YAML::Exception &) {
            fail(node, field, "expected true or false");
        }
    }

    static std::string join(const std::string &parent, const std::string &key) {
        return parent.empty() ? key : parent + "." + key;
    }
    static std::string at(const std::string &parent, std::size_t i) {
        return parent + "[" + std::to_string(i) + "]";
    }
};

DetectionPattern read_demands(const Reader &r, const YAML::Node &node,
                              const std::string &field) {
    if (!node.IsMap()) {
        r.fail(node, field, "expected a mapping of mode: count");
    }
    DetectionPattern pattern;
    for (const auto &kv : node) {
        const auto mode = kv.first.as<std::string>();
        pattern.demands[mode] =
            static_cast<std::uint32_t>(r.count(kv.second, Reader::join(field, mode)));
    }
    return pattern;
}

NamedPattern read_named_pattern(const Reader &r, const YAML::Node &node,
                                const std::string &field) {
    r.expect_map(node, field, {"id", "demands"});
    return {r.scalar_string(r.require(node, field, "id"), Reader::join(field, "id")),
            read_demands(r, r.require(node, field, "demands"), Reader::join(field, "demands"))};
}

Element read_element(const Reader &r, const YAML::Node &node, const std::string &field) {
    if (!node.IsMap()) {
        r.fail(node, field, "expected a mapping");
    }
    const std::string type =
        r.scalar_string(r.require(node, field, "type"), Reader::join(field, "type"));
    const auto name = [&]() -> std::string {
        return node["name"] ? r.scalar_string(node["name"], Reader::join(field, "name")) : "";
    };
    if (type == "beam_splitter") {
        r.expect_map(node, field,
                     {"type", "name", "inputs", "outputs", "convention", "transmissivity"});
        const auto pair = [&](const std::string &key) {
            YAML::Node list = r.require(node, field, key);
            if (!list.IsSequence() || list.size() != 2) {
                r.fail(list, Reader::join(field, key), "expected a list of two modes");
            }
            return std::pair{r.scalar_string(list[0], Reader::at(Reader::join(field, key), 0)),
                             r.scalar_string(list[1], Reader::at(Reader::join(field, key), 1))};
        };
        BeamSplitterSpec spec;
        spec.name = name();
        std::tie(spec.input_1, spec.input_2) = pair("inputs");
        std::tie(spec.output_1, spec.output_2) = pair("outputs");
        if (node["convention"]) {
            const std::string text =
                r.scalar_string(node["convention"], Reader::join(field, "convention"));
            try {
                spec.convention = parse_convention(text);
            } catch (const std::invalid_argument &e) {
                r.fail(node["convention"], Reader::join(field, "convention"), e.what());
            }
        }
        if (node["transmissivity"]) {
            spec.transmissivity =
                r.number(node["transmissivity"], Reader::join(field, "transmissivity"));
        }
        return spec;
    }
    if (type == "phase") {
        r.expect_map(node, field, {"type", "name", "mode", "phi"});
        return PhaseShifterSpec{
            name(), r.scalar_string(r.require(node, field, "mode"), Reader::join(field, "mode")),
            node["phi"] ? r.number(node["phi"], Reader::join(field, "phi")) : 0.0};
    }
    if (type == "mirror") {
        r.expect_map(node, field, {"type", "name", "mode", "phase"});
        return MirrorSpec{
            name(), r.scalar_string(r.require(node, field, "mode"), Reader::join(field, "mode")),
            node["phase"] ? r.number(node["phase"], Reader::join(field, "phase")) : 0.0};
    }
    if (type == "flux") {
        r.expect_map(node, field, {"type", "mode", "phase"});
        return FluxSegmentSpec{
            r.scalar_string(r.require(node, field, "mode"), Reader::join(field, "mode")),
            r.number(r.require(node, field, "phase"), Reader::join(field, "phase"))};
    }
    r.fail(node["type"], Reader::join(field, "type"),
           "unknown element type '" + type + "' (expected beam_splitter, phase, mirror, flux)");
}

std::string_view to_string(FilterPlacement placement) {
    return placement == FilterPlacement::TriggerBeams ? "trigger-beams" : "all-beams";
}

// Semantic checks that need the whole scenario; line numbers come from the
// nodes recorded while parsing.
struct Marks {
    YAML::Node root;
    YAML::Node sources;
    std::vector<YAML::Node> elements;
};

void check_scenario(const ScenarioConfig &config, const Marks &marks) {
    std::vector<ConfigIssue> issues;
    const auto fail = [&](const YAML::Node &node, const std::string &field,
                          const std::string &message) {
        issues.push_back(Reader::issue(node, field, message));
    };

    std::set<ModeId> modes;
    if (config.circuit) {
        modes.insert(config.circuit->modes.begin(), config.circuit->modes.end());
        for (const Diagnostic &d : validate(*config.circuit)) {
            if (d.element_index && *d.element_index < marks.elements.size()) {
                fail(marks.elements[*d.element_index],
                     Reader::at("elements", *d.element_index), d.message);
            } else if (d.kind == Diagnostic::Kind::InvalidRegistry) {
                fail(marks.root["modes"], "modes", d.message);
            } else {
                fail(marks.sources.IsDefined() ? marks.sources : marks.root, "sources",
                     d.message);
            }
        }
    }
    const auto check_mode = [&](const ModeId &mode, const YAML::Node &node,
                                const std::string &field) {
        if (!modes.contains(mode)) {
            fail(node, field, "unregistered mode '" + mode + "'");
        }
    };

    const YAML::Node flux = marks.root["flux"];
    for (const auto &[mode, phase] : config.flux.segment_phases) {
        check_mode(mode, flux["segments"], "flux.segments." + mode);
    }
    for (std::size_t i = 0; i < config.flux.loops.size(); ++i) {
        for (const auto &seg : config.flux.loops[i].path) {
            check_mode(seg.mode, flux["loops"][i], Reader::at("flux.loops", i));
            if (seg.orientation != 1 && seg.orientation != -1) {
                fail(flux["loops"][i], Reader::at("flux.loops", i),
                     "segment orientation must be +1 or -1");
            }
        }
        if (config.flux.loops[i].winding != 1 && config.flux.loops[i].winding != -1) {
            fail(flux["loops"][i], Reader::at("flux.loops", i), "winding must be +1 or -1");
        }
    }
    if (config.herald) {
        for (const auto &[mode, n] : config.herald->pattern.demands) {
            check_mode(mode, marks.root["herald"], "herald.demands." + mode);
        }
    }
    if (config.scan) {
        const YAML::Node scan = marks.root["scan"];
        if (!config.circuit) {
            fail(scan, "scan", "a scan needs a circuit (modes, sources, elements)");
        }
        check_mode(config.scan->mode, scan["mode"], "scan.mode");
        if (config.scan->grid_size < 3) {
            fail(scan["grid"], "scan.grid", "grid size must be at least 3");
        }
        if (config.scan->final_patterns.empty()) {
            fail(scan, "scan.patterns", "at least one final pattern is required");
        }
        std::set<std::string> ids;
        for (std::size_t i = 0; i < config.scan->final_patterns.size(); ++i) {
            const auto &fp = config.scan->final_patterns[i];
            const std::string field = Reader::at("scan.patterns", i);
            if (!ids.insert(fp.id).second) {
                fail(scan["patterns"][i], field, "duplicate pattern id '" + fp.id + "'");
            }
            for (const auto &[mode, n] : fp.pattern.demands) {
                check_mode(mode, scan["patterns"][i], field + ".demands." + mode);
                if (config.herald && config.herald->pattern.demands.contains(mode)) {
                    fail(scan["patterns"][i], field,
                         "pattern mode '" + mode + "' is also a herald mode");
                }
            }
        }
    }
    if (config.spectral) {
        const YAML::Node spectral = marks.root["spectral"];
        if (!(config.spectral->sigma_p > 0.0)) {
            fail(spectral["sigma_p"], "spectral.sigma_p", "sigma_p must be positive");
        }
        if (config.spectral->sigma_f.empty()) {
            fail(spectral, "spectral.sigma_f", "at least one filter width is required");
        }
        for (std::size_t i = 0; i < config.spectral->sigma_f.size(); ++i) {
            if (!(config.spectral->sigma_f[i] > 0.0)) {
                fail(spectral["sigma_f"], Reader::at("spectral.sigma_f", i),
                     "filter widths must be positive");
            }
        }
        if (!(config.spectral->quad_tolerance > 0.0)) {
            fail(spectral["quad_tolerance"], "spectral.quad_tolerance",
                 "tolerance must be positive");
        }
    }
    if (!config.circuit && !config.spectral) {
        fail(marks.root, "", "scenario describes neither a circuit nor a spectral sweep");
    }
    if (!issues.empty()) {
        throw ConfigError(std::move(issues));
    }
}

ScenarioConfig read_scenario(const YAML::Node &root) {
    const Reader r;
    r.expect_map(root, "",
                 {"name", "truncation", "modes", "sources", "elements", "flux", "herald",
                  "scan", "spectral", "outputs"});
    ScenarioConfig config;
    Marks marks;
    marks.root = root;
    config.name = root["name"] ? r.scalar_string(root["name"], "name") : "scenario";

    if (root["modes"]) {
        Circuit circuit;
        const YAML::Node modes = root["modes"];
        if (!modes.IsSequence()) {
            r.fail(modes, "modes", "expected a list of mode names");
        }
        for (std::size_t i = 0; i < modes.size(); ++i) {
            circuit.modes.push_back(r.scalar_string(modes[i], Reader::at("modes", i)));
        }
        if (const YAML::Node t = root["truncation"]) {
            r.expect_map(t, "truncation", {"max_photons", "prune_threshold"});
            if (t["max_photons"]) {
                circuit.truncation.max_photons = static_cast<std::uint32_t>(
                    r.count(t["max_photons"], "truncation.max_photons"));
            }
            if (t["prune_threshold"]) {
                circuit.truncation.prune_threshold =
                    r.number(t["prune_threshold"], "truncation.prune_threshold");
            }
        }
        if (const YAML::Node sources = root["sources"]) {
            marks.sources = sources;
            if (!sources.IsSequence()) {
                r.fail(sources, "sources", "expected a list");
            }
            for (std::size_t i = 0; i < sources.size(); ++i) {
                const std::string field = Reader::at("sources", i);
                r.expect_map(sources[i], field, {"mode", "photons"});
                Source s;
                s.mode = r.scalar_string(r.require(sources[i], field, "mode"),
                                         Reader::join(field, "mode"));
                if (sources[i]["photons"]) {
                    s.photons = static_cast<std::uint32_t>(
                        r.count(sources[i]["photons"], Reader::join(field, "photons")));
                }
                circuit.sources.push_back(s);
            }
        }
        if (const YAML::Node elements = root["elements"]) {
            if (!elements.IsSequence()) {
                r.fail(elements, "elements", "expected a list");
            }
            for (std::size_t i = 0; i < elements.size(); ++i) {
                circuit.elements.push_back(read_element(r, elements[i], Reader::at("elements", i)));
                marks.elements.push_back(elements[i]);
            }
        }
        config.circuit = std::move(circuit);
    } else {
        for (const char *key : {"truncation", "sources", "elements", "flux", "herald", "scan"}) {
            if (root[key]) {
                r.fail(root[key], key, std::string("'") + key + "' requires a 'modes' list");
            }
        }
    }

    if (const YAML::Node flux = root["flux"]) {
        r.expect_map(flux, "flux", {"segments", "loops"});
        if (const YAML::Node segments = flux["segments"]) {
            if (!segments.IsMap()) {
                r.fail(segments, "flux.segments", "expected a mapping of mode: phase");
            }
            for (const auto &kv : segments) {
                const auto mode = kv.first.as<std::string>();
                config.flux.segment_phases[mode] =
                    r.number(kv.second, "flux.segments." + mode);
            }
        }
        if (const YAML::Node loops = flux["loops"]) {
            if (!loops.IsSequence()) {
                r.fail(loops, "flux.loops", "expected a list");
            }
            for (std::size_t i = 0; i < loops.size(); ++i) {
                const std::string field = Reader::at("flux.loops", i);
                r.expect_map(loops[i], field, {"name", "winding", "path"});
                FluxLoop loop;
                loop.name = loops[i]["name"]
                                ? r.scalar_string(loops[i]["name"], Reader::join(field, "name"))
                                : "loop" + std::to_string(i);
                if (loops[i]["winding"]) {
                    loop.winding = static_cast<int>(
                        r.number(loops[i]["winding"], Reader::join(field, "winding")));
                }
                const YAML::Node path = r.require(loops[i], field, "path");
                if (!path.IsSequence()) {
                    r.fail(path, Reader::join(field, "path"), "expected a list");
                }
                for (std::size_t j = 0; j < path.size(); ++j) {
                    const std::string sfield = Reader::at(Reader::join(field, "path"), j);
                    r.expect_map(path[j], sfield, {"mode", "orientation"});
                    LoopSegment seg;
                    seg.mode = r.scalar_string(r.require(path[j], sfield, "mode"),
                                               Reader::join(sfield, "mode"));
                    if (path[j]["orientation"]) {
                        seg.orientation = static_cast<int>(
                            r.number(path[j]["orientation"], Reader::join(sfield, "orientation")));
                    }
                    loop.path.push_back(seg);
                }
                config.flux.loops.push_back(std::move(loop));
            }
        }
    }

    if (const YAML::Node h = root["herald"]) {
        r.expect_map(h, "herald", {"id", "demands", "correction"});
        HeraldRule rule;
        rule.id = h["id"] ? r.scalar_string(h["id"], "herald.id") : "herald";
        rule.pattern = read_demands(r, r.require(h, "herald", "demands"), "herald.demands");
        if (h["correction"]) {
            rule.correction_phase = r.number(h["correction"], "herald.correction");
        }
        config.herald = std::move(rule);
    }

    if (const YAML::Node s = root["scan"]) {
        r.expect_map(s, "scan", {"mode", "grid", "apply_correction", "patterns"});
        ScanConfig scan;
        scan.mode = r.scalar_string(r.require(s, "scan", "mode"), "scan.mode");
        if (s["grid"]) {
            scan.grid_size = r.count(s["grid"], "scan.grid");
        }
        if (s["apply_correction"]) {
            scan.apply_correction = r.boolean(s["apply_correction"], "scan.apply_correction");
        }
        const YAML::Node patterns = r.require(s, "scan", "patterns");
        if (!patterns.IsSequence()) {
            r.fail(patterns, "scan.patterns", "expected a list");
        }
        for (std::size_t i = 0; i < patterns.size(); ++i) {
            scan.final_patterns.push_back(
                read_named_pattern(r, patterns[i], Reader::at("scan.patterns", i)));
        }
        config.scan = std::move(scan);
    }

    if (const YAML::Node s = root["spectral"]) {
        r.expect_map(s, "spectral",
                     {"sigma_p", "sigma_f", "carrier", "placement", "quad_tolerance"});
        SpectralConfig spectral;
        if (s["sigma_p"]) {
            spectral.sigma_p = r.number(s["sigma_p"], "spectral.sigma_p");
        }
        const YAML::Node widths = r.require(s, "spectral", "sigma_f");
        if (widths.IsSequence()) {
            for (std::size_t i = 0; i < widths.size(); ++i) {
                spectral.sigma_f.push_back(r.number(widths[i], Reader::at("spectral.sigma_f", i)));
            }
        } else {
            spectral.sigma_f.push_back(r.number(widths, "spectral.sigma_f"));
        }
        if (s["carrier"]) {
            spectral.carrier = r.number(s["carrier"], "spectral.carrier");
        }
        if (s["placement"]) {
            const std::string p = r.scalar_string(s["placement"], "spectral.placement");
            if (p == "trigger-beams") {
                spectral.placement = FilterPlacement::TriggerBeams;
            } else if (p == "all-beams") {
                spectral.placement = FilterPlacement::AllBeams;
            } else {
                r.fail(s["placement"], "spectral.placement",
                       "expected trigger-beams or all-beams");
            }
        }
        if (s["quad_tolerance"]) {
            spectral.quad_tolerance = r.number(s["quad_tolerance"], "spectral.quad_tolerance");
        }
        config.spectral = std::move(spectral);
    }

    if (const YAML::Node o = root["outputs"]) {
        r.expect_map(o, "outputs", {"fringe_csv", "visibility_json", "manifest"});
        if (o["fringe_csv"]) {
            config.outputs.fringe_csv = r.scalar_string(o["fringe_csv"], "outputs.fringe_csv");
        }
        if (o["visibility_json"]) {
            config.outputs.visibility_json =
                r.scalar_string(o["visibility_json"], "outputs.visibility_json");
        }
        if (o["manifest"]) {
            config.outputs.manifest = r.scalar_string(o["manifest"], "outputs.manifest");
        }
    }

    check_scenario(config, marks);
    return config;
}

nlohmann::json pattern_json(const DetectionPattern &pattern) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto &[mode, n] : pattern.demands) {
        out[mode] = n;
    }
    return out;
}

nlohmann::json element_json(const Element &element) {
    return std::visit(
        [](const auto &spec) -> nlohmann::json {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, BeamSplitterSpec>) {
                return {{"type", "beam_splitter"},
                        {"name", spec.name},
                        {"inputs", {spec.input_1, spec.input_2}},
                        {"outputs", {spec.output_1, spec.output_2}},
                        {"convention", std::string(to_string(spec.convention))},
                        {"transmissivity", spec.transmissivity}};
            } else if constexpr (std::is_same_v<T, PhaseShifterSpec>) {
                return {{"type", "phase"}, {"name", spec.name}, {"mode", spec.mode},
                        {"phi", spec.phi}};
            } else if constexpr (std::is_same_v<T, MirrorSpec>) {
                return {{"type", "mirror"}, {"name", spec.name}, {"mode", spec.mode},
                        {"phase", spec.phase}};
            } else {
                return {{"type", "flux"}, {"mode", spec.mode}, {"phase", spec.segment_phase}};
            }
        },
        element);
}

void write_file(const std::filesystem::path &path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw std::runtime_error("failed writing '" + path.string() + "'");
    }
}

} // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error([&] {
          std::string msg;
          for (const auto &i : issues) {
              if (!msg.empty()) {
                  msg += "\n";
              }
              msg += fmt::format("line {}, column {}: {}{}{}", i.line, i.column, i.field,
                                 i.field.empty() ? "" : ": ", i.message);
          }
          return msg;
      }()),
      issues_(std::move(issues)) {}

std::optional<double> parse_phase_literal(std::string_view text) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.empty()) {
        return std::nullopt;
    }
    const auto pi_pos = s.find("pi");
    if (pi_pos == std::string::npos) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used == s.size() && std::isfinite(v)) {
                return v;
            }
        } catch (const std::exception &) {
        }
        return std::nullopt;
    }
    double value = std::numbers::pi;
    std::string head = s.substr(0, pi_pos);
    const std::string tail = s.substr(pi_pos + 2);
    try {
        if (head == "-" || head == "+") {
            value *= head == "-" ? -1.0 : 1.0;
        } else if (!head.empty()) {
            if (head.back() != '*') {
                return std::nullopt;
            }
            head.pop_back();
            std::size_t used = 0;
            value *= std::stod(head, &used);
            if (used != head.size()) {
                return std::nullopt;
            }
        }
        if (!tail.empty()) {
            if (tail.front() != '/') {
                return std::nullopt;
            }
            std::size_t used = 0;
            const double d = std::stod(tail.substr(1), &used);
            if (used != tail.size() - 1 || d == 0.0) {
                return std::nullopt;
            }
            value /= d;
        }
    } catch (const std::exception &) {
        return std::nullopt;
    }
    return value;
}

ScenarioConfig parse_scenario(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException &e) {
        ConfigIssue issue;
        issue.line = e.mark.line + 1;
        issue.column = e.mark.column + 1;
        issue.message = e.msg;
        throw ConfigError({issue});
    }
    if (!root.IsMap()) {
        throw ConfigError({ConfigIssue{1, 1, "", "scenario must be a YAML mapping"}});
    }
    return read_scenario(root);
}

ScenarioConfig load_scenario(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError({ConfigIssue{0, 0, "", "cannot read '" + path.string() + "'"}});
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

nlohmann::json scenario_to_json(const ScenarioConfig &config) {
    nlohmann::json out;
    out["name"] = config.name;
    if (config.circuit) {
        const Circuit &c = *config.circuit;
        out["modes"] = c.modes;
        out["truncation"] = {{"max_photons", c.truncation.max_photons},
                             {"prune_threshold", c.truncation.prune_threshold}};
        out["sources"] = nlohmann::json::array();
        for (const auto &s : c.sources) {
            out["sources"].push_back({{"mode", s.mode}, {"photons", s.photons}});
        }
        out["elements"] = nlohmann::json::array();
        for (const auto &e : c.elements) {
            out["elements"].push_back(element_json(e));
        }
        nlohmann::json flux;
        flux["segments"] = nlohmann::json::object();
        for (const auto &[mode, phase] : config.flux.segment_phases) {
            flux["segments"][mode] = phase;
        }
        flux["loops"] = nlohmann::json::array();
        for (const auto &loop : config.flux.loops) {
            nlohmann::json path = nlohmann::json::array();
            for (const auto &seg : loop.path) {
                path.push_back({{"mode", seg.mode}, {"orientation", seg.orientation}});
            }
            flux["loops"].push_back({{"name", loop.name}, {"winding", loop.winding}, {"path", path}});
        }
        out["flux"] = flux;
    }
    if (config.herald) {
        out["herald"] = {{"id", config.herald->id},
                         {"demands", pattern_json(config.herald->pattern)},
                         {"correction", config.herald->correction_phase}};
    }
    if (config.scan) {
        nlohmann::json patterns = nlohmann::json::array();
        for (const auto &fp : config.scan->final_patterns) {
            patterns.push_back({{"id", fp.id}, {"demands", pattern_json(fp.pattern)}});
        }
        out["scan"] = {{"mode", config.scan->mode},
                       {"grid", config.scan->grid_size},
                       {"apply_correction", config.scan->apply_correction},
                       {"patterns", patterns}};
    }
    if (config.spectral) {
        out["spectral"] = {{"sigma_p", config.spectral->sigma_p},
                           {"sigma_f", config.spectral->sigma_f},
                           {"carrier", config.spectral->carrier},
                           {"placement", std::string(to_string(config.spectral->placement))},
                           {"quad_tolerance", config.spectral->quad_tolerance}};
    }
    out["outputs"] = {{"fringe_csv", config.outputs.fringe_csv},
                      {"visibility_json", config.outputs.visibility_json},
                      {"manifest", config.outputs.manifest}};
    return out;
}

ScenarioConfig apply_overrides(ScenarioConfig config, const RunOptions &options) {
    if (options.grid) {
        if (*options.grid < 3) {
            throw ConfigError({ConfigIssue{0, 0, "--grid", "grid size must be at least 3"}});
        }
        if (config.scan) {
            config.scan->grid_size = *options.grid;
        }
    }
    if (options.quad_tolerance) {
        if (!(*options.quad_tolerance > 0.0)) {
            throw ConfigError({ConfigIssue{0, 0, "--quad-tol", "tolerance must be positive"}});
        }
        if (config.spectral) {
            config.spectral->quad_tolerance = *options.quad_tolerance;
        }
    }
    return config;
}

std::string fringe_csv(const FringeData &data) {
    std::string out = "phi_radians,pattern_id,probability\n";
    for (std::size_t i = 0; i < data.phase_grid.size(); ++i) {
        const bool failed = i < data.herald_failed.size() && data.herald_failed[i];
        for (std::size_t k = 0; k < data.pattern_ids.size(); ++k) {
            if (failed) {
                out += fmt::format("{:.15g},{},nan\n", data.phase_grid[i], data.pattern_ids[k]);
            } else {
                out += fmt::format("{:.15g},{},{:.15g}\n", data.phase_grid[i],
                                   data.pattern_ids[k], data.probabilities[i][k]);
            }
        }
    }
    return out;
}

void emit_fringe_csv(const FringeData &data, const std::filesystem::path &path) {
    write_file(path, fringe_csv(data));
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < length; ++i) {
        hex += fmt::format("{:02x}", digest[i]);
    }
    return hex;
}

RunReport run_scenario(const ScenarioConfig &input, const RunOptions &options,
                       std::string_view source_text) {
    const ScenarioConfig config = apply_overrides(input, options);
    RunReport report;

    nlohmann::json visibility;
    visibility["scenario"] = config.name;
    visibility["fringe_fits"] = nlohmann::json::array();
    visibility["flux"] = nlohmann::json::array();
    visibility["spectral"] = nlohmann::json::array();

    if (config.circuit) {
        const Circuit circuit = attach_flux(*config.circuit, config.flux);
        for (std::size_t i = 0; i < config.flux.loops.size(); ++i) {
            const double phi = enclosed_flux(config.flux, i);
            report.loop_fluxes.emplace_back(config.flux.loops[i].name, phi);
            visibility["flux"].push_back(
                {{"loop", config.flux.loops[i].name}, {"enclosed_flux", phi}});
        }
        if (config.scan) {
            const HeraldRule rule = config.herald.value_or(HeraldRule{"none", {}, 0.0});
            ScanSettings settings{config.scan->mode, uniform_phase_grid(config.scan->grid_size),
                                  config.scan->final_patterns, config.scan->apply_correction};
            FringeData data = fringe_scan(circuit, rule, settings);

            double p_min = 1.0;
            double p_max = 0.0;
            for (double p : data.herald_probability) {
                p_min = std::min(p_min, p);
                p_max = std::max(p_max, p);
            }
            visibility["herald"] = {{"id", rule.id},
                                    {"probability_min", p_min},
                                    {"probability_max", p_max},
                                    {"failed_points", std::count(data.herald_failed.begin(),
                                                                 data.herald_failed.end(), true)}};
            for (const auto &id : data.pattern_ids) {
                const FringeFit fit = extract_visibility(data, id);
                report.fits.push_back({id, fit});
                visibility["fringe_fits"].push_back(
                    {{"pattern_id", id},
                     {"visibility", fit.visibility},
                     {"phase_offset", fit.offset_defined ? nlohmann::json(fit.phase_offset)
                                                         : nlohmann::json(nullptr)},
                     {"mean", fit.mean},
                     {"residual_rms", fit.residual_rms}});
            }
            report.fringe = std::move(data);
        }
    }

    if (config.spectral) {
        const SpectralConfig &s = *config.spectral;
        QuadratureOptions quad;
        quad.tolerance = s.quad_tolerance;
        quad.placement = s.placement;
        for (double sigma_f : s.sigma_f) {
            const VisibilityResult closed = visibility_closed_form(s.sigma_p, sigma_f);
            const VisibilityResult numeric = visibility_quadrature(
                carrier_pump(s.sigma_p, s.carrier), carrier_filter(sigma_f, s.carrier), quad);
            report.spectral.push_back(
                {s.sigma_p, sigma_f, closed.visibility, numeric.visibility, numeric.estimated_error});
            visibility["spectral"].push_back({{"sigma_p", s.sigma_p},
                                              {"sigma_f", sigma_f},
                                              {"V_closed", closed.visibility},
                                              {"V_quad", numeric.visibility},
                                              {"err", numeric.estimated_error}});
        }
    }

    nlohmann::json manifest;
    manifest["config_sha256"] = sha256_hex(source_text);
    manifest["config"] = scenario_to_json(config);
    manifest["options"] = {{"grid", options.grid ? nlohmann::json(*options.grid) : nullptr},
                           {"quad_tol", options.quad_tolerance
                                            ? nlohmann::json(*options.quad_tolerance)
                                            : nullptr},
                           {"seed", options.seed ? nlohmann::json(*options.seed) : nullptr}};
    manifest["versions"] = {
        {"cohswap", std::string(kVersion)},
        {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION,
                              EIGEN_MINOR_VERSION)},
        {"fmt", fmt::format("{}.{}.{}", FMT_VERSION / 10000, FMT_VERSION / 100 % 100,
                            FMT_VERSION % 100)},
        {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR,
                                      NLOHMANN_JSON_VERSION_MINOR, NLOHMANN_JSON_VERSION_PATCH)},
        {"yaml-cpp", COHSWAP_YAML_CPP_VERSION}};

    std::filesystem::create_directories(options.out_dir);
    report.fringe_path = options.out_dir / config.outputs.fringe_csv;
    report.visibility_path = options.out_dir / config.outputs.visibility_json;
    report.manifest_path = options.out_dir / config.outputs.manifest;
    write_file(report.fringe_path,
               report.fringe ? fringe_csv(*report.fringe) : fringe_csv(FringeData{}));
    write_file(report.visibility_path, visibility.dump(2) + "\n");
    write_file(report.manifest_path, manifest.dump(2) + "\n");
    return report;
}

} // namespace cohswap
