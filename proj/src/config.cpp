// Copyright 2026 The condq Authors
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

#include "condq/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "condq/emit.hpp"

namespace condq::explorer {

namespace {

constexpr std::array<std::string_view, 25> kKeys = {
    "name",         "axis",         "quantities", "engine",     "gamma-rule",   "phi1",         "phi2",
    "gamma-abs",    "gamma-arg",    "eta",        "cutoff",     "objective",    "fidelity-min", "phi1-range",
    "phi2-range",   "grid",         "starts",     "levels",     "target-ratio", "target-phase", "format",
    "out",          "refine-grid",  "shrink",     "preset",
};

constexpr std::string_view kFig2 = R"(# Ideal conditioning with |gamma| = tan(phi1) tan(phi2).
name = fig2
axis = phi1:0.1:1.5:50
axis = phi2:0.1:1.5:50
gamma-rule = balanced
quantities = P_star
engine = analytic
objective = max_probability_balanced_target
phi1-range = 0.1:1.5
phi2-range = 0.1:1.5
)";

constexpr std::string_view kFig3 = R"(# YES/NO conditioning at phi1 = phi2 = pi/4.
name = fig3
axis = gamma_abs_sq:0:4:81
axis = eta:0.2:1.0:5
phi1 = pi/4
phi2 = pi/4
quantities = P_yn,F_yn
engine = analytic
)";

constexpr std::string_view kFig4Eta100 = R"(# YES/NO conditioning over both phases, balanced target, eta = 1.
name = fig4-eta100
axis = phi1:0.05:1.5:60
axis = phi2:0.05:1.5:60
gamma-rule = balanced
eta = 1.0
quantities = P_yn,F_yn
engine = analytic
objective = max_probability_given_fidelity
fidelity-min = 0.99
phi1-range = 0.05:1.5
phi2-range = 0.05:1.5
)";

constexpr std::string_view kFig4Eta50 = R"(# YES/NO conditioning over both phases, balanced target, eta = 0.5.
name = fig4-eta50
axis = phi1:0.05:1.5:60
axis = phi2:0.05:1.5:60
gamma-rule = balanced
eta = 0.5
quantities = P_yn,F_yn
engine = analytic
objective = max_probability_given_fidelity
fidelity-min = 0.99
phi1-range = 0.05:1.5
phi2-range = 0.05:1.5
)";

constexpr std::array<std::pair<std::string_view, std::string_view>, 4> kPresets = {{
    {"fig2", kFig2},
    {"fig3", kFig3},
    {"fig4-eta100", kFig4Eta100},
    {"fig4-eta50", kFig4Eta50},
}};

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    while (true) {
        const auto k = s.find(sep);
        parts.push_back(trim(s.substr(0, k)));
        if (k == std::string_view::npos) break;
        s.remove_prefix(k + 1);
    }
    return parts;
}

double plain_number(std::string_view text, std::string_view key) {
    double v = 0.0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc() || r.ptr != text.data() + text.size() || text.empty()) {
        throw SpecError("invalid number '" + std::string(text) + "' for " + std::string(key));
    }
    return v;
}

int parse_int(std::string_view text, std::string_view key) {
    text = trim(text);
    int v = 0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc() || r.ptr != text.data() + text.size() || text.empty()) {
        throw SpecError("invalid integer '" + std::string(text) + "' for " + std::string(key));
    }
    return v;
}

std::pair<double, double> parse_range(std::string_view text, std::string_view key) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw SpecError(std::string(key) + " expects lo:hi, got '" + std::string(text) + "'");
    return {parse_number(parts[0], key), parse_number(parts[1], key)};
}

Axis parse_axis(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() != 4) throw SpecError("axis expects param:lo:hi:points, got '" + std::string(text) + "'");
    return {parse_param(parts[0]), parse_number(parts[1], "axis"), parse_number(parts[2], "axis"),
            parse_int(parts[3], "axis")};
}

}  // namespace

double parse_number(std::string_view text, std::string_view key) {
    text = trim(text);
    const auto at = text.find("pi");
    if (at == std::string_view::npos) return plain_number(text, key);
    const std::string_view before = text.substr(0, at), after = text.substr(at + 2);
    double v = std::numbers::pi;
    if (!before.empty()) {
        if (before.back() != '*') throw SpecError("invalid number '" + std::string(text) + "' for " + std::string(key));
        v *= plain_number(trim(before.substr(0, before.size() - 1)), key);
    }
    if (!after.empty()) {
        if (after.front() != '/') throw SpecError("invalid number '" + std::string(text) + "' for " + std::string(key));
        v /= plain_number(trim(after.substr(1)), key);
    }
    return v;
}

KeyValueConfig KeyValueConfig::parse(std::string_view text, std::string_view origin) {
    KeyValueConfig cfg;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const auto where = std::string(origin) + ":" + std::to_string(line_no);
        if (eq == std::string_view::npos) throw SpecError(where + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
            throw SpecError(where + ": unknown key '" + std::string(key) + "'");
        }
        cfg.add(std::string(key), std::string(trim(line.substr(eq + 1))));
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse(text.str(), path.string());
}

void KeyValueConfig::add(std::string key, std::string value) { entries_.emplace_back(std::move(key), std::move(value)); }

void KeyValueConfig::merge(const KeyValueConfig &over) {
    for (const auto &[key, value] : over.entries_) {
        std::erase_if(entries_, [&](const auto &e) { return e.first == key; });
    }
    entries_.insert(entries_.end(), over.entries_.begin(), over.entries_.end());
}

bool KeyValueConfig::has(std::string_view key) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const auto &e) { return e.first == key; });
}

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
        if (it->first == key) return it->second;
    }
    return std::nullopt;
}

std::vector<std::string> KeyValueConfig::get_all(std::string_view key) const {
    std::vector<std::string> out;
    for (const auto &[k, v] : entries_) {
        if (k == key) out.push_back(v);
    }
    return out;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto &[name, text] : kPresets) names.emplace_back(name);
    return names;
}

std::optional<std::string_view> preset_text(std::string_view name) {
    for (const auto &[n, text] : kPresets) {
        if (n == name) return text;
    }
    return std::nullopt;
}

KeyValueConfig preset_config(std::string_view name) {
    const auto text = preset_text(name);
    if (!text) {
        std::string msg = "unknown preset '" + std::string(name) + "' (expected one of:";
        for (const auto &n : preset_names()) msg += " " + n;
        throw SpecError(msg + ")");
    }
    return KeyValueConfig::parse(*text, name);
}

SweepSpec sweep_spec_from(const KeyValueConfig &config) {
    SweepSpec spec;
    spec.name = config.get("name").value_or("sweep");
    for (const auto &a : config.get_all("axis")) spec.axes.push_back(parse_axis(a));
    if (const auto q = config.get("quantities")) {
        for (auto part : split(*q, ',')) {
            if (!part.empty()) spec.quantities.push_back(parse_quantity(part));
        }
    }
    if (const auto v = config.get("engine")) spec.engine = parse_engine(*v);
    if (const auto v = config.get("gamma-rule")) spec.gamma_rule = parse_gamma_rule(*v);
    if (const auto v = config.get("phi1")) spec.fixed.phi1 = parse_number(*v, "phi1");
    if (const auto v = config.get("phi2")) spec.fixed.phi2 = parse_number(*v, "phi2");
    if (const auto v = config.get("gamma-abs")) spec.fixed.gamma_abs = parse_number(*v, "gamma-abs");
    if (const auto v = config.get("gamma-arg")) spec.fixed.gamma_arg = parse_number(*v, "gamma-arg");
    if (const auto v = config.get("eta")) spec.fixed.eta = parse_number(*v, "eta");
    if (const auto v = config.get("cutoff")) spec.cutoff = parse_int(*v, "cutoff");
    spec.validate();
    return spec;
}

OptimizeSpec optimize_spec_from(const KeyValueConfig &config) {
    OptimizeSpec spec;
    if (const auto v = config.get("objective")) spec.objective = parse_objective(*v);
    if (const auto v = config.get("fidelity-min")) spec.fidelity_min = parse_number(*v, "fidelity-min");
    if (const auto v = config.get("eta")) spec.eta = parse_number(*v, "eta");
    if (const auto v = config.get("target-ratio")) spec.target_ratio = parse_number(*v, "target-ratio");
    if (const auto v = config.get("target-phase")) spec.target_phase = parse_number(*v, "target-phase");
    // Without an explicit target phase the phase of gamma fixes it.
    else if (const auto g = config.get("gamma-arg")) spec.target_phase = parse_number(*g, "gamma-arg");
    if (const auto v = config.get("phi1-range")) std::tie(spec.box.phi1_lo, spec.box.phi1_hi) = parse_range(*v, "phi1-range");
    if (const auto v = config.get("phi2-range")) std::tie(spec.box.phi2_lo, spec.box.phi2_hi) = parse_range(*v, "phi2-range");
    if (const auto v = config.get("grid")) spec.grid = parse_int(*v, "grid");
    if (const auto v = config.get("starts")) spec.starts = parse_int(*v, "starts");
    if (const auto v = config.get("levels")) spec.levels = parse_int(*v, "levels");
    if (const auto v = config.get("refine-grid")) spec.refine_grid = parse_int(*v, "refine-grid");
    if (const auto v = config.get("shrink")) spec.shrink = parse_number(*v, "shrink");
    spec.validate();
    return spec;
}

}  // namespace condq::explorer
