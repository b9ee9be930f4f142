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

#include "condq/emit.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <system_error>

namespace condq::explorer {

namespace {

nlohmann::ordered_json point_json(const ParamPoint &p) {
    return {{"phi1", p.phi1}, {"phi2", p.phi2}, {"gamma_abs", p.gamma_abs}, {"gamma_arg", p.gamma_arg}, {"eta", p.eta}};
}

nlohmann::ordered_json spec_json(const SweepSpec &spec) {
    nlohmann::ordered_json axes = nlohmann::ordered_json::array();
    for (const auto &ax : spec.axes) {
        axes.push_back({{"param", param_name(ax.param)}, {"lo", ax.lo}, {"hi", ax.hi}, {"points", ax.points}});
    }
    nlohmann::ordered_json quantities = nlohmann::ordered_json::array();
    for (Quantity q : spec.quantities) quantities.push_back(quantity_name(q));
    nlohmann::ordered_json j;
    j["name"] = spec.name;
    j["axes"] = std::move(axes);
    j["fixed"] = point_json(spec.fixed);
    j["gamma_rule"] = gamma_rule_name(spec.gamma_rule);
    j["quantities"] = std::move(quantities);
    j["engine"] = engine_name(spec.engine);
    j["cutoff"] = spec.cutoff ? nlohmann::ordered_json(*spec.cutoff) : nlohmann::ordered_json(nullptr);
    return j;
}

}  // namespace

Format parse_format(std::string_view name) {
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    throw SpecError("unknown format '" + std::string(name) + "' (expected csv or json)");
}

std::string format_number(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
    return std::string(buf, r.ptr);
}

void write_csv(const SweepResult &result, std::ostream &os) {
    bool first = true;
    for (const auto &ax : result.spec.axes) {
        os << (first ? "" : ",") << param_name(ax.param);
        first = false;
    }
    for (const auto &c : result.columns) os << ',' << c;
    os << '\n';
    for (const auto &rec : result.records) {
        for (std::size_t k = 0; k < rec.axis_values.size(); ++k) os << (k ? "," : "") << format_number(rec.axis_values[k]);
        for (double v : rec.values) os << ',' << format_number(v);
        os << '\n';
    }
}

nlohmann::ordered_json to_json(const SweepResult &result) {
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const auto &rec : result.records) {
        auto params = point_json(rec.point);
        for (std::size_t k = 0; k < rec.axis_values.size(); ++k) {
            params[std::string(param_name(result.spec.axes[k].param))] = rec.axis_values[k];
        }
        nlohmann::ordered_json values;
        for (std::size_t k = 0; k < result.columns.size(); ++k) values[result.columns[k]] = rec.values[k];
        records.push_back({{"params", std::move(params)}, {"values", std::move(values)}});
    }
    const auto &t = result.tolerances;
    nlohmann::ordered_json meta;
    meta["cutoff"] = result.cutoff_used ? nlohmann::ordered_json(*result.cutoff_used) : nlohmann::ordered_json(nullptr);
    meta["tolerances"] = {{"norm", t.norm},
                          {"hermiticity", t.hermiticity},
                          {"tail", t.tail},
                          {"probability_floor", t.probability_floor}};
    meta["seed"] = nullptr;
    meta["columns"] = result.columns;
    meta["records"] = result.records.size();

    nlohmann::ordered_json j;
    j["spec"] = spec_json(result.spec);
    j["records"] = std::move(records);
    j["meta"] = std::move(meta);
    return j;
}

void write_json(const SweepResult &result, std::ostream &os) { os << to_json(result).dump(2) << '\n'; }

void emit(const SweepResult &result, Format format, const std::filesystem::path &destination) {
    const auto write = [&](std::ostream &os) {
        if (format == Format::csv) {
            write_csv(result, os);
        } else {
            write_json(result, os);
        }
    };
    if (destination == "-") {
        write(std::cout);
        std::cout.flush();
        if (!std::cout) throw IoError("failed writing to standard output");
        return;
    }
    std::ofstream out(destination, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + destination.string() + "' for writing");
    write(out);
    out.close();
    if (!out) throw IoError("failed writing '" + destination.string() + "'");
}

}  // namespace condq::explorer
