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

// condq: sweeps, regime optimization, verification and target inversion for the
// conditional double interferometer.
//
// Exit codes: 0 success, 1 usage or spec error, 2 verification failure or
// out-of-range value, 3 I/O failure.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "condq/analytic.hpp"
#include "condq/config.hpp"
#include "condq/emit.hpp"
#include "condq/fock.hpp"
#include "condq/optimize.hpp"
#include "condq/sweep.hpp"
#include "condq/verify.hpp"

namespace {

using namespace condq;
using namespace condq::explorer;

enum Exit { kOk = 0, kUsage = 1, kVerify = 2, kIo = 3 };

// Flag values as text; they become the top configuration layer.
struct Flags {
    std::string preset, config, out, format;
    std::vector<std::string> axes;
    std::vector<std::pair<std::string, std::string>> values;

    void bind(CLI::App &app) {
        app.add_option("--preset", preset, "Named figure preset (fig2, fig3, fig4-eta100, fig4-eta50)");
        app.add_option("--config", config, "Key = value configuration file; flags override it");
        app.add_option("--out", out, "Output path, '-' for stdout");
        app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        app.add_option("--axis", axes, "Sweep axis param:lo:hi:points (repeatable)");
        static const std::pair<const char *, const char *> kKeys[] = {
            {"phi1", "First interferometer phase"},
            {"phi2", "Second interferometer phase"},
            {"gamma-abs", "Coherent amplitude |gamma|"},
            {"gamma-arg", "Coherent phase arg(gamma)"},
            {"eta", "Detector quantum efficiency in [0, 1]"},
            {"cutoff", "Fock cutoff n_max for the numeric engine (default: automatic)"},
            {"engine", "analytic, numeric or both"},
            {"fidelity-min", "Fidelity floor for the constrained objective"},
            {"grid", "Points per axis (sweep) or coarse grid size (optimize)"},
            {"quantities", "Comma-separated: P10 P01 P_star P_yn F_yn P_photocount F_photocount coefficients overlap"},
            {"gamma-rule", "free or balanced (|gamma| = tan phi1 tan phi2)"},
            {"objective", "max_probability_balanced_target or max_probability_given_fidelity"},
            {"target-ratio", "|a1 / a0| of the target state"},
            {"target-phase", "arg(a1 / a0) of the target state"},
            {"phi1-range", "Optimizer box lo:hi for phi1"},
            {"phi2-range", "Optimizer box lo:hi for phi2"},
            {"name", "Run name recorded in the output"},
        };
        for (const auto &[key, help] : kKeys) values.emplace_back(key, "");
        for (std::size_t k = 0; k < values.size(); ++k) app.add_option("--" + values[k].first, values[k].second, kKeys[k].second);
    }

    KeyValueConfig layered() const {
        KeyValueConfig cfg;
        if (!preset.empty()) cfg = preset_config(preset);
        if (!config.empty()) cfg.merge(KeyValueConfig::load(config));
        KeyValueConfig top;
        for (const auto &a : axes) top.add("axis", a);
        for (const auto &[key, value] : values) {
            if (!value.empty()) top.add(key, value);
        }
        cfg.merge(top);
        return cfg;
    }
};

std::string out_path(const Flags &f, const KeyValueConfig &cfg) {
    if (!f.out.empty()) return f.out;
    return cfg.get("out").value_or("-");
}

Format out_format(const Flags &f, const KeyValueConfig &cfg, const std::string &path) {
    if (!f.format.empty()) return parse_format(f.format);
    if (const auto v = cfg.get("format")) return parse_format(*v);
    return path.size() > 5 && path.ends_with(".json") ? Format::json : Format::csv;
}

int write_text(const std::string &path, const std::string &text) {
    if (path == "-") {
        std::cout << text;
        return kOk;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || (out.close(), !out)) throw IoError("cannot write '" + path + "'");
    return kOk;
}

int cmd_sweep(const Flags &f) {
    const auto cfg = f.layered();
    auto spec = sweep_spec_from(cfg);
    if (const auto g = cfg.get("grid")) {
        const int points = std::stoi(*g);
        for (auto &ax : spec.axes) ax.points = points;
        spec.validate();
    }
    const auto result = run_sweep(spec);
    const auto path = out_path(f, cfg);
    emit(result, out_format(f, cfg, path), path);
    std::cerr << "sweep " << (spec.name.empty() ? "-" : spec.name) << ": " << result.records.size() << " records";
    if (result.cutoff_used) std::cerr << ", n_max=" << *result.cutoff_used;
    std::cerr << ", " << std::fixed << std::setprecision(3) << result.runtime_seconds << " s\n";
    return kOk;
}

int cmd_optimize(const Flags &f) {
    const auto cfg = f.layered();
    const auto spec = optimize_spec_from(cfg);
    const auto r = optimize_regime(spec);
    const auto &b = r.best;
    const auto path = out_path(f, cfg);
    std::ostringstream os;
    os.precision(12);
    if (out_format(f, cfg, path) == Format::json) {
        nlohmann::ordered_json j;
        j["objective"] = objective_name(spec.objective);
        j["feasible"] = r.feasible;
        j["phi1"] = b.phi1;
        j["phi2"] = b.phi2;
        j["gamma_abs"] = std::abs(b.gamma);
        j["gamma_arg"] = std::arg(b.gamma);
        j["probability"] = b.probability;
        j["fidelity"] = b.fidelity;
        j["eta"] = spec.eta;
        j["fidelity_min"] = spec.fidelity_min;
        j["best_coarse_probability"] = r.best_coarse_probability;
        j["evaluations"] = r.evaluations;
        os << j.dump(2) << '\n';
    } else {
        os << "objective " << objective_name(spec.objective) << '\n'
           << "feasible " << (r.feasible ? "yes" : "no") << '\n'
           << "phi1 " << b.phi1 << '\n'
           << "phi2 " << b.phi2 << '\n'
           << "gamma_abs " << std::abs(b.gamma) << '\n'
           << "gamma_arg " << std::arg(b.gamma) << '\n'
           << "probability " << b.probability << '\n'
           << "fidelity " << b.fidelity << '\n'
           << "best_coarse_probability " << r.best_coarse_probability << '\n'
           << "evaluations " << r.evaluations << '\n';
    }
    write_text(path, os.str());
    if (!r.feasible) {
        std::cerr << "optimize: no point in the box reaches fidelity " << spec.fidelity_min
                  << "; reported the best infeasible point\n";
        return kVerify;
    }
    return kOk;
}

int cmd_verify(const std::string &preset, std::optional<double> tolerance, bool serial) {
    const auto report = run_verification(preset, tolerance, serial ? Execution::serial : Execution::parallel);
    print_report(report, std::cout);
    std::cerr << "verify " << preset << ": " << std::fixed << std::setprecision(3) << report.runtime_seconds << " s\n";
    return report.passed() ? kOk : kVerify;
}

cplx parse_complex(const std::string &text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return {parse_number(text, "amplitude"), 0.0};
    return {parse_number(text.substr(0, comma), "amplitude"), parse_number(text.substr(comma + 1), "amplitude")};
}

int cmd_solve(const std::string &a0, const std::string &a1, const std::string &strategy, const Flags &f) {
    const auto cfg = f.layered();
    const auto target = analytic::QubitTarget::from(parse_complex(a0), parse_complex(a1));
    std::optional<std::pair<double, double>> phases;
    auto how = analytic::SolveStrategy::max_probability;
    if (strategy == "fixed_phases") {
        how = analytic::SolveStrategy::fixed_phases;
        const auto p1 = cfg.get("phi1"), p2 = cfg.get("phi2");
        if (!p1 || !p2) throw SpecError("fixed_phases needs --phi1 and --phi2");
        phases = {parse_number(*p1, "phi1"), parse_number(*p2, "phi2")};
    }
    const auto s = analytic::solve_target(target, how, phases);
    std::ostringstream os;
    os.precision(12);
    os << "one_photon_limit " << (s.one_photon_limit ? "yes" : "no") << '\n'
       << "ratio " << s.ratio << '\n'
       << "relative_phase " << s.relative_phase << '\n'
       << "phi1 " << s.phi1 << '\n'
       << "phi2 " << s.phi2 << '\n'
       << "gamma_abs " << std::abs(s.gamma) << '\n'
       << "gamma_arg " << std::arg(s.gamma) << '\n'
       << "probability " << s.probability << '\n';
    return write_text(out_path(f, cfg), os.str());
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"condq: conditional preparation of photon-number qubits"};
    app.require_subcommand(1);

    Flags sweep_flags, optimize_flags, solve_flags;
    auto *sweep = app.add_subcommand("sweep", "Evaluate quantities on a parameter grid and emit CSV or JSON");
    sweep_flags.bind(*sweep);
    auto *optimize = app.add_subcommand("optimize", "Maximize detection probability over the two phases");
    optimize_flags.bind(*optimize);

    std::string verify_preset = "standard";
    std::optional<double> verify_tolerance;
    bool verify_serial = false;
    auto *verify = app.add_subcommand("verify", "Cross-engine and invariant checks");
    verify->add_option("preset,--preset", verify_preset, "standard, fine or appendix");
    verify->add_option("--tolerance", verify_tolerance, "Replace every check threshold (test hook)");
    verify->add_flag("--serial", verify_serial, "Single-threaded reference path");

    std::string a0 = "1", a1 = "1", strategy = "max_probability";
    auto *solve = app.add_subcommand("solve", "Device settings for a target a0|0> + a1|1>");
    solve->add_option("--a0", a0, "Amplitude of |0> as re[,im]");
    solve->add_option("--a1", a1, "Amplitude of |1> as re[,im]");
    solve->add_option("--strategy", strategy, "max_probability or fixed_phases")
        ->check(CLI::IsMember({"max_probability", "fixed_phases"}));
    solve_flags.bind(*solve);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (sweep->parsed()) return cmd_sweep(sweep_flags);
        if (optimize->parsed()) return cmd_optimize(optimize_flags);
        if (verify->parsed()) return cmd_verify(verify_preset, verify_tolerance, verify_serial);
        if (solve->parsed()) return cmd_solve(a0, a1, strategy, solve_flags);
    } catch (const IoError &e) {
        std::cerr << "condq: " << e.what() << '\n';
        return kIo;
    } catch (const RangeViolation &e) {
        std::cerr << "condq: " << e.what() << '\n';
        return kVerify;
    } catch (const std::exception &e) {
        std::cerr << "condq: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
