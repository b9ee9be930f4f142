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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"

#include "condq/analytic.hpp"
#include "condq/config.hpp"
#include "condq/emit.hpp"
#include "condq/optimize.hpp"
#include "condq/sweep.hpp"
#include "condq/verify.hpp"

using namespace condq;
using namespace condq::explorer;

namespace {

SweepSpec small_spec() {
    SweepSpec s;
    s.name = "small";
    s.axes = {{Param::phi1, 0.2, 1.2, 4}, {Param::eta, 0.3, 1.0, 3}};
    s.fixed.phi2 = 0.6;
    s.fixed.gamma_abs = 0.8;
    s.fixed.gamma_arg = 0.5;
    s.quantities = {Quantity::P10, Quantity::P_yn, Quantity::F_yn, Quantity::coefficients};
    return s;
}

std::string csv_of(const SweepResult &r) {
    std::ostringstream os;
    write_csv(r, os);
    return os.str();
}

}  // namespace

TEST_CASE("sweep spec validation") {
    auto s = small_spec();
    CHECK_NOTHROW(s.validate());

    auto dup = s;
    dup.axes.push_back({Param::phi1, 0.0, 1.0, 3});
    CHECK_THROWS_AS(dup.validate(), SpecError);

    auto same_gamma = s;
    same_gamma.axes = {{Param::gamma_abs, 0.0, 1.0, 3}, {Param::gamma_abs_sq, 0.0, 1.0, 3}};
    CHECK_THROWS_AS(same_gamma.validate(), SpecError);

    auto one_point = s;
    one_point.axes[0].points = 1;
    CHECK_THROWS_AS(one_point.validate(), SpecError);

    auto infinite = s;
    infinite.axes[0].hi = INFINITY;
    CHECK_THROWS_AS(infinite.validate(), SpecError);

    auto empty = s;
    empty.quantities.clear();
    CHECK_THROWS_AS(empty.validate(), SpecError);
    CHECK_THROWS_AS(run_sweep(empty), SpecError);

    auto conflicting = s;
    conflicting.gamma_rule = GammaRule::balanced;
    conflicting.axes[1] = {Param::gamma_abs, 0.0, 1.0, 3};
    CHECK_THROWS_AS(conflicting.validate(), SpecError);

    CHECK_THROWS_AS(parse_quantity("P_nope"), SpecError);
    CHECK(parse_param("gamma_abs_sq") == Param::gamma_abs_sq);
}

TEST_CASE("records follow row-major order with the first axis slowest") {
    const auto r = run_sweep(small_spec(), Execution::serial);
    REQUIRE(r.records.size() == 12);
    CHECK(r.columns == std::vector<std::string>{"P10", "P_yn", "F_yn", "d00", "d11", "d01_re", "d01_im"});
    CHECK(r.records[0].axis_values == std::vector<double>{0.2, 0.3});
    CHECK(r.records[1].axis_values[1] == doctest::Approx(0.65));
    CHECK(r.records[3].axis_values[0] == doctest::Approx(0.2 + 1.0 / 3.0));
    CHECK(r.records[11].axis_values == std::vector<double>{1.2, 1.0});
    const auto &p = r.records[5].point;
    CHECK(r.records[5].values[1] == analytic::yn_probability(p.eta, p.gamma(), p.phi1, p.phi2));
}

TEST_CASE("parallel sweep reproduces the serial reference exactly") {
    auto s = small_spec();
    s.axes = {{Param::phi1, 0.1, 1.4, 17}, {Param::phi2, 0.1, 1.4, 13}};
    s.engine = Engine::both;
    const auto serial = run_sweep(s, Execution::serial);
    const auto parallel = run_sweep(s, Execution::parallel);
    CHECK(csv_of(serial) == csv_of(parallel));
}

TEST_CASE("both engines agree on a mixed grid") {
    SweepSpec s;
    s.axes = {{Param::gamma_abs, 0.0, 1.4, 5}, {Param::gamma_arg, 0.0, 2.0, 3}, {Param::eta, 0.2, 1.0, 3}};
    s.fixed.phi1 = 0.67;
    s.fixed.phi2 = 1.1;
    s.quantities = {Quantity::P10,    Quantity::P01,          Quantity::P_star,       Quantity::P_yn,
                    Quantity::F_yn,   Quantity::P_photocount, Quantity::F_photocount, Quantity::coefficients,
                    Quantity::overlap};
    s.engine = Engine::both;
    const auto r = run_sweep(s);
    REQUIRE(r.cutoff_used);
    double worst = 0.0;
    for (const auto &rec : r.records) {
        for (std::size_t k = 2; k < rec.values.size(); k += 3) worst = std::max(worst, rec.values[k]);
    }
    CHECK(worst < 1e-10);
    CHECK(r.columns.front() == "P10_analytic");
    CHECK(r.columns[2] == "P10_absdiff");
}

TEST_CASE("numeric engine refuses a cutoff too small for the grid") {
    auto s = small_spec();
    s.engine = Engine::numeric;
    s.fixed.gamma_abs = 1.4;
    s.cutoff = 10;
    CHECK_THROWS_AS(run_sweep(s), SpecError);
    s.cutoff = 30;
    CHECK(run_sweep(s).cutoff_used == 30);
}

TEST_CASE("numeric engine rejects grids that need an impractical basis") {
    auto s = sweep_spec_from(preset_config("fig4-eta50"));
    s.engine = Engine::numeric;
    CHECK_THROWS_AS(run_sweep(s), SpecError);
}

TEST_CASE("CSV has axis then value columns and is byte-stable") {
    const auto spec = sweep_spec_from(preset_config("fig3"));
    const auto a = csv_of(run_sweep(spec));
    const auto b = csv_of(run_sweep(spec));
    CHECK(a == b);
    CHECK(a.substr(0, a.find('\n')) == "gamma_abs_sq,eta,P_yn,F_yn");
    CHECK(std::count(a.begin(), a.end(), '\n') == 1 + 81 * 5);
    CHECK(format_number(0.1) == "1.0000000000000001e-01");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("JSON round trip keeps every value exactly") {
    auto s = small_spec();
    s.engine = Engine::both;
    const auto r = run_sweep(s);
    std::ostringstream os;
    write_json(r, os);
    const auto j = nlohmann::json::parse(os.str());
    CHECK(j["meta"]["seed"].is_null());
    CHECK(j["meta"]["cutoff"] == *r.cutoff_used);
    CHECK(j["spec"]["axes"].size() == 2);
    REQUIRE(j["records"].size() == r.records.size());
    for (std::size_t k = 0; k < r.records.size(); ++k) {
        for (std::size_t c = 0; c < r.columns.size(); ++c) {
            CHECK(j["records"][k]["values"][r.columns[c]].get<double>() == r.records[k].values[c]);
        }
        CHECK(j["records"][k]["params"]["phi1"].get<double>() == r.records[k].point.phi1);
    }
}

TEST_CASE("emission to an unwritable destination") {
    const auto r = run_sweep(small_spec());
    CHECK_THROWS_AS(emit(r, Format::csv, "/nonexistent-dir/out.csv"), IoError);
    const auto path = std::filesystem::temp_directory_path() / "condq_emit_test.json";
    emit(r, Format::json, path);
    CHECK(std::filesystem::file_size(path) > 0);
    std::filesystem::remove(path);
}

TEST_CASE("config layering, comments and numeric shorthands") {
    auto cfg = KeyValueConfig::parse("# comment\nphi1 = pi/4  # trailing\naxis = eta:0:1:3\naxis = phi2:0.1:1:4\n");
    CHECK(parse_number(*cfg.get("phi1"), "phi1") == doctest::Approx(std::numbers::pi / 4));
    CHECK(parse_number("2*pi", "x") == doctest::Approx(2 * std::numbers::pi));
    CHECK(cfg.get_all("axis").size() == 2);
    KeyValueConfig over;
    over.add("axis", "gamma_abs:0:1:5");
    over.add("phi1", "0.3");
    cfg.merge(over);
    CHECK(cfg.get_all("axis") == std::vector<std::string>{"gamma_abs:0:1:5"});
    CHECK(*cfg.get("phi1") == "0.3");
    CHECK_THROWS_AS(KeyValueConfig::parse("bogus = 1"), SpecError);
    CHECK_THROWS_AS(KeyValueConfig::parse("phi1 0.3"), SpecError);
    CHECK_THROWS_AS(parse_number("0.3x", "phi1"), SpecError);
    CHECK_THROWS_AS(preset_config("fig9"), SpecError);
    for (const auto &name : preset_names()) CHECK_NOTHROW(sweep_spec_from(preset_config(name)));
}

TEST_CASE("optimizer returns the single point of a degenerate box") {
    OptimizeSpec s;
    s.box = {0.5, 0.5, 0.9, 0.9};
    const auto r = optimize_regime(s);
    CHECK(r.best.phi1 == 0.5);
    CHECK(r.best.phi2 == 0.9);
    CHECK(r.best.probability == doctest::Approx(analytic::balanced_target_probability(0.5, 0.9)).epsilon(1e-14));
}

TEST_CASE("optimizer never reports less than its coarse grid") {
    for (double eta : {0.5, 1.0}) {
        OptimizeSpec s;
        s.objective = Objective::max_probability_given_fidelity;
        s.eta = eta;
        s.grid = 15;
        s.box = {0.05, 1.5, 0.05, 1.5};
        const auto r = optimize_regime(s);
        CHECK(r.feasible);
        CHECK(r.best.probability >= r.best_coarse_probability);
        CHECK(r.best.fidelity >= 0.99);
        for (int i = 0; i < 15; ++i) {
            for (int j = 0; j < 15; ++j) {
                const auto e = evaluate_objective(s, 0.05 + 1.45 * i / 14.0, 0.05 + 1.45 * j / 14.0);
                if (e.feasible) CHECK(e.probability <= r.best.probability);
            }
        }
    }
}

TEST_CASE("optimizer finds the equal-weight maximum") {
    const auto r = optimize_regime(optimize_spec_from(preset_config("fig2")));
    CHECK(r.best.probability == doctest::Approx(0.2093).epsilon(1e-3));
    CHECK(r.best.phi1 == doctest::Approx(0.7153).epsilon(1e-3));
    CHECK(r.best.phi2 == doctest::Approx(0.7153).epsilon(1e-3));
}

TEST_CASE("infeasible constraint reports the best infeasible point") {
    OptimizeSpec s;
    s.objective = Objective::max_probability_given_fidelity;
    s.eta = 0.5;
    s.fidelity_min = 1.0;
    s.grid = 11;
    const auto r = optimize_regime(s);
    CHECK_FALSE(r.feasible);
    CHECK(r.best.valid);
    CHECK(r.best.fidelity < 1.0);
    CHECK(r.best.fidelity > 0.99);
}

TEST_CASE("optimizer spec validation") {
    OptimizeSpec s;
    s.box.phi1_hi = std::numbers::pi / 2;
    CHECK_THROWS_AS(s.validate(), SpecError);
    s.box.phi1_hi = 1.0;
    s.box.phi1_lo = 1.2;
    CHECK_THROWS_AS(s.validate(), SpecError);
    CHECK_THROWS_AS(parse_objective("min"), SpecError);
}

TEST_CASE("verification presets and the tolerance hook") {
    const auto appendix = run_verification("appendix");
    CHECK(appendix.passed());
    CHECK(appendix.checks.size() == 12);
    CHECK_FALSE(run_verification("appendix", 1e-30).passed());
    CHECK_THROWS_AS(run_verification("bogus"), SpecError);

    VerificationGrid g{{0.3, 1.1}, {0.0, 0.9}, {0.0, 1.0}, {0.4, 1.0}};
    const auto r = verify_grid(g);
    CHECK(r.passed());
    for (const auto &c : r.checks) CHECK_MESSAGE(c.worst_error < c.threshold, c.name);
    CHECK(standard_grid().size() == 7u * 7u * 5u * 2u * 4u);
}
