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

// Acceptance runner: one PASS/FAIL line per criterion. `--criterion N` runs a
// single one; with no argument all nine run. Exit status is nonzero when any
// selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "condq/analytic.hpp"
#include "condq/config.hpp"
#include "condq/device.hpp"
#include "condq/emit.hpp"
#include "condq/measurement.hpp"
#include "condq/optimize.hpp"
#include "condq/sweep.hpp"
#include "condq/verify.hpp"

using namespace condq;
using namespace condq::explorer;
namespace an = condq::analytic;
namespace ms = condq::measurement;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            detail << " [miss: " << what << "]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string csv_of(const SweepResult &r) {
    std::ostringstream os;
    write_csv(r, os);
    return os.str();
}

// 1. Cross-engine agreement on the standard grid, single-threaded.
void criterion1(Outcome &o) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = verify_grid(standard_grid(), std::nullopt, Execution::serial);
    const double runtime = seconds_since(t0);
    double worst = 0.0;
    for (const char *name : {"ideal.P10", "ideal.P01", "ideal.coefficients", "yes_no.P", "yes_no.coefficients",
                             "yes_no.F", "photocount.P", "photocount.coefficients", "photocount.F"}) {
        const auto *c = r.find(name);
        o.require(c != nullptr, std::string("check ") + name + " ran");
        if (c) worst = std::max(worst, c->worst_error);
    }
    o.require(worst < 1e-10, "max |analytic - numeric| < 1e-10");
    o.require(runtime < 30.0, "runtime < 30 s single-threaded");
    o.detail << "points=" << standard_grid().size() << " n_max=" << r.cutoff.value_or(-1) << " worst=" << worst
             << " runtime=" << runtime << "s";
}

// 2. Equal-weight optimum from the fig2 preset.
void criterion2(Outcome &o) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = optimize_regime(optimize_spec_from(preset_config("fig2")));
    const double runtime = seconds_since(t0);
    const auto &b = r.best;
    const double g = std::abs(b.gamma);
    o.require(b.probability >= 0.205 && b.probability <= 0.215, "P* in [0.205, 0.215]");
    o.require(b.phi1 >= 0.705 && b.phi1 <= 0.725 && b.phi2 >= 0.705 && b.phi2 <= 0.725, "phi1, phi2 in [0.705, 0.725]");
    o.require(g >= 0.745 && g <= 0.765, "|gamma| in [0.745, 0.765]");
    o.require(runtime < 5.0, "runtime < 5 s");
    o.detail << "P*=" << b.probability << " phi1=" << b.phi1 << " phi2=" << b.phi2 << " |gamma|=" << g
             << " runtime=" << runtime << "s";
}

// 3. Balanced choice: F_yn <= 0.93 + 1e-3 at |gamma| = 1 over eta, and F_yn below
// the eta = 1 bound for |gamma|^2 in (0, 4].
void criterion3(Outcome &o) {
    double max_f = 0.0, at_eta = 0.0;
    // 100 points in (0, 1]; at eta = 0 the YES outcome never fires.
    for (int k = 1; k <= 100; ++k) {
        const double eta = k / 100.0;
        const double f = an::yn_fidelity(eta, 1.0, kPi / 4, kPi / 4);
        if (f > max_f) {
            max_f = f;
            at_eta = eta;
        }
    }
    o.require(max_f <= 0.93 + 1e-3, "F_yn <= 0.931 at |gamma| = 1");
    double worst_excess = -INFINITY;
    for (int i = 1; i <= 80; ++i) {
        const double x = 4.0 * i / 80.0;
        for (int k = 1; k <= 100; ++k) {
            const double f = an::yn_fidelity(k / 100.0, std::sqrt(x), kPi / 4, kPi / 4);
            worst_excess = std::max(worst_excess, f - an::balanced_fidelity_bound(x));
        }
    }
    o.require(worst_excess <= 1e-9, "F_yn <= bound + 1e-9 on |gamma|^2 in (0, 4]");
    o.detail << "max F_yn(|gamma|=1)=" << max_f << " at eta=" << at_eta << " bound(1)=" << an::balanced_fidelity_bound(1.0)
             << " max(F - bound)=" << worst_excess;
}

// 4. Unbalanced regime at sin^2 phi1 = cos^2 phi2 = 0.01, |gamma| = 1, and the
// order of the small-angle approximations.
void criterion4(Outcome &o) {
    const double phi1 = std::asin(0.1);
    double min_f = 1.0, min_p = 1.0, max_p = 0.0;
    std::ostringstream low;
    for (int k = 1; k <= 10; ++k) {
        const double eta = k / 10.0;
        const auto r = an::unbalanced_regime(eta, 1.0, phi1);
        min_f = std::min(min_f, r.fidelity_exact);
        min_p = std::min(min_p, r.probability_exact);
        max_p = std::max(max_p, r.probability_exact);
        if (r.probability_exact < 0.005) low << " eta=" << eta << ":P=" << r.probability_exact;
    }
    o.require(min_f > 0.99, "exact F_yn > 0.99 for all eta");
    o.require(min_p >= 0.005 && max_p <= 0.02, "P_yn in [0.5%, 2%] for all eta");

    double worst_ratio_p = INFINITY, worst_ratio_f = INFINITY;
    for (int k = 1; k <= 10; ++k) {
        const double eta = k / 10.0;
        double prev_p = 0.0, prev_f = 0.0;
        for (double a : {0.2, 0.1, 0.05}) {
            const auto r = an::unbalanced_regime(eta, 1.0, a);
            const double ep = std::abs(r.probability_approx - r.probability_exact);
            const double ef = std::abs(r.fidelity_approx - r.fidelity_exact);
            if (prev_p > 0.0) {
                worst_ratio_p = std::min(worst_ratio_p, prev_p / ep);
                worst_ratio_f = std::min(worst_ratio_f, prev_f / ef);
            }
            prev_p = ep;
            prev_f = ef;
        }
    }
    o.require(worst_ratio_p >= 8.0, "P approximation error shrinks >= 8x per halving");
    o.require(worst_ratio_f >= 8.0, "F approximation error shrinks >= 8x per halving");
    o.detail << "min F=" << min_f << " P range=[" << min_p << ", " << max_p << "]"
             << " below 0.5%:" << (low.str().empty() ? " none" : low.str()) << " min halving ratio P=" << worst_ratio_p
             << " F=" << worst_ratio_f;
}

// 5. Photocounter fidelity range and numeric agreement.
void criterion5(Outcome &o) {
    const double at_one = an::photocounter_balanced_fidelity(1.0, 1.0);
    const double at_zero = an::photocounter_balanced_fidelity(0.0, 1.0);
    const double near_zero = an::photocounter_balanced_fidelity(1e-12, 1.0);
    o.require(at_one == 1.0, "F = 1 at eta = 1");
    o.require(std::abs(at_zero - 5.0 / 6.0) <= 1e-12 && std::abs(near_zero - 5.0 / 6.0) <= 1e-12,
              "F = 5/6 +- 1e-12 as eta -> 0");

    const auto params = device::make_params(kPi / 4, kPi / 4, 1.0);
    const auto out = device::device_output_numeric(params);
    const auto n10 = ms::condition_on_outcomes(out, ms::pom_ideal_number(1, params.cutoff),
                                               ms::pom_ideal_number(0, params.cutoff));
    double worst = 0.0;
    for (int k = 1; k <= 20; ++k) {
        const double eta = k / 20.0;
        const auto pc = ms::condition_on_outcomes(out, ms::pom_photocount(1, eta, params.cutoff),
                                                  ms::pom_photocount(0, eta, params.cutoff));
        worst = std::max({worst, std::abs(pc.state.overlap(n10.state) - an::photocounter_balanced_fidelity(eta, 1.0)),
                          std::abs(pc.probability - an::photocounter_balanced_probability(eta, 1.0))});
    }
    o.require(worst < 1e-10, "numeric photocounter agrees to 1e-10");
    o.detail << "F(eta=1)=" << at_one << " F(eta=0)-5/6=" << at_zero - 5.0 / 6.0 << " numeric worst=" << worst;
}

// 6. Orthogonal mirror states for |gamma| = tan phi1.
void criterion6(Outcome &o) {
    double worst_overlap = 0.0, worst_numeric = 0.0, worst_p = 0.0;
    for (double phi1 : {0.2, 0.5, 0.67, 0.9, 1.2}) {
        const cplx g = std::tan(phi1);
        const double p_expect = std::exp(-std::tan(phi1) * std::tan(phi1)) * std::sin(phi1) * std::sin(phi1);
        for (int k = 1; k < 40; ++k) {
            const double phi2 = k * (kPi / 2) / 40.0;
            worst_overlap = std::max(worst_overlap, std::abs(an::overlap_10_01(phi1, phi2, g)));
            worst_p = std::max({worst_p, std::abs(an::ideal_probability_10(phi1, phi2, g) - p_expect),
                                std::abs(an::ideal_probability_01(phi1, phi2, g) - p_expect)});
            if (k % 8 == 0 && phi1 <= 0.9) {
                const auto params = device::make_params(phi1, phi2, g);
                const auto out = device::device_output_numeric(params);
                // Mode-a amplitudes of the (1, 0) and (0, 1) branches of the output.
                cplx inner = 0.0;
                double n10 = 0.0, n01 = 0.0;
                for (int na = 0; na < out.dim(); ++na) {
                    inner += std::conj(out(na, 0, 1)) * out(na, 1, 0);
                    n10 += std::norm(out(na, 1, 0));
                    n01 += std::norm(out(na, 0, 1));
                }
                worst_numeric = std::max(worst_numeric, std::abs(inner) / std::sqrt(n10 * n01));
            }
        }
    }
    const double p067 = an::ideal_probability_10(0.67, kPi / 4, std::tan(0.67));
    o.require(worst_overlap < 1e-12, "|<psi01|psi10>| < 1e-12");
    o.require(worst_numeric < 1e-12, "numeric overlap < 1e-12");
    o.require(worst_p < 1e-14, "P10 = P01 = exp(-tan^2 phi1) sin^2 phi1");
    o.require(p067 > 0.20, "P10 > 0.20 at phi1 = 0.67");
    o.detail << "max overlap=" << worst_overlap << " numeric=" << worst_numeric << " P10(0.67)=" << p067;
}

// 7. Invariants of POMs, output states and conditional states.
void criterion7(Outcome &o) {
    const auto r = verify_grid(standard_grid(), std::nullopt, Execution::parallel);
    const std::map<std::string, double> limits = {
        {"pom.completeness", 1e-10},           {"device.norm", 1e-10},
        {"conditional.hermiticity", 1e-10},    {"conditional.trace", 1e-10},
        {"conditional.min_eigenvalue", 1e-12}, {"device.population_a_above_1", 1e-12},
        {"device.mean_photons", 1e-10},        {"yes_no.outcome_sum", 1e-10},
    };
    for (const auto &[name, limit] : limits) {
        const auto *c = r.find(name);
        o.require(c != nullptr && c->worst_error < limit, name);
        if (c) o.detail << name << "=" << c->worst_error << " ";
    }
}

// 8. Closed-form coherent matrix elements against truncated sums.
void criterion8(Outcome &o) {
    const auto r = verify_matrix_elements();
    int nine = 0;
    for (const auto &c : r.checks) {
        const bool element = c.name.find(".diagonal") != std::string::npos ||
                             c.name.find(".lowered") != std::string::npos ||
                             c.name.find(".sandwich") != std::string::npos;
        if (!element) continue;
        ++nine;
        o.require(c.worst_error < 1e-10, c.name);
        o.detail << c.name << "=" << c.worst_error << " ";
    }
    o.require(nine == 9, "nine closed forms checked");
}

// 9. Figure presets: deterministic CSVs, fidelity ordering in eta, and a
// high-fidelity high-probability region in the efficiency-limited phase map.
void criterion9(Outcome &o) {
    const auto fig3 = sweep_spec_from(preset_config("fig3"));
    const auto f3a = run_sweep(fig3, Execution::parallel);
    const auto f3b = run_sweep(fig3, Execution::serial);
    o.require(csv_of(f3a) == csv_of(f3b), "fig3 CSV deterministic");

    // Records: |gamma|^2 slowest, eta fastest; column 1 is F_yn.
    const int n_eta = fig3.axes[1].points;
    double worst_step = INFINITY;
    for (std::size_t base = 0; base < f3a.records.size(); base += n_eta) {
        const double x = f3a.records[base].axis_values[0];
        for (int k = 1; k < n_eta; ++k) {
            const double step = f3a.records[base + k].values[1] - f3a.records[base + k - 1].values[1];
            // At |gamma| = 0 every curve sits at F = 1.
            if (x == 0.0) {
                o.require(step >= -1e-12, "fig3 F non-decreasing at |gamma|^2 = 0");
            } else {
                worst_step = std::min(worst_step, step);
            }
        }
    }
    o.require(worst_step > 0.0, "fig3 F increasing in eta for |gamma|^2 > 0");

    const auto fig4 = sweep_spec_from(preset_config("fig4-eta50"));
    const auto f4a = run_sweep(fig4, Execution::parallel);
    const auto f4b = run_sweep(fig4, Execution::serial);
    o.require(csv_of(f4a) == csv_of(f4b), "fig4-eta50 CSV deterministic");
    const auto region = [](const SweepResult &r) {
        int hits = 0;
        double best_p = 0.0;
        for (const auto &rec : r.records) {
            if (rec.values[1] > 0.99) best_p = std::max(best_p, rec.values[0]);
            if (rec.values[1] > 0.99 && rec.values[0] > 0.10) ++hits;
        }
        return std::pair{hits, best_p};
    };
    const auto [hits50, best50] = region(f4a);
    o.require(hits50 > 0, "fig4-eta50 has F > 0.99 and P > 0.10");
    const auto [hits100, best100] = region(run_sweep(sweep_spec_from(preset_config("fig4-eta100"))));
    o.detail << "fig3 min F step=" << worst_step << " fig4-eta50 region points=" << hits50
             << " best P with F>0.99=" << best50 << " (fig4-eta100: points=" << hits100 << " best P=" << best100 << ")";
}

}  // namespace

int main(int argc, char **argv) {
    const std::vector<std::function<void(Outcome &)>> criteria = {criterion1, criterion2, criterion3,
                                                                  criterion4, criterion5, criterion6,
                                                                  criterion7, criterion8, criterion9};
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) selected.push_back(std::atoi(argv[++i]));
    }
    if (selected.empty()) {
        for (int k = 1; k <= 9; ++k) selected.push_back(k);
    }
    int failures = 0;
    for (int k : selected) {
        if (k < 1 || k > 9) {
            std::printf("criterion %d: unknown\n", k);
            return 1;
        }
        Outcome o;
        o.detail.precision(6);
        try {
            criteria[k - 1](o);
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        std::printf("criterion %d: %s  %s\n", k, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
