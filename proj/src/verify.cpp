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

#include "condq/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "condq/analytic.hpp"
#include "condq/device.hpp"
#include "condq/measurement.hpp"

namespace condq::explorer {

namespace {

using std::numbers::pi;

constexpr double kCross = 1e-10;
constexpr double kSpectrum = 1e-12;

enum CheckId : std::size_t {
    device_norm,
    device_branch_fidelity,
    device_population_a_above_1,
    device_mean_photons,
    ideal_P10,
    ideal_P01,
    ideal_coefficients,
    ideal_overlap,
    yn_P,
    yn_coefficients,
    yn_F,
    yn_assembly,
    photocount_P,
    photocount_coefficients,
    photocount_F,
    conditional_hermiticity,
    conditional_trace,
    conditional_min_eigenvalue,
    coefficients_coherence_bound,
    values_in_unit_range,
    yes_no_outcome_sum,
    pom_completeness,
    kCheckCount
};

struct CheckSpec {
    const char *name;
    double threshold;
};

constexpr std::array<CheckSpec, kCheckCount> kChecks = {{
    {"device.norm", kCross},
    {"device.branch_fidelity", kCross},
    {"device.population_a_above_1", kSpectrum},
    {"device.mean_photons", kCross},
    {"ideal.P10", kCross},
    {"ideal.P01", kCross},
    {"ideal.coefficients", kCross},
    {"ideal.overlap", kCross},
    {"yes_no.P", kCross},
    {"yes_no.coefficients", kCross},
    {"yes_no.F", kCross},
    {"yes_no.assembly_vs_closed_form", kCross},
    {"photocount.P", kCross},
    {"photocount.coefficients", kCross},
    {"photocount.F", kCross},
    {"conditional.hermiticity", kCross},
    {"conditional.trace", kCross},
    {"conditional.min_eigenvalue", kSpectrum},
    {"coefficients.coherence_bound", kSpectrum},
    {"values.unit_range", kSpectrum},
    {"yes_no.outcome_sum", kCross},
    {"pom.completeness", kCross},
}};

struct Tally {
    std::array<double, kCheckCount> worst{};
    std::array<std::size_t, kCheckCount> samples{};

    void add(CheckId id, double error) {
        worst[id] = std::max(worst[id], std::isnan(error) ? INFINITY : error);
        ++samples[id];
    }
    void merge(const Tally &o) {
        for (std::size_t k = 0; k < kCheckCount; ++k) {
            worst[k] = std::max(worst[k], o.worst[k]);
            samples[k] += o.samples[k];
        }
    }
};

double outside_unit(double v) { return std::max({0.0, -v, v - 1.0}); }

double coefficient_error(const analytic::ConditionalCoefficients &c, const fock::Conditioning &num) {
    const double p = num.probability;
    return std::max({std::abs(c.c00 - p * num.state(0, 0).real()), std::abs(c.c11 - p * num.state(1, 1).real()),
                     std::abs(c.c01 - p * num.state(0, 1))});
}

void record_conditional(Tally &t, const fock::Conditioning &c) {
    if (!c.reliable) return;
    t.add(conditional_hermiticity, c.state.hermiticity_defect());
    t.add(conditional_trace, std::abs(c.state.trace() - 1.0));
    t.add(conditional_min_eigenvalue, std::max(0.0, -c.state.min_eigenvalue()));
}

double fidelity_to(const fock::Conditioning &c, const analytic::QubitTarget &target) {
    const std::array<cplx, 2> psi{target.a0, target.a1};
    return c.state.expectation(psi);
}

// All checks at one (phi1, phi2, gamma) triple and every eta of the grid.
Tally check_point(double phi1, double phi2, cplx gamma, const std::vector<double> &etas, const fock::FockCutoff &cutoff) {
    using measurement::Click;
    namespace m = measurement;
    Tally t;
    const double x = std::norm(gamma);

    const auto params = device::make_params(phi1, phi2, gamma, 1.0, cutoff);
    const auto out = device::device_output_numeric(params);
    const auto closed = device::device_output_branches(params).reassemble(cutoff);
    t.add(device_norm, std::abs(closed.norm_squared() - 1.0));
    t.add(device_branch_fidelity,
          1.0 - std::norm(fock::inner_product(out, closed)) / (out.norm_squared() * closed.norm_squared()));
    const auto pop_a = out.populations(fock::Mode::a);
    double above = 0.0;
    for (std::size_t n = 2; n < pop_a.size(); ++n) above += pop_a[n];
    t.add(device_population_a_above_1, above);
    t.add(device_mean_photons, std::abs(out.mean_photon_number(fock::Mode::a) + out.mean_photon_number(fock::Mode::b) +
                                        out.mean_photon_number(fock::Mode::c) - (1.0 + x)));

    const auto num10 = m::condition_on_outcomes(out, m::pom_ideal_number(1, cutoff), m::pom_ideal_number(0, cutoff));
    const auto num01 = m::condition_on_outcomes(out, m::pom_ideal_number(0, cutoff), m::pom_ideal_number(1, cutoff));
    t.add(ideal_P10, std::abs(analytic::ideal_probability_10(phi1, phi2, gamma) - num10.probability));
    t.add(ideal_P01, std::abs(analytic::ideal_probability_01(phi1, phi2, gamma) - num01.probability));
    t.add(ideal_coefficients, coefficient_error(analytic::ideal_coefficients_10(phi1, phi2, gamma), num10));
    record_conditional(t, num10);
    record_conditional(t, num01);
    if (num10.reliable && num01.reliable) {
        t.add(ideal_overlap,
              std::abs(std::norm(analytic::overlap_10_01(phi1, phi2, gamma)) - num10.state.overlap(num01.state)));
    }
    const bool has_target = num10.reliable;
    std::optional<analytic::QubitTarget> target;
    if (has_target) target = analytic::ideal_state_10(phi1, phi2, gamma);

    for (double eta : etas) {
        const auto yes = m::pom_yes_no(Click::yes, eta, cutoff);
        const auto no = m::pom_yes_no(Click::no, eta, cutoff);
        const auto yn = m::condition_on_outcomes(out, yes, no);
        const auto yn_closed = analytic::yn_coefficients(eta, gamma, phi1, phi2);
        const double p_yn = analytic::yn_probability(eta, gamma, phi1, phi2);
        t.add(yn_P, std::abs(p_yn - yn.probability));
        t.add(yn_coefficients, coefficient_error(yn_closed, yn));
        const auto assembled = analytic::assemble_coefficients(
            phi1, phi2, m::click_elements(gamma * std::cos(phi2), eta), m::no_click_elements(gamma * std::sin(phi2), eta));
        t.add(yn_assembly, std::max({std::abs(assembled.c00 - yn_closed.c00), std::abs(assembled.c11 - yn_closed.c11),
                                     std::abs(assembled.c01 - yn_closed.c01)}));
        t.add(coefficients_coherence_bound, std::max(0.0, std::norm(yn_closed.c01) - yn_closed.c00 * yn_closed.c11));
        t.add(values_in_unit_range, outside_unit(p_yn));
        record_conditional(t, yn);

        const double outcomes = yn.probability +
                                m::condition_on_outcomes(out, no, yes).probability +
                                m::condition_on_outcomes(out, yes, yes).probability +
                                m::condition_on_outcomes(out, no, no).probability;
        t.add(yes_no_outcome_sum, std::abs(outcomes - 1.0));
        const std::array<m::DiagonalPOM, 2> yn_family{yes, no};
        for (double w : m::family_sum(yn_family)) t.add(pom_completeness, std::abs(w - 1.0));

        if (eta > 0.0) {
            std::vector<m::DiagonalPOM> counts;
            for (int n = 0; n <= cutoff.n_max(); ++n) counts.push_back(m::pom_photocount(n, eta, cutoff));
            for (double w : m::family_sum(counts)) t.add(pom_completeness, std::abs(w - 1.0));

            const auto pc = m::condition_on_outcomes(out, counts[1], counts[0]);
            const auto regime = analytic::photocounter_regime(eta, gamma, phi1, phi2);
            t.add(photocount_P, std::abs(regime.probability - pc.probability));
            t.add(photocount_coefficients, coefficient_error(regime.coefficients, pc));
            t.add(values_in_unit_range, outside_unit(regime.probability));
            record_conditional(t, pc);
            if (has_target && pc.reliable) {
                t.add(photocount_F, std::abs(regime.fidelity - fidelity_to(pc, *target)));
                t.add(values_in_unit_range, outside_unit(regime.fidelity));
            }
        }
        if (has_target && yn.reliable) {
            const double f = analytic::yn_fidelity(eta, gamma, phi1, phi2);
            t.add(yn_F, std::abs(f - fidelity_to(yn, *target)));
            t.add(values_in_unit_range, outside_unit(f));
        }
    }
    return t;
}

// Branch reassembly on the closed phase interval, including the points where
// an interferometer is fully transmitting or reflecting.
Tally check_branch_edges(const fock::FockCutoff &cutoff) {
    Tally t;
    const std::array<cplx, 4> gammas{cplx(0.0), cplx(0.0, 0.5), cplx(0.755), cplx(1.0)};
    for (int i = 0; i <= 4; ++i) {
        for (int j = 0; j <= 4; ++j) {
            for (cplx g : gammas) {
                const auto params = device::make_params(i * pi / 8.0, j * pi / 8.0, g, 1.0, cutoff);
                const auto out = device::device_output_numeric(params);
                const auto closed = device::device_output_branches(params).reassemble(cutoff);
                t.add(device_branch_fidelity, 1.0 - std::norm(fock::inner_product(out, closed)) /
                                                        (out.norm_squared() * closed.norm_squared()));
            }
        }
    }
    return t;
}

VerifyReport build_report(std::string preset, const Tally &t, std::optional<double> override_tol) {
    VerifyReport r;
    r.preset = std::move(preset);
    for (std::size_t k = 0; k < kCheckCount; ++k) {
        if (t.samples[k] == 0) continue;
        r.checks.push_back({kChecks[k].name, t.worst[k], override_tol.value_or(kChecks[k].threshold), t.samples[k]});
    }
    return r;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = k == n - 1 ? hi : lo + (hi - lo) * k / (n - 1);
    return v;
}

// Exact coherent amplitudes <p|z>, not renormalized.
std::vector<cplx> coherent_amplitudes(cplx z, int n_max) {
    std::vector<cplx> c(n_max + 1);
    c[0] = std::exp(-std::norm(z) / 2.0);
    for (int p = 1; p <= n_max; ++p) c[p] = c[p - 1] * z / std::sqrt(static_cast<double>(p));
    return c;
}

measurement::MatrixElements truncated_sum(cplx z, const std::vector<double> &w) {
    const int n_max = static_cast<int>(w.size()) - 1;
    const auto c = coherent_amplitudes(z, n_max);
    measurement::MatrixElements e{0.0, 0.0, 0.0};
    for (int p = 0; p <= n_max; ++p) {
        e.diagonal += w[p] * std::norm(c[p]);
        if (p >= 1) {
            e.lowered += w[p] * std::sqrt(static_cast<double>(p)) * std::conj(c[p - 1]) * c[p];
            e.sandwich += w[p] * p * std::norm(c[p - 1]);
        }
    }
    return e;
}

}  // namespace

VerificationGrid standard_grid() {
    return {{0.1, pi / 8.0, 0.67, pi / 4.0, 0.715, 1.2, pi / 2.0 - 0.1},
            {0.0, 0.3, 0.755, 1.0, 1.4},
            {0.0, pi / 3.0},
            {0.2, 0.5, 0.8, 1.0}};
}

VerificationGrid fine_grid() {
    return {linspace(0.05, pi / 2.0 - 0.05, 13),
            {0.0, 0.2, 0.5, 0.755, 1.0, 1.25, 1.5},
            {0.0, pi / 3.0, -2.0 * pi / 3.0},
            {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}};
}

bool VerifyReport::passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.passed(); });
}

const Check *VerifyReport::find(std::string_view name) const {
    for (const auto &c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

std::vector<std::string> verification_presets() { return {"standard", "fine", "appendix"}; }

VerifyReport verify_grid(const VerificationGrid &grid, std::optional<double> tolerance_override, Execution execution) {
    const auto start = std::chrono::steady_clock::now();
    const double max_gamma = *std::max_element(grid.gamma_abs.begin(), grid.gamma_abs.end());
    const auto cutoff = device::auto_cutoff(max_gamma);

    const std::size_t np = grid.phis.size(), ng = grid.gamma_abs.size(), na = grid.gamma_args.size();
    const std::size_t n = np * np * ng * na;
    std::vector<Tally> slots(n);
    const auto run_one = [&](std::size_t k) {
        const std::size_t ia = k % na, ig = (k / na) % ng, i2 = (k / (na * ng)) % np, i1 = k / (na * ng * np);
        slots[k] = check_point(grid.phis[i1], grid.phis[i2], std::polar(grid.gamma_abs[ig], grid.gamma_args[ia]),
                               grid.etas, cutoff);
    };
    if (execution == Execution::serial) {
        for (std::size_t k = 0; k < n; ++k) run_one(k);
    } else {
        const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
        for (long long k = 0; k < count; ++k) run_one(static_cast<std::size_t>(k));
    }
    Tally total = check_branch_edges(cutoff);
    for (const auto &s : slots) total.merge(s);

    auto report = build_report("grid", total, tolerance_override);
    report.cutoff = cutoff.n_max();
    report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

VerifyReport verify_matrix_elements(std::optional<double> tolerance_override) {
    const auto start = std::chrono::steady_clock::now();
    constexpr int kNMax = 25;
    const std::array<cplx, 4> zs{cplx(0.0), cplx(0.3), cplx(0.5, 0.5), cplx(1.0)};
    const std::array<double, 3> etas{0.2, 0.6, 1.0};

    struct Named {
        std::string name;
        double worst = 0.0;
        std::size_t samples = 0;
        void add(double e) {
            worst = std::max(worst, std::isnan(e) ? INFINITY : e);
            ++samples;
        }
    };
    std::vector<Named> checks;
    const auto slot = [&](const std::string &name) -> Named & {
        for (auto &c : checks) {
            if (c.name == name) return c;
        }
        checks.push_back({name});
        return checks.back();
    };
    const auto compare = [&](const std::string &op, const measurement::MatrixElements &closed,
                             const measurement::MatrixElements &brute) {
        slot("appendix." + op + ".diagonal").add(std::abs(closed.diagonal - brute.diagonal));
        slot("appendix." + op + ".lowered").add(std::abs(closed.lowered - brute.lowered));
        slot("appendix." + op + ".sandwich").add(std::abs(closed.sandwich - brute.sandwich));
    };

    for (double eta : etas) {
        std::vector<double> w_no(kNMax + 1), w_yes(kNMax + 1), w_one(kNMax + 1);
        for (int p = 0; p <= kNMax; ++p) {
            w_no[p] = std::pow(1.0 - eta, p);
            w_yes[p] = 1.0 - w_no[p];
            w_one[p] = p == 0 ? 0.0 : p * eta * std::pow(1.0 - eta, p - 1);
        }
        const fock::FockCutoff cutoff(kNMax);
        const auto pom_one = measurement::pom_photocount(1, eta, cutoff).weights;
        double pom_gap = 0.0;
        for (int p = 0; p <= kNMax; ++p) pom_gap = std::max(pom_gap, std::abs(pom_one[p] - w_one[p]));
        slot("appendix.photocount_weights").add(pom_gap);

        for (cplx z : zs) {
            const auto closed = measurement::coherent_pom_elements(z, eta);
            compare("no", closed.no, truncated_sum(z, w_no));
            compare("yes", closed.yes, truncated_sum(z, w_yes));
            compare("one_count", closed.one_count, truncated_sum(z, w_one));

            // Balanced-phase closed forms against the general expressions.
            const double q = pi / 4.0;
            const auto bal = analytic::balanced_regime(eta, z);
            slot("appendix.balanced_yes_no")
                .add(std::max(std::abs(bal.probability - analytic::yn_probability(eta, z, q, q)),
                              std::abs(bal.fidelity - analytic::yn_fidelity(eta, z, q, q))));
            const auto pc = analytic::photocounter_regime(eta, z, q, q);
            slot("appendix.balanced_photocount")
                .add(std::max(std::abs(analytic::photocounter_balanced_probability(eta, z) - pc.probability),
                              std::abs(analytic::photocounter_balanced_fidelity(eta, std::norm(z)) - pc.fidelity)));
        }
    }

    VerifyReport r;
    r.preset = "appendix";
    r.cutoff = kNMax;
    for (const auto &c : checks) r.checks.push_back({c.name, c.worst, tolerance_override.value_or(kCross), c.samples});
    r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

VerifyReport run_verification(std::string_view preset, std::optional<double> tolerance_override, Execution execution) {
    VerifyReport r;
    if (preset == "standard") {
        r = verify_grid(standard_grid(), tolerance_override, execution);
    } else if (preset == "fine") {
        r = verify_grid(fine_grid(), tolerance_override, execution);
    } else if (preset == "appendix") {
        r = verify_matrix_elements(tolerance_override);
    } else {
        throw SpecError("unknown verification preset '" + std::string(preset) + "' (expected standard, fine, appendix)");
    }
    r.preset = std::string(preset);
    return r;
}

void print_report(const VerifyReport &report, std::ostream &os) {
    os << "verify preset=" << report.preset;
    if (report.cutoff) os << " n_max=" << *report.cutoff;
    os << '\n';
    std::size_t width = 0;
    for (const auto &c : report.checks) width = std::max(width, c.name.size());
    const auto flags = os.flags();
    for (const auto &c : report.checks) {
        os << (c.passed() ? "PASS " : "FAIL ") << std::left << std::setw(static_cast<int>(width)) << c.name
           << std::right << "  worst=" << std::scientific << std::setprecision(3) << c.worst_error
           << "  threshold=" << c.threshold << "  samples=" << c.samples << '\n';
    }
    os.flags(flags);
    os << (report.passed() ? "verify: all checks passed" : "verify: FAILED") << '\n';
}

}  // namespace condq::explorer
