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
#include <numbers>
#include <random>

#include "doctest.h"

#include "condq/analytic.hpp"
#include "condq/device.hpp"
#include "condq/measurement.hpp"

using namespace condq;
using namespace condq::analytic;
namespace m = condq::measurement;

namespace {

constexpr double kPi = std::numbers::pi;

struct Numeric {
    fock::MultiModeState out;
    fock::FockCutoff cut;

    Numeric(double phi1, double phi2, cplx gamma)
        : out(device::device_output_numeric(device::make_params(phi1, phi2, gamma))),
          cut(device::make_params(phi1, phi2, gamma).cutoff) {}

    fock::Conditioning ideal(int nb, int nc) const {
        return m::condition_on_outcomes(out, m::pom_ideal_number(nb, cut), m::pom_ideal_number(nc, cut));
    }
    fock::Conditioning yes_no(double eta) const {
        return m::condition_on_outcomes(out, m::pom_yes_no(m::Click::yes, eta, cut), m::pom_yes_no(m::Click::no, eta, cut));
    }
    fock::Conditioning counts(double eta) const {
        return m::condition_on_outcomes(out, m::pom_photocount(1, eta, cut), m::pom_photocount(0, eta, cut));
    }
};

double fidelity_to(const fock::Conditioning &c, const QubitTarget &t) {
    const std::vector<cplx> psi{t.a0, t.a1};
    return c.state.expectation(psi);
}

void check_coefficients(const ConditionalCoefficients &a, const fock::Conditioning &n) {
    const double p = n.probability;
    CHECK(std::abs(a.c00 - p * n.state(0, 0).real()) < 1e-10);
    CHECK(std::abs(a.c11 - p * n.state(1, 1).real()) < 1e-10);
    CHECK(std::abs(a.c01 - p * n.state(0, 1)) < 1e-10);
}

}  // namespace

TEST_CASE("closed forms agree with the truncated-Fock engine at random settings") {
    std::mt19937 rng(2026);
    std::uniform_real_distribution<double> phase(0.05, kPi / 2 - 0.05), amp(0.0, 1.5), arg(-kPi, kPi), eff(0.05, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const double phi1 = phase(rng), phi2 = phase(rng), eta = eff(rng);
        const cplx gamma = std::polar(amp(rng), arg(rng));
        const Numeric num(phi1, phi2, gamma);
        const auto n10 = num.ideal(1, 0), n01 = num.ideal(0, 1);
        CHECK(std::abs(ideal_probability_10(phi1, phi2, gamma) - n10.probability) < 1e-10);
        CHECK(std::abs(ideal_probability_01(phi1, phi2, gamma) - n01.probability) < 1e-10);
        check_coefficients(ideal_coefficients_10(phi1, phi2, gamma), n10);
        CHECK(std::abs(std::norm(overlap_10_01(phi1, phi2, gamma)) - n10.state.overlap(n01.state)) < 1e-10);

        const auto target = ideal_state_10(phi1, phi2, gamma);
        CHECK(fidelity_to(n10, target) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(fidelity_to(n01, ideal_state_01(phi1, phi2, gamma)) == doctest::Approx(1.0).epsilon(1e-12));

        const auto yn = num.yes_no(eta);
        CHECK(std::abs(yn_probability(eta, gamma, phi1, phi2) - yn.probability) < 1e-10);
        check_coefficients(yn_coefficients(eta, gamma, phi1, phi2), yn);
        CHECK(std::abs(yn_fidelity(eta, gamma, phi1, phi2) - fidelity_to(yn, target)) < 1e-10);

        const auto pc = num.counts(eta);
        const auto regime = photocounter_regime(eta, gamma, phi1, phi2);
        CHECK(std::abs(regime.probability - pc.probability) < 1e-10);
        check_coefficients(regime.coefficients, pc);
        CHECK(std::abs(regime.fidelity - fidelity_to(pc, target)) < 1e-10);
    }
}

TEST_CASE("generic assembly reproduces the YES/NO and photocounter closed forms") {
    for (double phi1 : {0.2, 0.9}) {
        for (double phi2 : {0.4, 1.3}) {
            for (cplx g : {cplx(0.5, -0.2), cplx(0.0, 1.2)}) {
                for (double eta : {0.3, 1.0}) {
                    const cplx beta = g * std::cos(phi2), delta = g * std::sin(phi2);
                    const auto yn = assemble_coefficients(phi1, phi2, m::click_elements(beta, eta),
                                                          m::no_click_elements(delta, eta));
                    const auto yn_closed = yn_coefficients(eta, g, phi1, phi2);
                    CHECK(std::abs(yn.c00 - yn_closed.c00) < 1e-14);
                    CHECK(std::abs(yn.c11 - yn_closed.c11) < 1e-14);
                    CHECK(std::abs(yn.c01 - yn_closed.c01) < 1e-14);

                    const auto pc = assemble_coefficients(phi1, phi2, m::one_count_elements(beta, eta),
                                                          m::no_click_elements(delta, eta));
                    const auto pc_closed = photocounter_regime(eta, g, phi1, phi2).coefficients;
                    CHECK(std::abs(pc.c00 - pc_closed.c00) < 1e-14);
                    CHECK(std::abs(pc.c01 - pc_closed.c01) < 1e-14);
                }
            }
        }
    }
}

TEST_CASE("coherence of conditional coefficients is bounded by the populations") {
    for (double phi1 = 0.1; phi1 < 1.5; phi1 += 0.2) {
        for (double phi2 = 0.1; phi2 < 1.5; phi2 += 0.2) {
            for (double eta : {0.1, 0.6, 1.0}) {
                const auto c = yn_coefficients(eta, cplx(0.8, 0.6), phi1, phi2);
                CHECK(std::norm(c.c01) <= c.c00 * c.c11 + 1e-12);
                const double f = yn_fidelity(eta, cplx(0.8, 0.6), phi1, phi2);
                CHECK(f >= 0.0);
                CHECK(f <= 1.0 + 1e-15);
            }
        }
    }
    CHECK(ideal_coefficients_10(0.4, 0.8, 0.7).purity_gap() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("conditional phase of the prepared state follows arg gamma") {
    const auto s = ideal_state_10(kPi / 4, kPi / 4, std::polar(1.0, 0.9));
    CHECK(std::arg(s.a1 / s.a0) == doctest::Approx(0.9));
    const auto mirror = ideal_state_01(kPi / 4, kPi / 4, std::polar(1.0, 0.9));
    CHECK(std::arg(mirror.a1 / mirror.a0) == doctest::Approx(0.9 - kPi));
}

TEST_CASE("equal-weight target probability peaks near 21 percent") {
    const double phi = 0.715;
    const double p = balanced_target_probability(phi, phi);
    CHECK(p == doctest::Approx(0.21).epsilon(0.01 / 0.21));
    CHECK(std::tan(phi) * std::tan(phi) == doctest::Approx(0.755).epsilon(0.01));
    CHECK(p == doctest::Approx(ideal_probability_10(phi, phi, std::tan(phi) * std::tan(phi))).epsilon(1e-14));
    CHECK_THROWS_AS(balanced_target_probability(kPi / 2, 0.3), std::domain_error);
}

TEST_CASE("mirror events give orthogonal states when |gamma| = tan phi1") {
    for (double phi1 : {0.3, 0.67, 1.0}) {
        for (double phi2 = 0.05; phi2 < kPi / 2; phi2 += 0.1) {
            const cplx g = std::polar(std::tan(phi1), 0.4);
            CHECK(std::abs(overlap_10_01(phi1, phi2, g)) < 1e-12);
            const double p = std::exp(-std::tan(phi1) * std::tan(phi1)) * std::sin(phi1) * std::sin(phi1);
            CHECK(ideal_probability_10(phi1, phi2, g) == doctest::Approx(p).epsilon(1e-13));
            CHECK(ideal_probability_01(phi1, phi2, g) == doctest::Approx(p).epsilon(1e-13));
        }
    }
    CHECK(ideal_probability_10(0.67, 0.3, std::tan(0.67)) > 0.20);
}

TEST_CASE("balanced-phase YES/NO closed forms and the efficiency bound") {
    for (double x : {0.1, 0.5, 1.0, 2.0, 3.3, 4.0}) {
        const cplx g = std::sqrt(x);
        CHECK(balanced_regime(1.0, g).fidelity == doctest::Approx(balanced_fidelity_bound(x)).epsilon(1e-13));
        for (double eta = 0.05; eta <= 1.0; eta += 0.05) {
            const auto r = balanced_regime(eta, g);
            CHECK(r.probability == doctest::Approx(yn_probability(eta, g, kPi / 4, kPi / 4)).epsilon(1e-13));
            CHECK(r.fidelity == doctest::Approx(yn_fidelity(eta, g, kPi / 4, kPi / 4)).epsilon(1e-13));
            // The eta = 1 value bounds the fidelity only while dF/deta > 0 at
            // eta = 1, i.e. for |gamma|^2 below about 3.33.
            if (x < 3.32) CHECK(r.fidelity <= r.fidelity_bound + 1e-9);
        }
    }
    CHECK(balanced_regime(0.8, 2.0).fidelity > balanced_fidelity_bound(4.0));
    CHECK(balanced_regime(0.999, std::sqrt(3.34)).fidelity > balanced_fidelity_bound(3.34));
    CHECK(balanced_regime(0.999, std::sqrt(3.32)).fidelity < balanced_fidelity_bound(3.32));
    // At |gamma| = 1 the bound is close to 93 percent.
    CHECK(balanced_fidelity_bound(1.0) == doctest::Approx(0.937).epsilon(0.001));
}

TEST_CASE("single-expression fidelity only matches when sin phi2 = cos phi2") {
    const cplx g(0.9, 0.0);
    for (double phi1 : {0.3, 0.8}) {
        CHECK(yn_fidelity_printed(0.6, g, phi1, kPi / 4) == doctest::Approx(yn_fidelity(0.6, g, phi1, kPi / 4)).epsilon(1e-13));
        CHECK(std::abs(yn_fidelity_printed(0.6, g, phi1, 0.4) - yn_fidelity(0.6, g, phi1, 0.4)) > 1e-3);
    }
}

TEST_CASE("small-angle unbalanced regime") {
    const cplx g = 1.0;
    for (double eta : {0.3, 0.7, 1.0}) {
        double prev_p = 0.0, prev_f = 0.0;
        for (double phi1 : {0.2, 0.1, 0.05, 0.025}) {
            const auto r = unbalanced_regime(eta, g, phi1);
            const double ep = std::abs(r.probability_approx - r.probability_exact);
            const double ef = std::abs(r.fidelity_approx - r.fidelity_exact);
            if (prev_p > 0.0) {
                // The probability approximation is accurate to fourth order; the
                // fidelity approximation only to second order in phi1.
                CHECK(prev_p / ep > 12.0);
                CHECK(prev_f / ef > 3.5);
                CHECK(prev_f / ef < 4.5);
            }
            prev_p = ep;
            prev_f = ef;
            CHECK(std::abs(r.probability_leading - r.probability_exact) < 0.1 * r.probability_exact);
            CHECK(std::abs(r.fidelity_from_relation - r.fidelity_exact) < 2.0 * phi1 * phi1);
        }
        CHECK(unbalanced_regime(eta, g, 0.3).outside_small_angle);
    }
}

TEST_CASE("photocounter fidelity at equal phases spans 5/6 to 1") {
    CHECK(photocounter_balanced_fidelity(1.0, 1.0) == 1.0);
    CHECK(photocounter_balanced_fidelity(0.0, 1.0) == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
    for (double eta : {0.1, 0.5, 0.9}) {
        for (double x : {0.3, 1.0, 2.5}) {
            const auto r = photocounter_regime(eta, std::sqrt(x), kPi / 4, kPi / 4);
            CHECK(r.fidelity == doctest::Approx(photocounter_balanced_fidelity(eta, x)).epsilon(1e-13));
            CHECK(r.probability == doctest::Approx(photocounter_balanced_probability(eta, std::sqrt(x))).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(photocounter_regime(0.0, 1.0, 0.3, 0.3), std::invalid_argument);
}

TEST_CASE("targets and degenerate states") {
    CHECK_THROWS_AS(QubitTarget::from(0.0, 0.0), DegenerateStateError);
    const auto t = QubitTarget::from(3.0, cplx(0.0, 4.0));
    CHECK(std::abs(t.a0 - 0.6) < 1e-15);
    CHECK(std::abs(t.a1 - cplx(0.0, 0.8)) < 1e-15);
    CHECK_THROWS_AS(yn_fidelity(0.0, 1.0, 0.5, 0.5), DegenerateStateError);
    CHECK_THROWS_AS(yn_probability(1.5, 1.0, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("target inversion reproduces the requested state") {
    for (auto [a0, a1] : {std::pair{cplx(1.0), cplx(1.0)}, std::pair{cplx(0.3), cplx(0.0, 0.9)},
                          std::pair{cplx(2.0), std::polar(0.5, -2.0)}}) {
        const auto target = QubitTarget::from(a0, a1);
        const auto s = solve_target(target, SolveStrategy::max_probability);
        const auto got = ideal_state_10(s.phi1, s.phi2, s.gamma);
        CHECK(std::norm(std::conj(got.a0) * target.a0 + std::conj(got.a1) * target.a1) == doctest::Approx(1.0).epsilon(1e-12));
        // The chosen member beats its neighbours along the family.
        for (double d : {-0.01, 0.01}) {
            const double p = s.phi1 + d;
            const cplx g = std::polar(s.ratio * std::tan(p) * std::tan(p), s.relative_phase);
            CHECK(ideal_probability_10(p, p, g) < s.probability);
        }
        const auto fixed = solve_target(target, SolveStrategy::fixed_phases, std::pair{0.4, 1.1});
        const auto got2 = ideal_state_10(0.4, 1.1, fixed.gamma);
        CHECK(std::norm(std::conj(got2.a0) * target.a0 + std::conj(got2.a1) * target.a1) == doctest::Approx(1.0).epsilon(1e-12));
    }
    const auto equal = solve_target(QubitTarget::balanced(0.0), SolveStrategy::max_probability);
    CHECK(equal.phi1 == doctest::Approx(0.7153).epsilon(1e-3));
    CHECK(std::abs(equal.gamma) == doctest::Approx(0.7549).epsilon(1e-3));

    const auto vacuum = solve_target(QubitTarget::from(1.0, 0.0), SolveStrategy::max_probability);
    CHECK(std::abs(vacuum.gamma) == 0.0);
    const auto one = solve_target(QubitTarget::from(0.0, 1.0), SolveStrategy::max_probability);
    CHECK(one.one_photon_limit);
    CHECK(ideal_state_10(one.phi1, one.phi2, one.gamma).a0 == cplx(0.0));
    CHECK_THROWS_AS(solve_target(QubitTarget::from(0.0, 1.0), SolveStrategy::fixed_phases, std::pair{0.3, 0.3}),
                    DegenerateStateError);
    CHECK_THROWS_AS(solve_target(QubitTarget::from(1.0, 1.0), SolveStrategy::fixed_phases), std::invalid_argument);
}
