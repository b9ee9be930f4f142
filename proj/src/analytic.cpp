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

#include "condq/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace condq::analytic {

namespace {

struct Trig {
    double s1, c1, s2, c2;
    Trig(double phi1, double phi2)
        : s1(std::sin(phi1)), c1(std::cos(phi1)), s2(std::sin(phi2)), c2(std::cos(phi2)) {}
};

void require_eta(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1], got " + std::to_string(eta));
}

QubitTarget normalized_or_throw(cplx a0, cplx a1, const char *what) {
    const double den = std::norm(a0) + std::norm(a1);
    if (!(den > 0.0)) throw DegenerateStateError(std::string(what) + ": both superposition weights vanish");
    const double s = 1.0 / std::sqrt(den);
    return {a0 * s, a1 * s};
}

// YES/NO coefficients without the common factor exp(-eta |gamma|^2 sin^2 phi2);
// fidelities stay finite when that factor underflows.
ConditionalCoefficients yn_reduced(double eta, cplx gamma, const Trig &t) {
    const double x = std::norm(gamma);
    const double e_b = std::exp(-eta * x * t.c2 * t.c2);
    const double d11 = t.c1 * t.c1 * (1.0 - e_b);
    const double d00 = t.s1 * t.s1 *
                       (1.0 - (1.0 - eta) * e_b + eta * t.c2 * t.c2 * (eta * x * t.s2 * t.s2 - 1.0));
    const cplx d01 = eta * std::conj(gamma) * t.s1 * t.s2 * t.c1 * t.c2;
    return {d00, d11, d01, d00 + d11};
}

// Photocounter coefficients without the common factor eta exp(-eta |gamma|^2).
ConditionalCoefficients photocount_reduced(double eta, cplx gamma, const Trig &t) {
    const double x = std::norm(gamma);
    const double d11 = x * t.c1 * t.c1 * t.c2 * t.c2;
    const double d00 = t.s1 * t.s1 * (t.s2 * t.s2 + x * (1.0 - eta) * t.c2 * t.c2);
    const cplx d01 = std::conj(gamma) * t.s1 * t.s2 * t.c1 * t.c2;
    return {d00, d11, d01, d00 + d11};
}

ConditionalCoefficients scaled(const ConditionalCoefficients &c, double factor) {
    return {c.c00 * factor, c.c11 * factor, c.c01 * factor, c.normalizer * factor};
}

}  // namespace

Eigen::Matrix2cd ConditionalCoefficients::matrix() const {
    Eigen::Matrix2cd m;
    m << c00, c01, c10(), c11;
    return m / normalizer;
}

QubitTarget QubitTarget::from(cplx a0, cplx a1) { return normalized_or_throw(a0, a1, "target"); }

QubitTarget QubitTarget::balanced(double relative_phase) {
    return {cplx(std::numbers::sqrt2 / 2), std::polar(std::numbers::sqrt2 / 2, relative_phase)};
}

double fidelity(const ConditionalCoefficients &coeffs, const QubitTarget &target) {
    const double trace = coeffs.c00 + coeffs.c11;
    if (!(trace > 0.0)) throw DegenerateStateError("conditional state has zero trace");
    const double quad = std::norm(target.a0) * coeffs.c00 + std::norm(target.a1) * coeffs.c11 +
                        2.0 * std::real(std::conj(target.a0) * coeffs.c01 * target.a1);
    return quad / trace;
}

// --- ideal ---------------------------------------------------------------

double ideal_probability_10(double phi1, double phi2, cplx gamma) {
    const Trig t(phi1, phi2);
    const double x = std::norm(gamma);
    return std::exp(-x) * (t.s1 * t.s1 * t.s2 * t.s2 + x * t.c1 * t.c1 * t.c2 * t.c2);
}

ConditionalCoefficients ideal_coefficients_10(double phi1, double phi2, cplx gamma) {
    const Trig t(phi1, phi2);
    const double e = std::exp(-std::norm(gamma));
    const double c00 = e * t.s1 * t.s1 * t.s2 * t.s2;
    const double c11 = e * std::norm(gamma) * t.c1 * t.c1 * t.c2 * t.c2;
    const cplx c01 = e * std::conj(gamma) * t.s1 * t.s2 * t.c1 * t.c2;
    return {c00, c11, c01, c00 + c11};
}

QubitTarget ideal_state_10(double phi1, double phi2, cplx gamma) {
    const Trig t(phi1, phi2);
    return normalized_or_throw(t.s1 * t.s2, gamma * t.c1 * t.c2, "ideal (1,0) state");
}

double ideal_probability_01(double phi1, double phi2, cplx gamma) {
    const Trig t(phi1, phi2);
    const double x = std::norm(gamma);
    return std::exp(-x) * (t.s1 * t.s1 * t.c2 * t.c2 + x * t.c1 * t.c1 * t.s2 * t.s2);
}

QubitTarget ideal_state_01(double phi1, double phi2, cplx gamma) {
    const Trig t(phi1, phi2);
    return normalized_or_throw(t.s1 * t.c2, -gamma * t.c1 * t.s2, "ideal (0,1) state");
}

cplx overlap_10_01(double phi1, double phi2, cplx gamma) {
    const auto p10 = ideal_state_10(phi1, phi2, gamma);
    const auto p01 = ideal_state_01(phi1, phi2, gamma);
    return std::conj(p01.a0) * p10.a0 + std::conj(p01.a1) * p10.a1;
}

double balanced_target_probability(double phi1, double phi2) {
    const Trig t(phi1, phi2);
    constexpr double pole = 1e-12;
    if (std::abs(t.c1) < pole || std::abs(t.c2) < pole) throw std::domain_error("tan(phi) has a pole");
    const double tt = (t.s1 / t.c1) * (t.s2 / t.c2);
    return 2.0 * t.s1 * t.s1 * t.s2 * t.s2 * std::exp(-tt * tt);
}

// --- YES/NO ----------------------------------------------------------------

double yn_probability(double eta, cplx gamma, double phi1, double phi2) {
    require_eta(eta);
    const Trig t(phi1, phi2);
    const double x = std::norm(gamma);
    const double e_b = std::exp(-eta * x * t.c2 * t.c2);
    return std::exp(-eta * x * t.s2 * t.s2) *
           (1.0 - e_b + eta * t.s1 * t.s1 * (e_b + t.c2 * t.c2 * (eta * x * t.s2 * t.s2 - 1.0)));
}

ConditionalCoefficients yn_coefficients(double eta, cplx gamma, double phi1, double phi2) {
    require_eta(eta);
    const Trig t(phi1, phi2);
    auto c = scaled(yn_reduced(eta, gamma, t), std::exp(-eta * std::norm(gamma) * t.s2 * t.s2));
    c.normalizer = yn_probability(eta, gamma, phi1, phi2);
    return c;
}

double yn_fidelity(double eta, cplx gamma, double phi1, double phi2) {
    require_eta(eta);
    const Trig t(phi1, phi2);
    return fidelity(yn_reduced(eta, gamma, t), ideal_state_10(phi1, phi2, gamma));
}

double yn_fidelity_printed(double eta, cplx gamma, double phi1, double phi2) {
    const Trig t(phi1, phi2);
    const double x = std::norm(gamma);
    const double s1 = t.s1, c1 = t.c1, s2 = t.s2, c2 = t.c2;
    const double e_b = std::exp(-eta * x * c2 * c2);
    const double braces = x * std::pow(c1, 4) * s2 * s2 * (1.0 - e_b) +
                          2.0 * eta * x * s1 * s1 * s2 * s2 * c1 * c1 * c2 * c2 +
                          std::pow(s1, 4) * s2 * s2 *
                              (1.0 - (1.0 - eta) * e_b + eta * c2 * c2 * (eta * x * s2 * s2 - 1.0));
    return std::exp(-eta * x * s2 * s2) / (s1 * s1 * s2 * s2 + x * c1 * c1 * c2 * c2) * braces /
           yn_probability(eta, gamma, phi1, phi2);
}

ConditionalCoefficients assemble_coefficients(double phi1, double phi2, const measurement::MatrixElements &on_b,
                                              const measurement::MatrixElements &on_c) {
    const Trig t(phi1, phi2);
    const double d11 = t.c1 * t.c1 * on_b.diagonal * on_c.diagonal;
    const double cross = 2.0 * std::real(on_b.lowered * std::conj(on_c.lowered));
    const double d00 = t.s1 * t.s1 *
                       (t.s2 * t.s2 * on_b.sandwich * on_c.diagonal + t.c2 * t.c2 * on_b.diagonal * on_c.sandwich -
                        t.s2 * t.c2 * cross);
    const cplx d01 = t.s1 * t.c1 *
                     (t.s2 * std::conj(on_b.lowered) * on_c.diagonal - t.c2 * on_b.diagonal * std::conj(on_c.lowered));
    return {d00, d11, d01, d00 + d11};
}

// --- regimes -------------------------------------------------------------

BalancedRegime balanced_regime(double eta, cplx gamma) {
    require_eta(eta);
    const double x = std::norm(gamma);
    const double h = std::exp(-0.5 * eta * x);
    const double probability = h * (1.0 - h + 0.5 * eta * (h + 0.25 * (eta * x - 2.0)));
    const double num = (4.0 - 2.0 * eta + x * (2.0 + eta) * (2.0 + eta)) - 4.0 * h * (1.0 - eta + x);
    const double den = (1.0 + x) * (8.0 + eta * (eta * x - 2.0) - 4.0 * h * (2.0 - eta));
    return {probability, num / den, balanced_fidelity_bound(x)};
}

double balanced_fidelity_bound(double gamma_abs_sq) {
    const double x = gamma_abs_sq;
    const double h = std::exp(-0.5 * x);
    return (2.0 + x * (9.0 - 4.0 * h)) / ((1.0 + x) * (x + 6.0 - 4.0 * h));
}

double unbalanced_fidelity_from_probability(double eta, cplx gamma, double probability) {
    const double x = std::norm(gamma);
    return 1.0 - (2.0 - eta) / (2.0 * eta * (1.0 + x)) * std::exp(eta * x) * probability;
}

UnbalancedRegime unbalanced_regime(double eta, cplx gamma, double phi1) {
    require_eta(eta);
    const double phi2 = std::numbers::pi / 2 - phi1;
    const Trig t(phi1, phi2);
    const double x = std::norm(gamma);
    const double e = std::exp(-eta * x);
    UnbalancedRegime r{};
    r.probability_leading = e * (eta * x * t.c2 * t.c2 + eta * t.s1 * t.s1);
    r.probability_approx = eta * phi1 * phi1 * (1.0 + x) * e;
    r.fidelity_approx = 1.0 - 0.5 * phi1 * phi1 * (2.0 - eta);
    r.probability_exact = yn_probability(eta, gamma, phi1, phi2);
    r.fidelity_exact = yn_fidelity(eta, gamma, phi1, phi2);
    r.fidelity_from_relation = unbalanced_fidelity_from_probability(eta, gamma, r.probability_exact);
    r.outside_small_angle = phi1 > kSmallAngle;
    return r;
}

// --- photocounter --------------------------------------------------------

PhotocounterRegime photocounter_regime(double eta, cplx gamma, double phi1, double phi2) {
    require_eta(eta);
    if (eta == 0.0) throw std::invalid_argument("photocounter needs eta > 0");
    const Trig t(phi1, phi2);
    const auto reduced = photocount_reduced(eta, gamma, t);
    const double factor = eta * std::exp(-eta * std::norm(gamma));
    const auto coeffs = scaled(reduced, factor);
    return {coeffs.normalizer, coeffs, fidelity(reduced, ideal_state_10(phi1, phi2, gamma))};
}

double photocounter_balanced_probability(double eta, cplx gamma) {
    const double x = std::norm(gamma);
    return 0.25 * eta * (1.0 + x * (2.0 - eta)) * std::exp(-eta * x);
}

double photocounter_balanced_fidelity(double eta, double gamma_abs_sq) {
    const double x = gamma_abs_sq;
    return 1.0 - x * x * (1.0 - eta) / ((1.0 + x) * (1.0 + x * (2.0 - eta)));
}

// --- inversion -----------------------------------------------------------

namespace {

// Positive root of r^2 u^3 + r^2 u^2 - 1 = 0; u = tan^2(phi) at the symmetric
// maximum of (1 + r^2) sin^4(phi) exp(-r^2 tan^4(phi)).
double optimal_tan_squared(double ratio) {
    const double r2 = ratio * ratio;
    auto f = [r2](double u) { return r2 * u * u * (u + 1.0) - 1.0; };
    double lo = 0.0, hi = 1.0;
    while (f(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TargetSolution solve_target(const QubitTarget &target, SolveStrategy strategy,
                            std::optional<std::pair<double, double>> phases) {
    const auto t = QubitTarget::from(target.a0, target.a1);
    TargetSolution sol{};
    sol.one_photon_limit = std::abs(t.a0) == 0.0;
    sol.ratio = sol.one_photon_limit ? std::numeric_limits<double>::infinity() : std::abs(t.a1) / std::abs(t.a0);
    sol.relative_phase = sol.one_photon_limit ? 0.0 : std::arg(t.a1) - std::arg(t.a0);

    if (strategy == SolveStrategy::fixed_phases && !phases) {
        throw std::invalid_argument("fixed_phases strategy needs (phi1, phi2)");
    }

    if (sol.one_photon_limit) {
        // sin(phi1) sin(phi2) = 0 leaves only the gamma cos(phi1) cos(phi2) |1> term.
        if (strategy == SolveStrategy::fixed_phases) {
            const Trig tr(phases->first, phases->second);
            if (std::abs(tr.s1 * tr.s2) > 1e-15) {
                throw DegenerateStateError("one-photon target needs sin(phi1) sin(phi2) = 0");
            }
            sol.phi1 = phases->first;
            sol.phi2 = phases->second;
        } else {
            sol.phi1 = 0.0;
            sol.phi2 = 0.0;
        }
        sol.gamma = 1.0;
    } else if (strategy == SolveStrategy::fixed_phases) {
        const Trig tr(phases->first, phases->second);
        if (std::abs(tr.c1 * tr.c2) < 1e-15 || std::abs(tr.s1 * tr.s2) < 1e-15) {
            throw DegenerateStateError("fixed phases must keep sin and cos of both angles non-zero");
        }
        sol.phi1 = phases->first;
        sol.phi2 = phases->second;
        sol.gamma = std::polar(sol.ratio * (tr.s1 / tr.c1) * (tr.s2 / tr.c2), sol.relative_phase);
    } else if (sol.ratio == 0.0) {
        sol.phi1 = sol.phi2 = std::numbers::pi / 2;
        sol.gamma = 0.0;
    } else {
        const double u = optimal_tan_squared(sol.ratio);
        sol.phi1 = sol.phi2 = std::atan(std::sqrt(u));
        sol.gamma = std::polar(sol.ratio * u, sol.relative_phase);
    }
    sol.probability = ideal_probability_10(sol.phi1, sol.phi2, sol.gamma);
    return sol;
}

}  // namespace condq::analytic
