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

#include "condq/measurement.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace condq::measurement {

namespace {

void require_eta(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1], got " + std::to_string(eta));
}

void require_count(int n, const fock::FockCutoff &cutoff) {
    if (n < 0 || n > cutoff.n_max()) {
        throw std::invalid_argument("photon number " + std::to_string(n) + " outside [0, " +
                                    std::to_string(cutoff.n_max()) + "]");
    }
}

constexpr double kProjectorLimit = 1e-12;

}  // namespace

DiagonalPOM pom_ideal_number(int n, const fock::FockCutoff &cutoff) {
    require_count(n, cutoff);
    std::vector<double> w(cutoff.dim(), 0.0);
    w[n] = 1.0;
    return {PomKind::ideal_number, n, 1.0, std::move(w)};
}

DiagonalPOM pom_yes_no(Click outcome, double eta, const fock::FockCutoff &cutoff) {
    require_eta(eta);
    std::vector<double> w(cutoff.dim());
    double no = 1.0;
    for (auto &x : w) {
        x = outcome == Click::no ? no : 1.0 - no;
        no *= 1.0 - eta;
    }
    return {outcome == Click::no ? PomKind::no : PomKind::yes, 0, eta, std::move(w)};
}

DiagonalPOM pom_photocount(int n, double eta, const fock::FockCutoff &cutoff) {
    require_count(n, cutoff);
    require_eta(eta);
    if (eta == 0.0) throw std::invalid_argument("photocounter needs eta > 0");
    std::vector<double> w(cutoff.dim(), 0.0);
    if (1.0 - eta < kProjectorLimit) {
        w[n] = 1.0;
        return {PomKind::photocount, n, eta, std::move(w)};
    }
    const double log_eta = std::log(eta);
    const double log_miss = std::log1p(-eta);
    for (int k = n; k < cutoff.dim(); ++k) {
        const double log_binom = std::lgamma(k + 1.0) - std::lgamma(n + 1.0) - std::lgamma(k - n + 1.0);
        w[k] = std::exp(log_binom + n * log_eta + (k - n) * log_miss);
    }
    return {PomKind::photocount, n, eta, std::move(w)};
}

std::vector<double> family_sum(std::span<const DiagonalPOM> family) {
    if (family.empty()) return {};
    std::vector<double> total(family.front().weights.size(), 0.0);
    for (const auto &pom : family) {
        if (pom.weights.size() != total.size()) throw std::invalid_argument("POM family mixes cutoffs");
        for (std::size_t k = 0; k < total.size(); ++k) total[k] += pom.weights[k];
    }
    return total;
}

MatrixElements no_click_elements(cplx z, double eta) {
    require_eta(eta);
    const double x = std::norm(z);
    const double e = std::exp(-eta * x);
    return {e, z * (1.0 - eta) * e, (1.0 - eta) * (1.0 + x * (1.0 - eta)) * e};
}

MatrixElements click_elements(cplx z, double eta) {
    const auto no = no_click_elements(z, eta);
    const double x = std::norm(z);
    return {1.0 - no.diagonal, z - no.lowered, 1.0 + x - no.sandwich};
}

MatrixElements one_count_elements(cplx z, double eta) {
    require_eta(eta);
    const double x = std::norm(z);
    const double y = (1.0 - eta) * x;
    const double e = std::exp(-eta * x);
    return {eta * x * e, z * eta * e * (1.0 + y), eta * e * (1.0 + 3.0 * y + y * y)};
}

CoherentPomElements coherent_pom_elements(cplx z, double eta) {
    return {no_click_elements(z, eta), click_elements(z, eta), one_count_elements(z, eta)};
}

fock::Conditioning condition_on_outcomes(const fock::MultiModeState &state, const DiagonalPOM &pom_b,
                                         const DiagonalPOM &pom_c, const Tolerances &tol) {
    return fock::conditioned_reduction(state, pom_b.weights, pom_c.weights, tol);
}

}  // namespace condq::measurement
