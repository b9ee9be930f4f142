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

#include "condq/device.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace condq::device {

using fock::Mode;
using fock::MultiModeState;

void DeviceParams::validate() const {
    if (!std::isfinite(phi1) || !std::isfinite(phi2)) throw std::invalid_argument("phases must be finite");
    if (!std::isfinite(gamma.real()) || !std::isfinite(gamma.imag())) {
        throw std::invalid_argument("coherent amplitude must be finite");
    }
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1], got " + std::to_string(eta));
}

fock::FockCutoff auto_cutoff(double max_abs_gamma, const Tolerances &tol) {
    return fock::required_cutoff(max_abs_gamma, tol.tail, kCutoffHeadroom);
}

DeviceParams make_params(double phi1, double phi2, cplx gamma, double eta,
                         std::optional<fock::FockCutoff> cutoff) {
    DeviceParams p{phi1, phi2, gamma, eta, cutoff.value_or(auto_cutoff(std::abs(gamma)))};
    p.validate();
    return p;
}

double canonical_phase(double phi) {
    double r = std::fmod(phi, std::numbers::pi);
    if (r < 0.0) r += std::numbers::pi;
    return r;
}

MultiModeState mz_unitary_apply(const MultiModeState &state, Mode i, Mode j, double phi,
                                const Tolerances &tol) {
    constexpr double half_pi = std::numbers::pi / 2;
    auto s = fock::apply_phase(state, j, half_pi);
    s = fock::apply_two_mode_mixer(s, i, j, -phi, tol);
    return fock::apply_phase(s, j, -half_pi);
}

MultiModeState input_state(const DeviceParams &params, const Tolerances &tol) {
    const int d = params.cutoff.dim();
    std::vector<cplx> a(d), b(d);
    a[0] = 1.0;
    b[1] = 1.0;
    const auto c = fock::coherent_state(params.gamma, params.cutoff, tol);
    return MultiModeState::product(a, b, c.amplitudes, params.cutoff);
}

MultiModeState device_output_numeric(const DeviceParams &params, const Tolerances &tol) {
    params.validate();
    constexpr double half_pi = std::numbers::pi / 2;
    auto s = input_state(params, tol);
    s = mz_unitary_apply(s, Mode::a, Mode::b, half_pi - params.phi1, tol);
    s = mz_unitary_apply(s, Mode::b, Mode::c, half_pi - params.phi2, tol);
    return s.normalized();
}

BranchDecomposition device_output_branches(const DeviceParams &params) {
    params.validate();
    const double s1 = std::sin(params.phi1), c1 = std::cos(params.phi1);
    const double s2 = std::sin(params.phi2), c2 = std::cos(params.phi2);
    return BranchDecomposition{
        {Branch{c1, 1, false, false}, Branch{s1 * s2, 0, true, false}, Branch{-s1 * c2, 0, false, true}},
        params.gamma * c2,
        params.gamma * s2,
    };
}

MultiModeState BranchDecomposition::reassemble(const fock::FockCutoff &cutoff, const Tolerances &tol) const {
    const int d = cutoff.dim();
    const auto beta_amps = fock::coherent_state(beta, cutoff, tol).amplitudes;
    const auto delta_amps = fock::coherent_state(delta, cutoff, tol).amplitudes;

    std::vector<cplx> total(static_cast<std::size_t>(d) * d * d);
    for (const auto &br : branches) {
        if (br.weight == 0.0) continue;
        std::vector<cplx> a(d);
        a[br.photons_a] = 1.0;
        auto s = MultiModeState::product(a, beta_amps, delta_amps, cutoff);
        if (br.raise_b) s = fock::apply_creation(s, Mode::b, tol).state;
        if (br.raise_c) s = fock::apply_creation(s, Mode::c, tol).state;
        const auto amps = s.amplitudes();
        for (std::size_t k = 0; k < total.size(); ++k) total[k] += br.weight * amps[k];
    }
    return MultiModeState::from_amplitudes(std::move(total), cutoff);
}

}  // namespace condq::device
