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

#pragma once

#include <array>
#include <optional>

#include "condq/fock.hpp"

namespace condq::device {

/// Half phase shifts of the two interferometers (phi = theta / 2, where theta is
/// the equal and opposite shift imposed on the two arms), the coherent amplitude
/// fed into mode c, and the detector quantum efficiency.
///
/// With this convention a photon entering an interferometer stays in its own
/// mode with amplitude sin(phi) and crosses with amplitude cos(phi).
struct DeviceParams {
    double phi1;
    double phi2;
    cplx gamma;
    double eta;
    fock::FockCutoff cutoff;

    /// Throws std::invalid_argument on non-finite phases or eta outside [0, 1].
    void validate() const;
};

/// Cutoff policy: smallest n_max whose coherent tail for |gamma| is below
/// tol.tail, plus kCutoffHeadroom levels for creation and mixing at the top.
inline constexpr int kCutoffHeadroom = 4;
fock::FockCutoff auto_cutoff(double max_abs_gamma, const Tolerances &tol = kDefaultTolerances);

DeviceParams make_params(double phi1, double phi2, cplx gamma, double eta = 1.0,
                         std::optional<fock::FockCutoff> cutoff = std::nullopt);

/// Phase reduced to [0, pi) for reporting.
double canonical_phase(double phi);

/// One Mach-Zehnder interferometer on modes (i, j): phase(pi/2 on j), then
/// mixer(-phi), then phase(-pi/2 on j). Equivalent to a real rotation
///   j^dag -> cos(phi) j^dag + sin(phi) i^dag,  i^dag -> cos(phi) i^dag - sin(phi) j^dag.
fock::MultiModeState mz_unitary_apply(const fock::MultiModeState &state, fock::Mode i, fock::Mode j,
                                      double phi, const Tolerances &tol = kDefaultTolerances);

/// |0>_a |1>_b |gamma>_c
fock::MultiModeState input_state(const DeviceParams &params, const Tolerances &tol = kDefaultTolerances);

/// Full device applied to input_state() on the truncated Fock basis: interferometer
/// (a, b) driven at pi/2 - phi1, then interferometer (b, c) driven at pi/2 - phi2.
fock::MultiModeState device_output_numeric(const DeviceParams &params,
                                           const Tolerances &tol = kDefaultTolerances);

/// weight * |photons_a>_a (b^dag)^raise_b |beta>_b (c^dag)^raise_c |delta>_c
struct Branch {
    double weight;
    int photons_a;
    bool raise_b;
    bool raise_c;
};

/// Closed-form output state as three product branches sharing the coherent
/// amplitudes beta = gamma cos(phi2) and delta = gamma sin(phi2).
struct BranchDecomposition {
    std::array<Branch, 3> branches;
    cplx beta;
    cplx delta;

    /// Expands the branches on the given cutoff (not renormalized).
    fock::MultiModeState reassemble(const fock::FockCutoff &cutoff,
                                    const Tolerances &tol = kDefaultTolerances) const;
};

BranchDecomposition device_output_branches(const DeviceParams &params);

}  // namespace condq::device
