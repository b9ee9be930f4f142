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

#include <span>
#include <vector>

#include "condq/fock.hpp"

namespace condq::measurement {

enum class PomKind { ideal_number, yes, no, photocount };
enum class Click { yes, no };

/// A measurement operator diagonal in the number basis. `count` is the
/// resolved photon number for ideal_number and photocount kinds.
struct DiagonalPOM {
    PomKind kind;
    int count;
    double eta;
    std::vector<double> weights;
};

DiagonalPOM pom_ideal_number(int n, const fock::FockCutoff &cutoff);

/// Avalanche (YES/NO) detector: NO has weight (1 - eta)^p on |p>, YES = 1 - NO.
DiagonalPOM pom_yes_no(Click outcome, double eta, const fock::FockCutoff &cutoff);

/// Photocounter: weight C(k, n) eta^n (1 - eta)^(k - n) for k >= n. Within
/// 1e-12 of eta = 1 the exact projector onto |n> is returned.
DiagonalPOM pom_photocount(int n, double eta, const fock::FockCutoff &cutoff);

/// Entrywise sum of a family of POMs; equals 1 everywhere for a complete family.
std::vector<double> family_sum(std::span<const DiagonalPOM> family);

/// <z|P|z>, <z|a P|z> and <z|a P a^dag|z> for one diagonal operator P.
struct MatrixElements {
    double diagonal;
    cplx lowered;
    double sandwich;
};

/// Closed-form coherent-state matrix elements of the NO, YES and single-count
/// photocounter operators.
struct CoherentPomElements {
    MatrixElements no;
    MatrixElements yes;
    MatrixElements one_count;
};

CoherentPomElements coherent_pom_elements(cplx z, double eta);

/// Closed forms for the NO operator alone; YES follows by complement.
MatrixElements no_click_elements(cplx z, double eta);
MatrixElements click_elements(cplx z, double eta);
MatrixElements one_count_elements(cplx z, double eta);

/// Applies pom_b to mode b and pom_c to mode c and returns the event probability
/// with the conditional state of mode a.
fock::Conditioning condition_on_outcomes(const fock::MultiModeState &state, const DiagonalPOM &pom_b,
                                         const DiagonalPOM &pom_c,
                                         const Tolerances &tol = kDefaultTolerances);

}  // namespace condq::measurement
