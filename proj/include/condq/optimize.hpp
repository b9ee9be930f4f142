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

#include <string_view>

#include "condq/sweep.hpp"

namespace condq::explorer {

enum class Objective {
    /// Ideal (1, 0) conditioning with |gamma| tied to the phases; the target
    /// ratio is met exactly and fidelity is 1.
    max_probability_balanced_target,
    /// YES/NO conditioning at efficiency eta, |gamma| tied to the phases as
    /// above, subject to F_yn >= fidelity_min.
    max_probability_given_fidelity,
};
std::string_view objective_name(Objective o);
Objective parse_objective(std::string_view name);

struct SearchBox {
    double phi1_lo = 0.1;
    double phi1_hi = 1.5;
    double phi2_lo = 0.1;
    double phi2_hi = 1.5;
};

struct OptimizeSpec {
    Objective objective = Objective::max_probability_balanced_target;
    double fidelity_min = 0.99;
    double eta = 1.0;
    /// Target a1 / a0 = target_ratio * exp(i target_phase).
    double target_ratio = 1.0;
    double target_phase = 0.0;
    SearchBox box;
    int grid = 41;         // coarse points per phase
    int starts = 4;        // refined basins
    int levels = 3;        // refinement levels
    double shrink = 4.0;   // window shrink per level
    int refine_grid = 9;   // points per phase within a refinement window

    /// Throws SpecError.
    void validate() const;
};

struct Evaluation {
    double phi1 = 0.0;
    double phi2 = 0.0;
    cplx gamma{};
    double probability = 0.0;
    double fidelity = 0.0;
    bool valid = false;  // false where the target is undefined
    bool feasible = false;
};

struct OptimizeResult {
    bool feasible = false;
    /// Best feasible point, or the point closest to feasibility (largest
    /// fidelity) when nothing in the box meets the constraint.
    Evaluation best;
    double best_coarse_probability = 0.0;  // over feasible coarse points
    long evaluations = 0;
};

/// Objective value and constraint at one phase pair.
Evaluation evaluate_objective(const OptimizeSpec &spec, double phi1, double phi2);

/// Multi-start grid refinement followed by a compass-search polish. Fully
/// deterministic; never uses derivatives.
OptimizeResult optimize_regime(const OptimizeSpec &spec);

}  // namespace condq::explorer
