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

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "condq/sweep.hpp"

namespace condq::explorer {

struct VerificationGrid {
    std::vector<double> phis;  // used for both phi1 and phi2
    std::vector<double> gamma_abs;
    std::vector<double> gamma_args;
    std::vector<double> etas;

    std::size_t size() const { return phis.size() * phis.size() * gamma_abs.size() * gamma_args.size() * etas.size(); }
};

VerificationGrid standard_grid();
VerificationGrid fine_grid();

struct Check {
    std::string name;
    double worst_error = 0.0;
    double threshold = 0.0;
    std::size_t samples = 0;
    bool passed() const { return worst_error < threshold; }
};

struct VerifyReport {
    std::string preset;
    std::vector<Check> checks;
    std::optional<int> cutoff;
    double runtime_seconds = 0.0;

    bool passed() const;
    const Check *find(std::string_view name) const;
};

std::vector<std::string> verification_presets();

/// Runs every check of a preset ("standard", "fine", "appendix"). With
/// `tolerance_override` set every threshold is replaced by that value.
/// Throws SpecError for an unknown preset.
VerifyReport run_verification(std::string_view preset, std::optional<double> tolerance_override = std::nullopt,
                              Execution execution = Execution::parallel);

/// Cross-engine and invariant checks over an arbitrary grid.
VerifyReport verify_grid(const VerificationGrid &grid, std::optional<double> tolerance_override = std::nullopt,
                         Execution execution = Execution::parallel);

/// Closed-form coherent matrix elements against truncated number-basis sums.
VerifyReport verify_matrix_elements(std::optional<double> tolerance_override = std::nullopt);

void print_report(const VerifyReport &report, std::ostream &os);

}  // namespace condq::explorer
