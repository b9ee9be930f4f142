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

#include <complex>

namespace condq {

using cplx = std::complex<double>;

/// Numerical thresholds shared by every module; reported with each run.
struct Tolerances {
    double norm = 1e-10;
    double hermiticity = 1e-10;
    /// Largest Poisson weight a coherent amplitude may lose to the cutoff.
    double tail = 1e-12;
    /// Conditioning events less likely than this are flagged unreliable.
    double probability_floor = 1e-15;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace condq
