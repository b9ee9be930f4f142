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

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "condq/tolerances.hpp"

namespace condq::explorer {

/// Invalid sweep/optimizer specification (exit code 1 in the CLI).
class SpecError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// An evaluated probability or fidelity fell outside [0, 1].
class RangeViolation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Param { phi1, phi2, gamma_abs, gamma_abs_sq, gamma_arg, eta };
std::string_view param_name(Param p);
Param parse_param(std::string_view name);

enum class Quantity { P10, P01, P_star, P_yn, F_yn, P_photocount, F_photocount, coefficients, overlap };
std::string_view quantity_name(Quantity q);
Quantity parse_quantity(std::string_view name);

enum class Engine { analytic, numeric, both };
std::string_view engine_name(Engine e);
Engine parse_engine(std::string_view name);

/// How |gamma| is chosen at each grid point. `balanced` ties it to the phases,
/// |gamma| = tan(phi1) tan(phi2): the ideal conditional state is the
/// equal-weight superposition.
enum class GammaRule { free, balanced };
std::string_view gamma_rule_name(GammaRule r);
GammaRule parse_gamma_rule(std::string_view name);

struct ParamPoint {
    double phi1 = 0.7853981633974483;
    double phi2 = 0.7853981633974483;
    double gamma_abs = 1.0;
    double gamma_arg = 0.0;
    double eta = 1.0;

    void set(Param p, double value);
    double get(Param p) const;
    cplx gamma() const;
};

struct Axis {
    Param param;
    double lo;
    double hi;
    int points;

    double value(int k) const;
};

struct SweepSpec {
    std::string name;
    std::vector<Axis> axes;
    ParamPoint fixed;
    GammaRule gamma_rule = GammaRule::free;
    std::vector<Quantity> quantities;
    Engine engine = Engine::analytic;
    std::optional<int> cutoff;

    /// Throws SpecError.
    void validate() const;
    std::size_t size() const;
};

struct SweepRecord {
    std::vector<double> axis_values;  // one per axis, declaration order
    ParamPoint point;                 // fully resolved parameters
    std::vector<double> values;       // one per value column
};

struct SweepResult {
    SweepSpec spec;
    std::vector<std::string> columns;
    std::vector<SweepRecord> records;
    std::optional<int> cutoff_used;  // set when the numeric engine ran
    Tolerances tolerances;
    double runtime_seconds = 0.0;  // not part of emitted output
};

enum class Execution { serial, parallel };

/// Names of the value columns, in emission order.
std::vector<std::string> value_columns(const SweepSpec &spec);

/// Point for the given axis values with the gamma rule applied.
ParamPoint resolve_point(const SweepSpec &spec, std::span<const double> axis_values);

/// Evaluates every grid point, row-major over the axes in declaration order
/// (first axis slowest). `parallel` spreads grid points over OpenMP threads;
/// each worker writes into its pre-indexed slot so the result does not depend
/// on scheduling. `serial` is the reference path.
SweepResult run_sweep(const SweepSpec &spec, Execution execution = Execution::parallel,
                      const Tolerances &tol = kDefaultTolerances);

}  // namespace condq::explorer
