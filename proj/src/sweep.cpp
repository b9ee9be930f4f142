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

#include "condq/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <numbers>
#include <set>
#include <sstream>

#include "condq/analytic.hpp"
#include "condq/device.hpp"
#include "condq/measurement.hpp"

namespace condq::explorer {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view name, const std::pair<E, std::string_view> (&table)[N], const char *what) {
    for (const auto &[e, n] : table) {
        if (n == name) return e;
    }
    std::string msg = "unknown ";
    msg += what;
    msg += " '";
    msg += name;
    msg += "' (expected one of:";
    for (const auto &entry : table) {
        msg += ' ';
        msg += entry.second;
    }
    msg += ')';
    throw SpecError(msg);
}

template <typename E, std::size_t N>
std::string_view enum_name(E e, const std::pair<E, std::string_view> (&table)[N]) {
    for (const auto &[v, n] : table) {
        if (v == e) return n;
    }
    return "?";
}

constexpr std::pair<Param, std::string_view> kParams[] = {
    {Param::phi1, "phi1"},           {Param::phi2, "phi2"},           {Param::gamma_abs, "gamma_abs"},
    {Param::gamma_abs_sq, "gamma_abs_sq"}, {Param::gamma_arg, "gamma_arg"}, {Param::eta, "eta"},
};

constexpr std::pair<Quantity, std::string_view> kQuantities[] = {
    {Quantity::P10, "P10"},
    {Quantity::P01, "P01"},
    {Quantity::P_star, "P_star"},
    {Quantity::P_yn, "P_yn"},
    {Quantity::F_yn, "F_yn"},
    {Quantity::P_photocount, "P_photocount"},
    {Quantity::F_photocount, "F_photocount"},
    {Quantity::coefficients, "coefficients"},
    {Quantity::overlap, "overlap"},
};

constexpr std::pair<Engine, std::string_view> kEngines[] = {
    {Engine::analytic, "analytic"}, {Engine::numeric, "numeric"}, {Engine::both, "both"}};

constexpr std::pair<GammaRule, std::string_view> kGammaRules[] = {{GammaRule::free, "free"},
                                                                   {GammaRule::balanced, "balanced"}};

// Columns contributed by one quantity, and whether each is a probability or
// fidelity subject to the [0, 1] range check.
struct Column {
    std::string name;
    bool bounded;
};

std::vector<Column> columns_of(Quantity q) {
    switch (q) {
    case Quantity::coefficients:
        return {{"d00", true}, {"d11", true}, {"d01_re", false}, {"d01_im", false}};
    default:
        return {{std::string(quantity_name(q)), true}};
    }
}

bool needs_balanced_gamma(const SweepSpec &spec) {
    return std::find(spec.quantities.begin(), spec.quantities.end(), Quantity::P_star) != spec.quantities.end();
}

double balanced_gamma_abs(double phi1, double phi2) {
    return std::abs(std::tan(phi1) * std::tan(phi2));
}

void append_analytic(Quantity q, const ParamPoint &p, std::vector<double> &out) {
    const cplx g = p.gamma();
    switch (q) {
    case Quantity::P10:
        out.push_back(analytic::ideal_probability_10(p.phi1, p.phi2, g));
        return;
    case Quantity::P01:
        out.push_back(analytic::ideal_probability_01(p.phi1, p.phi2, g));
        return;
    case Quantity::P_star:
        out.push_back(analytic::balanced_target_probability(p.phi1, p.phi2));
        return;
    case Quantity::P_yn:
        out.push_back(analytic::yn_probability(p.eta, g, p.phi1, p.phi2));
        return;
    case Quantity::F_yn:
        out.push_back(analytic::yn_fidelity(p.eta, g, p.phi1, p.phi2));
        return;
    case Quantity::P_photocount:
        out.push_back(analytic::photocounter_regime(p.eta, g, p.phi1, p.phi2).probability);
        return;
    case Quantity::F_photocount:
        out.push_back(analytic::photocounter_regime(p.eta, g, p.phi1, p.phi2).fidelity);
        return;
    case Quantity::coefficients: {
        const auto c = analytic::yn_coefficients(p.eta, g, p.phi1, p.phi2);
        out.push_back(c.c00);
        out.push_back(c.c11);
        out.push_back(c.c01.real());
        out.push_back(c.c01.imag());
        return;
    }
    case Quantity::overlap:
        out.push_back(std::abs(analytic::overlap_10_01(p.phi1, p.phi2, g)));
        return;
    }
}

// Lazily built numeric quantities for one grid point.
class NumericPoint {
  public:
    NumericPoint(const ParamPoint &p, const fock::FockCutoff &cutoff, const Tolerances &tol)
        : p_(p), cutoff_(cutoff), tol_(tol) {}

    void append(Quantity q, std::vector<double> &out) {
        using measurement::Click;
        switch (q) {
        case Quantity::P10:
            out.push_back(ideal10().probability);
            return;
        case Quantity::P01:
            out.push_back(condition(measurement::pom_ideal_number(0, cutoff_),
                                    measurement::pom_ideal_number(1, cutoff_))
                              .probability);
            return;
        case Quantity::P_star: {
            const double g = balanced_gamma_abs(p_.phi1, p_.phi2);
            const auto params = device::make_params(p_.phi1, p_.phi2, std::polar(g, p_.gamma_arg), p_.eta, cutoff_);
            const auto out_state = device::device_output_numeric(params, tol_);
            out.push_back(fock::conditioned_reduction(out_state, measurement::pom_ideal_number(1, cutoff_).weights,
                                                      measurement::pom_ideal_number(0, cutoff_).weights, tol_)
                              .probability);
            return;
        }
        case Quantity::P_yn:
            out.push_back(yes_no().probability);
            return;
        case Quantity::F_yn:
            out.push_back(target_fidelity(yes_no()));
            return;
        case Quantity::P_photocount:
            out.push_back(photocount().probability);
            return;
        case Quantity::F_photocount:
            out.push_back(target_fidelity(photocount()));
            return;
        case Quantity::coefficients: {
            const auto &c = yes_no();
            out.push_back(c.probability * c.state(0, 0).real());
            out.push_back(c.probability * c.state(1, 1).real());
            const cplx d01 = c.probability * c.state(0, 1);
            out.push_back(d01.real());
            out.push_back(d01.imag());
            return;
        }
        case Quantity::overlap: {
            // Ideal projectors leave mode a pure; reading the amplitudes directly
            // keeps a vanishing overlap at rounding level instead of its square root.
            const auto &s = state();
            cplx inner = 0.0;
            double n10 = 0.0, n01 = 0.0;
            for (int na = 0; na < s.dim(); ++na) {
                inner += std::conj(s(na, 0, 1)) * s(na, 1, 0);
                n10 += std::norm(s(na, 1, 0));
                n01 += std::norm(s(na, 0, 1));
            }
            if (!(n10 > 0.0 && n01 > 0.0)) throw analytic::DegenerateStateError("mirror event has vanishing probability");
            out.push_back(std::abs(inner) / std::sqrt(n10 * n01));
            return;
        }
        }
    }

  private:
    const fock::MultiModeState &state() {
        if (!state_) {
            const auto params = device::make_params(p_.phi1, p_.phi2, p_.gamma(), p_.eta, cutoff_);
            state_ = device::device_output_numeric(params, tol_);
        }
        return *state_;
    }

    fock::Conditioning condition(const measurement::DiagonalPOM &b, const measurement::DiagonalPOM &c) {
        return measurement::condition_on_outcomes(state(), b, c, tol_);
    }

    const fock::Conditioning &ideal10() {
        if (!ideal10_) {
            ideal10_ = condition(measurement::pom_ideal_number(1, cutoff_), measurement::pom_ideal_number(0, cutoff_));
            if (!ideal10_->reliable) {
                throw analytic::DegenerateStateError("ideal (1, 0) event has vanishing probability; target undefined");
            }
        }
        return *ideal10_;
    }

    const fock::Conditioning &yes_no() {
        if (!yes_no_) {
            yes_no_ = condition(measurement::pom_yes_no(measurement::Click::yes, p_.eta, cutoff_),
                                measurement::pom_yes_no(measurement::Click::no, p_.eta, cutoff_));
        }
        return *yes_no_;
    }

    const fock::Conditioning &photocount() {
        if (!photocount_) {
            photocount_ = condition(measurement::pom_photocount(1, p_.eta, cutoff_),
                                    measurement::pom_photocount(0, p_.eta, cutoff_));
        }
        return *photocount_;
    }

    double target_fidelity(const fock::Conditioning &c) {
        if (!c.reliable) throw analytic::DegenerateStateError("conditioning event has vanishing probability");
        return c.state.overlap(ideal10().state);
    }

    ParamPoint p_;
    fock::FockCutoff cutoff_;
    Tolerances tol_;
    std::optional<fock::MultiModeState> state_;
    std::optional<fock::Conditioning> ideal10_;
    std::optional<fock::Conditioning> yes_no_;
    std::optional<fock::Conditioning> photocount_;
};

std::string describe(const ParamPoint &p) {
    std::ostringstream os;
    os.precision(17);
    os << "phi1=" << p.phi1 << " phi2=" << p.phi2 << " gamma_abs=" << p.gamma_abs << " gamma_arg=" << p.gamma_arg
       << " eta=" << p.eta;
    return os.str();
}

std::vector<double> axis_values_at(const SweepSpec &spec, std::size_t flat) {
    std::vector<double> values(spec.axes.size());
    for (std::size_t k = spec.axes.size(); k-- > 0;) {
        const auto n = static_cast<std::size_t>(spec.axes[k].points);
        values[k] = spec.axes[k].value(static_cast<int>(flat % n));
        flat /= n;
    }
    return values;
}

struct Plan {
    std::vector<Column> columns;
    std::optional<fock::FockCutoff> cutoff;
};

Plan plan_sweep(const SweepSpec &spec, const Tolerances &tol) {
    Plan plan;
    for (Quantity q : spec.quantities) {
        for (auto &c : columns_of(q)) plan.columns.push_back(std::move(c));
    }
    if (spec.engine == Engine::analytic) return plan;

    // The numeric engine holds every point on one basis, sized for the largest
    // coherent amplitude the grid can reach.
    double max_gamma = 0.0;
    const bool star = needs_balanced_gamma(spec);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const auto p = resolve_point(spec, axis_values_at(spec, k));
        max_gamma = std::max(max_gamma, p.gamma_abs);
        if (star) max_gamma = std::max(max_gamma, balanced_gamma_abs(p.phi1, p.phi2));
    }
    if (!std::isfinite(max_gamma)) throw SpecError("numeric engine: |gamma| is unbounded on this grid");
    // Each point holds a dense (n_max + 1)^3 state; past this size the grid is not practical.
    constexpr int kMaxNumericCutoff = 80;
    const auto too_large = [&] {
        return SpecError("numeric engine: |gamma| up to " + std::to_string(max_gamma) + " needs n_max above " +
                         std::to_string(kMaxNumericCutoff) + "; narrow the grid or use engine=analytic");
    };
    if (max_gamma > std::sqrt(double(kMaxNumericCutoff))) throw too_large();
    const auto needed = device::auto_cutoff(max_gamma, tol);
    if (needed.n_max() > kMaxNumericCutoff) throw too_large();
    if (spec.cutoff) {
        const fock::FockCutoff requested(*spec.cutoff);
        if (fock::coherent_tail_weight(max_gamma, requested) > tol.tail) {
            throw SpecError("cutoff n_max=" + std::to_string(*spec.cutoff) + " is insufficient for |gamma| up to " +
                            std::to_string(max_gamma) + "; need at least " + std::to_string(needed.n_max()));
        }
        plan.cutoff = requested;
    } else {
        plan.cutoff = needed;
    }
    return plan;
}

SweepRecord evaluate(const SweepSpec &spec, const Plan &plan, std::size_t flat, const Tolerances &tol) {
    SweepRecord rec;
    rec.axis_values = axis_values_at(spec, flat);
    rec.point = resolve_point(spec, rec.axis_values);

    std::vector<double> a, n;
    if (spec.engine != Engine::numeric) {
        for (Quantity q : spec.quantities) append_analytic(q, rec.point, a);
    }
    if (spec.engine != Engine::analytic) {
        NumericPoint np(rec.point, *plan.cutoff, tol);
        for (Quantity q : spec.quantities) np.append(q, n);
    }
    switch (spec.engine) {
    case Engine::analytic:
        rec.values = std::move(a);
        break;
    case Engine::numeric:
        rec.values = std::move(n);
        break;
    case Engine::both:
        rec.values.reserve(3 * a.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            rec.values.push_back(a[k]);
            rec.values.push_back(n[k]);
            rec.values.push_back(std::abs(a[k] - n[k]));
        }
        break;
    }
    return rec;
}

void check_ranges(const SweepSpec &spec, const Plan &plan, const SweepRecord &rec) {
    constexpr double slack = 1e-12;
    const std::size_t per = spec.engine == Engine::both ? 3 : 1;
    for (std::size_t c = 0; c < plan.columns.size(); ++c) {
        if (!plan.columns[c].bounded) continue;
        for (std::size_t e = 0; e < std::min<std::size_t>(per, 2); ++e) {
            const double v = rec.values[c * per + e];
            if (!(v >= -slack && v <= 1.0 + slack)) {
                std::ostringstream os;
                os.precision(17);
                os << "value of " << plan.columns[c].name << " out of [0, 1]: " << v << " at " << describe(rec.point);
                throw RangeViolation(os.str());
            }
        }
    }
}

}  // namespace

std::string_view param_name(Param p) { return enum_name(p, kParams); }
Param parse_param(std::string_view name) { return parse_enum(name, kParams, "parameter"); }
std::string_view quantity_name(Quantity q) { return enum_name(q, kQuantities); }
Quantity parse_quantity(std::string_view name) { return parse_enum(name, kQuantities, "quantity"); }
std::string_view engine_name(Engine e) { return enum_name(e, kEngines); }
Engine parse_engine(std::string_view name) { return parse_enum(name, kEngines, "engine"); }
std::string_view gamma_rule_name(GammaRule r) { return enum_name(r, kGammaRules); }
GammaRule parse_gamma_rule(std::string_view name) { return parse_enum(name, kGammaRules, "gamma rule"); }

void ParamPoint::set(Param p, double value) {
    switch (p) {
    case Param::phi1: phi1 = value; break;
    case Param::phi2: phi2 = value; break;
    case Param::gamma_abs: gamma_abs = value; break;
    case Param::gamma_abs_sq: gamma_abs = std::sqrt(value); break;
    case Param::gamma_arg: gamma_arg = value; break;
    case Param::eta: eta = value; break;
    }
}

double ParamPoint::get(Param p) const {
    switch (p) {
    case Param::phi1: return phi1;
    case Param::phi2: return phi2;
    case Param::gamma_abs: return gamma_abs;
    case Param::gamma_abs_sq: return gamma_abs * gamma_abs;
    case Param::gamma_arg: return gamma_arg;
    case Param::eta: return eta;
    }
    return 0.0;
}

cplx ParamPoint::gamma() const { return std::polar(gamma_abs, gamma_arg); }

double Axis::value(int k) const {
    if (k == points - 1) return hi;
    return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
}

void SweepSpec::validate() const {
    if (quantities.empty()) throw SpecError("sweep needs at least one quantity");
    if (axes.empty()) throw SpecError("sweep needs at least one axis");
    std::set<Param> seen;
    bool has_gamma_axis = false;
    for (const auto &ax : axes) {
        // |gamma| and |gamma|^2 address the same parameter.
        const Param key = ax.param == Param::gamma_abs_sq ? Param::gamma_abs : ax.param;
        if (!seen.insert(key).second) {
            throw SpecError("axis parameter '" + std::string(param_name(ax.param)) + "' appears twice");
        }
        if (ax.points < 2) throw SpecError("axis '" + std::string(param_name(ax.param)) + "' needs at least 2 points");
        if (!std::isfinite(ax.lo) || !std::isfinite(ax.hi)) {
            throw SpecError("axis '" + std::string(param_name(ax.param)) + "' has a non-finite range");
        }
        if (ax.param == Param::eta && (ax.lo < 0.0 || ax.hi > 1.0 || ax.lo > 1.0 || ax.hi < 0.0)) {
            throw SpecError("eta axis must stay within [0, 1]");
        }
        if ((ax.param == Param::gamma_abs || ax.param == Param::gamma_abs_sq) && std::min(ax.lo, ax.hi) < 0.0) {
            throw SpecError("|gamma| axis must be non-negative");
        }
        has_gamma_axis = has_gamma_axis || key == Param::gamma_abs;
    }
    if (gamma_rule == GammaRule::balanced && has_gamma_axis) {
        throw SpecError("gamma rule 'balanced' fixes |gamma|; remove the |gamma| axis");
    }
    for (double v : {fixed.phi1, fixed.phi2, fixed.gamma_abs, fixed.gamma_arg, fixed.eta}) {
        if (!std::isfinite(v)) throw SpecError("fixed parameters must be finite");
    }
    if (!(fixed.eta >= 0.0 && fixed.eta <= 1.0)) throw SpecError("eta must lie in [0, 1]");
    if (fixed.gamma_abs < 0.0) throw SpecError("|gamma| must be non-negative");
    if (cutoff && *cutoff < 1) throw SpecError("cutoff must be at least 1");
    std::size_t total = 1;
    for (const auto &ax : axes) {
        total *= static_cast<std::size_t>(ax.points);
        if (total > 100'000'000) throw SpecError("sweep grid too large");
    }
}

std::size_t SweepSpec::size() const {
    std::size_t total = 1;
    for (const auto &ax : axes) total *= static_cast<std::size_t>(ax.points);
    return total;
}

std::vector<std::string> value_columns(const SweepSpec &spec) {
    std::vector<std::string> names;
    for (Quantity q : spec.quantities) {
        for (const auto &c : columns_of(q)) {
            if (spec.engine == Engine::both) {
                names.push_back(c.name + "_analytic");
                names.push_back(c.name + "_numeric");
                names.push_back(c.name + "_absdiff");
            } else {
                names.push_back(c.name);
            }
        }
    }
    return names;
}

ParamPoint resolve_point(const SweepSpec &spec, std::span<const double> axis_values) {
    ParamPoint p = spec.fixed;
    for (std::size_t k = 0; k < spec.axes.size() && k < axis_values.size(); ++k) {
        p.set(spec.axes[k].param, axis_values[k]);
    }
    if (spec.gamma_rule == GammaRule::balanced) p.gamma_abs = balanced_gamma_abs(p.phi1, p.phi2);
    return p;
}

SweepResult run_sweep(const SweepSpec &spec, Execution execution, const Tolerances &tol) {
    spec.validate();
    const auto start = std::chrono::steady_clock::now();
    const Plan plan = plan_sweep(spec, tol);

    const std::size_t n = spec.size();
    SweepResult result;
    result.spec = spec;
    result.columns = value_columns(spec);
    result.tolerances = tol;
    if (plan.cutoff) result.cutoff_used = plan.cutoff->n_max();
    result.records.resize(n);

    std::vector<std::exception_ptr> errors(n);
    const auto run_one = [&](std::size_t k) {
        try {
            result.records[k] = evaluate(spec, plan, k, tol);
            check_ranges(spec, plan, result.records[k]);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    };

    if (execution == Execution::serial) {
        for (std::size_t k = 0; k < n; ++k) run_one(k);
    } else {
        const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16)
        for (long long k = 0; k < count; ++k) run_one(static_cast<std::size_t>(k));
    }

    // Report the first failing point in grid order, independent of scheduling.
    for (std::size_t k = 0; k < n; ++k) {
        if (!errors[k]) continue;
        try {
            std::rethrow_exception(errors[k]);
        } catch (const RangeViolation &) {
            throw;
        } catch (const std::exception &e) {
            throw SpecError("evaluation failed at " + describe(resolve_point(spec, axis_values_at(spec, k))) + ": " +
                            e.what());
        }
    }

    result.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace condq::explorer
