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

#include "condq/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "condq/analytic.hpp"

namespace condq::explorer {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

// Strict preference: feasible beats infeasible; among feasible points larger
// probability wins; among infeasible ones larger fidelity wins.
bool better(const Evaluation &x, const Evaluation &y) {
    if (x.valid != y.valid) return x.valid;
    if (x.feasible != y.feasible) return x.feasible;
    if (x.feasible) return x.probability > y.probability;
    return x.fidelity > y.fidelity;
}

double grid_value(double lo, double hi, int k, int n) {
    if (n <= 1 || lo == hi) return lo;
    if (k == n - 1) return hi;
    return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
}

class Search {
  public:
    explicit Search(const OptimizeSpec &spec) : spec_(spec) {}

    Evaluation eval(double phi1, double phi2) {
        ++count_;
        const Evaluation e = evaluate_objective(spec_, phi1, phi2);
        if (better(e, best_) || count_ == 1) best_ = e;
        return e;
    }

    // Evaluates an n x n lattice over the window clipped to the box.
    Evaluation lattice(double c1, double h1, double c2, double h2, int n) {
        const auto &b = spec_.box;
        const double lo1 = std::max(b.phi1_lo, c1 - h1), hi1 = std::min(b.phi1_hi, c1 + h1);
        const double lo2 = std::max(b.phi2_lo, c2 - h2), hi2 = std::min(b.phi2_hi, c2 + h2);
        const int n1 = lo1 == hi1 ? 1 : n, n2 = lo2 == hi2 ? 1 : n;
        Evaluation local = eval(c1, c2);
        for (int i = 0; i < n1; ++i) {
            for (int j = 0; j < n2; ++j) {
                const auto e = eval(grid_value(lo1, hi1, i, n1), grid_value(lo2, hi2, j, n2));
                if (better(e, local)) local = e;
            }
        }
        return local;
    }

    Evaluation polish(Evaluation at, double step) {
        const auto &b = spec_.box;
        while (step > 1e-12) {
            bool moved = false;
            const double moves[4][2] = {{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}};
            for (const auto &m : moves) {
                const double p1 = std::clamp(at.phi1 + m[0], b.phi1_lo, b.phi1_hi);
                const double p2 = std::clamp(at.phi2 + m[1], b.phi2_lo, b.phi2_hi);
                if (p1 == at.phi1 && p2 == at.phi2) continue;
                const auto e = eval(p1, p2);
                if (better(e, at)) {
                    at = e;
                    moved = true;
                    break;
                }
            }
            if (!moved) step /= 2.0;
        }
        return at;
    }

    const Evaluation &best() const { return best_; }
    long count() const { return count_; }

  private:
    const OptimizeSpec &spec_;
    Evaluation best_;
    long count_ = 0;
};

constexpr std::pair<Objective, std::string_view> kObjectives[] = {
    {Objective::max_probability_balanced_target, "max_probability_balanced_target"},
    {Objective::max_probability_given_fidelity, "max_probability_given_fidelity"},
};

}  // namespace

std::string_view objective_name(Objective o) {
    for (const auto &[v, n] : kObjectives) {
        if (v == o) return n;
    }
    return "?";
}

Objective parse_objective(std::string_view name) {
    for (const auto &[v, n] : kObjectives) {
        if (n == name) return v;
    }
    throw SpecError("unknown objective '" + std::string(name) +
                    "' (expected max_probability_balanced_target or max_probability_given_fidelity)");
}

void OptimizeSpec::validate() const {
    const auto &b = box;
    for (double v : {b.phi1_lo, b.phi1_hi, b.phi2_lo, b.phi2_hi}) {
        if (!std::isfinite(v)) throw SpecError("search box must be finite");
        if (v < 0.0 || v >= kHalfPi) throw SpecError("search box must lie within [0, pi/2)");
    }
    if (b.phi1_lo > b.phi1_hi || b.phi2_lo > b.phi2_hi) throw SpecError("search box has lo > hi");
    if (!(eta > 0.0 && eta <= 1.0)) throw SpecError("eta must lie in (0, 1]");
    if (!(fidelity_min >= 0.0 && fidelity_min <= 1.0)) throw SpecError("fidelity-min must lie in [0, 1]");
    if (!(target_ratio > 0.0) || !std::isfinite(target_ratio)) throw SpecError("target ratio must be positive");
    if (!std::isfinite(target_phase)) throw SpecError("target phase must be finite");
    if (grid < 2) throw SpecError("grid needs at least 2 points per phase");
    if (starts < 1 || levels < 0 || refine_grid < 3 || !(shrink > 1.0)) throw SpecError("invalid refinement settings");
}

Evaluation evaluate_objective(const OptimizeSpec &spec, double phi1, double phi2) {
    Evaluation e;
    e.phi1 = phi1;
    e.phi2 = phi2;
    e.gamma = std::polar(spec.target_ratio * std::tan(phi1) * std::tan(phi2), spec.target_phase);
    // With sin(phi1) sin(phi2) = 0 the target direction is lost.
    if (std::sin(phi1) * std::sin(phi2) == 0.0) return e;
    try {
        switch (spec.objective) {
        case Objective::max_probability_balanced_target:
            e.probability = analytic::ideal_probability_10(phi1, phi2, e.gamma);
            e.fidelity = 1.0;
            break;
        case Objective::max_probability_given_fidelity:
            e.probability = analytic::yn_probability(spec.eta, e.gamma, phi1, phi2);
            e.fidelity = analytic::yn_fidelity(spec.eta, e.gamma, phi1, phi2);
            break;
        }
    } catch (const std::domain_error &) {
        return e;
    }
    e.valid = std::isfinite(e.probability) && std::isfinite(e.fidelity);
    e.feasible = e.valid && e.fidelity >= spec.fidelity_min;
    return e;
}

OptimizeResult optimize_regime(const OptimizeSpec &spec) {
    spec.validate();
    const auto &b = spec.box;
    Search search(spec);

    const int n1 = b.phi1_lo == b.phi1_hi ? 1 : spec.grid;
    const int n2 = b.phi2_lo == b.phi2_hi ? 1 : spec.grid;
    const double h1 = n1 > 1 ? (b.phi1_hi - b.phi1_lo) / (n1 - 1) : 0.0;
    const double h2 = n2 > 1 ? (b.phi2_hi - b.phi2_lo) / (n2 - 1) : 0.0;

    std::vector<Evaluation> coarse;
    coarse.reserve(static_cast<std::size_t>(n1) * n2);
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            coarse.push_back(search.eval(grid_value(b.phi1_lo, b.phi1_hi, i, n1), grid_value(b.phi2_lo, b.phi2_hi, j, n2)));
        }
    }

    OptimizeResult result;
    for (const auto &e : coarse) {
        if (e.feasible) result.best_coarse_probability = std::max(result.best_coarse_probability, e.probability);
    }

    // Starts: best coarse points, at least two cells apart.
    std::vector<Evaluation> ranked = coarse;
    std::stable_sort(ranked.begin(), ranked.end(), better);
    std::vector<Evaluation> starts;
    for (const auto &e : ranked) {
        if (static_cast<int>(starts.size()) == spec.starts) break;
        const bool distinct = std::none_of(starts.begin(), starts.end(), [&](const Evaluation &s) {
            return std::abs(s.phi1 - e.phi1) <= 2.0 * h1 + 1e-15 && std::abs(s.phi2 - e.phi2) <= 2.0 * h2 + 1e-15;
        });
        if (distinct) starts.push_back(e);
    }

    for (const auto &s : starts) {
        Evaluation at = s;
        double w1 = h1, w2 = h2;
        for (int level = 0; level < spec.levels; ++level) {
            at = search.lattice(at.phi1, w1, at.phi2, w2, spec.refine_grid);
            w1 /= spec.shrink;
            w2 /= spec.shrink;
        }
        search.polish(at, std::max(w1, w2));
    }

    result.best = search.best();
    result.feasible = result.best.feasible;
    result.evaluations = search.count();
    return result;
}

}  // namespace condq::explorer
