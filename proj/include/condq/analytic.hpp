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
#include <stdexcept>

#include <Eigen/Dense>

#include "condq/measurement.hpp"
#include "condq/tolerances.hpp"

// Closed-form results for the conditional double interferometer. Angles are the
// half phase shifts phi1, phi2 of DeviceParams; gamma is the coherent amplitude
// entering mode c. Every function here is pure and cheap, so sweeps and the
// optimizer call them directly; the numeric engine (device + measurement) is
// the independent cross-check.

namespace condq::analytic {

/// Raised when a requested conditional state has no defined direction
/// (both superposition weights vanish).
class DegenerateStateError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Unnormalized conditional state of mode a on {|0>, |1>}:
///   c00 |0><0| + c11 |1><1| + c01 |0><1| + conj(c01) |1><0|.
/// `normalizer` is the detection probability of the conditioning event.
struct ConditionalCoefficients {
    double c00;
    double c11;
    cplx c01;
    double normalizer;

    cplx c10() const { return std::conj(c01); }
    /// Normalized 2x2 density matrix.
    Eigen::Matrix2cd matrix() const;
    /// c00 c11 - |c01|^2, zero for a pure conditional state.
    double purity_gap() const { return c00 * c11 - std::norm(c01); }
};

/// a0 |0> + a1 |1>, always normalized.
struct QubitTarget {
    cplx a0;
    cplx a1;

    /// Normalizes (a0, a1); throws DegenerateStateError for the zero vector.
    static QubitTarget from(cplx a0, cplx a1);
    static QubitTarget balanced(double relative_phase);
};

/// <psi|rho|psi> for the normalized state described by `coeffs`.
double fidelity(const ConditionalCoefficients &coeffs, const QubitTarget &target);

// --- ideal photon-number conditioning --------------------------------------

/// Probability of one photon in b and none in c.
double ideal_probability_10(double phi1, double phi2, cplx gamma);
ConditionalCoefficients ideal_coefficients_10(double phi1, double phi2, cplx gamma);
/// The (pure) conditional state for one photon in b, none in c. Its relative
/// phase is arg(gamma).
QubitTarget ideal_state_10(double phi1, double phi2, cplx gamma);

/// The mirror event: no photon in b, one in c.
double ideal_probability_01(double phi1, double phi2, cplx gamma);
QubitTarget ideal_state_01(double phi1, double phi2, cplx gamma);

/// <psi_01|psi_10>. Vanishes for |gamma| = tan(phi1) and for phi2 = p pi/2.
cplx overlap_10_01(double phi1, double phi2, cplx gamma);

/// Ideal probability of preparing (|0> + e^{i arg gamma}|1>)/sqrt(2), i.e. with
/// |gamma| = tan(phi1) tan(phi2). Throws std::domain_error at a pole of tan.
double balanced_target_probability(double phi1, double phi2);

// --- avalanche (YES on b, NO on c) conditioning ----------------------------

double yn_probability(double eta, cplx gamma, double phi1, double phi2);
ConditionalCoefficients yn_coefficients(double eta, cplx gamma, double phi1, double phi2);
/// Fidelity of the YES/NO conditional state to ideal_state_10.
double yn_fidelity(double eta, cplx gamma, double phi1, double phi2);

/// The published single-expression form of the YES/NO fidelity, kept only to
/// quantify how far it is from yn_fidelity. It agrees when sin(phi2) = cos(phi2).
double yn_fidelity_printed(double eta, cplx gamma, double phi1, double phi2);

/// Conditional coefficients built from coherent-state matrix elements of the
/// operators on b (evaluated at beta = gamma cos phi2) and c (at delta =
/// gamma sin phi2). Works for any pair of diagonal detectors.
ConditionalCoefficients assemble_coefficients(double phi1, double phi2,
                                              const measurement::MatrixElements &on_b,
                                              const measurement::MatrixElements &on_c);

// --- working regimes -------------------------------------------------------

/// phi1 = phi2 = pi/4.
struct BalancedRegime {
    double probability;
    double fidelity;
    /// Upper bound on the fidelity over eta (the eta = 1 value).
    double fidelity_bound;
};
BalancedRegime balanced_regime(double eta, cplx gamma);
double balanced_fidelity_bound(double gamma_abs_sq);

/// phi1 small, phi2 = pi/2 - phi1.
struct UnbalancedRegime {
    double probability_leading;  // e^{-eta x}[eta x cos^2 phi2 + eta sin^2 phi1]
    double probability_approx;   // eta phi1^2 (1 + x) e^{-eta x}
    double fidelity_approx;      // 1 - phi1^2 (2 - eta) / 2
    double probability_exact;
    double fidelity_exact;
    /// Approximate fidelity predicted from the exact probability by the
    /// small-angle probability/fidelity trade-off.
    double fidelity_from_relation;
    bool outside_small_angle;  // phi1 > kSmallAngle
};
inline constexpr double kSmallAngle = 0.2;
UnbalancedRegime unbalanced_regime(double eta, cplx gamma, double phi1);
/// F ~ 1 - (2 - eta) e^{eta x} P / (2 eta (1 + x)).
double unbalanced_fidelity_from_probability(double eta, cplx gamma, double probability);

// --- photocounter conditioning (one count on b, none on c) -----------------

struct PhotocounterRegime {
    double probability;
    ConditionalCoefficients coefficients;
    double fidelity;
};
PhotocounterRegime photocounter_regime(double eta, cplx gamma, double phi1, double phi2);
/// phi1 = phi2 = pi/4 closed forms.
double photocounter_balanced_probability(double eta, cplx gamma);
double photocounter_balanced_fidelity(double eta, double gamma_abs_sq);

// --- target inversion ------------------------------------------------------

enum class SolveStrategy {
    max_probability,  // pick the family member with the largest ideal P10
    fixed_phases,     // use the supplied (phi1, phi2)
};

/// Device settings preparing `target` under ideal (1, 0) conditioning.
/// For a0 != 0 the settings form the family |gamma| = ratio tan(phi1) tan(phi2),
/// arg(gamma) = relative_phase. For the one-photon state the family is the
/// limit sin(phi1) sin(phi2) = 0 with any gamma != 0.
struct TargetSolution {
    bool one_photon_limit;
    double ratio;           // |a1| / |a0|
    double relative_phase;  // arg a1 - arg a0
    double phi1;
    double phi2;
    cplx gamma;
    double probability;  // ideal P10 at the representative point
};

TargetSolution solve_target(const QubitTarget &target, SolveStrategy strategy,
                            std::optional<std::pair<double, double>> phases = std::nullopt);

}  // namespace condq::analytic
