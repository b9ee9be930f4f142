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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "condq/tolerances.hpp"

namespace condq::fock {

/// Raised when a state does not fit in the retained number basis. Carries the
/// smallest cutoff that would have been accepted.
class TruncationError : public std::runtime_error {
  public:
    TruncationError(const std::string &what, int required_n_max)
        : std::runtime_error(what), required_n_max_(required_n_max) {}
    int required_n_max() const { return required_n_max_; }

  private:
    int required_n_max_;
};

/// The three optical modes of the device. Mode `a` carries the prepared
/// state, `b` and `c` are the detected outputs.
enum class Mode : int { a = 0, b = 1, c = 2 };

std::string_view mode_name(Mode m);

/// Highest retained photon number per mode.
class FockCutoff {
  public:
    explicit FockCutoff(int n_max);
    int n_max() const { return n_max_; }
    int dim() const { return n_max_ + 1; }
    friend bool operator==(const FockCutoff &, const FockCutoff &) = default;

  private:
    int n_max_;
};

/// Poisson weight of |z> above n_max, summed directly (no 1 - sum cancellation).
double coherent_tail_weight(double abs_z, const FockCutoff &cutoff);

/// Smallest cutoff whose tail is below `tail_tolerance`, plus `headroom` levels.
FockCutoff required_cutoff(double abs_z, double tail_tolerance, int headroom = 0);

struct CoherentAmplitudes {
    std::vector<cplx> amplitudes;  // renormalized to unit norm
    double norm_defect;            // 1 - (norm before renormalization)^2
};

/// Truncated coherent state e^{-|z|^2/2} z^n / sqrt(n!). Throws TruncationError
/// when the discarded tail exceeds `tol.tail`.
CoherentAmplitudes coherent_state(cplx z, const FockCutoff &cutoff,
                                  const Tolerances &tol = kDefaultTolerances);

/// Pure state of modes (a, b, c) as a dense amplitude tensor. Index order is
/// (n_a, n_b, n_c) with n_c fastest. Zero-norm tensors are rejected.
class MultiModeState {
  public:
    static MultiModeState product(std::span<const cplx> a, std::span<const cplx> b,
                                  std::span<const cplx> c, const FockCutoff &cutoff);
    static MultiModeState basis(int n_a, int n_b, int n_c, const FockCutoff &cutoff);
    static MultiModeState from_amplitudes(std::vector<cplx> amplitudes,
                                          const FockCutoff &cutoff);

    const FockCutoff &cutoff() const { return cutoff_; }
    int dim() const { return cutoff_.dim(); }
    std::span<const cplx> amplitudes() const { return amplitudes_; }

    std::size_t index(int n_a, int n_b, int n_c) const {
        const auto d = static_cast<std::size_t>(dim());
        return (static_cast<std::size_t>(n_a) * d + static_cast<std::size_t>(n_b)) * d +
               static_cast<std::size_t>(n_c);
    }
    cplx operator()(int n_a, int n_b, int n_c) const { return amplitudes_[index(n_a, n_b, n_c)]; }

    double norm_squared() const;
    MultiModeState normalized() const;

    /// Photon-number distribution of one mode (normalized by the state norm).
    std::vector<double> populations(Mode m) const;
    double mean_photon_number(Mode m) const;

    friend MultiModeState operator+(const MultiModeState &x, const MultiModeState &y);
    friend MultiModeState operator*(cplx s, const MultiModeState &x);

  private:
    MultiModeState(std::vector<cplx> amplitudes, const FockCutoff &cutoff);

    FockCutoff cutoff_;
    std::vector<cplx> amplitudes_;
};

struct RaisedState {
    MultiModeState state;  // deliberately left unnormalized
    double norm_squared;
};

/// a^dagger on one mode. Weight pushed above n_max must stay below `tol.tail`
/// (relative to the input norm), otherwise TruncationError.
RaisedState apply_creation(const MultiModeState &state, Mode m,
                           const Tolerances &tol = kDefaultTolerances);

/// exp{i angle (i^dag j + j^dag i)}, exponentiated exactly on every
/// fixed-total-photon block of the (i, j) pair.
MultiModeState apply_two_mode_mixer(const MultiModeState &state, Mode i, Mode j, double angle,
                                    const Tolerances &tol = kDefaultTolerances);

/// exp{i theta n} on one mode.
MultiModeState apply_phase(const MultiModeState &state, Mode m, double theta);

/// <x|y>, conjugate-linear in x.
cplx inner_product(const MultiModeState &x, const MultiModeState &y);

/// Single-mode density matrix in the number basis.
class DensityMatrix {
  public:
    explicit DensityMatrix(Eigen::MatrixXcd entries);

    const Eigen::MatrixXcd &matrix() const { return entries_; }
    int dim() const { return static_cast<int>(entries_.rows()); }
    cplx operator()(int i, int j) const { return entries_(i, j); }

    double trace() const;
    /// max |rho_ij - conj(rho_ji)|
    double hermiticity_defect() const;
    double min_eigenvalue() const;
    /// <psi|rho|psi> for a (not necessarily normalized) vector padded with zeros.
    double expectation(std::span<const cplx> psi) const;
    /// Tr[rho sigma]; equals the fidelity when one of the two is pure.
    double overlap(const DensityMatrix &sigma) const;

  private:
    Eigen::MatrixXcd entries_;
};

struct Conditioning {
    double probability;
    DensityMatrix state;  // conditional state of mode a, unit trace
    bool reliable;        // false when probability < tol.probability_floor
};

/// Post-selects diagonal measurement operators on modes b and c and returns the
/// event probability together with the conditional state of mode a.
Conditioning conditioned_reduction(const MultiModeState &state, std::span<const double> weights_b,
                                   std::span<const double> weights_c,
                                   const Tolerances &tol = kDefaultTolerances);

}  // namespace condq::fock
