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

#include "condq/fock.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>

namespace condq::fock {

namespace {

std::array<std::size_t, 3> strides(int dim) {
    const auto d = static_cast<std::size_t>(dim);
    return {d * d, d, 1};
}

std::size_t mode_index(Mode m) { return static_cast<std::size_t>(m); }

double log_poisson(double mean, int n) {
    return -mean + n * std::log(mean) - std::lgamma(n + 1.0);
}

// Eigenbasis of the real symmetric generator i^dag j + j^dag i restricted to the
// block of total photon number N, basis |m, N - m>, m = 0..N.
struct BlockBasis {
    Eigen::MatrixXd vectors;
    Eigen::VectorXd values;
};

BlockBasis build_block_basis(int total) {
    const int size = total + 1;
    Eigen::MatrixXd generator = Eigen::MatrixXd::Zero(size, size);
    for (int m = 0; m < total; ++m) {
        const double element = std::sqrt(static_cast<double>(m + 1) * (total - m));
        generator(m + 1, m) = element;
        generator(m, m + 1) = element;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(generator);
    return {solver.eigenvectors(), solver.eigenvalues()};
}

std::vector<const BlockBasis *> block_bases(int max_total) {
    static std::mutex mutex;
    static std::vector<std::unique_ptr<BlockBasis>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    if (static_cast<int>(cache.size()) <= max_total) cache.resize(max_total + 1);
    std::vector<const BlockBasis *> out(max_total + 1);
    for (int n = 0; n <= max_total; ++n) {
        if (!cache[n]) cache[n] = std::make_unique<BlockBasis>(build_block_basis(n));
        out[n] = cache[n].get();
    }
    return out;
}

void require_same_shape(const MultiModeState &x, const MultiModeState &y) {
    if (!(x.cutoff() == y.cutoff())) {
        throw std::invalid_argument("states have different cutoffs (" +
                                    std::to_string(x.cutoff().n_max()) + " vs " +
                                    std::to_string(y.cutoff().n_max()) + ")");
    }
}

}  // namespace

std::string_view mode_name(Mode m) {
    switch (m) {
    case Mode::a: return "a";
    case Mode::b: return "b";
    case Mode::c: return "c";
    }
    return "?";
}

FockCutoff::FockCutoff(int n_max) : n_max_(n_max) {
    if (n_max < 1) throw std::invalid_argument("Fock cutoff must be at least 1, got " + std::to_string(n_max));
}

double coherent_tail_weight(double abs_z, const FockCutoff &cutoff) {
    const double mean = abs_z * abs_z;
    if (mean == 0.0) return 0.0;
    double tail = 0.0;
    for (int n = cutoff.n_max() + 1;; ++n) {
        const double term = std::exp(log_poisson(mean, n));
        tail += term;
        if (n > mean && term <= tail * 1e-17) break;
        if (n > cutoff.n_max() + 100000) break;
    }
    return tail;
}

FockCutoff required_cutoff(double abs_z, double tail_tolerance, int headroom) {
    int n = 1;
    while (coherent_tail_weight(abs_z, FockCutoff(n)) >= tail_tolerance) ++n;
    return FockCutoff(n + headroom);
}

CoherentAmplitudes coherent_state(cplx z, const FockCutoff &cutoff, const Tolerances &tol) {
    const double tail = coherent_tail_weight(std::abs(z), cutoff);
    if (tail >= tol.tail) {
        const int needed = required_cutoff(std::abs(z), tol.tail).n_max();
        throw TruncationError("coherent amplitude |z|=" + std::to_string(std::abs(z)) +
                                  " loses weight " + std::to_string(tail) + " above n_max=" +
                                  std::to_string(cutoff.n_max()) + "; need n_max >= " +
                                  std::to_string(needed),
                              needed);
    }
    std::vector<cplx> amps(cutoff.dim());
    amps[0] = std::exp(-0.5 * std::norm(z));
    for (int n = 1; n < cutoff.dim(); ++n) amps[n] = amps[n - 1] * z / std::sqrt(static_cast<double>(n));

    double norm2 = 0.0;
    for (const auto &c : amps) norm2 += std::norm(c);
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto &c : amps) c *= scale;
    return {std::move(amps), 1.0 - norm2};
}

// --- MultiModeState ---------------------------------------------------------

MultiModeState::MultiModeState(std::vector<cplx> amplitudes, const FockCutoff &cutoff)
    : cutoff_(cutoff), amplitudes_(std::move(amplitudes)) {}

MultiModeState MultiModeState::from_amplitudes(std::vector<cplx> amplitudes, const FockCutoff &cutoff) {
    const auto d = static_cast<std::size_t>(cutoff.dim());
    if (amplitudes.size() != d * d * d) {
        throw std::invalid_argument("amplitude tensor has " + std::to_string(amplitudes.size()) +
                                    " entries, expected " + std::to_string(d * d * d));
    }
    MultiModeState s(std::move(amplitudes), cutoff);
    if (!(s.norm_squared() > 0.0)) throw std::invalid_argument("zero-norm state");
    return s;
}

MultiModeState MultiModeState::product(std::span<const cplx> a, std::span<const cplx> b,
                                       std::span<const cplx> c, const FockCutoff &cutoff) {
    const auto d = static_cast<std::size_t>(cutoff.dim());
    if (a.size() != d || b.size() != d || c.size() != d) {
        throw std::invalid_argument("single-mode vectors must have length n_max + 1");
    }
    std::vector<cplx> amps(d * d * d);
    std::size_t k = 0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t l = 0; l < d; ++l) amps[k++] = a[i] * b[j] * c[l];
    return from_amplitudes(std::move(amps), cutoff);
}

MultiModeState MultiModeState::basis(int n_a, int n_b, int n_c, const FockCutoff &cutoff) {
    const int d = cutoff.dim();
    for (int n : {n_a, n_b, n_c}) {
        if (n < 0 || n >= d) throw std::invalid_argument("basis occupation outside cutoff");
    }
    std::vector<cplx> amps(static_cast<std::size_t>(d) * d * d);
    MultiModeState s(std::move(amps), cutoff);
    s.amplitudes_[s.index(n_a, n_b, n_c)] = 1.0;
    return s;
}

double MultiModeState::norm_squared() const {
    double acc = 0.0;
    for (const auto &c : amplitudes_) acc += std::norm(c);
    return acc;
}

MultiModeState MultiModeState::normalized() const {
    return cplx(1.0 / std::sqrt(norm_squared())) * *this;
}

std::vector<double> MultiModeState::populations(Mode m) const {
    const int d = dim();
    const auto st = strides(d);
    const auto mi = mode_index(m);
    std::vector<double> pops(d, 0.0);
    for (std::size_t k = 0; k < amplitudes_.size(); ++k) {
        const auto n = (k / st[mi]) % static_cast<std::size_t>(d);
        pops[n] += std::norm(amplitudes_[k]);
    }
    const double total = norm_squared();
    for (auto &p : pops) p /= total;
    return pops;
}

double MultiModeState::mean_photon_number(Mode m) const {
    const auto pops = populations(m);
    double mean = 0.0;
    for (std::size_t n = 0; n < pops.size(); ++n) mean += static_cast<double>(n) * pops[n];
    return mean;
}

MultiModeState operator+(const MultiModeState &x, const MultiModeState &y) {
    require_same_shape(x, y);
    std::vector<cplx> amps(x.amplitudes_.size());
    for (std::size_t k = 0; k < amps.size(); ++k) amps[k] = x.amplitudes_[k] + y.amplitudes_[k];
    return MultiModeState::from_amplitudes(std::move(amps), x.cutoff_);
}

MultiModeState operator*(cplx s, const MultiModeState &x) {
    std::vector<cplx> amps(x.amplitudes_);
    for (auto &c : amps) c *= s;
    return MultiModeState(std::move(amps), x.cutoff_);
}

// --- operations -------------------------------------------------------------

RaisedState apply_creation(const MultiModeState &state, Mode m, const Tolerances &tol) {
    const int d = state.dim();
    const int n_max = state.cutoff().n_max();
    const auto st = strides(d);
    const auto mi = mode_index(m);
    const auto in = state.amplitudes();

    std::vector<cplx> out(in.size());
    double overflow = 0.0;
    for (std::size_t k = 0; k < in.size(); ++k) {
        const int n = static_cast<int>((k / st[mi]) % static_cast<std::size_t>(d));
        if (n == n_max) {
            overflow += (n_max + 1) * std::norm(in[k]);
        } else {
            out[k + st[mi]] = std::sqrt(static_cast<double>(n + 1)) * in[k];
        }
    }
    if (overflow > tol.tail * state.norm_squared()) {
        throw TruncationError("creation on mode " + std::string(mode_name(m)) +
                                  " pushes weight " + std::to_string(overflow) + " above n_max=" +
                                  std::to_string(n_max),
                              n_max + 1);
    }
    auto raised = MultiModeState::from_amplitudes(std::move(out), state.cutoff());
    const double norm2 = raised.norm_squared();
    return {std::move(raised), norm2};
}

MultiModeState apply_two_mode_mixer(const MultiModeState &state, Mode i, Mode j, double angle,
                                    const Tolerances &tol) {
    if (i == j) throw std::invalid_argument("mixer needs two distinct modes");
    const int d = state.dim();
    const int n_max = state.cutoff().n_max();
    const auto st = strides(d);
    const auto si = st[mode_index(i)];
    const auto sj = st[mode_index(j)];
    const Mode spectator = static_cast<Mode>(3 - static_cast<int>(i) - static_cast<int>(j));
    const auto sk = st[mode_index(spectator)];

    const auto bases = block_bases(2 * n_max);
    const auto in = state.amplitudes();
    std::vector<cplx> out(in.size());
    std::vector<cplx> rotated;
    double lost = 0.0;

    for (int s = 0; s < d; ++s) {
        const std::size_t base = static_cast<std::size_t>(s) * sk;
        for (int total = 0; total <= 2 * n_max; ++total) {
            const BlockBasis &block = *bases[total];
            const int lo = std::max(0, total - n_max);
            const int hi = std::min(total, n_max);
            auto at = [&](int m) { return base + static_cast<std::size_t>(m) * si + static_cast<std::size_t>(total - m) * sj; };

            rotated.assign(total + 1, cplx(0.0));
            for (int k = 0; k <= total; ++k) {
                cplx acc = 0.0;
                for (int m = lo; m <= hi; ++m) acc += block.vectors(m, k) * in[at(m)];
                rotated[k] = acc * std::polar(1.0, angle * block.values(k));
            }
            for (int m = 0; m <= total; ++m) {
                cplx acc = 0.0;
                for (int k = 0; k <= total; ++k) acc += block.vectors(m, k) * rotated[k];
                if (m >= lo && m <= hi) {
                    out[at(m)] = acc;
                } else {
                    lost += std::norm(acc);
                }
            }
        }
    }
    if (lost > tol.tail * state.norm_squared()) {
        throw TruncationError("mixer moves weight " + std::to_string(lost) + " above n_max=" +
                                  std::to_string(n_max),
                              n_max + 1);
    }
    return MultiModeState::from_amplitudes(std::move(out), state.cutoff());
}

MultiModeState apply_phase(const MultiModeState &state, Mode m, double theta) {
    const int d = state.dim();
    const auto st = strides(d);
    const auto mi = mode_index(m);
    std::vector<cplx> factors(d);
    for (int n = 0; n < d; ++n) factors[n] = std::polar(1.0, n * theta);

    const auto in = state.amplitudes();
    std::vector<cplx> out(in.size());
    for (std::size_t k = 0; k < in.size(); ++k) {
        out[k] = in[k] * factors[(k / st[mi]) % static_cast<std::size_t>(d)];
    }
    return MultiModeState::from_amplitudes(std::move(out), state.cutoff());
}

cplx inner_product(const MultiModeState &x, const MultiModeState &y) {
    require_same_shape(x, y);
    const auto xa = x.amplitudes();
    const auto ya = y.amplitudes();
    cplx acc = 0.0;
    for (std::size_t k = 0; k < xa.size(); ++k) acc += std::conj(xa[k]) * ya[k];
    return acc;
}

// --- DensityMatrix ----------------------------------------------------------

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
        throw std::invalid_argument("density matrix must be square and non-empty");
    }
}

double DensityMatrix::trace() const { return entries_.trace().real(); }

double DensityMatrix::hermiticity_defect() const {
    return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    const Eigen::MatrixXcd herm = 0.5 * (entries_ + entries_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double DensityMatrix::expectation(std::span<const cplx> psi) const {
    if (static_cast<int>(psi.size()) > dim()) throw std::invalid_argument("vector longer than density matrix");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim());
    for (std::size_t n = 0; n < psi.size(); ++n) v(static_cast<Eigen::Index>(n)) = psi[n];
    return (v.adjoint() * entries_ * v)(0, 0).real();
}

double DensityMatrix::overlap(const DensityMatrix &sigma) const {
    if (sigma.dim() != dim()) throw std::invalid_argument("density matrices differ in dimension");
    return (entries_ * sigma.entries_).trace().real();
}

// --- conditioning -----------------------------------------------------------

Conditioning conditioned_reduction(const MultiModeState &state, std::span<const double> weights_b,
                                   std::span<const double> weights_c, const Tolerances &tol) {
    const int d = state.dim();
    if (static_cast<int>(weights_b.size()) != d || static_cast<int>(weights_c.size()) != d) {
        throw std::invalid_argument("measurement weights must have length n_max + 1");
    }
    for (auto w : {weights_b, weights_c}) {
        for (double x : w) {
            if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("measurement weight outside [0, 1]");
        }
    }

    const auto amps = state.amplitudes();
    const double inv_norm2 = 1.0 / state.norm_squared();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (int nb = 0; nb < d; ++nb) {
        for (int nc = 0; nc < d; ++nc) {
            const double w = weights_b[nb] * weights_c[nc];
            if (w == 0.0) continue;
            for (int i = 0; i < d; ++i) {
                const cplx ai = amps[state.index(i, nb, nc)];
                if (ai == 0.0) continue;
                for (int j = 0; j < d; ++j) rho(i, j) += w * ai * std::conj(amps[state.index(j, nb, nc)]);
            }
        }
    }
    rho *= inv_norm2;
    const double probability = rho.trace().real();
    const bool reliable = probability >= tol.probability_floor;
    if (probability > 0.0) rho /= probability;
    return {probability, DensityMatrix(std::move(rho)), reliable};
}

}  // namespace condq::fock
