// Copyright 2026 The mend-sim Authors
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

#include "mend/phase_space.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "mend/errors.h"

namespace mend {

namespace {

constexpr double kAmpTol = 1e-12;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

double wrap_phase(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0) {
        r += kTwoPi;
    }
    // fmod of a tiny negative number can round up to exactly 2pi.
    if (r >= kTwoPi) {
        r = 0.0;
    }
    return r;
}

TwoParamQutrit TwoParamQutrit::from_cos2_alpha(double cos2_alpha, double beta) {
    if (!(cos2_alpha >= 0.0 && cos2_alpha <= 1.0)) {
        throw DomainError("cos^2(alpha) must lie in [0, 1], got " + std::to_string(cos2_alpha));
    }
    TwoParamQutrit params{std::acos(std::sqrt(cos2_alpha)), beta};
    params.validate();
    return params;
}

void TwoParamQutrit::validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) {
        throw DomainError("alpha and beta must be finite");
    }
    if (beta < -kAmpTol || beta > kPi / 4 + kAmpTol) {
        throw DomainError("beta must lie in [0, pi/4], got " + std::to_string(beta));
    }
    if (alpha > kPi / 2 + kAmpTol) {
        throw DomainError("alpha must not exceed pi/2, got " + std::to_string(alpha));
    }
    // alpha >= arctan(csc beta) is the same as sin(a) sin(b) >= cos(a) on (0, pi/2].
    auto amps = amplitudes();
    if (amps[0] + kAmpTol < amps[1] || amps[1] + kAmpTol < amps[2] || amps[2] < -kAmpTol) {
        throw DomainError("alpha must lie in [arctan(csc beta), pi/2], got " + std::to_string(alpha));
    }
}

std::array<double, 3> TwoParamQutrit::amplitudes() const {
    return {std::sin(alpha) * std::cos(beta), std::sin(alpha) * std::sin(beta), std::cos(alpha)};
}

GhzPhaseState::GhzPhaseState(std::vector<double> amps, int parties, double phase)
    : amps_(std::move(amps)), parties_(parties), phase_(wrap_phase(phase)) {
    if (amps_.size() < 2) {
        throw DomainError("GHZ-class state needs dimension >= 2");
    }
    if (parties_ < 2) {
        throw DomainError("GHZ-class state needs at least 2 parties");
    }
    double norm = 0.0;
    for (std::size_t l = 0; l < amps_.size(); ++l) {
        if (!(amps_[l] >= 0.0)) {
            throw DomainError("amplitudes must be non-negative");
        }
        if (l > 0 && amps_[l] > amps_[l - 1] + kAmpTol) {
            throw DomainError("amplitudes must be sorted non-increasingly");
        }
        norm += amps_[l] * amps_[l];
    }
    if (std::abs(norm - 1.0) > kAmpTol) {
        throw DomainError("amplitudes must be normalized, sum of squares = " + std::to_string(norm));
    }
}

GhzPhaseState GhzPhaseState::ghz(int dim, int parties, double phase) {
    if (dim < 2) {
        throw DomainError("GHZ state needs dimension >= 2");
    }
    return GhzPhaseState(std::vector<double>(dim, 1.0 / std::sqrt(static_cast<double>(dim))), parties, phase);
}

GhzPhaseState GhzPhaseState::with_phase(double phase) const {
    GhzPhaseState copy = *this;
    copy.phase_ = wrap_phase(phase);
    return copy;
}

GhzPhaseState make_vendor_qutrit(const TwoParamQutrit& params, int parties) {
    params.validate();
    auto amps = params.amplitudes();
    // Boundary parameters can put cos(alpha) a rounding error above sin(a)sin(b).
    amps[2] = std::min(amps[2], amps[1]);
    amps[1] = std::min(amps[1], amps[0]);
    return GhzPhaseState(std::vector<double>(amps.begin(), amps.end()), parties, 0.0);
}

FailureBranchState::FailureBranchState(double a, double phase) : a_(a), phase_(wrap_phase(phase)) {
    if (!(a >= 0.0 && a <= 1.0)) {
        throw DomainError("failure amplitude a must lie in [0, 1], got " + std::to_string(a));
    }
}

PhaseGrid::PhaseGrid(std::size_t n) : size(n), angle(n) {
    for (int order = 0; order < kTabulatedOrders; ++order) {
        cos_table[order].resize(n);
        sin_table[order].resize(n);
    }
    for (std::size_t g = 0; g < n; ++g) {
        angle[g] = kTwoPi * static_cast<double>(g) / static_cast<double>(n);
        for (int order = 0; order < kTabulatedOrders; ++order) {
            // Reduce the integer product first so the tables stay exactly periodic.
            std::size_t k = (g * static_cast<std::size_t>(order + 1)) % n;
            double x = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
            cos_table[order][g] = std::cos(x);
            sin_table[order][g] = std::sin(x);
        }
    }
}

std::shared_ptr<const PhaseGrid> PhaseGrid::get(std::size_t n) {
    if (!is_power_of_two(n) || n < 256) {
        throw DomainError("grid size must be a power of two >= 256, got " + std::to_string(n));
    }
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const PhaseGrid>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_shared<const PhaseGrid>(n);
    }
    return slot;
}

PhaseDistribution::PhaseDistribution(std::shared_ptr<const PhaseGrid> grid, std::vector<double> weights)
    : grid_(std::move(grid)), weights_(std::move(weights)) {}

PhaseDistribution PhaseDistribution::flat(std::size_t grid_size) {
    auto grid = PhaseGrid::get(grid_size);
    return PhaseDistribution(std::move(grid), std::vector<double>(grid_size, 1.0 / static_cast<double>(grid_size)));
}

PhaseDistribution PhaseDistribution::point_mass(std::size_t grid_size, double phi) {
    auto grid = PhaseGrid::get(grid_size);
    std::vector<double> weights(grid_size, 0.0);
    auto g = static_cast<std::size_t>(std::llround(wrap_phase(phi) / kTwoPi * static_cast<double>(grid_size)));
    weights[g % grid_size] = 1.0;
    return PhaseDistribution(std::move(grid), std::move(weights));
}

PhaseDistribution PhaseDistribution::from_weights(std::vector<double> weights) {
    auto grid = PhaseGrid::get(weights.size());
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw DomainError("distribution weights must be finite and non-negative");
        }
        total += w;
    }
    if (!(total > 0.0)) {
        throw DomainError("distribution weights must not all vanish");
    }
    for (double& w : weights) {
        w /= total;
    }
    return PhaseDistribution(std::move(grid), std::move(weights));
}

double PhaseDistribution::multiply_and_normalize(std::span<const double> factors) {
    if (factors.size() != weights_.size()) {
        throw DomainError("likelihood size does not match the grid");
    }
    double evidence = 0.0;
    for (std::size_t g = 0; g < weights_.size(); ++g) {
        weights_[g] *= factors[g];
        evidence += weights_[g];
    }
    if (!(evidence >= 1e-300)) {
        throw ZeroEvidenceError("outcome has zero probability under the current distribution");
    }
    double inv = 1.0 / evidence;
    for (double& w : weights_) {
        w *= inv;
    }
    return evidence;
}

EffectiveDensityMatrix::EffectiveDensityMatrix(int dim) : dim_(dim), entries_(static_cast<std::size_t>(dim * dim)) {
    if (dim < 1) {
        throw DomainError("matrix dimension must be positive");
    }
}

EffectiveDensityMatrix EffectiveDensityMatrix::pure(std::span<const double> amps, double phase) {
    int d = static_cast<int>(amps.size());
    EffectiveDensityMatrix rho(d);
    for (int j = 0; j < d; ++j) {
        for (int l = 0; l < d; ++l) {
            rho(j, l) = amps[j] * amps[l] * std::polar(1.0, phase * (j - l));
        }
    }
    return rho;
}

EffectiveDensityMatrix EffectiveDensityMatrix::ghz(int dim) {
    std::vector<double> amps(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    return pure(amps);
}

Complex EffectiveDensityMatrix::trace() const {
    Complex t = 0.0;
    for (int j = 0; j < dim_; ++j) {
        t += (*this)(j, j);
    }
    return t;
}

bool EffectiveDensityMatrix::is_hermitian(double tol) const {
    for (int j = 0; j < dim_; ++j) {
        for (int l = j; l < dim_; ++l) {
            if (std::abs((*this)(j, l) - std::conj((*this)(l, j))) > tol) {
                return false;
            }
        }
    }
    return true;
}

EffectiveDensityMatrix operator-(const EffectiveDensityMatrix& lhs, const EffectiveDensityMatrix& rhs) {
    if (lhs.dim() != rhs.dim()) {
        throw DomainError("matrix dimensions differ");
    }
    EffectiveDensityMatrix out(lhs.dim());
    for (int j = 0; j < lhs.dim(); ++j) {
        for (int l = 0; l < lhs.dim(); ++l) {
            out(j, l) = lhs(j, l) - rhs(j, l);
        }
    }
    return out;
}

Complex circular_moment(const PhaseDistribution& p, int order) {
    if (order == 0) {
        return circular_moments(p, 0)[0];
    }
    if (order < 0) {
        return std::conj(circular_moment(p, -order));
    }
    return circular_moments(p, order)[order];
}

std::vector<Complex> circular_moments(const PhaseDistribution& p, int max_order) {
    std::vector<Complex> out(max_order + 1, 0.0);
    auto w = p.weights();
    const PhaseGrid& grid = p.grid();
    double total = 0.0;
    for (double x : w) {
        total += x;
    }
    out[0] = total;
    for (int n = 1; n <= max_order; ++n) {
        double re = 0.0;
        double im = 0.0;
        if (n <= PhaseGrid::kTabulatedOrders) {
            const auto& c = grid.cos_table[n - 1];
            const auto& s = grid.sin_table[n - 1];
            for (std::size_t g = 0; g < w.size(); ++g) {
                re += w[g] * c[g];
                im += w[g] * s[g];
            }
        } else {
            for (std::size_t g = 0; g < w.size(); ++g) {
                re += w[g] * std::cos(n * grid.angle[g]);
                im += w[g] * std::sin(n * grid.angle[g]);
            }
        }
        out[n] = Complex(re, im);
    }
    return out;
}

EffectiveDensityMatrix corrected_state_from_moments(std::span<const Complex> moments, double estimate, int dim) {
    if (static_cast<int>(moments.size()) < dim) {
        throw DomainError("need circular moments of orders 0..d-1");
    }
    EffectiveDensityMatrix rho(dim);
    const double inv_d = 1.0 / dim;
    for (int j = 0; j < dim; ++j) {
        rho(j, j) = inv_d;
        for (int l = j + 1; l < dim; ++l) {
            // Entry (j,l) has order j-l < 0, i.e. the conjugate moment.
            int n = l - j;
            Complex value = inv_d * std::polar(1.0, estimate * n) * std::conj(moments[n]);
            rho(j, l) = value;
            rho(l, j) = std::conj(value);
        }
    }
    return rho;
}

EffectiveDensityMatrix corrected_state(const PhaseDistribution& p, double estimate, int dim) {
    return corrected_state_from_moments(circular_moments(p, dim - 1), estimate, dim);
}

std::vector<double> hermitian_eigenvalues(const EffectiveDensityMatrix& m, double off_diagonal_tol) {
    const int n = m.dim();
    EffectiveDensityMatrix a = m;
    auto off_norm = [&]() {
        double s = 0.0;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                s += std::norm(a(p, q));
            }
        }
        return std::sqrt(2.0 * s);
    };

    for (int sweep = 0; sweep < 100 && off_norm() > off_diagonal_tol; ++sweep) {
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double r = std::abs(a(p, q));
                if (r == 0.0) {
                    continue;
                }
                // Phase rotation of basis vector q makes a(p,q) real and positive.
                Complex w = std::conj(a(p, q)) / r;
                for (int k = 0; k < n; ++k) {
                    if (k != q) {
                        a(k, q) *= w;
                        a(q, k) = std::conj(a(k, q));
                    }
                }
                a(p, q) = r;
                a(q, p) = r;

                double app = a(p, p).real();
                double aqq = a(q, q).real();
                double theta = (aqq - app) / (2.0 * r);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) {
                        continue;
                    }
                    Complex akp = a(k, p);
                    Complex akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                    a(p, k) = std::conj(a(k, p));
                    a(q, k) = std::conj(a(k, q));
                }
                a(p, p) = app - t * r;
                a(q, q) = aqq + t * r;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    std::vector<double> eig(n);
    for (int j = 0; j < n; ++j) {
        eig[j] = a(j, j).real();
    }
    std::sort(eig.begin(), eig.end());
    return eig;
}

double trace_distance(const EffectiveDensityMatrix& rho, const EffectiveDensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw DomainError("trace distance needs matrices of equal dimension");
    }
    double total = 0.0;
    for (double lambda : hermitian_eigenvalues(rho - sigma)) {
        total += std::abs(lambda);
    }
    return 0.5 * total;
}

double distance_to_ghz(std::span<const Complex> moments, double estimate, int dim) {
    return trace_distance(corrected_state_from_moments(moments, estimate, dim), EffectiveDensityMatrix::ghz(dim));
}

}  // namespace mend
