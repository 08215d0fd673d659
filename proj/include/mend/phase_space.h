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

#ifndef MEND_PHASE_SPACE_H
#define MEND_PHASE_SPACE_H

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

namespace mend {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr std::size_t kDefaultGridSize = 4096;

/// Maps any angle onto [0, 2pi).
double wrap_phase(double phi);

/// Vendor state family sin(a)cos(b)|0..0> + sin(a)sin(b)|1..1> + cos(a)|2..2>.
///
/// Valid parameters satisfy arctan(csc beta) <= alpha <= pi/2 and
/// 0 <= beta <= pi/4, which orders the amplitudes non-increasingly.
struct TwoParamQutrit {
    double alpha = kPi / 2;
    double beta = kPi / 4;

    /// Builds the parameters from cos^2(alpha) directly (e.g. 4/15).
    static TwoParamQutrit from_cos2_alpha(double cos2_alpha, double beta);

    /// Throws DomainError when alpha or beta leaves the valid region.
    void validate() const;

    /// (sin a cos b, sin a sin b, cos a).
    std::array<double, 3> amplitudes() const;
};

/// GHZ-class state sum_l amps[l] e^{i l phase} |l>^{(x)N}, tracked only through the
/// per-level amplitudes and the collective phase phi = N theta.
class GhzPhaseState {
  public:
    GhzPhaseState(std::vector<double> amps, int parties, double phase = 0.0);

    static GhzPhaseState ghz(int dim, int parties, double phase = 0.0);

    int dim() const { return static_cast<int>(amps_.size()); }
    int parties() const { return parties_; }
    std::span<const double> amps() const { return amps_; }
    double phase() const { return phase_; }

    GhzPhaseState with_phase(double phase) const;

  private:
    std::vector<double> amps_;
    int parties_;
    double phase_;
};

/// Vendor qutrit for the two-parameter family, collective phase 0.
GhzPhaseState make_vendor_qutrit(const TwoParamQutrit& params, int parties = 2);

/// Two-level failure-branch state a|0..0> + sqrt(1-a^2) e^{i phase}|1..1>.
class FailureBranchState {
  public:
    FailureBranchState(double a, double phase);

    double a() const { return a_; }
    double phase() const { return phase_; }

  private:
    double a_;
    double phase_;
};

/// Trigonometric tables for a uniform periodic grid; shared between all
/// distributions of the same size.
struct PhaseGrid {
    static constexpr int kTabulatedOrders = 3;

    explicit PhaseGrid(std::size_t size);

    std::size_t size;
    std::vector<double> angle;
    // cos_table[n-1][g] = cos(n * angle[g]), n = 1..kTabulatedOrders.
    std::array<std::vector<double>, kTabulatedOrders> cos_table;
    std::array<std::vector<double>, kTabulatedOrders> sin_table;

    /// Cached instance for the given size; size must be a power of two >= 256.
    static std::shared_ptr<const PhaseGrid> get(std::size_t size);
};

/// Discretized probability distribution over the collective phase phi on the
/// uniform grid phi_g = 2 pi g / G. Weights are non-negative and sum to one.
class PhaseDistribution {
  public:
    static PhaseDistribution flat(std::size_t grid_size = kDefaultGridSize);
    /// All mass on the grid point closest to phi.
    static PhaseDistribution point_mass(std::size_t grid_size, double phi);
    /// Normalizes the given non-negative weights; throws DomainError on negative,
    /// non-finite or all-zero input.
    static PhaseDistribution from_weights(std::vector<double> weights);

    std::size_t size() const { return weights_.size(); }
    double angle(std::size_t g) const { return grid_->angle[g]; }
    std::span<const double> weights() const { return weights_; }
    const PhaseGrid& grid() const { return *grid_; }

    /// Replaces weights by weights * factors, renormalized. Returns the
    /// normalization sum (the evidence) before renormalizing.
    double multiply_and_normalize(std::span<const double> factors);

  private:
    PhaseDistribution(std::shared_ptr<const PhaseGrid> grid, std::vector<double> weights);

    std::shared_ptr<const PhaseGrid> grid_;
    std::vector<double> weights_;
};

/// Square complex Hermitian matrix in the basis {|l>^{(x)N}}.
class EffectiveDensityMatrix {
  public:
    explicit EffectiveDensityMatrix(int dim);

    /// Pure projector onto sum_l amps[l] e^{i l phase}|l>.
    static EffectiveDensityMatrix pure(std::span<const double> amps, double phase = 0.0);
    static EffectiveDensityMatrix ghz(int dim);

    int dim() const { return dim_; }
    Complex& operator()(int row, int col) { return entries_[row * dim_ + col]; }
    const Complex& operator()(int row, int col) const { return entries_[row * dim_ + col]; }

    Complex trace() const;
    bool is_hermitian(double tol = 1e-12) const;

  private:
    int dim_;
    std::vector<Complex> entries_;
};

EffectiveDensityMatrix operator-(const EffectiveDensityMatrix& lhs, const EffectiveDensityMatrix& rhs);

/// Sum_g w_g e^{i order phi_g}.
Complex circular_moment(const PhaseDistribution& p, int order);

/// Moments of orders 0..max_order in one pass over the grid.
std::vector<Complex> circular_moments(const PhaseDistribution& p, int max_order);

/// Success-branch GHZ_d state averaged over p and counter-rotated by the estimate:
/// rho_jl = (1/d) e^{-i estimate (j-l)} M_{j-l}.
EffectiveDensityMatrix corrected_state(const PhaseDistribution& p, double estimate, int dim);

/// Same as above from precomputed moments M_0..M_{d-1}.
EffectiveDensityMatrix corrected_state_from_moments(std::span<const Complex> moments, double estimate, int dim);

/// Eigenvalues (ascending) of a Hermitian matrix by cyclic complex Jacobi rotations.
std::vector<double> hermitian_eigenvalues(const EffectiveDensityMatrix& m, double off_diagonal_tol = 1e-13);

/// 1/2 sum |eig(rho - sigma)|. Throws DomainError on dimension mismatch.
double trace_distance(const EffectiveDensityMatrix& rho, const EffectiveDensityMatrix& sigma);

/// Distance of the corrected state (given its moments and estimate) to GHZ_d.
double distance_to_ghz(std::span<const Complex> moments, double estimate, int dim);

}  // namespace mend

#endif  // MEND_PHASE_SPACE_H
