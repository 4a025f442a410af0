#pragma once

// Time integrators on a Discretization.
//
// Splitting exponential Euler (one step of length tau):
//   X*      = Phi_tau(X_k)                         pointwise
//   X_{k+1} = S(tau) X* + S(tau) Proj[G(X*) dW_k]
// with Proj the truncation (spectral) or P_h (FEM). The algebraically equal
// form S X_k + tau S F_tau(X_k) + S G_tau(X_k) dW_k is kept as a separate
// routine so the two can be compared.

#include "sacfem/discretization.hpp"
#include "sacfem/model.hpp"
#include "sacfem/noise.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sacfem {

enum class SchemeKind {
    splitting_expo_euler,
    semi_implicit_euler,
    /// S(tau)(X + tau F(X) + G(X) dW) with the unsplit F and G; with
    /// `auxiliary_tau` > 0 it uses F_aux and G_aux = G o Phi_aux instead.
    explicit_expo_euler,
};

std::string to_string(SchemeKind k);
SchemeKind scheme_kind_from_string(const std::string& s);

/// Trajectories leaving |u| <= kAbortThreshold at any point are aborted.
inline constexpr double kAbortThreshold = 1e6;

struct SchemeConfig {
    double tau = 1e-3;
    double T = 1.0;
    SchemeKind scheme = SchemeKind::splitting_expo_euler;
    DiffusionSpec diffusion = DiffusionSpec::standard();
    InitialData initial = InitialData::hat();
    DiscretizationPtr space;
    bool drift_enabled = true;
    double auxiliary_tau = 0.0;

    /// Number of steps N = T / tau; throws unless integral.
    std::size_t steps() const;
    /// Fine noise steps per scheme step; throws unless tau / dt_fine is integral.
    std::size_t fine_per_step(double dt_fine) const;
    void validate(const NoisePath& path) const;
};

struct TrajectoryState {
    std::vector<double> field;
    std::size_t step = 0;
    const NoisePath* path = nullptr;
    bool aborted = false;
};

struct NormRecord {
    std::size_t step;
    double l2;
    double h1;
    double max;
};

struct TrajectoryResult {
    std::vector<double> final_field;
    bool aborted = false;
    std::size_t abort_step = 0;
    std::vector<NormRecord> records;
};

/// One splitting step with an explicit noise increment (sine coefficients).
std::vector<double> splitting_step(const Discretization& space, std::span<const double> state, double tau,
                                   std::span<const double> dw, const DiffusionSpec& spec,
                                   bool drift_enabled = true);
/// The same step written as S X + tau S F_tau(X) + S G_tau(X) dW.
std::vector<double> splitting_step_rearranged(const Discretization& space, std::span<const double> state,
                                              double tau, std::span<const double> dw, const DiffusionSpec& spec);
/// (I + tau A) X_{k+1} = X_k + tau f(X_k) + Proj[G(X_k) dW_k].
std::vector<double> semi_implicit_step(const Discretization& space, std::span<const double> state, double tau,
                                       std::span<const double> dw, const DiffusionSpec& spec);
std::vector<double> explicit_expo_euler_step(const Discretization& space, std::span<const double> state,
                                             double tau, std::span<const double> dw, const DiffusionSpec& spec,
                                             double auxiliary_tau);

/// Noise increment for scheme step k of cfg on `path`.
SpectralField step_increment(const SchemeConfig& cfg, const NoisePath& path, std::size_t k);

/// Advances state by one step of cfg.scheme, drawing dW from state.path.
TrajectoryState splitting_step(const TrajectoryState& state, const SchemeConfig& cfg);
TrajectoryState semi_implicit_step(const TrajectoryState& state, const SchemeConfig& cfg);
TrajectoryState advance(const TrajectoryState& state, const SchemeConfig& cfg);

/// Runs N steps from cfg.initial. With record_every > 0, norms are recorded
/// at k = 0, record_every, ... and at N.
TrajectoryResult run_trajectory(const SchemeConfig& cfg, const NoisePath& path, std::size_t record_every = 0);
/// As run_trajectory, starting from an explicit state instead of cfg.initial.
TrajectoryResult run_trajectory_from(const SchemeConfig& cfg, const NoisePath& path, std::vector<double> initial,
                                     std::size_t record_every = 0);

/// True when any value is non-finite or exceeds kAbortThreshold in magnitude.
bool out_of_bounds(std::span<const double> values);

}  // namespace sacfem
