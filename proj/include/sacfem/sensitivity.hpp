#pragma once

// First and second variations of the discrete solution map with respect to
// the initial data, Malliavin derivatives of the FEM trajectory, and Monte
// Carlo estimators built on them.
//
// The variation steppers differentiate one splitting step exactly:
//   eta_{k+1}  = S(tau) (v + Proj[DG(X*)[v] dW]),           v = Phi'(X_k) eta_k
//   zeta_{k+1} = S(tau) (z* + Proj[DG(X*)[z*] dW + D2G(X*)[v_y, v_z] dW]),
//                z* = Phi'(X_k) zeta_k + Phi''(X_k) eta_y eta_z
// with X* = Phi_tau(X_k). Since Phi'(x) = 1 + tau DF_tau(x) and
// DG(X*)[Phi' eta] = DG_tau(X) eta, this is the exponential Euler step of the
// linearized equations driven by DF_tau and DG_tau.

#include "sacfem/schemes.hpp"
#include "sacfem/statistics.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sacfem {

struct VariationState {
    std::vector<double> eta_y;
    std::vector<double> eta_z;  // empty unless a second direction is carried
    std::vector<double> zeta;   // empty unless second variations are carried

    /// eta_y = y, and with z given, eta_z = z and zeta = 0.
    static VariationState start(std::span<const double> y);
    static VariationState start(std::span<const double> y, std::span<const double> z);
    bool has_second() const { return !zeta.empty(); }
};

/// One step of every first variation carried by `state`, along the carrier X_k.
VariationState step_first_variation(const VariationState& state, std::span<const double> x_k,
                                    const SchemeConfig& cfg, std::span<const double> dw);
/// One step of eta_y, eta_z and zeta together; zeta uses the pre-step etas.
VariationState step_second_variation(const VariationState& state, std::span<const double> x_k,
                                     const SchemeConfig& cfg, std::span<const double> dw);

struct MalliavinState {
    double s = 0.0;
    std::size_t start_step = 0;
    std::vector<double> direction;  // sine coefficients of u
    std::vector<double> value;      // D_s^u X(t_k); zero before start_step

    bool active(std::size_t k) const { return k >= start_step; }
};

/// Proj[G(X(s)) u], the Malliavin derivative at t = s.
std::vector<double> malliavin_initial(const Discretization& space, std::span<const double> x_s,
                                      std::span<const double> u, const DiffusionSpec& spec);

/// D_s^u X at the first grid time; throws unless s is a multiple of cfg.tau in [0, T].
MalliavinState start_malliavin(double s, std::span<const double> u, const SchemeConfig& cfg);

/// Advances D from step k to k+1 along the carrier X_k:
///   D_{k+1} = S(tau)(D_k + tau F'(X_k) D_k + Proj[DG(X_k)[D_k] dW_k]).
/// When k + 1 == start_step, `x_next` (= X_{k+1} = X(s)) initializes D.
MalliavinState step_malliavin(const MalliavinState& state, std::size_t k, std::span<const double> x_k,
                              std::span<const double> x_next, const SchemeConfig& cfg, std::span<const double> dw);

// ---------------------------------------------------------------------------
// Pathwise drivers

struct VariationRun {
    std::vector<double> x;  // X(T)
    VariationState variation;
    bool aborted = false;
};

/// Carrier from `initial` with first variations (and zeta when z is given).
VariationRun run_variation(const SchemeConfig& cfg, const NoisePath& path, std::span<const double> initial,
                           std::span<const double> y, std::span<const double> z = {});

struct MalliavinRun {
    std::vector<double> x;                       // X(T)
    std::vector<std::vector<double>> at_s;       // D_s^u X(s), per direction
    std::vector<std::vector<double>> at_final;   // D_s^u X(T), per direction
    bool aborted = false;
};

MalliavinRun run_malliavin(const SchemeConfig& cfg, const NoisePath& path, double s,
                           std::span<const std::vector<double>> directions);

// ---------------------------------------------------------------------------
// Observable phi(X) = sin(||X||) and its derivative

double observable_sin_norm(const Discretization& space, std::span<const double> x);
/// cos(||X||) (X, v) / ||X||, and 0 at X = 0.
double observable_sin_norm_derivative(const Discretization& space, std::span<const double> x,
                                      std::span<const double> v);

struct NoiseSource {
    std::uint64_t seed = 0;
    std::size_t modes = 0;
    double dt_fine = 0.0;
};

/// DU(T, xi) y = E[D phi(X(T)) eta^y(T)] over M trajectories; throws for M < 2.
Estimate estimate_DU(const SchemeConfig& cfg, const NoiseSource& noise, std::span<const double> y,
                     std::size_t samples, std::uint64_t first_trajectory = 0);
/// (U(T, xi + eps y) - U(T, xi)) / eps on common paths.
Estimate estimate_DU_finite_difference(const SchemeConfig& cfg, const NoiseSource& noise, std::span<const double> y,
                                       double eps, std::size_t samples, std::uint64_t first_trajectory = 0);

// ---------------------------------------------------------------------------
// Integration by parts for a finite-dimensional Wiener functional

/// Deterministic integrands on a uniform window grid of [0, T]:
/// h[j][w][m] is the mode-m component of h_j on window w; phi[w][j][m] is
/// the (e_j, Phi(t) phi_m) entry of the step operator Phi on window w.
/// F = sum_j a_j (c + f(xi_j)) e_j with xi_j = integral h_j dW and f the
/// identity or sin.
struct IbpProblem {
    double T = 1.0;
    std::size_t windows = 2;
    std::size_t modes = 2;
    std::vector<double> a;
    double constant = 0.0;
    bool nonlinear = false;
    std::vector<std::vector<std::vector<double>>> h;    // [j][w][m]
    std::vector<std::vector<std::vector<double>>> phi;  // [w][j][m]
};

struct IbpResult {
    double lhs = 0.0;  // E (F, integral Phi dW)
    double rhs = 0.0;  // E integral (D_t F, Phi(t))_HS dt
    double difference_se = 0.0;
    bool passed = false;
};

/// Monte Carlo over paired samples; passes when |lhs - rhs| <= 3 SE of the
/// paired difference (or both are exactly equal).
IbpResult malliavin_ibp_check(const IbpProblem& problem, std::size_t samples, std::uint64_t seed);

}  // namespace sacfem
