#pragma once

// Coefficients of the stochastic Allen-Cahn equation
//   dX + AX dt = F(X) dt + G(X) dW,   F(u) = u - u^3 (pointwise),
// the exact flow Phi_t of u' = u - u^3 used by the splitting step, and the
// diffusion G(u) = B0 + B1 u + g(u).
//
// G(u) acts on a noise direction w as
//   G(u) w = b0 w + (B1 u) w + g_amp sin(u) (A^-(1/4 + delta/2) w),
// where B1 u is formed spectrally (mode j scaled by b1_scale * j^b1_exponent)
// and the products are pointwise on a collocation grid.

#include "sacfem/fem.hpp"
#include "sacfem/spectral.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sacfem {

class CollocationGrid;

// ---------------------------------------------------------------------------
// Drift

inline double drift(double u) { return u - u * u * u; }
inline double drift_derivative(double u) { return 1.0 - 3.0 * u * u; }

/// Nodal application of f.
std::vector<double> drift_apply(std::span<const double> nodal);
/// Collocation application on a sine series (grid of 2(J+1) intervals).
SpectralField drift_apply(const SpectralField& u);

// ---------------------------------------------------------------------------
// Exact flow of u' = u - u^3 and the derived maps F_tau, DF_tau, D2F_tau

/// Phi_t(x) = x / sqrt(x^2 + (1 - x^2) e^{-2t}); throws for t < 0.
double splitting_flow(double x, double t);
/// d Phi_t / dx = e^{-2t} D^{-3/2} with D = x^2 + (1 - x^2) e^{-2t}.
double splitting_flow_derivative(double x, double t);
/// d^2 Phi_t / dx^2 = -3 e^{-2t} (1 - e^{-2t}) x D^{-5/2}.
double splitting_flow_second_derivative(double x, double t);

/// F_tau(x) = (Phi_tau(x) - x) / tau; throws for tau <= 0.
double f_tau(double x, double tau);
double df_tau(double x, double tau);
double d2f_tau(double x, double tau);

/// Nodal application of Phi_t.
std::vector<double> splitting_flow_apply(std::span<const double> nodal, double t);

// ---------------------------------------------------------------------------
// Diffusion

enum class DiffusionVariant {
    standard,  // G(u) = I + B1 u + sin(u) A^{-1/4 - delta/2}, B1 phi_j = phi_j / j
    linear_test,     // G(u) = I + B1 u (affine in u, no g term)
    custom,
};

std::string to_string(DiffusionVariant v);
DiffusionVariant diffusion_variant_from_string(const std::string& s);

struct DiffusionSpec {
    DiffusionVariant variant = DiffusionVariant::standard;
    double b0 = 1.0;
    double b1_scale = 1.0;
    double b1_exponent = -1.0;
    double g_amplitude = 1.0;
    double delta = 0.001;

    /// Exponent of A applied to w inside g: -(1/4 + delta/2).
    double g_smoothing_exponent() const { return -(0.25 + 0.5 * delta); }
    /// Multiplier of mode j (>= 1) under B1.
    double b1_multiplier(std::size_t j) const;

    static DiffusionSpec standard();
    static DiffusionSpec linear_test();
    /// All terms switched off: G = 0.
    static DiffusionSpec zero();
};

/// Sine coefficients of B1 u given those of u.
std::vector<double> b1_coefficients(const DiffusionSpec& spec, std::span<const double> u_coeffs);
/// Sine coefficients of A^{-(1/4 + delta/2)} w.
std::vector<double> g_smoothed_coefficients(const DiffusionSpec& spec, std::span<const double> w_coeffs);

/// Noise direction w on a collocation grid, with its smoothed companion.
struct NoiseOnGrid {
    std::vector<double> w;
    std::vector<double> smoothed;  // A^{-(1/4 + delta/2)} w
};
NoiseOnGrid noise_on_grid(const DiffusionSpec& spec, const CollocationGrid& grid,
                          std::span<const double> w_coeffs);

/// State u on a collocation grid, with B1 u.
struct StateOnGrid {
    std::vector<double> u;
    std::vector<double> b1u;
};

/// Pointwise kernel out = G(u) w on the grid.
void diffusion_apply_grid(const DiffusionSpec& spec, const StateOnGrid& state, const NoiseOnGrid& noise,
                          std::span<double> out);
/// out = DG(u)[v] w: (B1 v) w + g_amp cos(u) v (A^.. w).
void diffusion_derivative_grid(const DiffusionSpec& spec, const StateOnGrid& state,
                               const StateOnGrid& direction, const NoiseOnGrid& noise,
                               std::span<double> out);
/// out = D^2G(u)[v1, v2] w = -g_amp sin(u) v1 v2 (A^.. w); B1 u is linear in u.
void diffusion_second_derivative_grid(const DiffusionSpec& spec, const StateOnGrid& state,
                                      std::span<const double> v1, std::span<const double> v2,
                                      const NoiseOnGrid& noise, std::span<double> out);

/// G(u) w for sine-series u and w, truncated to max(J_u, J_w) modes.
SpectralField diffusion_apply(const SpectralField& u, const SpectralField& w, const DiffusionSpec& spec);
/// G_tau(u) w = G(Phi_tau(u)) w, Phi_tau applied by collocation.
SpectralField g_tau_apply(const SpectralField& u, double tau, const SpectralField& w, const DiffusionSpec& spec);
/// DG(u)[v] w for sine series.
SpectralField diffusion_derivative_apply(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                                         const DiffusionSpec& spec);

/// Applies a scalar map pointwise to a sine series through a grid of 2(J+1)
/// intervals and truncates back to J modes.
template <typename Fn>
SpectralField apply_pointwise(const SpectralField& u, Fn&& fn);

// ---------------------------------------------------------------------------
// Initial data

/// xi(x) = x on [0, 1/2), 1 - x on [1/2, 1].
double hat_function(double x);
/// (xi, phi_j) = 2 sqrt(2) sin(j pi / 2) / (j pi)^2 for j = 1..modes.
SpectralField initial_hat(std::size_t modes);
/// Nodal interpolant of xi.
FemField initial_hat(FemSpacePtr space);

struct InitialData {
    enum class Kind { hat, custom } kind = Kind::hat;
    SpectralField custom;  // used when kind == custom

    static InitialData hat() { return {}; }
    static InitialData from_field(SpectralField f) { return {Kind::custom, std::move(f)}; }

    SpectralField spectral(std::size_t modes) const;
    FemField fem(FemSpacePtr space) const;
};

}  // namespace sacfem

#include "sacfem/sine_transform.hpp"

namespace sacfem {

template <typename Fn>
SpectralField apply_pointwise(const SpectralField& u, Fn&& fn) {
    const CollocationGrid grid(2 * (u.modes() + 1));
    std::vector<double> values = grid.evaluate(u.coeffs);
    for (double& v : values) {
        v = fn(v);
    }
    std::vector<double> c = grid.analyze(values);
    c.resize(u.modes());
    SpectralField out(std::move(c));
    out.domain_length = u.domain_length;
    return out;
}

}  // namespace sacfem
