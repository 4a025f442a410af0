#include "sacfem/model.hpp"

#include "sacfem/sine_transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sacfem {

using std::numbers::pi;

std::vector<double> drift_apply(std::span<const double> nodal) {
    std::vector<double> out(nodal.size());
    std::transform(nodal.begin(), nodal.end(), out.begin(), drift);
    return out;
}

SpectralField drift_apply(const SpectralField& u) {
    return apply_pointwise(u, drift);
}

namespace {

void require_time(double t) {
    if (!(t >= 0.0)) {
        throw std::domain_error("splitting_flow: negative time");
    }
}

void require_step(double tau) {
    if (!(tau > 0.0)) {
        throw std::domain_error("f_tau: step must be positive");
    }
}

}  // namespace

double splitting_flow(double x, double t) {
    require_time(t);
    // Phi - x = x (1 - x^2)(1 - e^{-2t}) / (sqrt(D) (1 + sqrt(D))), which stays accurate as t -> 0.
    const double one_minus_e = -std::expm1(-2.0 * t);
    const double d = 1.0 - (1.0 - x * x) * one_minus_e;
    const double sd = std::sqrt(d);
    return x + x * (1.0 - x * x) * one_minus_e / (sd * (1.0 + sd));
}

double splitting_flow_derivative(double x, double t) {
    require_time(t);
    const double e = std::exp(-2.0 * t);
    const double d = e + x * x * (1.0 - e);
    return e / (d * std::sqrt(d));
}

double splitting_flow_second_derivative(double x, double t) {
    require_time(t);
    const double e = std::exp(-2.0 * t);
    const double d = e + x * x * (1.0 - e);
    return -3.0 * e * (1.0 - e) * x / (d * d * std::sqrt(d));
}

double f_tau(double x, double tau) {
    require_step(tau);
    const double one_minus_e = -std::expm1(-2.0 * tau);
    const double d = 1.0 - (1.0 - x * x) * one_minus_e;
    const double sd = std::sqrt(d);
    return x * (1.0 - x * x) * one_minus_e / (sd * (1.0 + sd)) / tau;
}

double df_tau(double x, double tau) {
    require_step(tau);
    // (Phi' - 1) = (e^{-2t} - D^{3/2}) / D^{3/2}, numerator split to avoid cancellation.
    const double one_minus_e = -std::expm1(-2.0 * tau);
    const double d_minus_1 = -(1.0 - x * x) * one_minus_e;
    const double one_minus_d32 = -std::expm1(1.5 * std::log1p(d_minus_1));
    const double d = 1.0 + d_minus_1;
    return (one_minus_d32 - one_minus_e) / (d * std::sqrt(d)) / tau;
}

double d2f_tau(double x, double tau) {
    require_step(tau);
    return splitting_flow_second_derivative(x, tau) / tau;
}

std::vector<double> splitting_flow_apply(std::span<const double> nodal, double t) {
    std::vector<double> out(nodal.size());
    for (std::size_t j = 0; j < nodal.size(); ++j) {
        out[j] = splitting_flow(nodal[j], t);
    }
    return out;
}

std::string to_string(DiffusionVariant v) {
    switch (v) {
        case DiffusionVariant::standard:
            return "standard";
        case DiffusionVariant::linear_test:
            return "linear_test";
        case DiffusionVariant::custom:
            return "custom";
    }
    return "custom";
}

DiffusionVariant diffusion_variant_from_string(const std::string& s) {
    if (s == "standard") {
        return DiffusionVariant::standard;
    }
    if (s == "linear_test") {
        return DiffusionVariant::linear_test;
    }
    if (s == "custom") {
        return DiffusionVariant::custom;
    }
    throw std::invalid_argument("unknown diffusion variant '" + s + "'");
}

double DiffusionSpec::b1_multiplier(std::size_t j) const {
    if (j == 0) {
        throw std::invalid_argument("DiffusionSpec::b1_multiplier: mode index starts at 1");
    }
    return b1_scale * std::pow(static_cast<double>(j), b1_exponent);
}

DiffusionSpec DiffusionSpec::standard() {
    return DiffusionSpec{};
}

DiffusionSpec DiffusionSpec::linear_test() {
    DiffusionSpec s;
    s.variant = DiffusionVariant::linear_test;
    s.g_amplitude = 0.0;
    return s;
}

DiffusionSpec DiffusionSpec::zero() {
    DiffusionSpec s;
    s.variant = DiffusionVariant::custom;
    s.b0 = 0.0;
    s.b1_scale = 0.0;
    s.g_amplitude = 0.0;
    return s;
}

std::vector<double> b1_coefficients(const DiffusionSpec& spec, std::span<const double> u_coeffs) {
    std::vector<double> out(u_coeffs.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = spec.b1_multiplier(j + 1) * u_coeffs[j];
    }
    return out;
}

std::vector<double> g_smoothed_coefficients(const DiffusionSpec& spec, std::span<const double> w_coeffs) {
    const double e = spec.g_smoothing_exponent();
    std::vector<double> out(w_coeffs.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = std::pow(eigenvalue(j + 1), e) * w_coeffs[j];
    }
    return out;
}

NoiseOnGrid noise_on_grid(const DiffusionSpec& spec, const CollocationGrid& grid,
                          std::span<const double> w_coeffs) {
    NoiseOnGrid out;
    out.w = grid.evaluate(w_coeffs);
    if (spec.g_amplitude != 0.0) {
        out.smoothed = grid.evaluate(g_smoothed_coefficients(spec, w_coeffs));
    } else {
        out.smoothed.assign(grid.points(), 0.0);
    }
    return out;
}

void diffusion_apply_grid(const DiffusionSpec& spec, const StateOnGrid& state, const NoiseOnGrid& noise,
                          std::span<double> out) {
    const std::size_t n = out.size();
    if (state.u.size() != n || state.b1u.size() != n || noise.w.size() != n || noise.smoothed.size() != n) {
        throw std::invalid_argument("diffusion_apply_grid: incompatible grid sizes");
    }
    for (std::size_t q = 0; q < n; ++q) {
        out[q] = spec.b0 * noise.w[q] + state.b1u[q] * noise.w[q] +
                 spec.g_amplitude * std::sin(state.u[q]) * noise.smoothed[q];
    }
}

void diffusion_derivative_grid(const DiffusionSpec& spec, const StateOnGrid& state,
                               const StateOnGrid& direction, const NoiseOnGrid& noise,
                               std::span<double> out) {
    const std::size_t n = out.size();
    if (state.u.size() != n || direction.u.size() != n || direction.b1u.size() != n || noise.w.size() != n) {
        throw std::invalid_argument("diffusion_derivative_grid: incompatible grid sizes");
    }
    for (std::size_t q = 0; q < n; ++q) {
        out[q] = direction.b1u[q] * noise.w[q] +
                 spec.g_amplitude * std::cos(state.u[q]) * direction.u[q] * noise.smoothed[q];
    }
}

void diffusion_second_derivative_grid(const DiffusionSpec& spec, const StateOnGrid& state,
                                      std::span<const double> v1, std::span<const double> v2,
                                      const NoiseOnGrid& noise, std::span<double> out) {
    const std::size_t n = out.size();
    if (state.u.size() != n || v1.size() != n || v2.size() != n || noise.smoothed.size() != n) {
        throw std::invalid_argument("diffusion_second_derivative_grid: incompatible grid sizes");
    }
    for (std::size_t q = 0; q < n; ++q) {
        out[q] = -spec.g_amplitude * std::sin(state.u[q]) * v1[q] * v2[q] * noise.smoothed[q];
    }
}

namespace {

StateOnGrid spectral_state_on_grid(const DiffusionSpec& spec, const CollocationGrid& grid,
                                   std::span<const double> coeffs) {
    return {grid.evaluate(coeffs), grid.evaluate(b1_coefficients(spec, coeffs))};
}

std::size_t common_modes(const SpectralField& a, const SpectralField& b) {
    return std::max(a.modes(), b.modes());
}

}  // namespace

SpectralField diffusion_apply(const SpectralField& u, const SpectralField& w, const DiffusionSpec& spec) {
    const std::size_t modes = common_modes(u, w);
    const CollocationGrid grid(2 * (modes + 1));
    const StateOnGrid state = spectral_state_on_grid(spec, grid, u.coeffs);
    const NoiseOnGrid noise = noise_on_grid(spec, grid, w.coeffs);
    std::vector<double> p(grid.points());
    diffusion_apply_grid(spec, state, noise, p);
    std::vector<double> c = grid.analyze(p);
    c.resize(modes);
    return SpectralField(std::move(c));
}

SpectralField g_tau_apply(const SpectralField& u, double tau, const SpectralField& w, const DiffusionSpec& spec) {
    require_step(tau);
    const SpectralField flowed = apply_pointwise(u, [tau](double x) { return splitting_flow(x, tau); });
    return diffusion_apply(flowed, w, spec);
}

SpectralField diffusion_derivative_apply(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                                         const DiffusionSpec& spec) {
    const std::size_t modes = std::max(common_modes(u, w), v.modes());
    const CollocationGrid grid(2 * (modes + 1));
    const StateOnGrid state = spectral_state_on_grid(spec, grid, u.coeffs);
    const StateOnGrid dir = spectral_state_on_grid(spec, grid, v.coeffs);
    const NoiseOnGrid noise = noise_on_grid(spec, grid, w.coeffs);
    std::vector<double> p(grid.points());
    diffusion_derivative_grid(spec, state, dir, noise, p);
    std::vector<double> c = grid.analyze(p);
    c.resize(modes);
    return SpectralField(std::move(c));
}

double hat_function(double x) {
    return x < 0.5 ? x : 1.0 - x;
}

SpectralField initial_hat(std::size_t modes) {
    SpectralField f(modes);
    for (std::size_t j = 1; j <= modes; ++j) {
        if (j % 2 == 0) {
            continue;  // odd symmetry about x = 1/2
        }
        const double jp = static_cast<double>(j) * pi;
        const double sign = (j % 4 == 1) ? 1.0 : -1.0;
        f[j - 1] = 2.0 * std::sqrt(2.0) * sign / (jp * jp);
    }
    return f;
}

FemField initial_hat(FemSpacePtr space) {
    return interpolate(hat_function, std::move(space));
}

SpectralField InitialData::spectral(std::size_t modes) const {
    if (kind == Kind::hat) {
        return initial_hat(modes);
    }
    return resize_modes(custom, modes);
}

FemField InitialData::fem(FemSpacePtr space) const {
    if (kind == Kind::hat) {
        return initial_hat(std::move(space));
    }
    const SpectralField& f = custom;
    return interpolate([&f](double x) { return f.evaluate(x); }, std::move(space));
}

}  // namespace sacfem
