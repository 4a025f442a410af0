#include "sacfem/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sacfem {

double Discretization::l2_norm(std::span<const double> state) const {
    return std::sqrt(std::max(0.0, l2_inner(state, state)));
}

StateOnGrid Discretization::state_on_grid(std::span<const double> state, const DiffusionSpec& spec) const {
    StateOnGrid out;
    out.u = to_grid(state);
    if (spec.b1_scale != 0.0) {
        out.b1u = grid().evaluate(b1_coefficients(spec, sine_coefficients(state, noise_modes())));
    } else {
        out.b1u.assign(grid().points(), 0.0);
    }
    return out;
}

NoiseOnGrid Discretization::noise_grid(std::span<const double> w_coeffs, const DiffusionSpec& spec) const {
    const std::size_t modes = std::min(w_coeffs.size(), noise_modes());
    return noise_on_grid(spec, grid(), w_coeffs.first(modes));
}

std::vector<double> Discretization::diffusion_projected(std::span<const double> state,
                                                        std::span<const double> w_coeffs,
                                                        const DiffusionSpec& spec) const {
    const StateOnGrid sg = state_on_grid(state, spec);
    const NoiseOnGrid ng = noise_grid(w_coeffs, spec);
    std::vector<double> p(grid().points());
    diffusion_apply_grid(spec, sg, ng, p);
    return from_modal(project_grid(p));
}

std::vector<double> Discretization::semigroup(double t, std::span<const double> state) const {
    if (t < 0.0) {
        throw std::domain_error("Discretization::semigroup: negative time");
    }
    std::vector<double> modal = to_modal(state);
    const auto lam = eigenvalues();
    for (std::size_t k = 0; k < modal.size(); ++k) {
        modal[k] *= decay_factor(lam[k], t);
    }
    return from_modal(modal);
}

// ---------------------------------------------------------------------------

SpectralDiscretization::SpectralDiscretization(std::size_t modes)
    : Discretization(2 * (modes + 1)), modes_(modes), lambda_(modes) {
    if (modes == 0) {
        throw std::invalid_argument("SpectralDiscretization: need at least one mode");
    }
    for (std::size_t i = 0; i < modes; ++i) {
        lambda_[i] = eigenvalue(i + 1);
    }
}

std::string SpectralDiscretization::describe() const {
    return "spectral(J=" + std::to_string(modes_) + ")";
}

std::vector<double> SpectralDiscretization::to_points(std::span<const double> state) const {
    return grid().evaluate(state);
}

std::vector<double> SpectralDiscretization::from_points(std::span<const double> values) const {
    std::vector<double> c = grid().analyze(values);
    c.resize(modes_);
    return c;
}

std::vector<double> SpectralDiscretization::to_modal(std::span<const double> state) const {
    return {state.begin(), state.end()};
}

std::vector<double> SpectralDiscretization::from_modal(std::span<const double> modal) const {
    return {modal.begin(), modal.end()};
}

std::vector<double> SpectralDiscretization::to_grid(std::span<const double> state) const {
    return grid().evaluate(state);
}

std::vector<double> SpectralDiscretization::sine_coefficients(std::span<const double> state,
                                                              std::size_t modes) const {
    std::vector<double> c(modes, 0.0);
    std::copy_n(state.begin(), std::min(modes, state.size()), c.begin());
    return c;
}

std::vector<double> SpectralDiscretization::project_grid(std::span<const double> grid_values) const {
    return from_points(grid_values);
}

std::vector<double> SpectralDiscretization::semi_implicit_solve(std::span<const double> state, double tau,
                                                                std::span<const double> noise_grid) const {
    std::vector<double> pts = to_points(state);
    for (double& v : pts) {
        v = drift(v);
    }
    const std::vector<double> f = from_points(pts);
    const std::vector<double> g = project_grid(noise_grid);
    std::vector<double> out(modes_);
    for (std::size_t k = 0; k < modes_; ++k) {
        out[k] = (state[k] + tau * f[k] + g[k]) / (1.0 + tau * lambda_[k]);
    }
    return out;
}

double SpectralDiscretization::l2_inner(std::span<const double> a, std::span<const double> b) const {
    double s = 0.0;
    for (std::size_t k = 0; k < modes_; ++k) {
        s += a[k] * b[k];
    }
    return s;
}

double SpectralDiscretization::h1_seminorm(std::span<const double> state) const {
    double s = 0.0;
    for (std::size_t k = 0; k < modes_; ++k) {
        s += lambda_[k] * state[k] * state[k];
    }
    return std::sqrt(s);
}

double SpectralDiscretization::max_norm(std::span<const double> state) const {
    const std::vector<double> v = to_points(state);
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

std::vector<double> SpectralDiscretization::initial_state(const InitialData& xi) const {
    return xi.spectral(modes_).coeffs;
}

// ---------------------------------------------------------------------------

std::size_t FemDiscretization::grid_intervals(const FemSpace& space, std::size_t noise_modes) {
    const std::size_t elements = space.elements();
    const std::size_t wanted = 2 * (noise_modes + 1);
    const std::size_t per_element = std::max<std::size_t>(1, (wanted + elements - 1) / elements);
    return std::max<std::size_t>(2, per_element * elements);
}

FemDiscretization::FemDiscretization(FemSpacePtr space, std::size_t noise_modes)
    : Discretization(grid_intervals(*space, noise_modes)), space_(std::move(space)), noise_modes_(noise_modes) {
    if (noise_modes == 0) {
        throw std::invalid_argument("FemDiscretization: need at least one noise mode");
    }
}

std::string FemDiscretization::describe() const {
    return "fem(h=1/" + std::to_string(space_->elements()) + ", J=" + std::to_string(noise_modes_) + ")";
}

std::vector<double> FemDiscretization::to_points(std::span<const double> state) const {
    return {state.begin(), state.end()};
}

std::vector<double> FemDiscretization::from_points(std::span<const double> values) const {
    return {values.begin(), values.end()};
}

std::vector<double> FemDiscretization::to_modal(std::span<const double> state) const {
    return space_->to_modal(state);
}

std::vector<double> FemDiscretization::from_modal(std::span<const double> modal) const {
    return space_->from_modal(modal);
}

std::vector<double> FemDiscretization::to_grid(std::span<const double> state) const {
    std::vector<double> v(grid().points());
    space_->to_grid(state, grid(), v);
    return v;
}

std::vector<double> FemDiscretization::sine_coefficients(std::span<const double> state, std::size_t modes) const {
    return space_->sine_coefficients(state, modes);
}

std::vector<double> FemDiscretization::project_grid(std::span<const double> grid_values) const {
    return space_->project_modal(grid().analyze(grid_values));
}

std::vector<double> FemDiscretization::semi_implicit_solve(std::span<const double> state, double tau,
                                                           std::span<const double> noise_grid) const {
    const std::size_t n = space_->n_interior();
    std::vector<double> explicit_part(n);
    for (std::size_t j = 0; j < n; ++j) {
        explicit_part[j] = state[j] + tau * drift(state[j]);
    }
    std::vector<double> rhs = space_->mass().apply(explicit_part);
    const std::vector<double> load = space_->load_vector(grid().analyze(noise_grid));
    for (std::size_t j = 0; j < n; ++j) {
        rhs[j] += load[j];
    }
    Tridiagonal system = space_->mass();
    for (std::size_t j = 0; j < n; ++j) {
        system.diag[j] += tau * space_->stiffness().diag[j];
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
        system.off[j] += tau * space_->stiffness().off[j];
    }
    return system.solve(rhs);
}

double FemDiscretization::l2_inner(std::span<const double> a, std::span<const double> b) const {
    return space_->l2_inner(a, b);
}

double FemDiscretization::h1_seminorm(std::span<const double> state) const {
    return space_->h1_seminorm(state);
}

double FemDiscretization::max_norm(std::span<const double> state) const {
    double m = 0.0;
    for (double x : state) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

std::vector<double> FemDiscretization::initial_state(const InitialData& xi) const {
    return xi.fem(space_).nodal;
}

}  // namespace sacfem
