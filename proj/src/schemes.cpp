#include "sacfem/schemes.hpp"

#include <cmath>
#include <stdexcept>

namespace sacfem {

std::string to_string(SchemeKind k) {
    switch (k) {
        case SchemeKind::splitting_expo_euler:
            return "splitting_expo_euler";
        case SchemeKind::semi_implicit_euler:
            return "semi_implicit_euler";
        case SchemeKind::explicit_expo_euler:
            return "explicit_expo_euler";
    }
    return "splitting_expo_euler";
}

SchemeKind scheme_kind_from_string(const std::string& s) {
    if (s == "splitting_expo_euler") {
        return SchemeKind::splitting_expo_euler;
    }
    if (s == "semi_implicit_euler") {
        return SchemeKind::semi_implicit_euler;
    }
    if (s == "explicit_expo_euler") {
        return SchemeKind::explicit_expo_euler;
    }
    throw std::invalid_argument("unknown scheme '" + s + "'");
}

namespace {

std::size_t integral_ratio(double num, double den, const char* what) {
    const double r = num / den;
    const double rounded = std::round(r);
    if (rounded < 1.0 || std::abs(r - rounded) > 1e-9 * rounded) {
        throw std::invalid_argument(std::string(what) + " is not an integer (" + std::to_string(r) + ")");
    }
    return static_cast<std::size_t>(rounded);
}

std::vector<double> modal_combine(const Discretization& space, double tau, std::span<const double> base_state,
                                  std::span<const double> extra_modal) {
    std::vector<double> modal = space.to_modal(base_state);
    const auto lam = space.eigenvalues();
    for (std::size_t k = 0; k < modal.size(); ++k) {
        modal[k] = decay_factor(lam[k], tau) * (modal[k] + extra_modal[k]);
    }
    return space.from_modal(modal);
}

std::vector<double> projected_diffusion_modal(const Discretization& space, std::span<const double> state,
                                              std::span<const double> dw, const DiffusionSpec& spec) {
    const StateOnGrid sg = space.state_on_grid(state, spec);
    const NoiseOnGrid ng = space.noise_grid(dw, spec);
    std::vector<double> p(space.grid().points());
    diffusion_apply_grid(spec, sg, ng, p);
    return space.project_grid(p);
}

}  // namespace

std::size_t SchemeConfig::steps() const {
    if (!(tau > 0.0) || !(tau < 1.0)) {
        throw std::invalid_argument("SchemeConfig: tau must lie in (0, 1)");
    }
    if (T == 0.0) {
        return 0;
    }
    if (!(T > 0.0)) {
        throw std::invalid_argument("SchemeConfig: T must be nonnegative");
    }
    return integral_ratio(T, tau, "T / tau");
}

std::size_t SchemeConfig::fine_per_step(double dt_fine) const {
    return integral_ratio(tau, dt_fine, "tau / dt_fine");
}

void SchemeConfig::validate(const NoisePath& path) const {
    if (!space) {
        throw std::invalid_argument("SchemeConfig: no discretization");
    }
    const std::size_t n = steps();
    const std::size_t r = n == 0 ? 0 : fine_per_step(path.dt_fine());
    if (n * r > path.fine_steps()) {
        throw std::invalid_argument("SchemeConfig: noise path shorter than T");
    }
    if (path.modes() < space->noise_modes()) {
        throw std::invalid_argument("SchemeConfig: noise path has fewer modes than the discretization uses");
    }
}

bool out_of_bounds(std::span<const double> values) {
    for (double v : values) {
        if (!std::isfinite(v) || std::abs(v) > kAbortThreshold) {
            return true;
        }
    }
    return false;
}

std::vector<double> splitting_step(const Discretization& space, std::span<const double> state, double tau,
                                   std::span<const double> dw, const DiffusionSpec& spec, bool drift_enabled) {
    if (state.size() != space.dim()) {
        throw std::invalid_argument("splitting_step: state dimension does not match discretization");
    }
    std::vector<double> star;
    if (drift_enabled) {
        std::vector<double> pts = space.to_points(state);
        for (double& v : pts) {
            v = splitting_flow(v, tau);
        }
        star = space.from_points(pts);
    } else {
        star.assign(state.begin(), state.end());
    }
    const std::vector<double> noise = projected_diffusion_modal(space, star, dw, spec);
    return modal_combine(space, tau, star, noise);
}

std::vector<double> splitting_step_rearranged(const Discretization& space, std::span<const double> state,
                                              double tau, std::span<const double> dw, const DiffusionSpec& spec) {
    std::vector<double> pts = space.to_points(state);
    std::vector<double> ftau(pts.size());
    std::vector<double> flowed(pts.size());
    for (std::size_t q = 0; q < pts.size(); ++q) {
        ftau[q] = f_tau(pts[q], tau);
        flowed[q] = splitting_flow(pts[q], tau);
    }
    const std::vector<double> drift_part = space.from_points(ftau);
    // G_tau(X) = G(Phi_tau(X)), evaluated on the flowed state.
    const std::vector<double> star = space.from_points(flowed);
    const std::vector<double> noise = projected_diffusion_modal(space, star, dw, spec);
    const std::vector<double> x_modal = space.to_modal(state);
    const std::vector<double> f_modal = space.to_modal(drift_part);
    const auto lam = space.eigenvalues();
    std::vector<double> out(x_modal.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double s = decay_factor(lam[k], tau);
        out[k] = s * x_modal[k] + s * f_modal[k] * tau + s * noise[k];
    }
    return space.from_modal(out);
}

std::vector<double> semi_implicit_step(const Discretization& space, std::span<const double> state, double tau,
                                       std::span<const double> dw, const DiffusionSpec& spec) {
    const StateOnGrid sg = space.state_on_grid(state, spec);
    const NoiseOnGrid ng = space.noise_grid(dw, spec);
    std::vector<double> p(space.grid().points());
    diffusion_apply_grid(spec, sg, ng, p);
    return space.semi_implicit_solve(state, tau, p);
}

std::vector<double> explicit_expo_euler_step(const Discretization& space, std::span<const double> state,
                                             double tau, std::span<const double> dw, const DiffusionSpec& spec,
                                             double auxiliary_tau) {
    const std::vector<double> pts = space.to_points(state);
    std::vector<double> drift_pts(pts.size());
    std::vector<double> diffusion_pts;
    if (auxiliary_tau > 0.0) {
        diffusion_pts.resize(pts.size());
        for (std::size_t q = 0; q < pts.size(); ++q) {
            drift_pts[q] = f_tau(pts[q], auxiliary_tau);
            diffusion_pts[q] = splitting_flow(pts[q], auxiliary_tau);
        }
    } else {
        for (std::size_t q = 0; q < pts.size(); ++q) {
            drift_pts[q] = drift(pts[q]);
        }
    }
    const std::vector<double> f = space.from_points(drift_pts);
    std::vector<double> base(state.begin(), state.end());
    for (std::size_t k = 0; k < base.size(); ++k) {
        base[k] += tau * f[k];
    }
    const std::vector<double> noise =
        auxiliary_tau > 0.0 ? projected_diffusion_modal(space, space.from_points(diffusion_pts), dw, spec)
                            : projected_diffusion_modal(space, state, dw, spec);
    return modal_combine(space, tau, base, noise);
}

SpectralField step_increment(const SchemeConfig& cfg, const NoisePath& path, std::size_t k) {
    const std::size_t r = cfg.fine_per_step(path.dt_fine());
    return path.increment(k * r, (k + 1) * r, cfg.space->noise_modes());
}

namespace {

TrajectoryState checked(TrajectoryState next, const Discretization& space) {
    if (out_of_bounds(space.to_points(next.field))) {
        next.aborted = true;
    }
    return next;
}

}  // namespace

TrajectoryState splitting_step(const TrajectoryState& state, const SchemeConfig& cfg) {
    if (state.path == nullptr) {
        throw std::invalid_argument("splitting_step: state has no noise path");
    }
    const SpectralField dw = step_increment(cfg, *state.path, state.step);
    TrajectoryState next{splitting_step(*cfg.space, state.field, cfg.tau, dw.coeffs, cfg.diffusion,
                                        cfg.drift_enabled),
                         state.step + 1, state.path, false};
    return checked(std::move(next), *cfg.space);
}

TrajectoryState semi_implicit_step(const TrajectoryState& state, const SchemeConfig& cfg) {
    if (state.path == nullptr) {
        throw std::invalid_argument("semi_implicit_step: state has no noise path");
    }
    const SpectralField dw = step_increment(cfg, *state.path, state.step);
    TrajectoryState next{semi_implicit_step(*cfg.space, state.field, cfg.tau, dw.coeffs, cfg.diffusion),
                         state.step + 1, state.path, false};
    return checked(std::move(next), *cfg.space);
}

TrajectoryState advance(const TrajectoryState& state, const SchemeConfig& cfg) {
    switch (cfg.scheme) {
        case SchemeKind::splitting_expo_euler:
            return splitting_step(state, cfg);
        case SchemeKind::semi_implicit_euler:
            return semi_implicit_step(state, cfg);
        case SchemeKind::explicit_expo_euler: {
            const SpectralField dw = step_increment(cfg, *state.path, state.step);
            TrajectoryState next{explicit_expo_euler_step(*cfg.space, state.field, cfg.tau, dw.coeffs,
                                                          cfg.diffusion, cfg.auxiliary_tau),
                                 state.step + 1, state.path, false};
            return checked(std::move(next), *cfg.space);
        }
    }
    throw std::logic_error("advance: unknown scheme");
}

TrajectoryResult run_trajectory(const SchemeConfig& cfg, const NoisePath& path, std::size_t record_every) {
    if (!cfg.space) {
        throw std::invalid_argument("SchemeConfig: no discretization");
    }
    return run_trajectory_from(cfg, path, cfg.space->initial_state(cfg.initial), record_every);
}

TrajectoryResult run_trajectory_from(const SchemeConfig& cfg, const NoisePath& path, std::vector<double> initial,
                                     std::size_t record_every) {
    cfg.validate(path);
    const std::size_t n = cfg.steps();
    const Discretization& space = *cfg.space;
    if (initial.size() != space.dim()) {
        throw std::invalid_argument("run_trajectory: initial state dimension does not match discretization");
    }
    TrajectoryState state{std::move(initial), 0, &path, false};
    TrajectoryResult result;
    auto record = [&](const TrajectoryState& s) {
        result.records.push_back(
            {s.step, space.l2_norm(s.field), space.h1_seminorm(s.field), space.max_norm(s.field)});
    };
    if (record_every > 0) {
        record(state);
    }
    while (state.step < n) {
        state = advance(state, cfg);
        if (state.aborted) {
            result.aborted = true;
            result.abort_step = state.step;
            break;
        }
        if (record_every > 0 && (state.step % record_every == 0 || state.step == n)) {
            record(state);
        }
    }
    result.final_field = std::move(state.field);
    return result;
}

}  // namespace sacfem
