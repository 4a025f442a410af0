#include "sacfem/sensitivity.hpp"

#include <cmath>
#include <stdexcept>

namespace sacfem {

namespace {

void check_dim(const Discretization& space, std::span<const double> v, const char* what) {
    if (v.size() != space.dim()) {
        throw std::invalid_argument(std::string(what) + ": dimension does not match discretization");
    }
}

// S(tau)(base + Proj[grid_values]) as a state vector.
std::vector<double> heat_step(const Discretization& space, double tau, std::span<const double> base,
                              std::span<const double> grid_values) {
    std::vector<double> modal = space.to_modal(base);
    const std::vector<double> noise = space.project_grid(grid_values);
    const auto lam = space.eigenvalues();
    for (std::size_t k = 0; k < modal.size(); ++k) {
        modal[k] = decay_factor(lam[k], tau) * (modal[k] + noise[k]);
    }
    return space.from_modal(modal);
}

// Pointwise data of one split step at the carrier X_k.
struct SplitLinearization {
    std::vector<double> flow_d1;  // Phi'(X_k) at the points
    std::vector<double> flow_d2;  // Phi''(X_k) at the points
    StateOnGrid star;             // X* = Phi(X_k) on the grid
};

SplitLinearization linearize(const SchemeConfig& cfg, std::span<const double> x_k, bool second) {
    const Discretization& space = *cfg.space;
    const std::vector<double> pts = space.to_points(x_k);
    SplitLinearization lin;
    lin.flow_d1.resize(pts.size());
    std::vector<double> flowed(pts.size());
    if (second) {
        lin.flow_d2.resize(pts.size());
    }
    for (std::size_t q = 0; q < pts.size(); ++q) {
        if (cfg.drift_enabled) {
            flowed[q] = splitting_flow(pts[q], cfg.tau);
            lin.flow_d1[q] = splitting_flow_derivative(pts[q], cfg.tau);
            if (second) {
                lin.flow_d2[q] = splitting_flow_second_derivative(pts[q], cfg.tau);
            }
        } else {
            flowed[q] = pts[q];
            lin.flow_d1[q] = 1.0;
            if (second) {
                lin.flow_d2[q] = 0.0;
            }
        }
    }
    lin.star = space.state_on_grid(space.from_points(flowed), cfg.diffusion);
    return lin;
}

std::vector<double> pointwise_scale(const Discretization& space, std::span<const double> factor,
                                    std::span<const double> v) {
    std::vector<double> p = space.to_points(v);
    for (std::size_t q = 0; q < p.size(); ++q) {
        p[q] *= factor[q];
    }
    return space.from_points(p);
}

// eta -> (v, S(v + Proj[DG(X*)[v] dW])).
std::vector<double> first_variation_step(const SchemeConfig& cfg, const SplitLinearization& lin,
                                         const NoiseOnGrid& noise, std::span<const double> eta,
                                         std::vector<double>* v_out) {
    const Discretization& space = *cfg.space;
    std::vector<double> v = pointwise_scale(space, lin.flow_d1, eta);
    const StateOnGrid vg = space.state_on_grid(v, cfg.diffusion);
    std::vector<double> q(space.grid().points());
    diffusion_derivative_grid(cfg.diffusion, lin.star, vg, noise, q);
    std::vector<double> out = heat_step(space, cfg.tau, v, q);
    if (v_out != nullptr) {
        *v_out = std::move(v);
    }
    return out;
}

}  // namespace

VariationState VariationState::start(std::span<const double> y) {
    VariationState s;
    s.eta_y.assign(y.begin(), y.end());
    return s;
}

VariationState VariationState::start(std::span<const double> y, std::span<const double> z) {
    if (y.size() != z.size()) {
        throw std::invalid_argument("VariationState: directions differ in dimension");
    }
    VariationState s;
    s.eta_y.assign(y.begin(), y.end());
    s.eta_z.assign(z.begin(), z.end());
    s.zeta.assign(y.size(), 0.0);
    return s;
}

VariationState step_first_variation(const VariationState& state, std::span<const double> x_k,
                                    const SchemeConfig& cfg, std::span<const double> dw) {
    const Discretization& space = *cfg.space;
    check_dim(space, x_k, "step_first_variation");
    check_dim(space, state.eta_y, "step_first_variation");
    const SplitLinearization lin = linearize(cfg, x_k, false);
    const NoiseOnGrid noise = space.noise_grid(dw, cfg.diffusion);
    VariationState next;
    next.eta_y = first_variation_step(cfg, lin, noise, state.eta_y, nullptr);
    if (!state.eta_z.empty()) {
        next.eta_z = first_variation_step(cfg, lin, noise, state.eta_z, nullptr);
    }
    return next;
}

VariationState step_second_variation(const VariationState& state, std::span<const double> x_k,
                                     const SchemeConfig& cfg, std::span<const double> dw) {
    const Discretization& space = *cfg.space;
    if (!state.has_second()) {
        throw std::invalid_argument("step_second_variation: state carries no second variation");
    }
    check_dim(space, x_k, "step_second_variation");
    check_dim(space, state.eta_y, "step_second_variation");
    check_dim(space, state.eta_z, "step_second_variation");
    check_dim(space, state.zeta, "step_second_variation");
    const SplitLinearization lin = linearize(cfg, x_k, true);
    const NoiseOnGrid noise = space.noise_grid(dw, cfg.diffusion);

    VariationState next;
    std::vector<double> vy, vz;
    next.eta_y = first_variation_step(cfg, lin, noise, state.eta_y, &vy);
    next.eta_z = first_variation_step(cfg, lin, noise, state.eta_z, &vz);

    const std::vector<double> py = space.to_points(state.eta_y);
    const std::vector<double> pz = space.to_points(state.eta_z);
    std::vector<double> pzeta = space.to_points(state.zeta);
    for (std::size_t q = 0; q < pzeta.size(); ++q) {
        pzeta[q] = lin.flow_d1[q] * pzeta[q] + lin.flow_d2[q] * py[q] * pz[q];
    }
    const std::vector<double> zstar = space.from_points(pzeta);

    const StateOnGrid zg = space.state_on_grid(zstar, cfg.diffusion);
    std::vector<double> q(space.grid().points());
    diffusion_derivative_grid(cfg.diffusion, lin.star, zg, noise, q);
    const std::vector<double> vy_grid = space.to_grid(vy);
    const std::vector<double> vz_grid = space.to_grid(vz);
    std::vector<double> q2(q.size());
    diffusion_second_derivative_grid(cfg.diffusion, lin.star, vy_grid, vz_grid, noise, q2);
    for (std::size_t i = 0; i < q.size(); ++i) {
        q[i] += q2[i];
    }
    next.zeta = heat_step(space, cfg.tau, zstar, q);
    return next;
}

// ---------------------------------------------------------------------------

std::vector<double> malliavin_initial(const Discretization& space, std::span<const double> x_s,
                                      std::span<const double> u, const DiffusionSpec& spec) {
    check_dim(space, x_s, "malliavin_initial");
    return space.diffusion_projected(x_s, u, spec);
}

MalliavinState start_malliavin(double s, std::span<const double> u, const SchemeConfig& cfg) {
    if (!cfg.space) {
        throw std::invalid_argument("start_malliavin: no discretization");
    }
    const std::size_t n = cfg.steps();
    const double k = s / cfg.tau;
    const double rounded = std::round(k);
    if (s < 0.0 || std::abs(k - rounded) > 1e-9 * std::max(1.0, rounded) || rounded > static_cast<double>(n)) {
        throw std::invalid_argument("start_malliavin: s is not on the time grid");
    }
    MalliavinState state;
    state.s = s;
    state.start_step = static_cast<std::size_t>(rounded);
    state.direction.assign(u.begin(), u.end());
    state.value.assign(cfg.space->dim(), 0.0);
    return state;
}

MalliavinState step_malliavin(const MalliavinState& state, std::size_t k, std::span<const double> x_k,
                              std::span<const double> x_next, const SchemeConfig& cfg, std::span<const double> dw) {
    const Discretization& space = *cfg.space;
    MalliavinState next = state;
    if (k + 1 < state.start_step) {
        return next;
    }
    if (k + 1 == state.start_step) {
        next.value = malliavin_initial(space, x_next, state.direction, cfg.diffusion);
        return next;
    }
    check_dim(space, x_k, "step_malliavin");
    const std::vector<double> pts = space.to_points(x_k);
    std::vector<double> pd = space.to_points(state.value);
    for (std::size_t q = 0; q < pd.size(); ++q) {
        pd[q] = pd[q] + cfg.tau * drift_derivative(pts[q]) * pd[q];
    }
    const std::vector<double> base = space.from_points(pd);
    const StateOnGrid xg = space.state_on_grid(x_k, cfg.diffusion);
    const StateOnGrid dg = space.state_on_grid(state.value, cfg.diffusion);
    const NoiseOnGrid noise = space.noise_grid(dw, cfg.diffusion);
    std::vector<double> q(space.grid().points());
    diffusion_derivative_grid(cfg.diffusion, xg, dg, noise, q);
    next.value = heat_step(space, cfg.tau, base, q);
    return next;
}

// ---------------------------------------------------------------------------

VariationRun run_variation(const SchemeConfig& cfg, const NoisePath& path, std::span<const double> initial,
                           std::span<const double> y, std::span<const double> z) {
    cfg.validate(path);
    const Discretization& space = *cfg.space;
    check_dim(space, initial, "run_variation");
    check_dim(space, y, "run_variation");
    const bool second = !z.empty();
    VariationRun run;
    run.x.assign(initial.begin(), initial.end());
    run.variation = second ? VariationState::start(y, z) : VariationState::start(y);
    const std::size_t n = cfg.steps();
    for (std::size_t k = 0; k < n; ++k) {
        const SpectralField dw = step_increment(cfg, path, k);
        run.variation = second ? step_second_variation(run.variation, run.x, cfg, dw.coeffs)
                               : step_first_variation(run.variation, run.x, cfg, dw.coeffs);
        run.x = splitting_step(space, run.x, cfg.tau, dw.coeffs, cfg.diffusion, cfg.drift_enabled);
        if (out_of_bounds(space.to_points(run.x))) {
            run.aborted = true;
            break;
        }
    }
    return run;
}

MalliavinRun run_malliavin(const SchemeConfig& cfg, const NoisePath& path, double s,
                           std::span<const std::vector<double>> directions) {
    cfg.validate(path);
    const Discretization& space = *cfg.space;
    std::vector<MalliavinState> states;
    for (const auto& u : directions) {
        states.push_back(start_malliavin(s, u, cfg));
    }
    MalliavinRun run;
    run.x = space.initial_state(cfg.initial);
    run.at_s.resize(directions.size());
    const std::size_t n = cfg.steps();
    if (states.empty() || states.front().start_step == 0) {
        for (std::size_t i = 0; i < states.size(); ++i) {
            states[i].value = malliavin_initial(space, run.x, states[i].direction, cfg.diffusion);
            run.at_s[i] = states[i].value;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        const SpectralField dw = step_increment(cfg, path, k);
        std::vector<double> x_next = splitting_step(space, run.x, cfg.tau, dw.coeffs, cfg.diffusion,
                                                    cfg.drift_enabled);
        for (std::size_t i = 0; i < states.size(); ++i) {
            states[i] = step_malliavin(states[i], k, run.x, x_next, cfg, dw.coeffs);
            if (k + 1 == states[i].start_step) {
                run.at_s[i] = states[i].value;
            }
        }
        run.x = std::move(x_next);
        if (out_of_bounds(space.to_points(run.x))) {
            run.aborted = true;
            break;
        }
    }
    for (const auto& st : states) {
        run.at_final.push_back(st.value);
    }
    return run;
}

// ---------------------------------------------------------------------------

double observable_sin_norm(const Discretization& space, std::span<const double> x) {
    return std::sin(space.l2_norm(x));
}

double observable_sin_norm_derivative(const Discretization& space, std::span<const double> x,
                                      std::span<const double> v) {
    const double norm = space.l2_norm(x);
    if (norm == 0.0) {
        return 0.0;
    }
    return std::cos(norm) * space.l2_inner(x, v) / norm;
}

namespace {

NoisePath make_path(const SchemeConfig& cfg, const NoiseSource& noise, std::uint64_t trajectory) {
    const std::size_t fine = cfg.steps() * cfg.fine_per_step(noise.dt_fine);
    return NoisePath(noise.seed, trajectory, noise.modes, noise.dt_fine, fine);
}

}  // namespace

Estimate estimate_DU(const SchemeConfig& cfg, const NoiseSource& noise, std::span<const double> y,
                     std::size_t samples, std::uint64_t first_trajectory) {
    if (samples < 2) {
        throw std::invalid_argument("estimate_DU: need at least two samples");
    }
    const Discretization& space = *cfg.space;
    const std::vector<double> xi = space.initial_state(cfg.initial);
    std::vector<double> values(samples);
    for (std::size_t m = 0; m < samples; ++m) {
        const NoisePath path = make_path(cfg, noise, first_trajectory + m);
        const VariationRun run = run_variation(cfg, path, xi, y);
        if (run.aborted) {
            throw std::runtime_error("estimate_DU: trajectory aborted");
        }
        values[m] = observable_sin_norm_derivative(space, run.x, run.variation.eta_y);
    }
    const SampleSummary s = summarize(values);
    return {s.mean, s.halfwidth, samples};
}

Estimate estimate_DU_finite_difference(const SchemeConfig& cfg, const NoiseSource& noise, std::span<const double> y,
                                       double eps, std::size_t samples, std::uint64_t first_trajectory) {
    if (samples < 2) {
        throw std::invalid_argument("estimate_DU_finite_difference: need at least two samples");
    }
    if (!(eps > 0.0)) {
        throw std::invalid_argument("estimate_DU_finite_difference: eps must be positive");
    }
    const Discretization& space = *cfg.space;
    const std::vector<double> xi = space.initial_state(cfg.initial);
    std::vector<double> shifted = xi;
    for (std::size_t i = 0; i < shifted.size(); ++i) {
        shifted[i] += eps * y[i];
    }
    std::vector<double> values(samples);
    for (std::size_t m = 0; m < samples; ++m) {
        const NoisePath path = make_path(cfg, noise, first_trajectory + m);
        const TrajectoryResult base = run_trajectory_from(cfg, path, xi);
        const TrajectoryResult bumped = run_trajectory_from(cfg, path, shifted);
        if (base.aborted || bumped.aborted) {
            throw std::runtime_error("estimate_DU_finite_difference: trajectory aborted");
        }
        values[m] = (observable_sin_norm(space, bumped.final_field) - observable_sin_norm(space, base.final_field)) / eps;
    }
    const SampleSummary s = summarize(values);
    return {s.mean, s.halfwidth, samples};
}

// ---------------------------------------------------------------------------

IbpResult malliavin_ibp_check(const IbpProblem& p, std::size_t samples, std::uint64_t seed) {
    const std::size_t nf = p.a.size();
    if (p.h.size() != nf || p.phi.size() != p.windows || samples < 2) {
        throw std::invalid_argument("malliavin_ibp_check: inconsistent problem");
    }
    const double dt = p.T / static_cast<double>(p.windows);
    std::vector<double> lhs(samples), rhs(samples), diff(samples);
    std::vector<double> xi(nf), integral(nf);
    for (std::size_t s = 0; s < samples; ++s) {
        const NoisePath path(seed, s, p.modes, dt, p.windows);
        std::fill(xi.begin(), xi.end(), 0.0);
        std::fill(integral.begin(), integral.end(), 0.0);
        for (std::size_t w = 0; w < p.windows; ++w) {
            for (std::size_t m = 0; m < p.modes; ++m) {
                const double dW = path.fine_increment(w, m);
                for (std::size_t j = 0; j < nf; ++j) {
                    xi[j] += p.h[j][w][m] * dW;
                    integral[j] += p.phi[w][j][m] * dW;
                }
            }
        }
        double l = 0.0;
        double r = 0.0;
        for (std::size_t j = 0; j < nf; ++j) {
            const double f = p.nonlinear ? std::sin(xi[j]) : xi[j];
            const double df = p.nonlinear ? std::cos(xi[j]) : 1.0;
            l += p.a[j] * (p.constant + f) * integral[j];
            double hs = 0.0;
            for (std::size_t w = 0; w < p.windows; ++w) {
                for (std::size_t m = 0; m < p.modes; ++m) {
                    hs += p.h[j][w][m] * p.phi[w][j][m];
                }
            }
            r += p.a[j] * df * hs * dt;
        }
        lhs[s] = l;
        rhs[s] = r;
        diff[s] = l - r;
    }
    IbpResult result;
    result.lhs = summarize(lhs).mean;
    result.rhs = summarize(rhs).mean;
    const SampleSummary d = summarize(diff);
    result.difference_se = d.standard_error;
    result.passed = std::abs(d.mean) <= 3.0 * d.standard_error || d.mean == 0.0;
    return result;
}

}  // namespace sacfem
