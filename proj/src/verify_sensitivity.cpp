#include "sacfem/verify.hpp"

#include "sacfem/harness.hpp"
#include "sacfem/noise.hpp"
#include "sacfem/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>

namespace sacfem {

namespace {

template <typename... Args>
std::string format(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

SchemeConfig fem_config(double h, std::size_t noise_modes, double tau, double T) {
    SchemeConfig cfg;
    cfg.tau = tau;
    cfg.T = T;
    cfg.space = std::make_shared<FemDiscretization>(FemSpace::assemble(h), noise_modes);
    return cfg;
}

NoisePath path_for(const SchemeConfig& cfg, std::uint64_t seed, std::uint64_t trajectory, std::size_t modes) {
    return NoisePath(seed, trajectory, modes, cfg.tau, cfg.steps());
}

std::vector<double> nodal_sine(const SchemeConfig& cfg, std::size_t mode, double scale) {
    const auto& fem = static_cast<const FemDiscretization&>(*cfg.space);
    std::vector<double> v(fem.dim());
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = scale * std::sqrt(2.0) * std::sin(static_cast<double>(mode) * std::numbers::pi * fem.space().node(j));
    }
    return v;
}

double l2_distance(const Discretization& space, std::span<const double> a, std::span<const double> b) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = a[i] - b[i];
    }
    return space.l2_norm(d);
}

std::vector<double> axpy(std::span<const double> x, double a, std::span<const double> y) {
    std::vector<double> out(x.begin(), x.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] += a * y[i];
    }
    return out;
}

}  // namespace

std::vector<CheckResult> verify_sensitivity_suite(std::uint64_t seed, std::size_t workers) {
    std::vector<CheckResult> out;
    const std::size_t J = 63;
    const SchemeConfig cfg = fem_config(1.0 / 16.0, J, 1.0 / 50.0, 0.5);
    const Discretization& space = *cfg.space;
    const std::vector<double> xi = space.initial_state(cfg.initial);
    const std::vector<double> y = nodal_sine(cfg, 2, 0.5);
    const std::vector<double> z = nodal_sine(cfg, 3, 0.3);

    {
        // First variation against forward differences; the error is O(eps).
        bool ok = true;
        double worst_ratio_lo = 1e300, worst_ratio_hi = 0.0, err_at_small = 0.0;
        for (std::uint64_t traj = 0; traj < 3; ++traj) {
            const NoisePath path = path_for(cfg, seed, traj, J);
            const VariationRun var = run_variation(cfg, path, xi, y);
            const TrajectoryResult base = run_trajectory_from(cfg, path, xi);
            auto fd_error = [&](double eps) {
                const TrajectoryResult bumped = run_trajectory_from(cfg, path, axpy(xi, eps, y));
                std::vector<double> fd(base.final_field.size());
                for (std::size_t i = 0; i < fd.size(); ++i) {
                    fd[i] = (bumped.final_field[i] - base.final_field[i]) / eps;
                }
                return l2_distance(space, fd, var.variation.eta_y);
            };
            const double e1 = fd_error(1e-4);
            const double e2 = fd_error(5e-5);
            const double ratio = e1 / e2;
            worst_ratio_lo = std::min(worst_ratio_lo, ratio);
            worst_ratio_hi = std::max(worst_ratio_hi, ratio);
            err_at_small = std::max(err_at_small, e2 / std::max(space.l2_norm(var.variation.eta_y), 1e-300));
            ok = ok && ratio >= 1.6 && ratio <= 2.4;
        }
        out.push_back({"sensitivity", "eta matches finite differences, error halves with eps", ok,
                       format("halving ratios in [%.3f, %.3f] (tol [1.6, 2.4]), relative error at eps=5e-5 %.2e",
                              worst_ratio_lo, worst_ratio_hi, err_at_small)});
    }

    {
        // Second variation: symmetry and second differences.
        const NoisePath path = path_for(cfg, seed, 7, J);
        const VariationRun yz = run_variation(cfg, path, xi, y, z);
        const VariationRun zy = run_variation(cfg, path, xi, z, y);
        double asym = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < yz.variation.zeta.size(); ++i) {
            asym = std::max(asym, std::abs(yz.variation.zeta[i] - zy.variation.zeta[i]));
            scale = std::max(scale, std::abs(yz.variation.zeta[i]));
        }
        out.push_back({"sensitivity", "zeta^{y,z} = zeta^{z,y}", asym <= 1e-12 * std::max(scale, 1.0),
                       format("max asymmetry %.2e, max |zeta| %.3e (tol 1e-12)", asym, scale)});

        auto second_diff_error = [&](double eps) {
            const auto x00 = run_trajectory_from(cfg, path, xi).final_field;
            const auto x10 = run_trajectory_from(cfg, path, axpy(xi, eps, y)).final_field;
            const auto x01 = run_trajectory_from(cfg, path, axpy(xi, eps, z)).final_field;
            const auto x11 = run_trajectory_from(cfg, path, axpy(axpy(xi, eps, y), eps, z)).final_field;
            std::vector<double> d(x00.size());
            for (std::size_t i = 0; i < d.size(); ++i) {
                d[i] = (x11[i] - x10[i] - x01[i] + x00[i]) / (eps * eps);
            }
            return l2_distance(space, d, yz.variation.zeta);
        };
        const double e1 = second_diff_error(2e-3);
        const double e2 = second_diff_error(1e-3);
        const double ratio = e1 / e2;
        out.push_back({"sensitivity", "zeta matches second differences, error halves with eps",
                       ratio >= 1.6 && ratio <= 2.4,
                       format("errors %.3e -> %.3e, ratio %.3f (tol [1.6, 2.4]), |zeta| %.3e", e1, e2, ratio,
                              space.l2_norm(yz.variation.zeta))});
    }

    {
        // Malliavin derivative: zero before s, exactly Proj G(X(s)) u at s.
        const SchemeConfig mcfg = fem_config(1.0 / 16.0, J, 1.0 / 50.0, 1.0);
        const NoisePath path = path_for(mcfg, seed, 11, J);
        const double s = 0.5;
        std::vector<std::vector<double>> dirs;
        for (std::size_t j = 1; j <= 3; ++j) {
            dirs.push_back(SpectralField::basis(j, J).coeffs);
        }
        const MalliavinRun run = run_malliavin(mcfg, path, s, dirs);

        SchemeConfig to_s = mcfg;
        to_s.T = s;
        const TrajectoryResult xs = run_trajectory(to_s, path);
        bool exact = true;
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            const auto expected = malliavin_initial(*mcfg.space, xs.final_field, dirs[d], mcfg.diffusion);
            exact = exact && expected == run.at_s[d];
        }
        MalliavinState early = start_malliavin(s, dirs[0], mcfg);
        std::vector<double> x = mcfg.space->initial_state(mcfg.initial);
        bool zero_before = true;
        for (std::size_t k = 0; k + 1 < early.start_step; ++k) {
            const SpectralField dw = step_increment(mcfg, path, k);
            auto next = splitting_step(*mcfg.space, x, mcfg.tau, dw.coeffs, mcfg.diffusion);
            early = step_malliavin(early, k, x, next, mcfg, dw.coeffs);
            zero_before = zero_before && std::all_of(early.value.begin(), early.value.end(),
                                                     [](double v) { return v == 0.0; });
            x = std::move(next);
        }
        out.push_back({"sensitivity", "Malliavin derivative zero for t < s and exact at t = s", exact && zero_before,
                       format("bitwise match at s: %s, zero before s: %s", exact ? "yes" : "no",
                              zero_before ? "yes" : "no")});
    }

    {
        // E max_{u in phi_1..phi_8} ||A_h^0.4 D_s^u X^h(T)||^2 across h.
        const std::size_t M = 96;
        const double s = 0.5;
        std::vector<std::vector<double>> dirs;
        for (std::size_t j = 1; j <= 8; ++j) {
            dirs.push_back(SpectralField::basis(j, J).coeffs);
        }
        std::vector<double> means;
        std::string detail;
        for (double h : {1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0}) {
            const SchemeConfig mcfg = fem_config(h, J, 1.0 / 100.0, 1.0);
            const auto& fem = static_cast<const FemDiscretization&>(*mcfg.space);
            const auto mu = fem.eigenvalues();
            std::vector<double> values(M);
            parallel_for(M, workers, [&](std::size_t m) {
                const NoisePath path = path_for(mcfg, seed + 100, m, J);
                const MalliavinRun run = run_malliavin(mcfg, path, s, dirs);
                double best = 0.0;
                for (const auto& d : run.at_final) {
                    const auto e = fem.to_modal(d);
                    double n2 = 0.0;
                    for (std::size_t k = 0; k < e.size(); ++k) {
                        n2 += std::pow(mu[k], 0.8) * e[k] * e[k];
                    }
                    best = std::max(best, n2);
                }
                values[m] = best;
            });
            const SampleSummary sum = summarize(values);
            means.push_back(sum.mean);
            detail += format("h=1/%d: %.4e +- %.1e; ", static_cast<int>(std::round(1.0 / h)), sum.mean,
                             sum.halfwidth);
        }
        const double ratio = *std::max_element(means.begin(), means.end()) /
                             *std::min_element(means.begin(), means.end());
        out.push_back({"sensitivity", "E||A_h^0.4 D_s X^h(T)||^2 uniform in h (max/min <= 2)", ratio <= 2.0,
                       detail + format("max/min %.4f", ratio)});
    }

    {
        // DU linearity in y on common paths, and agreement with finite differences.
        const NoiseSource noise{seed + 200, J, cfg.tau};
        const std::size_t M = 64;
        const std::vector<double> y2 = axpy(std::vector<double>(y.size(), 0.0), 2.0, y);
        const std::vector<double> yz = axpy(y, 1.0, z);
        const Estimate a = estimate_DU(cfg, noise, y, M);
        const Estimate b = estimate_DU(cfg, noise, y2, M);
        const Estimate c = estimate_DU(cfg, noise, z, M);
        const Estimate d = estimate_DU(cfg, noise, yz, M);
        const double scale_err = std::abs(b.value - 2.0 * a.value);
        const double sum_err = std::abs(d.value - (a.value + c.value));
        const double tol = 1e-12 * std::max(1.0, std::abs(a.value) + std::abs(c.value));
        out.push_back({"sensitivity", "DU(T, xi) y linear in y on common paths", scale_err <= tol && sum_err <= tol,
                       format("DU y = %.6e, |DU(2y) - 2 DU y| = %.1e, |DU(y+z) - DU y - DU z| = %.1e", a.value,
                              scale_err, sum_err)});

        const Estimate fd = estimate_DU_finite_difference(cfg, noise, y, 1e-4, M);
        const double gap = std::abs(fd.value - a.value);
        const double allowed = 2.0 * std::hypot(fd.halfwidth, a.halfwidth) + 1e-3 * std::abs(a.value) + 1e-6;
        out.push_back({"sensitivity", "DU matches CRN finite difference of U", gap <= allowed,
                       format("DU y = %.6e, FD = %.6e, gap %.2e (allowed %.2e)", a.value, fd.value, gap, allowed)});
    }

    {
        // Integration by parts on a small Gaussian functional.
        IbpProblem p;
        p.T = 1.0;
        p.windows = 2;
        p.modes = 2;
        p.a = {0.8, -1.3};
        p.nonlinear = true;
        p.constant = 0.4;
        p.h = {{{1.0, 0.5}, {-0.7, 0.2}}, {{0.3, -1.1}, {0.9, 0.6}}};
        p.phi = {{{0.6, -0.4}, {1.2, 0.1}}, {{-0.5, 0.8}, {0.3, 0.7}}};
        const IbpResult nl = malliavin_ibp_check(p, 200000, seed + 300);
        p.nonlinear = false;
        const IbpResult lin = malliavin_ibp_check(p, 200000, seed + 301);
        out.push_back({"sensitivity", "Malliavin integration by parts within 3 SE", nl.passed && lin.passed,
                       format("sin: %.5f vs %.5f (SE %.1e); linear: %.5f vs %.5f (SE %.1e)", nl.lhs, nl.rhs,
                              nl.difference_se, lin.lhs, lin.rhs, lin.difference_se)});
    }
    return out;
}

}  // namespace sacfem
