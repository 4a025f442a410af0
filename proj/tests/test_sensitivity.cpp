#include "sacfem/sensitivity.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>

using namespace sacfem;
using testing::pi;

namespace {

SchemeConfig fem_config(double h, std::size_t J, double tau, double T) {
    SchemeConfig c;
    c.tau = tau;
    c.T = T;
    c.space = std::make_shared<FemDiscretization>(FemSpace::assemble(h), J);
    return c;
}

std::vector<double> nodal_mode(const FemSpace& space, std::size_t k, double a) {
    std::vector<double> v(space.n_interior());
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = a * testing::sine_mode(k, space.node(j));
    }
    return v;
}

std::vector<double> combine(const std::vector<double>& a, double s, const std::vector<double>& b) {
    std::vector<double> out(a);
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] += s * b[i];
    }
    return out;
}

}  // namespace

TEST_CASE("observable sin ||X|| and its derivative") {
    const auto disc = std::make_shared<SpectralDiscretization>(4);
    const std::vector<double> phi1 = {1.0, 0.0, 0.0, 0.0};
    const std::vector<double> phi2 = {0.0, 1.0, 0.0, 0.0};
    CHECK(observable_sin_norm(*disc, phi1) == doctest::Approx(std::sin(1.0)).epsilon(1e-15));
    CHECK(observable_sin_norm_derivative(*disc, phi1, phi1) == doctest::Approx(std::cos(1.0)).epsilon(1e-15));
    CHECK(observable_sin_norm_derivative(*disc, phi1, phi2) == 0.0);
    const std::vector<double> zero(4, 0.0);
    CHECK(observable_sin_norm(*disc, zero) == 0.0);
    CHECK(observable_sin_norm_derivative(*disc, zero, phi1) == 0.0);
    // finite-difference check away from zero
    const std::vector<double> x = {0.3, -0.2, 0.5, 0.1};
    const std::vector<double> v = {0.1, 0.4, -0.3, 0.2};
    const double e = 1e-6;
    const double fd =
        (observable_sin_norm(*disc, combine(x, e, v)) - observable_sin_norm(*disc, combine(x, -e, v))) / (2 * e);
    CHECK(observable_sin_norm_derivative(*disc, x, v) == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("first variation is linear in the direction and matches finite differences") {
    const SchemeConfig cfg = fem_config(1.0 / 16.0, 15, 0.02, 0.4);
    const auto& space = static_cast<const FemDiscretization&>(*cfg.space).space();
    const NoisePath path(21, 0, 15, 0.02, 20);
    const auto xi = cfg.space->initial_state(cfg.initial);
    const auto y = nodal_mode(space, 2, 0.5);
    const auto y2 = combine(y, 1.0, y);
    const VariationRun a = run_variation(cfg, path, xi, y);
    const VariationRun b = run_variation(cfg, path, xi, y2);
    CHECK(a.x == b.x);
    for (std::size_t j = 0; j < y.size(); ++j) {
        CHECK(b.variation.eta_y[j] == 2.0 * a.variation.eta_y[j]);
    }
    const double eps = 1e-5;
    const auto plus = run_trajectory_from(cfg, path, combine(xi, eps, y)).final_field;
    const auto minus = run_trajectory_from(cfg, path, combine(xi, -eps, y)).final_field;
    for (std::size_t j = 0; j < y.size(); ++j) {
        CHECK(a.variation.eta_y[j] == doctest::Approx((plus[j] - minus[j]) / (2 * eps)).epsilon(1e-7).scale(1e-6));
    }
}

TEST_CASE("second variation is symmetric and bilinear") {
    const SchemeConfig cfg = fem_config(1.0 / 16.0, 15, 0.02, 0.4);
    const auto& space = static_cast<const FemDiscretization&>(*cfg.space).space();
    const NoisePath path(22, 3, 15, 0.02, 20);
    const auto xi = cfg.space->initial_state(cfg.initial);
    const auto y = nodal_mode(space, 2, 0.5);
    const auto z = nodal_mode(space, 3, 0.3);
    const VariationRun yz = run_variation(cfg, path, xi, y, z);
    const VariationRun zy = run_variation(cfg, path, xi, z, y);
    const VariationRun y2z = run_variation(cfg, path, xi, combine(y, 1.0, y), z);
    REQUIRE(yz.variation.has_second());
    for (std::size_t j = 0; j < y.size(); ++j) {
        CHECK(std::abs(yz.variation.zeta[j] - zy.variation.zeta[j]) <= 1e-12);
        CHECK(y2z.variation.zeta[j] == doctest::Approx(2.0 * yz.variation.zeta[j]).epsilon(1e-12).scale(1e-18));
    }
    // zeta = d/de eta^y(xi + e z)
    const double eps = 1e-4;
    const VariationRun p = run_variation(cfg, path, combine(xi, eps, z), y);
    const VariationRun m = run_variation(cfg, path, combine(xi, -eps, z), y);
    for (std::size_t j = 0; j < y.size(); ++j) {
        const double fd = (p.variation.eta_y[j] - m.variation.eta_y[j]) / (2 * eps);
        CHECK(yz.variation.zeta[j] == doctest::Approx(fd).epsilon(1e-5).scale(1e-7));
    }
}

TEST_CASE("Malliavin derivative vanishes before s and starts from Proj G(X(s)) u") {
    const SchemeConfig cfg = fem_config(1.0 / 16.0, 15, 0.02, 0.4);
    const NoisePath path(23, 1, 15, 0.02, 20);
    const std::vector<std::vector<double>> dirs = {std::vector<double>{1.0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}};
    const MalliavinRun run = run_malliavin(cfg, path, 0.2, dirs);
    // X(s) from a trajectory stopped at s on the same path
    SchemeConfig half = cfg;
    half.T = 0.2;
    const auto xs = run_trajectory(half, path).final_field;
    const auto expect = malliavin_initial(*cfg.space, xs, dirs[0], cfg.diffusion);
    CHECK(run.at_s[0] == expect);
    CHECK_THROWS(start_malliavin(0.21, dirs[0], cfg));
    MalliavinState st = start_malliavin(0.2, dirs[0], cfg);
    CHECK(st.start_step == 10);
    CHECK_FALSE(st.active(9));
    const std::vector<double> x(cfg.space->dim(), 0.1);
    const std::vector<double> dw(15, 0.0);
    const MalliavinState next = step_malliavin(st, 3, x, x, cfg, dw);
    for (double v : next.value) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("DU in the zero direction is zero and estimators need two samples") {
    SchemeConfig cfg = fem_config(1.0 / 8.0, 7, 0.05, 0.2);
    const NoiseSource noise{5, 7, 0.05};
    const std::vector<double> zero(7, 0.0);
    const Estimate e = estimate_DU(cfg, noise, zero, 4);
    CHECK(e.value == 0.0);
    CHECK(e.samples == 4);
    CHECK_THROWS(estimate_DU(cfg, noise, zero, 1));
    CHECK_THROWS(estimate_DU_finite_difference(cfg, noise, zero, 1e-3, 1));
    CHECK_THROWS(estimate_DU_finite_difference(cfg, noise, zero, 0.0, 4));
}

TEST_CASE("DU agrees with the common-path finite difference of U") {
    SchemeConfig cfg = fem_config(1.0 / 16.0, 15, 0.02, 0.4);
    const auto& space = static_cast<const FemDiscretization&>(*cfg.space).space();
    const NoiseSource noise{6, 15, 0.02};
    const auto y = nodal_mode(space, 1, 1.0);
    const Estimate du = estimate_DU(cfg, noise, y, 32);
    const Estimate fd = estimate_DU_finite_difference(cfg, noise, y, 1e-5, 32);
    CHECK(du.value == doctest::Approx(fd.value).epsilon(1e-4));
}

namespace {

IbpProblem small_problem(bool nonlinear) {
    IbpProblem p;
    p.T = 1.0;
    p.windows = 2;
    p.modes = 2;
    p.a = {1.0, -0.5};
    p.constant = 0.3;
    p.nonlinear = nonlinear;
    p.h = {{{1.0, 0.5}, {0.2, -0.4}}, {{0.0, 1.0}, {0.7, 0.3}}};
    p.phi = {{{0.8, 0.1}, {0.2, 0.6}}, {{-0.3, 0.5}, {0.4, 0.9}}};
    return p;
}

// E (F, int Phi dW) in closed form: Gaussian xi_j with variance s_j, covariance
// c_j with int Phi_j dW; E f(xi) Z = E f'(xi) c_j.
double ibp_closed_form(const IbpProblem& p) {
    const double dt = p.T / double(p.windows);
    double total = 0.0;
    for (std::size_t j = 0; j < p.a.size(); ++j) {
        double var = 0.0, cov = 0.0;
        for (std::size_t w = 0; w < p.windows; ++w) {
            for (std::size_t m = 0; m < p.modes; ++m) {
                var += p.h[j][w][m] * p.h[j][w][m] * dt;
                cov += p.h[j][w][m] * p.phi[w][j][m] * dt;
            }
        }
        total += p.a[j] * (p.nonlinear ? std::exp(-0.5 * var) : 1.0) * cov;
    }
    return total;
}

}  // namespace

TEST_CASE("integration by parts against Gaussian closed forms") {
    for (bool nonlinear : {false, true}) {
        const IbpProblem p = small_problem(nonlinear);
        const IbpResult r = malliavin_ibp_check(p, 40000, 77);
        const double exact = ibp_closed_form(p);
        CHECK(r.passed);
        CHECK(std::abs(r.lhs - exact) < 4.0 * r.difference_se + 4.0 * std::abs(r.rhs - exact) + 1e-12);
        if (!nonlinear) {
            CHECK(r.rhs == doctest::Approx(exact).epsilon(1e-12));
        } else {
            CHECK(r.rhs == doctest::Approx(exact).epsilon(0.02));
        }
    }
    IbpProblem bad = small_problem(false);
    bad.h.pop_back();
    CHECK_THROWS(malliavin_ibp_check(bad, 10, 1));
}
