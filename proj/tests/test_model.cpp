#include "sacfem/model.hpp"
#include "sacfem/sine_transform.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace sacfem;
using testing::pi;

namespace {

double rk4_flow(double x, double t) { return testing::rk4([](double u) { return u - u * u * u; }, x, t, 20000); }

}  // namespace

TEST_CASE("splitting flow matches an ODE solve of u' = u - u^3") {
    CHECK(splitting_flow(0.5, 0.1) == doctest::Approx(rk4_flow(0.5, 0.1)).epsilon(1e-12));
    CHECK(splitting_flow(0.5, 0.1) == doctest::Approx(0.53789939).epsilon(1e-8));
    CHECK(f_tau(0.5, 0.1) == doctest::Approx((rk4_flow(0.5, 0.1) - 0.5) / 0.1).epsilon(1e-10));
    CHECK(f_tau(0.5, 0.1) == doctest::Approx(0.37899392).epsilon(1e-7));
    CHECK(std::abs(f_tau(0.5, 0.1) - 0.375) < 0.1 * (1.0 + std::pow(0.5, 5)));
    testing::Gen gen(31);
    for (int i = 0; i < 30; ++i) {
        const double x = gen.uniform(-3.0, 3.0);
        const double t = gen.uniform(0.0, 1.0);
        CHECK(splitting_flow(x, t) == doctest::Approx(rk4_flow(x, t)).epsilon(1e-10));
    }
    CHECK_THROWS(splitting_flow(0.3, -0.1));
    CHECK_THROWS(f_tau(0.3, 0.0));
}

TEST_CASE("flow equilibria, bounds and composition") {
    for (double t : {0.0, 0.01, 0.5, 1.0}) {
        CHECK(splitting_flow(0.0, t) == 0.0);
        CHECK(splitting_flow(1.0, t) == 1.0);
        CHECK(splitting_flow(-1.0, t) == -1.0);
    }
    testing::Gen gen(32);
    for (int i = 0; i < 2000; ++i) {
        const double x = gen.uniform(-5.0, 5.0);
        const double s = gen.uniform(0.0, 0.5);
        const double t = gen.uniform(0.0, 0.5);
        CHECK(std::abs(splitting_flow(x, t)) <= std::exp(t) * std::abs(x) * (1.0 + 1e-15));
        CHECK(std::abs(splitting_flow_derivative(x, t)) <= std::exp(t) * (1.0 + 1e-12));
        CHECK(splitting_flow(splitting_flow(x, t), s) ==
              doctest::Approx(splitting_flow(x, s + t)).epsilon(1e-12));
        // F is one-sided Lipschitz with constant 1
        CHECK(drift_derivative(x) <= 1.0);
    }
}

TEST_CASE("flow derivatives match finite differences") {
    testing::Gen gen(33);
    for (int i = 0; i < 200; ++i) {
        const double x = gen.uniform(-3.0, 3.0);
        const double t = gen.uniform(0.001, 1.0);
        const double e = 1e-5;
        const double d1 = (splitting_flow(x + e, t) - splitting_flow(x - e, t)) / (2 * e);
        const double d2 = (splitting_flow_derivative(x + e, t) - splitting_flow_derivative(x - e, t)) / (2 * e);
        CHECK(splitting_flow_derivative(x, t) == doctest::Approx(d1).epsilon(1e-7).scale(1.0));
        CHECK(splitting_flow_second_derivative(x, t) == doctest::Approx(d2).epsilon(1e-6).scale(1.0));
        CHECK(df_tau(x, t) == doctest::Approx((splitting_flow_derivative(x, t) - 1.0) / t).epsilon(1e-12).scale(1.0));
        CHECK(d2f_tau(x, t) == doctest::Approx(splitting_flow_second_derivative(x, t) / t).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("F_tau converges to f at first order") {
    auto dev = [](double tau) {
        double m = 0.0;
        for (int i = 0; i <= 600; ++i) {
            const double x = -3.0 + 0.01 * i;
            m = std::max(m, std::abs(f_tau(x, tau) - drift(x)));
        }
        return m;
    };
    const double ratio = dev(0.01) / dev(0.005);
    CHECK(ratio >= 1.8);
    CHECK(ratio <= 2.2);
}

TEST_CASE("nodal and spectral drift application") {
    const std::vector<double> u = {-1.0, 0.0, 0.5, 2.0};
    const auto f = drift_apply(u);
    CHECK(f[0] == 0.0);
    CHECK(f[2] == 0.375);
    CHECK(f[3] == -6.0);
    const auto p = splitting_flow_apply(u, 0.1);
    CHECK(p[2] == splitting_flow(0.5, 0.1));

    // f(0.3 phi_1) by collocation vs quadrature coefficients
    SpectralField v(16);
    v[0] = 0.3;
    const SpectralField fv = drift_apply(v);
    auto fx = [](double x) {
        const double u = 0.3 * testing::sine_mode(1, x);
        return u - u * u * u;
    };
    for (std::size_t m = 1; m <= 5; ++m) {
        CHECK(fv[m - 1] == doctest::Approx(testing::sine_coefficient(fx, m)).epsilon(1e-9).scale(1e-6));
    }
}

TEST_CASE("diffusion of the experiment: G(0) w = w") {
    testing::Gen gen(34);
    const SpectralField w(gen.normals(20));
    const SpectralField g = diffusion_apply(SpectralField(20), w, DiffusionSpec::standard());
    CHECK(testing::max_abs_diff(g.coeffs, w.coeffs) < 1e-14);
    const SpectralField z = diffusion_apply(SpectralField(gen.normals(20)), w, DiffusionSpec::zero());
    CHECK(z.norm() == 0.0);
}

TEST_CASE("G(phi_1) phi_1 by collocation agrees with quadrature") {
    const DiffusionSpec spec = DiffusionSpec::standard();
    const std::size_t J = 64;
    const SpectralField u = SpectralField::basis(1, J);
    const SpectralField g = diffusion_apply(u, u, spec);
    const double smooth = std::pow(pi * pi, -0.25 - 0.0005);
    auto gx = [&](double x) {
        const double p = testing::sine_mode(1, x);
        return p + p * p + std::sin(p) * smooth * p;
    };
    for (std::size_t m = 1; m <= 12; ++m) {
        CHECK(std::abs(g[m - 1] - testing::sine_coefficient(gx, m)) < 1e-6);
    }
}

TEST_CASE("B1 scales mode j by 1/j and g smooths by A^{-1/4 - delta/2}") {
    const DiffusionSpec spec = DiffusionSpec::standard();
    CHECK(spec.delta == 0.001);
    CHECK(spec.g_smoothing_exponent() == doctest::Approx(-0.2505).epsilon(1e-15));
    const std::vector<double> u = {1.0, 1.0, 1.0, 1.0};
    const auto b = b1_coefficients(spec, u);
    CHECK(b[0] == 1.0);
    CHECK(b[3] == doctest::Approx(0.25).epsilon(1e-15));
    const auto s = g_smoothed_coefficients(spec, u);
    CHECK(s[1] == doctest::Approx(std::pow(4.0 * pi * pi, -0.2505)).epsilon(1e-14));
}

TEST_CASE("G is affine in w and its derivative matches finite differences") {
    testing::Gen gen(35);
    const DiffusionSpec spec = DiffusionSpec::standard();
    const std::size_t J = 24;
    for (int trial = 0; trial < 5; ++trial) {
        const SpectralField u(gen.rough_coeffs(J, 0.5));
        const SpectralField v(gen.rough_coeffs(J, 0.5));
        const SpectralField w1(gen.normals(J));
        const SpectralField w2(gen.normals(J));
        SpectralField sum(J);
        for (std::size_t i = 0; i < J; ++i) {
            sum[i] = 2.0 * w1[i] + w2[i];
        }
        const SpectralField a = diffusion_apply(u, sum, spec);
        const SpectralField b1 = diffusion_apply(u, w1, spec);
        const SpectralField b2 = diffusion_apply(u, w2, spec);
        for (std::size_t i = 0; i < J; ++i) {
            CHECK(a[i] == doctest::Approx(2.0 * b1[i] + b2[i]).epsilon(1e-12).scale(1e-12));
        }
        const double e = 1e-6;
        SpectralField up = u, um = u;
        for (std::size_t i = 0; i < J; ++i) {
            up[i] += e * v[i];
            um[i] -= e * v[i];
        }
        const SpectralField gp = diffusion_apply(up, w1, spec);
        const SpectralField gm = diffusion_apply(um, w1, spec);
        const SpectralField dg = diffusion_derivative_apply(u, v, w1, spec);
        for (std::size_t i = 0; i < J; ++i) {
            CHECK(dg[i] == doctest::Approx((gp[i] - gm[i]) / (2 * e)).epsilon(1e-6).scale(1e-4));
        }
    }
}

TEST_CASE("G_tau(u) = G(Phi_tau(u))") {
    testing::Gen gen(36);
    const DiffusionSpec spec = DiffusionSpec::standard();
    const SpectralField u(gen.rough_coeffs(16, 0.5));
    const SpectralField w(gen.normals(16));
    const SpectralField flowed = apply_pointwise(u, [](double x) { return splitting_flow(x, 0.05); });
    const SpectralField a = g_tau_apply(u, 0.05, w, spec);
    const SpectralField b = diffusion_apply(flowed, w, spec);
    CHECK(testing::max_abs_diff(a.coeffs, b.coeffs) < 1e-3);
}

TEST_CASE("diffusion variants by name") {
    for (auto v : {DiffusionVariant::standard, DiffusionVariant::linear_test, DiffusionVariant::custom}) {
        CHECK(diffusion_variant_from_string(to_string(v)) == v);
    }
    CHECK_THROWS(diffusion_variant_from_string("cubic"));
    const DiffusionSpec lin = DiffusionSpec::linear_test();
    CHECK(lin.g_amplitude == 0.0);
    CHECK(lin.b0 == 1.0);
}

TEST_CASE("initial data on both discretizations") {
    const auto space = FemSpace::assemble(0.25);
    const FemField xi = initial_hat(space);
    CHECK(xi.nodal == std::vector<double>{0.25, 0.5, 0.25});
    const InitialData custom = InitialData::from_field(SpectralField::basis(1, 3));
    CHECK(custom.spectral(3)[0] == 1.0);
    CHECK(custom.fem(space).nodal[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(InitialData::hat().spectral(5)[0] == doctest::Approx(2.0 * std::sqrt(2.0) / (pi * pi)).epsilon(1e-14));
}
