#include "sacfem/model.hpp"
#include "sacfem/sine_transform.hpp"
#include "sacfem/spectral.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace sacfem;
using testing::pi;

TEST_CASE("eigenvalues are pi^2 i^2") {
    CHECK(eigenvalue(1) == doctest::Approx(pi * pi).epsilon(1e-15));
    CHECK(eigenvalue(7) == doctest::Approx(49.0 * pi * pi).epsilon(1e-15));
    CHECK_THROWS_AS(eigenvalue(0), std::invalid_argument);
    CHECK(eigenfunction_at(3, 0.1) == doctest::Approx(testing::sine_mode(3, 0.1)).epsilon(1e-15));
    CHECK_THROWS(eigenfunction_at(1, 1.5));
}

TEST_CASE("type-I sine transform matches the direct sum and inverts itself") {
    testing::Gen gen(11);
    for (std::size_t n : {1u, 7u, 31u, 100u}) {
        const std::vector<double> in = gen.normals(n);
        const std::vector<double> out = sine_transform(n).apply(in);
        double err = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                s += in[j] * std::sin(pi * static_cast<double>((j + 1) * (k + 1)) / static_cast<double>(n + 1));
            }
            err = std::max(err, std::abs(s - out[k]));
        }
        CHECK(err < 1e-12 * static_cast<double>(n));
        std::vector<double> back = sine_transform(n).apply(out);
        for (double& v : back) {
            v *= 2.0 / static_cast<double>(n + 1);
        }
        CHECK(testing::max_abs_diff(back, in) < 1e-13 * static_cast<double>(n));
    }
}

TEST_CASE("collocation grid analyze inverts evaluate below the Nyquist mode") {
    testing::Gen gen(12);
    const CollocationGrid grid(64);
    const std::vector<double> c = gen.normals(63);
    const std::vector<double> values = grid.evaluate(c);
    for (std::size_t q = 0; q < values.size(); q += 9) {
        CHECK(values[q] == doctest::Approx(testing::sine_series(c, grid.point(q))).epsilon(1e-12));
    }
    CHECK(testing::max_abs_diff(grid.analyze(values), c) < 1e-13);
    CHECK_THROWS(grid.evaluate(std::vector<double>(64, 1.0)));
}

TEST_CASE("Parseval: coefficient norm equals the quadrature L2 norm") {
    testing::Gen gen(13);
    for (int trial = 0; trial < 5; ++trial) {
        const SpectralField v(gen.rough_coeffs(40));
        const double quad = testing::simpson(
            [&](double x) {
                const double f = testing::sine_series(v.coeffs, x);
                return f * f;
            },
            0.0, 1.0, 20000);
        CHECK(v.norm() * v.norm() == doctest::Approx(quad).epsilon(1e-9));
        CHECK(v.evaluate(0.37) == doctest::Approx(testing::sine_series(v.coeffs, 0.37)).epsilon(1e-13));
    }
    CHECK(inner(SpectralField::basis(2, 5), SpectralField::basis(2, 5)) == 1.0);
    CHECK(inner(SpectralField::basis(2, 5), SpectralField::basis(3, 5)) == 0.0);
}

TEST_CASE("semigroup decays each mode by exp(-lambda t)") {
    const SpectralField v(std::vector<double>{1.0, -2.0, 0.5, 3.0});
    CHECK(semigroup_apply(0.0, v).coeffs == v.coeffs);
    const SpectralField s = semigroup_apply(0.01, v);
    for (std::size_t i = 0; i < 4; ++i) {
        const double lam = pi * pi * static_cast<double>((i + 1) * (i + 1));
        CHECK(s[i] == doctest::Approx(v[i] * std::exp(-lam * 0.01)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(semigroup_apply(-1e-3, v), std::domain_error);
    CHECK(decay_factor(3.0, 0.0) == 1.0);
    CHECK(decay_factor(1e4, 1.0) == 0.0);
}

TEST_CASE("semigroup composition and commutation with fractional powers") {
    testing::Gen gen(14);
    const SpectralField v(gen.rough_coeffs(32));
    for (int trial = 0; trial < 20; ++trial) {
        const double s = gen.uniform(0.0, 0.05);
        const double t = gen.uniform(0.0, 0.05);
        const SpectralField ab = semigroup_apply(s, semigroup_apply(t, v));
        const SpectralField c = semigroup_apply(s + t, v);
        for (std::size_t i = 0; i < 32; ++i) {
            // exp is conditioned by its argument, here at most lambda_32 * 0.1 ~ 1e3
            CHECK(std::abs(ab[i] - c[i]) <= 1e-12 * std::abs(c[i]) + 1e-300);
        }
        const double alpha = gen.uniform(-1.0, 1.0);
        const SpectralField p = fractional_power_apply(alpha, semigroup_apply(t, v));
        const SpectralField q = semigroup_apply(t, fractional_power_apply(alpha, v));
        CHECK(testing::max_abs_diff(p.coeffs, q.coeffs) <= 1e-14 * (1.0 + q.norm()));
        const SpectralField back = fractional_power_apply(-alpha, fractional_power_apply(alpha, v));
        CHECK(testing::max_abs_diff(back.coeffs, v.coeffs) < 1e-14);
    }
}

TEST_CASE("diagonal operators compose like sequential application") {
    testing::Gen gen(15);
    const SpectralField v(gen.normals(16));
    const auto s = SpectralOperatorDiag::semigroup(0.003, 16);
    const auto a = SpectralOperatorDiag::fractional_power(0.5, 16);
    const SpectralField seq = a.apply(s.apply(v));
    const SpectralField comp = a.compose(s).apply(v);
    CHECK(testing::max_abs_diff(seq.coeffs, comp.coeffs) < 1e-13);
    CHECK_THROWS(a.apply(SpectralField(17)));
    CHECK_THROWS(SpectralOperatorDiag::semigroup(-1.0, 4));
}

TEST_CASE("smoothing norm: discrete maximum and continuous bound") {
    // alpha = 1, t = 0.01: the continuous maximum of lambda e^{-lambda t} is 1/(e t)
    CHECK(smoothing_bound(1.0, 0.01) == doctest::Approx(100.0 / std::exp(1.0)).epsilon(1e-14));
    CHECK(smoothing_bound(1.0, 0.01) == doctest::Approx(36.79).epsilon(1e-4));
    double brute = 0.0;
    for (std::size_t i = 1; i <= 200; ++i) {
        const double lam = pi * pi * static_cast<double>(i * i);
        brute = std::max(brute, lam * std::exp(-lam * 0.01));
    }
    CHECK(smoothing_norm(1.0, 0.01, kDefaultModeCutoff) == doctest::Approx(brute).epsilon(1e-14));
    CHECK(brute == doctest::Approx(36.53).epsilon(1e-3));
    // peak below the first eigenvalue: the bound is attained at mode 1
    CHECK(smoothing_bound(0.5, 1.0) == doctest::Approx(pi * std::exp(-pi * pi)).epsilon(1e-14));
    CHECK(smoothing_norm(0.5, 1.0, 10) == doctest::Approx(pi * std::exp(-pi * pi)).epsilon(1e-14));
    CHECK_THROWS(smoothing_norm(1.0, 0.0, 10));

    testing::Gen gen(16);
    for (int trial = 0; trial < 200; ++trial) {
        const double alpha = gen.uniform(0.0, 2.0);
        const double t = std::exp(gen.uniform(std::log(1e-5), 0.0));
        const double norm = smoothing_norm(alpha, t, 512);
        CHECK(norm <= smoothing_bound(alpha, t) * (1.0 + 1e-12));
        CHECK(norm * std::pow(t, alpha) <= std::pow(alpha / std::exp(1.0), alpha) * (1.0 + 1e-12) + 1e-300);
    }
}

TEST_CASE("Hilbert-Schmidt norm of negative fractional powers") {
    double s = 0.0;
    for (std::size_t j = 1; j <= 100; ++j) {
        s += 1.0 / std::pow(pi * pi * static_cast<double>(j * j), 1.0);
    }
    CHECK(hs_norm_fractional(0.5, 100) == doctest::Approx(std::sqrt(s)).epsilon(1e-13));
    // beta = 1/2: sum 1/(pi^2 j^2) -> 1/6
    CHECK(hs_norm_fractional(0.5, 100000) == doctest::Approx(std::sqrt(1.0 / 6.0)).epsilon(1e-5));
    CHECK_THROWS(hs_norm_fractional(0.25, 10));
}

TEST_CASE("resize keeps leading coefficients and never increases the norm") {
    testing::Gen gen(17);
    const SpectralField v(gen.normals(12));
    CHECK(resize_modes(v, 12).coeffs == v.coeffs);
    CHECK(resize_modes(v, 0).norm() == 0.0);
    const SpectralField r = resize_modes(v, 5);
    CHECK(r.norm() <= v.norm());
    CHECK(r[4] == v[4]);
    CHECK(resize_modes(v, 20).norm() == doctest::Approx(v.norm()).epsilon(1e-15));
}

TEST_CASE("hat initial data coefficients") {
    const SpectralField xi = initial_hat(9);
    CHECK(xi[0] == doctest::Approx(2.0 * std::sqrt(2.0) / (pi * pi)).epsilon(1e-14));
    CHECK(std::abs(xi[1]) < 1e-16);
    for (std::size_t j = 1; j <= 9; ++j) {
        CHECK(xi[j - 1] == doctest::Approx(testing::sine_coefficient(hat_function, j)).epsilon(1e-9).scale(1e-3));
    }
    CHECK(hat_function(0.5) == 0.5);
    CHECK(hat_function(0.25) == 0.25);
    CHECK(hat_function(0.75) == 0.25);
}
