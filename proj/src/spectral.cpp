#include "sacfem/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sacfem {

using std::numbers::pi;

double SpectralField::norm() const {
    double s = 0.0;
    for (double c : coeffs) {
        s += c * c;
    }
    return std::sqrt(s);
}

double SpectralField::evaluate(double x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        s += coeffs[i] * std::sin(static_cast<double>(i + 1) * pi * x);
    }
    return std::sqrt(2.0) * s;
}

SpectralField SpectralField::basis(std::size_t i, std::size_t modes) {
    if (i == 0 || i > modes) {
        throw std::invalid_argument("SpectralField::basis: mode index out of range");
    }
    SpectralField f(modes);
    f[i - 1] = 1.0;
    return f;
}

double inner(const SpectralField& a, const SpectralField& b) {
    const std::size_t n = std::min(a.modes(), b.modes());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double eigenvalue(std::size_t i) {
    if (i == 0) {
        throw std::invalid_argument("eigenvalue: mode index starts at 1");
    }
    const double k = static_cast<double>(i);
    return pi * pi * k * k;
}

double eigenfunction_at(std::size_t i, double x) {
    if (i == 0) {
        throw std::invalid_argument("eigenfunction_at: mode index starts at 1");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error("eigenfunction_at: x outside [0, 1]");
    }
    return std::sqrt(2.0) * std::sin(static_cast<double>(i) * pi * x);
}

SpectralField SpectralOperatorDiag::apply(const SpectralField& v) const {
    if (v.modes() > diag.size()) {
        throw std::invalid_argument("SpectralOperatorDiag::apply: field has more modes than operator");
    }
    SpectralField out = v;
    for (std::size_t i = 0; i < v.modes(); ++i) {
        out[i] *= diag[i];
    }
    return out;
}

SpectralOperatorDiag SpectralOperatorDiag::compose(const SpectralOperatorDiag& other) const {
    const std::size_t n = std::min(diag.size(), other.diag.size());
    SpectralOperatorDiag out{std::vector<double>(n), description + " * " + other.description};
    for (std::size_t i = 0; i < n; ++i) {
        out.diag[i] = diag[i] * other.diag[i];
    }
    return out;
}

SpectralOperatorDiag SpectralOperatorDiag::fractional_power(double alpha, std::size_t modes) {
    SpectralOperatorDiag op{std::vector<double>(modes), "A^" + std::to_string(alpha)};
    for (std::size_t i = 0; i < modes; ++i) {
        op.diag[i] = std::pow(eigenvalue(i + 1), alpha);
    }
    return op;
}

SpectralOperatorDiag SpectralOperatorDiag::semigroup(double t, std::size_t modes) {
    if (t < 0.0) {
        throw std::domain_error("semigroup: negative time");
    }
    SpectralOperatorDiag op{std::vector<double>(modes), "S(" + std::to_string(t) + ")"};
    for (std::size_t i = 0; i < modes; ++i) {
        op.diag[i] = decay_factor(eigenvalue(i + 1), t);
    }
    return op;
}

double decay_factor(double lambda, double t) {
    const double hi = lambda * t;
    const double lo = std::fma(lambda, t, -hi);
    return std::exp(-hi) * (1.0 - lo);
}

SpectralField fractional_power_apply(double alpha, const SpectralField& v) {
    SpectralField out = v;
    if (alpha == 0.0) {
        return out;
    }
    for (std::size_t i = 0; i < v.modes(); ++i) {
        out[i] *= std::pow(eigenvalue(i + 1), alpha);
        if (!std::isfinite(out[i]) && std::isfinite(v[i])) {
            throw std::overflow_error("fractional_power_apply: overflow in mode " + std::to_string(i + 1));
        }
    }
    return out;
}

SpectralField semigroup_apply(double t, const SpectralField& v) {
    if (t < 0.0) {
        throw std::domain_error("semigroup_apply: negative time");
    }
    SpectralField out = v;
    for (std::size_t i = 0; i < v.modes(); ++i) {
        out[i] *= decay_factor(eigenvalue(i + 1), t);
    }
    return out;
}

double smoothing_norm(double alpha, double t, std::size_t cutoff) {
    if (!(t > 0.0)) {
        throw std::domain_error("smoothing_norm: t must be positive");
    }
    double best = 0.0;
    for (std::size_t i = 1; i <= cutoff; ++i) {
        const double lam = eigenvalue(i);
        best = std::max(best, std::pow(lam, alpha) * std::exp(-lam * t));
        // lambda^alpha e^{-lambda t} is decreasing once lambda > alpha / t.
        if (lam > alpha / t && i > 1) {
            break;
        }
    }
    return best;
}

double smoothing_bound(double alpha, double t) {
    if (!(t > 0.0) || alpha < 0.0) {
        throw std::domain_error("smoothing_bound: need t > 0, alpha >= 0");
    }
    const double lam1 = pi * pi;
    const double peak = alpha / t;
    if (peak <= lam1) {
        return std::pow(lam1, alpha) * std::exp(-lam1 * t);
    }
    return std::pow(alpha / (std::numbers::e * t), alpha);
}

double hs_norm_fractional(double beta, std::size_t cutoff) {
    if (beta <= 0.25) {
        throw std::domain_error("hs_norm_fractional: series diverges for beta <= 1/4");
    }
    // Summed from the tail so small terms are not lost.
    double s = 0.0;
    for (std::size_t j = cutoff; j >= 1; --j) {
        s += std::pow(eigenvalue(j), -2.0 * beta);
    }
    return std::sqrt(s);
}

SpectralField resize_modes(const SpectralField& v, std::size_t modes) {
    SpectralField out(modes);
    std::copy_n(v.coeffs.begin(), std::min(modes, v.modes()), out.coeffs.begin());
    out.domain_length = v.domain_length;
    return out;
}

}  // namespace sacfem
