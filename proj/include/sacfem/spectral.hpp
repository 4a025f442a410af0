#pragma once

// Spectral calculus of the Dirichlet Laplacian A = -d^2/dx^2 on (0, 1).
//
// Eigenpairs: lambda_i = pi^2 i^2, phi_i(x) = sqrt(2) sin(i pi x), i >= 1.
// The semigroup is S(t) = exp(-tA) with A positive definite, so every
// smoothing bound ||A^a S(t)|| <= C t^-a holds with decaying exponentials.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sacfem {

/// Default mode cutoff, matched to the 2^-12 reference mesh.
inline constexpr std::size_t kDefaultModeCutoff = 4096;

/// Coefficients (v, phi_i) for i = 1..J, stored at index i-1.
struct SpectralField {
    std::vector<double> coeffs;
    double domain_length = 1.0;

    SpectralField() = default;
    explicit SpectralField(std::size_t modes) : coeffs(modes, 0.0) {}
    explicit SpectralField(std::vector<double> c) : coeffs(std::move(c)) {}

    std::size_t modes() const { return coeffs.size(); }
    double& operator[](std::size_t i) { return coeffs[i]; }
    double operator[](std::size_t i) const { return coeffs[i]; }

    /// L2 norm; equals the Euclidean norm of coeffs by Parseval.
    double norm() const;
    /// Value of the truncated series at x in [0, 1].
    double evaluate(double x) const;

    /// Single eigenfunction phi_i in a field with `modes` coefficients.
    static SpectralField basis(std::size_t i, std::size_t modes);
};

double inner(const SpectralField& a, const SpectralField& b);

/// pi^2 i^2; throws for i = 0.
double eigenvalue(std::size_t i);

/// exp(-lambda t), with the product lambda t carried to twice working precision
/// so that decay_factor(l, s) * decay_factor(l, t) tracks decay_factor(l, s + t).
double decay_factor(double lambda, double t);

/// sqrt(2) sin(i pi x); throws for i = 0 or x outside [0, 1].
double eigenfunction_at(std::size_t i, double x);

/// Diagonal operator in the eigenbasis; diag[i-1] multiplies mode i.
struct SpectralOperatorDiag {
    std::vector<double> diag;
    std::string description;

    SpectralField apply(const SpectralField& v) const;
    /// (this o other): entrywise product of multipliers.
    SpectralOperatorDiag compose(const SpectralOperatorDiag& other) const;

    static SpectralOperatorDiag fractional_power(double alpha, std::size_t modes);
    static SpectralOperatorDiag semigroup(double t, std::size_t modes);
};

/// A^alpha v: mode i scaled by lambda_i^alpha.
SpectralField fractional_power_apply(double alpha, const SpectralField& v);

/// S(t) v = exp(-tA) v; throws for t < 0.
SpectralField semigroup_apply(double t, const SpectralField& v);

/// max_{i <= J} lambda_i^alpha exp(-lambda_i t), the norm of A^alpha S(t)
/// restricted to the first J modes.
double smoothing_norm(double alpha, double t, std::size_t cutoff);

/// Continuous upper bound for smoothing_norm: the maximum of
/// lambda^alpha exp(-lambda t) over lambda >= pi^2.
double smoothing_bound(double alpha, double t);

/// Hilbert-Schmidt norm of A^-beta on the first J modes; throws for beta <= 1/4
/// (the full series diverges there).
double hs_norm_fractional(double beta, std::size_t cutoff);

/// Truncates or zero-pads coefficients to `modes`.
SpectralField resize_modes(const SpectralField& v, std::size_t modes);

}  // namespace sacfem
