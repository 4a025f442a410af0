#pragma once

// Continuous piecewise-linear finite elements on the uniform mesh x_j = j h of
// (0, 1) with homogeneous Dirichlet conditions. Nodal vectors hold the n = 1/h - 1
// interior values.
//
// The pencil (stiffness, mass) has the closed-form mass-orthonormal eigenpairs
//   w_k(x_j) = a_k sin(k pi x_j),  a_k = sqrt(6 / (2 + cos(k pi h))),
//   mu_k     = (6 / h^2) (1 - cos(k pi h)) / (2 + cos(k pi h)),
// which is what S_h(t) and A_h^beta are built on. "Modal" vectors below are
// coefficients (u, w_k) in that basis.

#include "sacfem/spectral.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace sacfem {

class CollocationGrid;

/// Symmetric tridiagonal matrix.
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;  // off[i] couples rows i and i+1

    std::size_t size() const { return diag.size(); }
    std::vector<double> apply(std::span<const double> x) const;
    /// Thomas algorithm; throws on a zero pivot.
    std::vector<double> solve(std::span<const double> rhs) const;
};

class FemSpace {
public:
    /// 1/h must be an integer >= 2.
    static std::shared_ptr<const FemSpace> assemble(double h);

    double h() const { return h_; }
    std::size_t n_interior() const { return n_; }
    std::size_t elements() const { return n_ + 1; }
    double node(std::size_t j) const { return static_cast<double>(j + 1) * h_; }

    const Tridiagonal& mass() const { return mass_; }
    const Tridiagonal& stiffness() const { return stiffness_; }

    /// mu_k for k = 1..n at index k-1, ascending.
    std::span<const double> eigenvalues() const { return mu_; }
    /// Nodal values of the mass-orthonormal eigenvector w_k.
    std::vector<double> eigenvector(std::size_t k) const;

    std::vector<double> to_modal(std::span<const double> nodal) const;
    std::vector<double> from_modal(std::span<const double> modal) const;

    double l2_inner(std::span<const double> a, std::span<const double> b) const;
    double l2_norm(std::span<const double> u) const;
    double h1_seminorm(std::span<const double> u) const;

    /// (psi_j, phi_m) = sqrt(2) sin(m pi x_j) * hat_overlap(m).
    double hat_overlap(std::size_t m) const;

    /// Exact sine coefficients (u, phi_m), m = 1..modes, of the P1 function u.
    std::vector<double> sine_coefficients(std::span<const double> nodal, std::size_t modes) const;

    /// Load vector (p, psi_j) for p = sum_m coeffs[m-1] phi_m (any number of modes).
    std::vector<double> load_vector(std::span<const double> sine_coeffs) const;

    /// Modal coefficients (p, w_k) of P_h p for the same p: the exact L2 projection
    /// in eigen-coordinates.
    std::vector<double> project_modal(std::span<const double> sine_coeffs) const;

    /// Value of the P1 function at x in [0, 1].
    double evaluate(std::span<const double> nodal, double x) const;

    /// Values of the P1 function at every collocation point.
    void to_grid(std::span<const double> nodal, const CollocationGrid& grid,
                 std::span<double> values) const;

private:
    explicit FemSpace(std::size_t elements);

    double h_;
    std::size_t n_;
    Tridiagonal mass_;
    Tridiagonal stiffness_;
    std::vector<double> mu_;
    std::vector<double> scale_;        // a_k
    std::vector<double> mass_factor_;  // (h/3)(2 + cos k pi h)
};

using FemSpacePtr = std::shared_ptr<const FemSpace>;

struct FemField {
    FemSpacePtr space;
    std::vector<double> nodal;

    FemField() = default;
    explicit FemField(FemSpacePtr s) : space(std::move(s)), nodal(space->n_interior(), 0.0) {}
    FemField(FemSpacePtr s, std::vector<double> values);

    double norm() const { return space->l2_norm(nodal); }
    double h1_seminorm() const { return space->h1_seminorm(nodal); }
};

/// Eigenvalues and vectors of the pencil from a general-purpose dense solver,
/// used to cross-check the closed form. Vectors are mass-orthonormal columns.
struct NumericEigenpairs {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};
NumericEigenpairs numeric_generalized_eigenpairs(const FemSpace& space);

/// Exact P1 dispersion mu_k for mesh width h.
double p1_dispersion(std::size_t k, double h);

FemField interpolate(std::function<double(double)> v, FemSpacePtr space);

/// L2 projection with 4-point Gauss-Legendre quadrature per element.
FemField l2_project(std::function<double(double)> v, FemSpacePtr space);
FemField l2_project(const SpectralField& v, FemSpacePtr space);
/// Closed-form L2 projection of a sine series (no quadrature).
FemField l2_project_exact(const SpectralField& v, FemSpacePtr space);

/// Ritz projection from the derivative of v (Gauss quadrature of v' psi_j').
FemField ritz_project(std::function<double(double)> v_prime, FemSpacePtr space);
FemField ritz_project(const SpectralField& v, FemSpacePtr space);

/// A_h u = mass^-1 stiffness u.
FemField discrete_laplacian_apply(const FemField& u);
/// S_h(t) u, exact through the eigen-expansion.
FemField discrete_semigroup_apply(double t, const FemField& u);
/// A_h^beta u.
FemField discrete_fractional_apply(double beta, const FemField& u);

/// Estimate of ||A^{s/2} (I - P_h) A^{-r/2}|| on span{phi_1..phi_J}: the largest
/// singular value found by power iteration on the Gram matrix.
double projection_error_norm(double s, double r, const FemSpace& space, std::size_t cutoff);

/// Injects a coarse P1 function into a nested finer mesh.
FemField prolongate(const FemField& coarse, FemSpacePtr fine);

}  // namespace sacfem
