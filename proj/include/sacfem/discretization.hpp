#pragma once

// Spatial discretizations the time integrators run on.
//
// A state is a plain coefficient vector: sine coefficients for the spectral
// Galerkin space, interior nodal values for the P1 space. Each discretization
// exposes
//   - a point representation where pointwise maps (Phi_tau, f, derivatives)
//     act: collocation values for spectral, nodal values for FEM;
//   - an eigen ("modal") representation where the semigroup is diagonal;
//   - a collocation grid, shared by the noise, on which G(u) w is formed and
//     then projected back (truncation, or the exact L2 projection P_h).

#include "sacfem/fem.hpp"
#include "sacfem/model.hpp"
#include "sacfem/sine_transform.hpp"
#include "sacfem/spectral.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace sacfem {

class Discretization {
public:
    virtual ~Discretization() = default;

    virtual std::string describe() const = 0;
    virtual std::size_t dim() const = 0;
    /// Eigenvalues of the generator (lambda_k or mu_k), one per modal coefficient.
    virtual std::span<const double> eigenvalues() const = 0;
    /// Number of noise modes the discretization sees.
    virtual std::size_t noise_modes() const = 0;
    const CollocationGrid& grid() const { return grid_; }

    virtual std::vector<double> to_points(std::span<const double> state) const = 0;
    virtual std::vector<double> from_points(std::span<const double> values) const = 0;

    virtual std::vector<double> to_modal(std::span<const double> state) const = 0;
    virtual std::vector<double> from_modal(std::span<const double> modal) const = 0;

    virtual std::vector<double> to_grid(std::span<const double> state) const = 0;
    /// Sine coefficients (u, phi_m) for m = 1..modes.
    virtual std::vector<double> sine_coefficients(std::span<const double> state, std::size_t modes) const = 0;
    /// Modal coefficients of the projection of a collocation-grid function.
    virtual std::vector<double> project_grid(std::span<const double> grid_values) const = 0;

    /// Solves (I + tau A) X_new = X + tau f(X) + Proj(noise_grid) (drift at the old state).
    virtual std::vector<double> semi_implicit_solve(std::span<const double> state, double tau,
                                                    std::span<const double> noise_grid) const = 0;

    virtual double l2_inner(std::span<const double> a, std::span<const double> b) const = 0;
    virtual double h1_seminorm(std::span<const double> state) const = 0;
    double l2_norm(std::span<const double> state) const;
    /// Max norm of the represented function.
    virtual double max_norm(std::span<const double> state) const = 0;

    virtual std::vector<double> initial_state(const InitialData& xi) const = 0;

    /// u and B1 u on the collocation grid.
    StateOnGrid state_on_grid(std::span<const double> state, const DiffusionSpec& spec) const;

    /// Noise direction w (sine coefficients, truncated to noise_modes()) on the grid.
    NoiseOnGrid noise_grid(std::span<const double> w_coeffs, const DiffusionSpec& spec) const;

    /// Proj(G(u) w) as a state vector.
    std::vector<double> diffusion_projected(std::span<const double> state, std::span<const double> w_coeffs,
                                            const DiffusionSpec& spec) const;

    /// exp(-t A) applied to a state.
    std::vector<double> semigroup(double t, std::span<const double> state) const;

protected:
    explicit Discretization(std::size_t grid_intervals) : grid_(grid_intervals) {}

private:
    CollocationGrid grid_;
};

/// Sine-Galerkin space on modes 1..J with a collocation grid of 2(J+1) intervals.
class SpectralDiscretization final : public Discretization {
public:
    explicit SpectralDiscretization(std::size_t modes);

    std::string describe() const override;
    std::size_t dim() const override { return modes_; }
    std::span<const double> eigenvalues() const override { return lambda_; }
    std::size_t noise_modes() const override { return modes_; }

    std::vector<double> to_points(std::span<const double> state) const override;
    std::vector<double> from_points(std::span<const double> values) const override;
    std::vector<double> to_modal(std::span<const double> state) const override;
    std::vector<double> from_modal(std::span<const double> modal) const override;
    std::vector<double> to_grid(std::span<const double> state) const override;
    std::vector<double> sine_coefficients(std::span<const double> state, std::size_t modes) const override;
    std::vector<double> project_grid(std::span<const double> grid_values) const override;
    std::vector<double> semi_implicit_solve(std::span<const double> state, double tau,
                                            std::span<const double> noise_grid) const override;
    double l2_inner(std::span<const double> a, std::span<const double> b) const override;
    double h1_seminorm(std::span<const double> state) const override;
    double max_norm(std::span<const double> state) const override;
    std::vector<double> initial_state(const InitialData& xi) const override;

private:
    std::size_t modes_;
    std::vector<double> lambda_;
};

/// P1 space with noise truncated to `noise_modes` sine modes. The collocation
/// grid refines the mesh and has at least 2(J+1) intervals.
class FemDiscretization final : public Discretization {
public:
    FemDiscretization(FemSpacePtr space, std::size_t noise_modes);

    const FemSpace& space() const { return *space_; }
    FemSpacePtr space_ptr() const { return space_; }

    std::string describe() const override;
    std::size_t dim() const override { return space_->n_interior(); }
    std::span<const double> eigenvalues() const override { return space_->eigenvalues(); }
    std::size_t noise_modes() const override { return noise_modes_; }

    std::vector<double> to_points(std::span<const double> state) const override;
    std::vector<double> from_points(std::span<const double> values) const override;
    std::vector<double> to_modal(std::span<const double> state) const override;
    std::vector<double> from_modal(std::span<const double> modal) const override;
    std::vector<double> to_grid(std::span<const double> state) const override;
    std::vector<double> sine_coefficients(std::span<const double> state, std::size_t modes) const override;
    std::vector<double> project_grid(std::span<const double> grid_values) const override;
    std::vector<double> semi_implicit_solve(std::span<const double> state, double tau,
                                            std::span<const double> noise_grid) const override;
    double l2_inner(std::span<const double> a, std::span<const double> b) const override;
    double h1_seminorm(std::span<const double> state) const override;
    double max_norm(std::span<const double> state) const override;
    std::vector<double> initial_state(const InitialData& xi) const override;

private:
    static std::size_t grid_intervals(const FemSpace& space, std::size_t noise_modes);

    FemSpacePtr space_;
    std::size_t noise_modes_;
};

using DiscretizationPtr = std::shared_ptr<const Discretization>;

}  // namespace sacfem
