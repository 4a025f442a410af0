#include "sacfem/fem.hpp"

#include "sacfem/sine_transform.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sacfem {

using std::numbers::pi;

namespace {

constexpr std::array<double, 4> kGaussNodes = {-0.8611363115940526, -0.3399810435848563,
                                               0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGaussWeights = {0.3478548451374538, 0.6521451548625461,
                                                 0.6521451548625461, 0.3478548451374538};

// Integrates g * psi_j over the two elements adjacent to each interior node.
template <typename Fn>
std::vector<double> hat_moments(Fn&& g, const FemSpace& space, bool derivative) {
    const std::size_t n = space.n_interior();
    const double h = space.h();
    std::vector<double> b(n, 0.0);
    for (std::size_t e = 0; e <= n; ++e) {
        const double left = static_cast<double>(e) * h;
        for (std::size_t q = 0; q < 4; ++q) {
            const double xi = 0.5 * (kGaussNodes[q] + 1.0);  // in [0, 1]
            const double x = left + xi * h;
            const double w = 0.5 * h * kGaussWeights[q];
            const double gx = g(x);
            if (!std::isfinite(gx)) {
                throw std::runtime_error("hat_moments: non-finite integrand at x=" + std::to_string(x));
            }
            // Element e spans nodes e-1 (left, interior index e-1) and e (right).
            const double left_shape = derivative ? -1.0 / h : 1.0 - xi;
            const double right_shape = derivative ? 1.0 / h : xi;
            if (e >= 1) {
                b[e - 1] += w * gx * left_shape;
            }
            if (e < n) {
                b[e] += w * gx * right_shape;
            }
        }
    }
    return b;
}

double largest_eigenvalue_psd(const std::vector<std::vector<double>>& gram) {
    const std::size_t n = gram.size();
    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> next(n);
    double rayleigh = 0.0;
    for (int iter = 0; iter < 5000; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                s += gram[i][k] * v[k];
            }
            next[i] = s;
        }
        double norm = 0.0;
        double vtav = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            norm += next[i] * next[i];
            vtav += v[i] * next[i];
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            return 0.0;
        }
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = next[i] / norm;
        }
        if (iter > 10 && std::abs(vtav - rayleigh) <= 1e-13 * std::abs(vtav)) {
            return vtav;
        }
        rayleigh = vtav;
    }
    return rayleigh;
}

}  // namespace

std::vector<double> Tridiagonal::apply(std::span<const double> x) const {
    const std::size_t n = size();
    if (x.size() != n) {
        throw std::invalid_argument("Tridiagonal::apply: size mismatch");
    }
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0) {
            s += off[i - 1] * x[i - 1];
        }
        if (i + 1 < n) {
            s += off[i] * x[i + 1];
        }
        y[i] = s;
    }
    return y;
}

std::vector<double> Tridiagonal::solve(std::span<const double> rhs) const {
    const std::size_t n = size();
    if (rhs.size() != n) {
        throw std::invalid_argument("Tridiagonal::solve: size mismatch");
    }
    std::vector<double> c(n), d(n);
    double pivot = diag[0];
    if (pivot == 0.0) {
        throw std::runtime_error("Tridiagonal::solve: zero pivot");
    }
    c[0] = n > 1 ? off[0] / pivot : 0.0;
    d[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - off[i - 1] * c[i - 1];
        if (pivot == 0.0) {
            throw std::runtime_error("Tridiagonal::solve: zero pivot");
        }
        c[i] = i + 1 < n ? off[i] / pivot : 0.0;
        d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        d[i] -= c[i] * d[i + 1];
    }
    return d;
}

double p1_dispersion(std::size_t k, double h) {
    const double c = std::cos(static_cast<double>(k) * pi * h);
    return 6.0 / (h * h) * (1.0 - c) / (2.0 + c);
}

FemSpace::FemSpace(std::size_t elements)
    : h_(1.0 / static_cast<double>(elements)), n_(elements - 1) {
    mass_.diag.assign(n_, 2.0 * h_ / 3.0);
    mass_.off.assign(n_ > 0 ? n_ - 1 : 0, h_ / 6.0);
    stiffness_.diag.assign(n_, 2.0 / h_);
    stiffness_.off.assign(n_ > 0 ? n_ - 1 : 0, -1.0 / h_);
    mu_.resize(n_);
    scale_.resize(n_);
    mass_factor_.resize(n_);
    for (std::size_t k = 1; k <= n_; ++k) {
        const double c = std::cos(static_cast<double>(k) * pi * h_);
        mu_[k - 1] = p1_dispersion(k, h_);
        scale_[k - 1] = std::sqrt(6.0 / (2.0 + c));
        mass_factor_[k - 1] = h_ / 3.0 * (2.0 + c);
    }
}

std::shared_ptr<const FemSpace> FemSpace::assemble(double h) {
    if (!(h > 0.0)) {
        throw std::invalid_argument("FemSpace::assemble: h must be positive");
    }
    const double inv = 1.0 / h;
    const double rounded = std::round(inv);
    if (std::abs(inv - rounded) > 1e-9 * rounded || rounded < 2.0) {
        throw std::invalid_argument("FemSpace::assemble: 1/h must be an integer >= 2, got h=" +
                                    std::to_string(h));
    }
    return std::shared_ptr<const FemSpace>(new FemSpace(static_cast<std::size_t>(rounded)));
}

std::vector<double> FemSpace::eigenvector(std::size_t k) const {
    if (k == 0 || k > n_) {
        throw std::invalid_argument("FemSpace::eigenvector: index out of range");
    }
    std::vector<double> w(n_);
    for (std::size_t j = 0; j < n_; ++j) {
        w[j] = scale_[k - 1] * std::sin(static_cast<double>(k) * pi * node(j));
    }
    return w;
}

std::vector<double> FemSpace::to_modal(std::span<const double> nodal) const {
    if (nodal.size() != n_) {
        throw std::invalid_argument("FemSpace::to_modal: size mismatch");
    }
    std::vector<double> s = sine_transform(n_).apply(nodal);
    for (std::size_t k = 0; k < n_; ++k) {
        s[k] *= scale_[k] * mass_factor_[k];
    }
    return s;
}

std::vector<double> FemSpace::from_modal(std::span<const double> modal) const {
    if (modal.size() != n_) {
        throw std::invalid_argument("FemSpace::from_modal: size mismatch");
    }
    std::vector<double> c(n_);
    for (std::size_t k = 0; k < n_; ++k) {
        c[k] = modal[k] * scale_[k];
    }
    return sine_transform(n_).apply(c);
}

double FemSpace::l2_inner(std::span<const double> a, std::span<const double> b) const {
    if (a.size() != n_ || b.size() != n_) {
        throw std::invalid_argument("FemSpace::l2_inner: size mismatch");
    }
    const std::vector<double> mb = mass_.apply(b);
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
        s += a[j] * mb[j];
    }
    return s;
}

double FemSpace::l2_norm(std::span<const double> u) const {
    return std::sqrt(std::max(0.0, l2_inner(u, u)));
}

double FemSpace::h1_seminorm(std::span<const double> u) const {
    const std::vector<double> ku = stiffness_.apply(u);
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
        s += u[j] * ku[j];
    }
    return std::sqrt(std::max(0.0, s));
}

double FemSpace::hat_overlap(std::size_t m) const {
    const double k = static_cast<double>(m) * pi;
    return 2.0 * (1.0 - std::cos(k * h_)) / (k * k * h_);
}

std::vector<double> FemSpace::sine_coefficients(std::span<const double> nodal, std::size_t modes) const {
    if (nodal.size() != n_) {
        throw std::invalid_argument("FemSpace::sine_coefficients: size mismatch");
    }
    // sum_j u_j sin(m pi x_j) is odd and 2(n+1)-periodic in m.
    const std::vector<double> s = sine_transform(n_).apply(nodal);
    const std::size_t period = 2 * (n_ + 1);
    std::vector<double> c(modes, 0.0);
    for (std::size_t m = 1; m <= modes; ++m) {
        const std::size_t r = m % period;
        double sm = 0.0;
        if (r >= 1 && r <= n_) {
            sm = s[r - 1];
        } else if (r >= n_ + 2) {
            sm = -s[period - r - 1];
        }
        c[m - 1] = std::sqrt(2.0) * hat_overlap(m) * sm;
    }
    return c;
}

namespace {

// Folds sum_m p_m sigma_m sin(m pi x_j) onto the n resolvable sine vectors.
std::vector<double> fold_modes(const FemSpace& space, std::span<const double> sine_coeffs) {
    const std::size_t n = space.n_interior();
    const std::size_t period = 2 * (n + 1);
    std::vector<double> q(n, 0.0);
    for (std::size_t m = 1; m <= sine_coeffs.size(); ++m) {
        const double p = sine_coeffs[m - 1];
        if (p == 0.0) {
            continue;
        }
        const std::size_t r = m % period;
        if (r >= 1 && r <= n) {
            q[r - 1] += p * space.hat_overlap(m);
        } else if (r >= n + 2) {
            q[period - r - 1] -= p * space.hat_overlap(m);
        }
    }
    return q;
}

}  // namespace

std::vector<double> FemSpace::load_vector(std::span<const double> sine_coeffs) const {
    std::vector<double> b = sine_transform(n_).apply(fold_modes(*this, sine_coeffs));
    for (double& v : b) {
        v *= std::sqrt(2.0);
    }
    return b;
}

std::vector<double> FemSpace::project_modal(std::span<const double> sine_coeffs) const {
    std::vector<double> d = fold_modes(*this, sine_coeffs);
    const double factor = std::sqrt(2.0) * 0.5 * static_cast<double>(n_ + 1);
    for (std::size_t k = 0; k < n_; ++k) {
        d[k] *= scale_[k] * factor;
    }
    return d;
}

double FemSpace::evaluate(std::span<const double> nodal, double x) const {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error("FemSpace::evaluate: x outside [0, 1]");
    }
    const double pos = x / h_;
    std::size_t e = static_cast<std::size_t>(std::floor(pos));
    if (e > n_) {
        e = n_;
    }
    const double xi = pos - static_cast<double>(e);
    const double left = e >= 1 ? nodal[e - 1] : 0.0;
    const double right = e < n_ ? nodal[e] : 0.0;
    return (1.0 - xi) * left + xi * right;
}

void FemSpace::to_grid(std::span<const double> nodal, const CollocationGrid& grid,
                       std::span<double> values) const {
    if (values.size() != grid.points() || nodal.size() != n_) {
        throw std::invalid_argument("FemSpace::to_grid: size mismatch");
    }
    const std::size_t per_element = grid.intervals() / (n_ + 1);
    if (per_element * (n_ + 1) == grid.intervals()) {
        // Grid refines the mesh: exact barycentric weights, no floor().
        const double inv = 1.0 / static_cast<double>(per_element);
        for (std::size_t q = 0; q < values.size(); ++q) {
            const std::size_t idx = q + 1;
            const std::size_t e = idx / per_element;
            const double xi = static_cast<double>(idx % per_element) * inv;
            const double left = e >= 1 ? nodal[e - 1] : 0.0;
            const double right = e < n_ ? nodal[e] : 0.0;
            values[q] = (1.0 - xi) * left + xi * right;
        }
        return;
    }
    for (std::size_t q = 0; q < values.size(); ++q) {
        values[q] = evaluate(nodal, grid.point(q));
    }
}

FemField::FemField(FemSpacePtr s, std::vector<double> values) : space(std::move(s)), nodal(std::move(values)) {
    if (nodal.size() != space->n_interior()) {
        throw std::invalid_argument("FemField: nodal vector does not match space");
    }
}

NumericEigenpairs numeric_generalized_eigenpairs(const FemSpace& space) {
    const auto n = static_cast<Eigen::Index>(space.n_interior());
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i, i) = space.stiffness().diag[i];
        m(i, i) = space.mass().diag[i];
        if (i + 1 < n) {
            k(i, i + 1) = k(i + 1, i) = space.stiffness().off[i];
            m(i, i + 1) = m(i + 1, i) = space.mass().off[i];
        }
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(k, m);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("numeric_generalized_eigenpairs: solver failed");
    }
    NumericEigenpairs out;
    out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    out.vectors.resize(static_cast<std::size_t>(n));
    for (Eigen::Index c = 0; c < n; ++c) {
        const Eigen::VectorXd col = solver.eigenvectors().col(c);
        out.vectors[static_cast<std::size_t>(c)].assign(col.data(), col.data() + n);
    }
    return out;
}

FemField interpolate(std::function<double(double)> v, FemSpacePtr space) {
    FemField u(space);
    for (std::size_t j = 0; j < space->n_interior(); ++j) {
        u.nodal[j] = v(space->node(j));
    }
    return u;
}

FemField l2_project(std::function<double(double)> v, FemSpacePtr space) {
    const std::vector<double> b = hat_moments(v, *space, false);
    return FemField(space, space->mass().solve(b));
}

FemField l2_project(const SpectralField& v, FemSpacePtr space) {
    return l2_project([&v](double x) { return v.evaluate(x); }, std::move(space));
}

FemField l2_project_exact(const SpectralField& v, FemSpacePtr space) {
    const std::vector<double> modal = space->project_modal(v.coeffs);
    std::vector<double> nodal = space->from_modal(modal);
    return FemField(std::move(space), std::move(nodal));
}

FemField ritz_project(std::function<double(double)> v_prime, FemSpacePtr space) {
    const std::vector<double> b = hat_moments(v_prime, *space, true);
    return FemField(space, space->stiffness().solve(b));
}

FemField ritz_project(const SpectralField& v, FemSpacePtr space) {
    auto derivative = [&v](double x) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.modes(); ++i) {
            const double k = static_cast<double>(i + 1) * pi;
            s += v[i] * k * std::cos(k * x);
        }
        return std::sqrt(2.0) * s;
    };
    return ritz_project(derivative, std::move(space));
}

FemField discrete_laplacian_apply(const FemField& u) {
    const std::vector<double> ku = u.space->stiffness().apply(u.nodal);
    return FemField(u.space, u.space->mass().solve(ku));
}

FemField discrete_semigroup_apply(double t, const FemField& u) {
    if (t < 0.0) {
        throw std::domain_error("discrete_semigroup_apply: negative time");
    }
    std::vector<double> modal = u.space->to_modal(u.nodal);
    const auto mu = u.space->eigenvalues();
    for (std::size_t k = 0; k < modal.size(); ++k) {
        modal[k] *= decay_factor(mu[k], t);
    }
    return FemField(u.space, u.space->from_modal(modal));
}

FemField discrete_fractional_apply(double beta, const FemField& u) {
    if (beta == 0.0) {
        return u;
    }
    std::vector<double> modal = u.space->to_modal(u.nodal);
    const auto mu = u.space->eigenvalues();
    for (std::size_t k = 0; k < modal.size(); ++k) {
        modal[k] *= std::pow(mu[k], beta);
    }
    return FemField(u.space, u.space->from_modal(modal));
}

double projection_error_norm(double s, double r, const FemSpace& space, std::size_t cutoff) {
    if (s < 0.0 || s > 1.0 || r < s || r > 2.0) {
        throw std::domain_error("projection_error_norm: need 0 <= s <= 1 and s <= r <= 2");
    }
    if (cutoff == 0) {
        return 0.0;
    }
    const std::size_t n = space.n_interior();
    // Modal coefficients of P_h phi_i for each column.
    std::vector<std::vector<double>> proj(cutoff);
    for (std::size_t i = 1; i <= cutoff; ++i) {
        std::vector<double> unit(i, 0.0);
        unit[i - 1] = 1.0;
        proj[i - 1] = space.project_modal(unit);
    }
    std::vector<std::vector<double>> gram(cutoff, std::vector<double>(cutoff, 0.0));
    if (s == 0.0) {
        // (I - P_h) is an orthogonal projector: ((I-P)phi_i, (I-P)phi_k) = delta_ik - (P phi_i, P phi_k).
        for (std::size_t i = 0; i < cutoff; ++i) {
            const double wi = std::pow(eigenvalue(i + 1), -0.5 * r);
            for (std::size_t k = 0; k <= i; ++k) {
                const double wk = std::pow(eigenvalue(k + 1), -0.5 * r);
                double pp = 0.0;
                for (std::size_t q = 0; q < n; ++q) {
                    pp += proj[i][q] * proj[k][q];
                }
                const double g = wi * wk * ((i == k ? 1.0 : 0.0) - pp);
                gram[i][k] = gram[k][i] = g;
            }
        }
    } else {
        // Truncated sine series of A^{s/2}(I - P_h)phi_i; P1 coefficients decay like m^-2.
        const std::size_t series = std::max<std::size_t>(64 * (n + 1), 4 * cutoff);
        std::vector<std::vector<double>> cols(cutoff);
        for (std::size_t i = 0; i < cutoff; ++i) {
            const std::vector<double> nodal = space.from_modal(proj[i]);
            std::vector<double> c = space.sine_coefficients(nodal, series);
            const double wi = std::pow(eigenvalue(i + 1), -0.5 * r);
            for (std::size_t m = 0; m < series; ++m) {
                const double delta = (m == i) ? 1.0 : 0.0;
                c[m] = std::pow(eigenvalue(m + 1), 0.5 * s) * (delta - c[m]) * wi;
            }
            cols[i] = std::move(c);
        }
        for (std::size_t i = 0; i < cutoff; ++i) {
            for (std::size_t k = 0; k <= i; ++k) {
                double g = 0.0;
                for (std::size_t m = 0; m < series; ++m) {
                    g += cols[i][m] * cols[k][m];
                }
                gram[i][k] = gram[k][i] = g;
            }
        }
    }
    return std::sqrt(std::max(0.0, largest_eigenvalue_psd(gram)));
}

FemField prolongate(const FemField& coarse, FemSpacePtr fine) {
    const std::size_t ratio = fine->elements() / coarse.space->elements();
    if (ratio * coarse.space->elements() != fine->elements()) {
        throw std::invalid_argument("prolongate: meshes are not nested");
    }
    FemField out(fine);
    for (std::size_t j = 0; j < fine->n_interior(); ++j) {
        out.nodal[j] = coarse.space->evaluate(coarse.nodal, fine->node(j));
    }
    return out;
}

}  // namespace sacfem
