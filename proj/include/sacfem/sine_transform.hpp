#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace sacfem {

/// Unnormalized type-I discrete sine transform of length n:
///   out[k] = sum_j in[j] * sin(pi (j+1)(k+1) / (n+1)).
/// The transform is its own inverse up to the factor 2/(n+1).
/// Instances are immutable and may be shared between threads.
class SineTransform {
public:
    explicit SineTransform(std::size_t n);
    ~SineTransform();
    SineTransform(const SineTransform&) = delete;
    SineTransform& operator=(const SineTransform&) = delete;

    std::size_t size() const { return n_; }

    /// `in` and `out` must both have length size(); they may alias.
    void apply(std::span<const double> in, std::span<double> out) const;

    std::vector<double> apply(std::span<const double> in) const;

private:
    std::size_t n_;
    void* plan_ = nullptr;
};

/// Shared, lazily planned transform for length n (thread-safe).
const SineTransform& sine_transform(std::size_t n);

/// Uniform collocation grid x_q = q / N, q = 1..N-1, on (0, 1) with the
/// orthonormal Dirichlet basis phi_m(x) = sqrt(2) sin(m pi x).
///
/// evaluate() synthesizes grid values from sine coefficients; analyze() is
/// the trapezoid-rule inverse, exact for modes m < N.
class CollocationGrid {
public:
    explicit CollocationGrid(std::size_t intervals);

    std::size_t intervals() const { return intervals_; }
    std::size_t points() const { return intervals_ - 1; }
    double spacing() const { return 1.0 / static_cast<double>(intervals_); }
    double point(std::size_t q) const { return static_cast<double>(q + 1) * spacing(); }

    /// Coefficients beyond points() are an error; fewer are zero-padded.
    void evaluate(std::span<const double> coeffs, std::span<double> values) const;
    std::vector<double> evaluate(std::span<const double> coeffs) const;

    /// Returns points() coefficients.
    void analyze(std::span<const double> values, std::span<double> coeffs) const;
    std::vector<double> analyze(std::span<const double> values) const;

private:
    std::size_t intervals_;
    const SineTransform* dst_;
};

}  // namespace sacfem
