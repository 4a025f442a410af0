#pragma once

// Truncated space-time white noise W(t) = sum_{j <= J} beta_j(t) phi_j.
//
// Every Brownian increment is a pure function of (seed, trajectory, fine step,
// mode) through the Philox4x32-10 counter-based generator, so paths are
// reproducible regardless of which thread generates them or in what order.

#include "sacfem/spectral.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace sacfem {

/// Philox4x32-10 block: 4 x 32-bit outputs for a 128-bit counter and 64-bit key.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Standard normal keyed by (seed, trajectory, step, mode) via Box-Muller.
double keyed_normal(std::uint64_t seed, std::uint64_t trajectory, std::uint64_t step, std::uint64_t mode);

class NoisePath {
public:
    /// `fine_steps` increments of length dt_fine on modes 1..modes. With
    /// `materialize`, all draws are generated up front (steps x modes doubles).
    NoisePath(std::uint64_t seed, std::uint64_t trajectory, std::size_t modes, double dt_fine,
              std::size_t fine_steps, bool materialize = true);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t trajectory() const { return trajectory_; }
    std::size_t modes() const { return modes_; }
    double dt_fine() const { return dt_fine_; }
    std::size_t fine_steps() const { return fine_steps_; }

    /// Fine increment of mode (0-based) over step k; distributed N(0, dt_fine).
    double fine_increment(std::size_t step, std::size_t mode) const;

    /// W(k_end dt) - W(k_start dt), restricted to the first `modes` modes
    /// (all modes when 0). Empty range gives the zero field.
    SpectralField increment(std::size_t k_start, std::size_t k_end, std::size_t modes = 0) const;

    /// Raw fine increments as little-endian float64, row-major [step][mode].
    void dump(const std::filesystem::path& file) const;

private:
    std::uint64_t seed_;
    std::uint64_t trajectory_;
    std::size_t modes_;
    double dt_fine_;
    double sqrt_dt_;
    std::size_t fine_steps_;
    std::vector<double> cache_;  // empty unless materialized
};

/// First J_coarse coefficients of w.
SpectralField restrict_modes(const SpectralField& w, std::size_t j_coarse);

}  // namespace sacfem
