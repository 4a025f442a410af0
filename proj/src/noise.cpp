#include "sacfem/noise.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace sacfem {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// Uniform in (0, 1) from 64 random bits, 53-bit resolution.
inline double open_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32 | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kPhiloxW0;
            k[1] += kPhiloxW1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, c[0], hi0, lo0);
        mulhilo(kPhiloxM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
}

namespace {

// One Philox block yields the Box-Muller pair for modes 2p and 2p+1.
std::array<double, 2> keyed_normal_pair(std::uint64_t seed, std::uint64_t trajectory, std::uint64_t step,
                                        std::uint64_t pair) {
    if (step > 0xFFFFFFFFull) {
        throw std::out_of_range("keyed_normal: step index exceeds 32 bits");
    }
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(pair), static_cast<std::uint32_t>(step),
        static_cast<std::uint32_t>(trajectory), static_cast<std::uint32_t>(trajectory >> 32) ^
                                                    static_cast<std::uint32_t>(pair >> 32)};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    const auto r = philox4x32(counter, key);
    const double u1 = open_unit(r[0], r[1]);
    const double u2 = open_unit(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace

double keyed_normal(std::uint64_t seed, std::uint64_t trajectory, std::uint64_t step, std::uint64_t mode) {
    return keyed_normal_pair(seed, trajectory, step, mode / 2)[mode % 2];
}

NoisePath::NoisePath(std::uint64_t seed, std::uint64_t trajectory, std::size_t modes, double dt_fine,
                     std::size_t fine_steps, bool materialize)
    : seed_(seed),
      trajectory_(trajectory),
      modes_(modes),
      dt_fine_(dt_fine),
      sqrt_dt_(std::sqrt(dt_fine)),
      fine_steps_(fine_steps) {
    if (!(dt_fine > 0.0)) {
        throw std::invalid_argument("NoisePath: dt_fine must be positive");
    }
    if (materialize) {
        cache_.resize(fine_steps_ * modes_);
        for (std::size_t k = 0; k < fine_steps_; ++k) {
            for (std::size_t m = 0; m < modes_; m += 2) {
                const auto z = keyed_normal_pair(seed_, trajectory_, k, m / 2);
                cache_[k * modes_ + m] = sqrt_dt_ * z[0];
                if (m + 1 < modes_) {
                    cache_[k * modes_ + m + 1] = sqrt_dt_ * z[1];
                }
            }
        }
    }
}

double NoisePath::fine_increment(std::size_t step, std::size_t mode) const {
    if (step >= fine_steps_ || mode >= modes_) {
        throw std::out_of_range("NoisePath::fine_increment: index out of range");
    }
    if (!cache_.empty()) {
        return cache_[step * modes_ + mode];
    }
    return sqrt_dt_ * keyed_normal(seed_, trajectory_, step, mode);
}

SpectralField NoisePath::increment(std::size_t k_start, std::size_t k_end, std::size_t modes) const {
    if (k_start > k_end || k_end > fine_steps_) {
        throw std::out_of_range("NoisePath::increment: invalid step range");
    }
    if (modes == 0) {
        modes = modes_;
    }
    if (modes > modes_) {
        throw std::invalid_argument("NoisePath::increment: more modes requested than generated");
    }
    SpectralField out(modes);
    for (std::size_t k = k_start; k < k_end; ++k) {
        if (!cache_.empty()) {
            const double* row = cache_.data() + k * modes_;
            for (std::size_t m = 0; m < modes; ++m) {
                out[m] += row[m];
            }
        } else {
            for (std::size_t m = 0; m < modes; ++m) {
                out[m] += sqrt_dt_ * keyed_normal(seed_, trajectory_, k, m);
            }
        }
    }
    return out;
}

void NoisePath::dump(const std::filesystem::path& file) const {
    static_assert(std::endian::native == std::endian::little, "dump assumes a little-endian host");
    std::ofstream out(file, std::ios::binary);
    if (!out) {
        throw std::runtime_error("NoisePath::dump: cannot open " + file.string());
    }
    for (std::size_t k = 0; k < fine_steps_; ++k) {
        for (std::size_t m = 0; m < modes_; ++m) {
            const double v = fine_increment(k, m);
            out.write(reinterpret_cast<const char*>(&v), sizeof v);
        }
    }
    if (!out) {
        throw std::runtime_error("NoisePath::dump: write failed for " + file.string());
    }
}

SpectralField restrict_modes(const SpectralField& w, std::size_t j_coarse) {
    if (j_coarse > w.modes()) {
        throw std::invalid_argument("restrict_modes: J_coarse exceeds available modes");
    }
    return resize_modes(w, j_coarse);
}

}  // namespace sacfem
