#include "sacfem/noise.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace sacfem;

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("keyed normals are deterministic and standard") {
    CHECK(keyed_normal(1, 2, 3, 4) == keyed_normal(1, 2, 3, 4));
    CHECK(keyed_normal(1, 2, 3, 4) != keyed_normal(1, 2, 3, 5));
    CHECK(keyed_normal(1, 2, 3, 4) != keyed_normal(2, 2, 3, 4));
    const std::size_t n = 40000;
    double s = 0.0, s2 = 0.0, s4 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = keyed_normal(7, i / 100, i % 100, 3);
        s += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(double(n)));
    CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(s4 / n - 3.0) < 4.0 * std::sqrt(96.0 / n));
}

TEST_CASE("increments nest over sub-intervals") {
    const NoisePath path(3, 0, 16, 0.01, 100);
    testing::Gen gen(41);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t a = gen.index(0, 100), b = gen.index(0, 100), c = gen.index(0, 100);
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        const SpectralField ac = path.increment(a, c);
        const SpectralField ab = path.increment(a, b);
        const SpectralField bc = path.increment(b, c);
        for (std::size_t m = 0; m < 16; ++m) {
            CHECK(std::abs(ac[m] - (ab[m] + bc[m])) < 1e-14);
        }
    }
    CHECK(path.increment(5, 5).norm() == 0.0);
    CHECK(path.increment(0, 1)[2] == path.fine_increment(0, 2));
    CHECK(path.increment(0, 10, 4).modes() == 4);
    CHECK_THROWS(path.increment(0, 101));
    CHECK_THROWS(path.increment(5, 4));
}

TEST_CASE("lazy and materialized paths are bit-identical") {
    const NoisePath a(9, 4, 12, 0.002, 50, true);
    const NoisePath b(9, 4, 12, 0.002, 50, false);
    for (std::size_t k = 0; k < 50; ++k) {
        for (std::size_t m = 0; m < 12; ++m) {
            REQUIRE(a.fine_increment(k, m) == b.fine_increment(k, m));
        }
    }
    CHECK(a.increment(3, 47).coeffs == b.increment(3, 47).coeffs);
}

TEST_CASE("fine increments have variance dt and are independent across modes and paths") {
    const double dt = 0.004;
    const std::size_t paths = 2000;
    double s11 = 0.0, s12 = 0.0, cross = 0.0;
    for (std::size_t p = 0; p < paths; ++p) {
        const NoisePath a(5, p, 2, dt, 1);
        const NoisePath b(5, p + paths, 2, dt, 1);
        s11 += a.fine_increment(0, 0) * a.fine_increment(0, 0);
        s12 += a.fine_increment(0, 0) * a.fine_increment(0, 1);
        cross += a.fine_increment(0, 0) * b.fine_increment(0, 0);
    }
    const double n = static_cast<double>(paths);
    CHECK(std::abs(s11 / n - dt) < 4.0 * dt * std::sqrt(2.0 / n));
    CHECK(std::abs(s12 / n) < 4.0 * dt / std::sqrt(n));
    CHECK(std::abs(cross / n) < 4.0 * dt / std::sqrt(n));
}

TEST_CASE("mode restriction") {
    SpectralField w(std::vector<double>{1.0, 2.0, 3.0});
    CHECK(restrict_modes(w, 3).coeffs == w.coeffs);
    CHECK(restrict_modes(w, 0).modes() == 0);
    CHECK(restrict_modes(w, 2).norm() <= w.norm());
    CHECK_THROWS(restrict_modes(w, 4));
}

TEST_CASE("raw dump is little-endian float64 in step-major order") {
    const NoisePath path(1, 2, 3, 0.1, 4);
    const auto file = std::filesystem::temp_directory_path() / "sacfem_noise_dump_test.bin";
    path.dump(file);
    std::ifstream in(file, std::ios::binary);
    std::vector<double> data(12);
    in.read(reinterpret_cast<char*>(data.data()), 12 * sizeof(double));
    CHECK(in.gcount() == 12 * static_cast<std::streamsize>(sizeof(double)));
    CHECK(std::filesystem::file_size(file) == 12 * sizeof(double));
    CHECK(data[1 * 3 + 2] == path.fine_increment(1, 2));
    std::filesystem::remove(file);
}
