#include "sacfem/sine_transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace sacfem {

namespace {

// FFTW's planner is not reentrant; execution with fftw_execute_r2r is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

SineTransform::SineTransform(std::size_t n) : n_(n) {
    if (n == 0) {
        throw std::invalid_argument("SineTransform: length must be positive");
    }
    std::vector<double> in(n), out(n);
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_r2r_1d(static_cast<int>(n), in.data(), out.data(), FFTW_RODFT00,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan_ == nullptr) {
        throw std::runtime_error("SineTransform: FFTW planning failed for n=" + std::to_string(n));
    }
}

SineTransform::~SineTransform() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void SineTransform::apply(std::span<const double> in, std::span<double> out) const {
    if (in.size() != n_ || out.size() != n_) {
        throw std::invalid_argument("SineTransform::apply: length mismatch");
    }
    // The plan is out-of-place; route through scratch so callers may alias.
    thread_local std::vector<double> scratch_in;
    thread_local std::vector<double> scratch_out;
    scratch_in.assign(in.begin(), in.end());
    scratch_out.resize(n_);
    fftw_execute_r2r(static_cast<fftw_plan>(plan_), scratch_in.data(), scratch_out.data());
    for (std::size_t k = 0; k < n_; ++k) {
        out[k] = 0.5 * scratch_out[k];
    }
}

std::vector<double> SineTransform::apply(std::span<const double> in) const {
    std::vector<double> out(n_);
    apply(in, out);
    return out;
}

const SineTransform& sine_transform(std::size_t n) {
    static std::mutex cache_mutex;
    static std::map<std::size_t, std::unique_ptr<SineTransform>> cache;
    std::lock_guard lock(cache_mutex);
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<SineTransform>(n);
    }
    return *slot;
}

CollocationGrid::CollocationGrid(std::size_t intervals) : intervals_(intervals) {
    if (intervals < 2) {
        throw std::invalid_argument("CollocationGrid: need at least 2 intervals");
    }
    dst_ = &sine_transform(intervals - 1);
}

void CollocationGrid::evaluate(std::span<const double> coeffs, std::span<double> values) const {
    const std::size_t n = points();
    if (coeffs.size() > n) {
        throw std::invalid_argument("CollocationGrid::evaluate: more modes than grid points");
    }
    if (values.size() != n) {
        throw std::invalid_argument("CollocationGrid::evaluate: output length mismatch");
    }
    thread_local std::vector<double> padded;
    padded.assign(n, 0.0);
    std::copy(coeffs.begin(), coeffs.end(), padded.begin());
    dst_->apply(padded, values);
    const double scale = std::sqrt(2.0);
    for (double& v : values) {
        v *= scale;
    }
}

std::vector<double> CollocationGrid::evaluate(std::span<const double> coeffs) const {
    std::vector<double> values(points());
    evaluate(coeffs, values);
    return values;
}

void CollocationGrid::analyze(std::span<const double> values, std::span<double> coeffs) const {
    const std::size_t n = points();
    if (values.size() != n || coeffs.size() != n) {
        throw std::invalid_argument("CollocationGrid::analyze: length mismatch");
    }
    dst_->apply(values, coeffs);
    const double scale = std::sqrt(2.0) / static_cast<double>(intervals_);
    for (double& c : coeffs) {
        c *= scale;
    }
}

std::vector<double> CollocationGrid::analyze(std::span<const double> values) const {
    std::vector<double> coeffs(points());
    analyze(values, coeffs);
    return coeffs;
}

}  // namespace sacfem
