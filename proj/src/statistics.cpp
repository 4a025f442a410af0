#include "sacfem/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sacfem {

double tree_sum(std::span<const double> values) {
    if (values.empty()) {
        return 0.0;
    }
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) {
            s += v;
        }
        return s;
    }
    const std::size_t half = values.size() / 2;
    return tree_sum(values.first(half)) + tree_sum(values.subspan(half));
}

SampleSummary summarize(std::span<const double> values) {
    SampleSummary s;
    s.count = values.size();
    if (values.empty()) {
        return s;
    }
    s.mean = tree_sum(values) / static_cast<double>(s.count);
    if (s.count > 1) {
        std::vector<double> dev(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double d = values[i] - s.mean;
            dev[i] = d * d;
        }
        s.variance = tree_sum(dev) / static_cast<double>(s.count - 1);
        s.standard_error = std::sqrt(s.variance / static_cast<double>(s.count));
        s.halfwidth = kNormalQuantile975 * s.standard_error;
    }
    return s;
}

Estimate rms_estimate(std::span<const double> squared) {
    const SampleSummary s = summarize(squared);
    Estimate e;
    e.samples = s.count;
    e.value = std::sqrt(std::max(0.0, s.mean));
    e.halfwidth = e.value > 0.0 ? s.halfwidth / (2.0 * e.value) : 0.0;
    return e;
}

Estimate abs_mean_estimate(std::span<const double> differences) {
    const SampleSummary s = summarize(differences);
    return {std::abs(s.mean), s.halfwidth, s.count};
}

OrderFit fit_order(std::span<const double> h, std::span<const double> e) {
    if (h.size() != e.size()) {
        throw std::invalid_argument("fit_order: h and e differ in length");
    }
    if (h.size() < 2) {
        throw std::invalid_argument("fit_order: need at least two points");
    }
    const std::size_t n = h.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(h[i] > 0.0) || !(e[i] > 0.0)) {
            throw std::invalid_argument("fit_order: h and e must be positive");
        }
        lx[i] = std::log(h[i]);
        ly[i] = std::log(e[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("fit_order: all h equal");
    }
    OrderFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / static_cast<double>(n));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        fit.pairwise.push_back(std::log(e[i] / e[i + 1]) / std::log(h[i] / h[i + 1]));
    }
    return fit;
}

}  // namespace sacfem
