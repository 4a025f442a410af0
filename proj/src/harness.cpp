#include "sacfem/harness.hpp"

#include "sacfem/noise.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

namespace sacfem {

namespace {

bool is_integral(double x) {
    const double r = std::round(x);
    return r >= 1.0 && std::abs(x - r) <= 1e-9 * r;
}

std::size_t as_count(double x) { return static_cast<std::size_t>(std::round(x)); }

}  // namespace

StudyConfig StudyConfig::desk() { return StudyConfig{}; }

StudyConfig StudyConfig::paper() {
    StudyConfig c;
    c.profile = "paper";
    c.kappa = 1.0 / 1000.0;
    c.h_ladder = {1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0};
    c.h_reference = 1.0 / 4096.0;
    c.M = 20000;
    return c;
}

StudyConfig StudyConfig::for_profile(const std::string& name) {
    if (name == "desk") {
        return desk();
    }
    if (name == "paper") {
        return paper();
    }
    throw ConfigError("unknown profile '" + name + "' (expected desk or paper)");
}

std::size_t StudyConfig::resolved_noise_modes() const {
    if (noise_modes > 0) {
        return noise_modes;
    }
    return as_count(1.0 / h_reference) - 1;
}

std::size_t StudyConfig::steps() const { return as_count(T / kappa); }

void StudyConfig::validate() const {
    if (!(T > 0.0)) {
        throw ConfigError("T must be positive");
    }
    if (!(kappa > 0.0) || !(kappa < 1.0)) {
        throw ConfigError("kappa must lie in (0, 1)");
    }
    if (!is_integral(T / kappa)) {
        throw ConfigError("kappa must divide T");
    }
    if (!(h_reference > 0.0) || !is_integral(1.0 / h_reference) || as_count(1.0 / h_reference) < 2) {
        throw ConfigError("1/h_reference must be an integer >= 2");
    }
    for (double h : h_ladder) {
        if (!(h > 0.0) || !is_integral(1.0 / h) || as_count(1.0 / h) < 2) {
            throw ConfigError("every 1/h in h_ladder must be an integer >= 2");
        }
        if (h < h_reference) {
            throw ConfigError("h_reference must not exceed min(h_ladder)");
        }
        if (as_count(1.0 / h_reference) % as_count(1.0 / h) != 0) {
            throw ConfigError("ladder meshes must nest in the reference mesh");
        }
    }
    for (std::size_t i = 1; i < h_ladder.size(); ++i) {
        if (!(h_ladder[i] < h_ladder[i - 1])) {
            throw ConfigError("h_ladder must be strictly decreasing");
        }
    }
    if (M < 2) {
        throw ConfigError("M must be at least 2");
    }
    if (workers < 1) {
        throw ConfigError("workers must be at least 1");
    }
    if (observable != "sin_l2norm") {
        throw ConfigError("unknown observable '" + observable + "'");
    }
    if (!(max_abort_fraction >= 0.0) || max_abort_fraction > 1.0) {
        throw ConfigError("max_abort_fraction must lie in [0, 1]");
    }
}

double ErrorReport::abort_fraction() const {
    double worst = 0.0;
    if (trajectories == 0) {
        return worst;
    }
    for (const ErrorRow& r : rows) {
        worst = std::max(worst, static_cast<double>(r.aborts) / static_cast<double>(trajectories));
    }
    return worst;
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn,
                  const ProgressFn& progress) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::mutex progress_mutex;
    auto body = [&] {
        while (!failed.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                failed = true;
                return;
            }
            const std::size_t d = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(d, count);
            }
        }
    };
    if (workers == 1) {
        body();
    } else {
        std::vector<std::jthread> threads;
        threads.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back(body);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

double observable_eval(const std::string& tag, const Discretization& space, std::span<const double> x) {
    if (tag == "sin_l2norm") {
        return std::sin(space.l2_norm(x));
    }
    throw std::invalid_argument("unknown observable '" + tag + "'");
}

void attach_orders(ErrorReport& report) {
    const std::size_t n = report.rows.size();
    std::vector<double> h, es, ew;
    for (const ErrorRow& r : report.rows) {
        h.push_back(r.h);
        es.push_back(r.strong.value);
        ew.push_back(r.weak.value);
    }
    auto positive = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
    };
    report.strong_fit.reset();
    report.weak_fit.reset();
    for (ErrorRow& r : report.rows) {
        r.strong_order_pairwise = std::numeric_limits<double>::quiet_NaN();
        r.weak_order_pairwise = std::numeric_limits<double>::quiet_NaN();
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double lh = std::log(h[i - 1] / h[i]);
        if (es[i - 1] > 0.0 && es[i] > 0.0) {
            report.rows[i].strong_order_pairwise = std::log(es[i - 1] / es[i]) / lh;
        }
        if (ew[i - 1] > 0.0 && ew[i] > 0.0) {
            report.rows[i].weak_order_pairwise = std::log(ew[i - 1] / ew[i]) / lh;
        }
    }
    if (n >= 2 && positive(es)) {
        report.strong_fit = fit_order(h, es);
    }
    if (n >= 2 && positive(ew)) {
        report.weak_fit = fit_order(h, ew);
    }
}

ErrorReport run_study(const StudyConfig& cfg, const ProgressFn& progress) {
    cfg.validate();
    const std::size_t modes = cfg.resolved_noise_modes();
    const std::size_t steps = cfg.steps();
    const std::size_t rows = cfg.h_ladder.size();

    auto make_config = [&](double h) {
        SchemeConfig sc;
        sc.tau = cfg.kappa;
        sc.T = cfg.T;
        sc.scheme = cfg.scheme;
        sc.diffusion = cfg.diffusion;
        sc.initial = InitialData::hat();
        sc.space = std::make_shared<FemDiscretization>(FemSpace::assemble(h), modes);
        return sc;
    };
    const SchemeConfig reference = make_config(cfg.h_reference);
    const auto& ref_space = static_cast<const FemDiscretization&>(*reference.space);
    std::vector<SchemeConfig> ladder;
    for (double h : cfg.h_ladder) {
        ladder.push_back(make_config(h));
    }

    struct Sample {
        bool reference_aborted = false;
        std::vector<char> aborted;
        std::vector<double> squared;
        std::vector<double> difference;
    };
    std::vector<Sample> samples(cfg.M);

    parallel_for(
        cfg.M, cfg.workers,
        [&](std::size_t m) {
            const NoisePath path(cfg.seed, m, modes, cfg.kappa, steps);
            Sample& s = samples[m];
            s.aborted.assign(rows, 0);
            s.squared.assign(rows, 0.0);
            s.difference.assign(rows, 0.0);
            const TrajectoryResult ref = run_trajectory(reference, path);
            if (ref.aborted) {
                s.reference_aborted = true;
                return;
            }
            const double phi_ref = observable_eval(cfg.observable, ref_space, ref.final_field);
            for (std::size_t r = 0; r < rows; ++r) {
                const TrajectoryResult run = run_trajectory(ladder[r], path);
                if (run.aborted) {
                    s.aborted[r] = 1;
                    continue;
                }
                const auto& coarse = static_cast<const FemDiscretization&>(*ladder[r].space);
                const FemField fine =
                    prolongate(FemField(coarse.space_ptr(), run.final_field), ref_space.space_ptr());
                std::vector<double> diff(fine.nodal.size());
                for (std::size_t j = 0; j < diff.size(); ++j) {
                    diff[j] = fine.nodal[j] - ref.final_field[j];
                }
                const double d = ref_space.l2_norm(diff);
                s.squared[r] = d * d;
                s.difference[r] = observable_eval(cfg.observable, coarse, run.final_field) - phi_ref;
            }
        },
        progress);

    ErrorReport report;
    report.trajectories = cfg.M;
    for (std::size_t r = 0; r < rows; ++r) {
        ErrorRow row;
        row.h = cfg.h_ladder[r];
        std::vector<double> sq, diff;
        sq.reserve(cfg.M);
        diff.reserve(cfg.M);
        for (const Sample& s : samples) {
            if (s.reference_aborted || s.aborted[r]) {
                ++row.aborts;
                continue;
            }
            sq.push_back(s.squared[r]);
            diff.push_back(s.difference[r]);
        }
        row.strong = rms_estimate(sq);
        row.weak = abs_mean_estimate(diff);
        report.rows.push_back(row);
    }
    attach_orders(report);
    return report;
}

// ---------------------------------------------------------------------------

std::string to_string(TemporalReference r) { return r == TemporalReference::self ? "self" : "auxiliary"; }

TemporalReference temporal_reference_from_string(const std::string& s) {
    if (s == "self") {
        return TemporalReference::self;
    }
    if (s == "auxiliary") {
        return TemporalReference::auxiliary;
    }
    throw ConfigError("unknown temporal reference '" + s + "'");
}

double TemporalConfig::dt_fine() const {
    const double tau_min = *std::min_element(tau_ladder.begin(), tau_ladder.end());
    return tau_min / static_cast<double>(refine);
}

void TemporalConfig::validate() const {
    if (modes < 1) {
        throw ConfigError("temporal study needs at least one mode");
    }
    if (tau_ladder.empty()) {
        throw ConfigError("tau_ladder is empty");
    }
    if (refine < 2) {
        throw ConfigError("refine must be at least 2");
    }
    if (M < 2) {
        throw ConfigError("M must be at least 2");
    }
    const double dt = dt_fine();
    for (double tau : tau_ladder) {
        if (!(tau > 0.0) || !(tau < 1.0)) {
            throw ConfigError("every tau must lie in (0, 1)");
        }
        if (!is_integral(T / tau) || !is_integral(tau / dt)) {
            throw ConfigError("every tau must divide T and be a multiple of min(tau) / refine");
        }
    }
}

TemporalReport run_temporal_study(const TemporalConfig& cfg, const ProgressFn& progress) {
    cfg.validate();
    const double dt = cfg.dt_fine();
    const std::size_t fine_steps = as_count(cfg.T / dt);
    const auto space = std::make_shared<SpectralDiscretization>(cfg.modes);
    const std::size_t rows = cfg.tau_ladder.size();

    auto make_config = [&](double tau, SchemeKind kind, double aux) {
        SchemeConfig sc;
        sc.tau = tau;
        sc.T = cfg.T;
        sc.scheme = kind;
        sc.auxiliary_tau = aux;
        sc.diffusion = cfg.diffusion;
        sc.space = space;
        return sc;
    };

    struct Sample {
        std::vector<char> aborted;
        std::vector<double> squared;
    };
    std::vector<Sample> samples(cfg.M);

    parallel_for(
        cfg.M, cfg.workers,
        [&](std::size_t m) {
            const NoisePath path(cfg.seed, m, cfg.modes, dt, fine_steps);
            Sample& s = samples[m];
            s.aborted.assign(rows, 0);
            s.squared.assign(rows, 0.0);
            std::optional<TrajectoryResult> exact;
            if (cfg.reference == TemporalReference::auxiliary) {
                exact = run_trajectory(make_config(dt, SchemeKind::explicit_expo_euler, 0.0), path);
            }
            for (std::size_t r = 0; r < rows; ++r) {
                const double tau = cfg.tau_ladder[r];
                TrajectoryResult a, b;
                if (cfg.reference == TemporalReference::self) {
                    a = run_trajectory(make_config(tau, SchemeKind::splitting_expo_euler, 0.0), path);
                    b = run_trajectory(
                        make_config(tau / static_cast<double>(cfg.refine), SchemeKind::splitting_expo_euler, 0.0),
                        path);
                } else {
                    a = run_trajectory(make_config(dt, SchemeKind::explicit_expo_euler, tau), path);
                    b = *exact;
                }
                if (a.aborted || b.aborted) {
                    s.aborted[r] = 1;
                    continue;
                }
                double sq = 0.0;
                for (std::size_t k = 0; k < a.final_field.size(); ++k) {
                    const double d = a.final_field[k] - b.final_field[k];
                    sq += d * d;
                }
                s.squared[r] = sq;
            }
        },
        progress);

    TemporalReport report;
    std::vector<double> taus, errs;
    bool positive = true;
    for (std::size_t r = 0; r < rows; ++r) {
        TemporalRow row;
        row.tau = cfg.tau_ladder[r];
        std::vector<double> sq;
        for (const Sample& s : samples) {
            if (s.aborted[r]) {
                ++row.aborts;
                continue;
            }
            sq.push_back(s.squared[r]);
        }
        row.error = rms_estimate(sq);
        positive = positive && row.error.value > 0.0;
        taus.push_back(row.tau);
        errs.push_back(row.error.value);
        report.rows.push_back(row);
    }
    if (rows >= 2 && positive) {
        report.fit = fit_order(taus, errs);
    }
    return report;
}

}  // namespace sacfem
