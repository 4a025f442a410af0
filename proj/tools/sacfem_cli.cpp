// sacfem: command-line driver for trajectories, convergence studies and the
// verification suites.
//
// Exit codes: 0 success, 1 verification failure, 2 config error,
// 3 abort fraction above threshold, 4 I/O error.

#include "sacfem/harness.hpp"
#include "sacfem/noise.hpp"
#include "sacfem/sensitivity.hpp"
#include "sacfem/study_io.hpp"
#include "sacfem/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace sacfem;

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitAborts = 3;
constexpr int kExitIo = 4;

struct CommonOptions {
    std::string config;
    std::optional<std::string> profile;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::optional<std::string> out_dir;
    bool quiet = false;
};

RunConfig resolve_config(const CommonOptions& opt) {
    RunConfig cfg = opt.config.empty() ? run_config_for_profile(opt.profile.value_or("desk"))
                                       : load_run_config(opt.config, opt.profile);
    if (opt.seed) {
        cfg.study.seed = *opt.seed;
    }
    if (opt.workers) {
        cfg.study.workers = *opt.workers;
    }
    if (opt.out_dir) {
        cfg.study.out_dir = *opt.out_dir;
    }
    cfg.temporal.seed = cfg.study.seed;
    cfg.temporal.workers = cfg.study.workers;
    cfg.temporal.diffusion = cfg.study.diffusion;
    cfg.temporal.T = cfg.study.T;
    cfg.study.validate();
    return cfg;
}

ProgressFn progress_printer(bool quiet, const std::string& label) {
    if (quiet) {
        return {};
    }
    return [label, last = std::size_t{0}](std::size_t done, std::size_t total) mutable {
        const std::size_t pct = done * 100 / total;
        if (pct >= last + 5 || done == total) {
            last = pct;
            std::fprintf(stderr, "\r%s: %zu/%zu trajectories (%zu%%)", label.c_str(), done, total, pct);
            if (done == total) {
                std::fprintf(stderr, "\n");
            }
        }
    };
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt_order(double v) {
    if (std::isnan(v)) {
        return "      -";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%7.4f", v);
    return buf;
}

void print_report(const ErrorReport& r) {
    std::printf("%-10s %-12s %-10s %-8s %-12s %-10s %-8s %s\n", "h", "strong", "+-", "order", "weak", "+-", "order",
                "aborts");
    for (const ErrorRow& row : r.rows) {
        std::printf("2^%-8.0f %-12.4e %-10.2e %-8s %-12.4e %-10.2e %-8s %zu\n", std::log2(row.h), row.strong.value,
                    row.strong.halfwidth, fmt_order(row.strong_order_pairwise).c_str(), row.weak.value,
                    row.weak.halfwidth, fmt_order(row.weak_order_pairwise).c_str(), row.aborts);
    }
    if (r.strong_fit) {
        std::printf("fitted strong order %.4f (residual %.3e)\n", r.strong_fit->slope, r.strong_fit->residual);
    }
    if (r.weak_fit) {
        std::printf("fitted weak order   %.4f (residual %.3e)\n", r.weak_fit->slope, r.weak_fit->residual);
    }
}

void write_study_outputs(const fs::path& dir, const std::string& command, const RunConfig& cfg,
                         const ErrorReport& report, double wall) {
    write_text(dir / "errors.csv", format_csv(report));
    write_text(dir / "errors.dat", format_gnuplot(report));
    ManifestInfo info;
    info.command = command;
    info.config_json = run_config_json(cfg);
    info.results_json = report_json(report);
    info.seed = cfg.study.seed;
    info.workers = cfg.study.workers;
    info.wall_seconds = wall;
    write_text(dir / "manifest.json", manifest_json(info));
}

int finish_study(const RunConfig& cfg, const ErrorReport& report) {
    if (report.abort_fraction() > cfg.study.max_abort_fraction) {
        std::fprintf(stderr, "abort fraction %.4f exceeds threshold %.4f\n", report.abort_fraction(),
                     cfg.study.max_abort_fraction);
        return kExitAborts;
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct SimulateOptions {
    double h = 0.0;
    std::string space = "fem";
    std::size_t modes = 0;
    std::uint64_t trajectory = 0;
    std::size_t snapshots = 10;
    bool dump_noise = false;
};

int cmd_simulate(const CommonOptions& common, const SimulateOptions& opt) {
    const RunConfig cfg = resolve_config(common);
    const StudyConfig& s = cfg.study;
    const auto start = std::chrono::steady_clock::now();
    const std::size_t noise_modes = opt.modes > 0 ? opt.modes : s.resolved_noise_modes();
    SchemeConfig sc;
    sc.tau = s.kappa;
    sc.T = s.T;
    sc.scheme = s.scheme;
    sc.diffusion = s.diffusion;
    const double h = opt.h > 0.0 ? opt.h : s.h_ladder.back();
    if (opt.space == "fem") {
        sc.space = std::make_shared<FemDiscretization>(FemSpace::assemble(h), noise_modes);
    } else if (opt.space == "spectral") {
        sc.space = std::make_shared<SpectralDiscretization>(noise_modes);
    } else {
        throw ConfigError("--space must be fem or spectral");
    }
    const std::size_t steps = sc.steps();
    const NoisePath path(s.seed, opt.trajectory, noise_modes, s.kappa, steps);
    const std::size_t every = std::max<std::size_t>(1, steps / std::max<std::size_t>(1, opt.snapshots));

    std::string fields = "step,t,x,u\n";
    std::string norms = "step,t,l2,h1,max\n";
    const Discretization& space = *sc.space;
    TrajectoryState state{space.initial_state(sc.initial), 0, &path, false};
    auto snapshot = [&](const TrajectoryState& st) {
        const double t = static_cast<double>(st.step) * sc.tau;
        const std::vector<double> grid = space.to_grid(st.field);
        const std::size_t n = space.grid().intervals();
        fields += std::to_string(st.step) + "," + std::to_string(t) + ",0,0\n";
        for (std::size_t q = 0; q < grid.size(); ++q) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g,%.17g\n", st.step, t,
                          static_cast<double>(q + 1) / static_cast<double>(n), grid[q]);
            fields += buf;
        }
        fields += std::to_string(st.step) + "," + std::to_string(t) + ",1,0\n";
        char buf[160];
        std::snprintf(buf, sizeof buf, "%zu,%.10g,%.17g,%.17g,%.17g\n", st.step, t, space.l2_norm(st.field),
                      space.h1_seminorm(st.field), space.max_norm(st.field));
        norms += buf;
    };
    snapshot(state);
    bool aborted = false;
    while (state.step < steps) {
        state = advance(state, sc);
        if (state.aborted) {
            aborted = true;
            break;
        }
        if (state.step % every == 0 || state.step == steps) {
            snapshot(state);
        }
    }
    const fs::path dir = s.out_dir;
    write_text(dir / "trajectory.csv", fields);
    write_text(dir / "norms.csv", norms);
    if (opt.dump_noise) {
        try {
            fs::create_directories(dir);
            path.dump(dir / "noise.bin");
        } catch (const std::exception& e) {
            throw IoError(e.what());
        }
    }
    ManifestInfo info;
    info.command = "simulate";
    info.config_json = run_config_json(cfg);
    char res[256];
    std::snprintf(res, sizeof res,
                  "{\"space\": \"%s\", \"trajectory\": %llu, \"steps\": %zu, \"aborted\": %s, \"final_l2\": %.17g}",
                  space.describe().c_str(), static_cast<unsigned long long>(opt.trajectory), state.step,
                  aborted ? "true" : "false", space.l2_norm(state.field));
    info.results_json = res;
    info.seed = s.seed;
    info.workers = 1;
    info.wall_seconds = seconds_since(start);
    write_text(dir / "manifest.json", manifest_json(info));
    std::printf("%s: %zu steps, final ||X|| = %.6f%s\n", space.describe().c_str(), state.step,
                space.l2_norm(state.field), aborted ? " (aborted)" : "");
    return aborted ? kExitAborts : 0;
}

int cmd_converge(const CommonOptions& common, const std::string& kind) {
    const RunConfig cfg = resolve_config(common);
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = cfg.study.out_dir;
    if (kind == "spatial") {
        const ErrorReport report = run_study(cfg.study, progress_printer(common.quiet, "spatial study"));
        print_report(report);
        write_study_outputs(dir, "converge", cfg, report, seconds_since(start));
        return finish_study(cfg, report);
    }
    if (kind != "temporal") {
        throw ConfigError("--kind must be spatial or temporal");
    }
    cfg.temporal.validate();
    const TemporalReport report = run_temporal_study(cfg.temporal, progress_printer(common.quiet, "temporal study"));
    std::printf("%-12s %-12s %-10s %s\n", "tau", "rms error", "+-", "aborts");
    for (const TemporalRow& r : report.rows) {
        std::printf("%-12.6g %-12.4e %-10.2e %zu\n", r.tau, r.error.value, r.error.halfwidth, r.aborts);
    }
    if (report.fit) {
        std::printf("fitted temporal order %.4f (residual %.3e)\n", report.fit->slope, report.fit->residual);
    }
    write_text(dir / "temporal.csv", format_temporal_csv(report));
    ManifestInfo info;
    info.command = "converge --kind temporal";
    info.config_json = run_config_json(cfg);
    info.results_json = temporal_report_json(report);
    info.seed = cfg.temporal.seed;
    info.workers = cfg.temporal.workers;
    info.wall_seconds = seconds_since(start);
    write_text(dir / "manifest.json", manifest_json(info));
    return 0;
}

int cmd_verify(const CommonOptions& common, const std::string& suite) {
    const std::uint64_t seed = common.seed.value_or(1);
    const std::size_t workers = common.workers.value_or(1);
    std::vector<CheckResult> results;
    if (suite == "ops" || suite == "all") {
        auto r = verify_operator_suite(seed);
        results.insert(results.end(), r.begin(), r.end());
    }
    if (suite == "sensitivity" || suite == "all") {
        auto r = verify_sensitivity_suite(seed, workers);
        results.insert(results.end(), r.begin(), r.end());
    }
    if (suite != "ops" && suite != "sensitivity" && suite != "all") {
        throw ConfigError("--suite must be ops, sensitivity or all");
    }
    std::size_t failed = 0;
    for (const CheckResult& r : results) {
        std::printf("[%s] %-11s %s: %s\n", r.passed ? "PASS" : "FAIL", r.module.c_str(), r.name.c_str(),
                    r.detail.c_str());
        failed += r.passed ? 0 : 1;
    }
    std::printf("%zu/%zu checks passed\n", results.size() - failed, results.size());
    return failed == 0 ? 0 : kExitVerifyFailed;
}

struct ReferenceRow {
    double h, strong, strong_order, weak, weak_order;
};

constexpr ReferenceRow kReferenceTable[] = {
    {1.0 / 32.0, 7.3009e-3, NAN, 3.0341e-3, NAN},
    {1.0 / 64.0, 4.6211e-3, 0.6184, 1.3887e-3, 1.1275},
    {1.0 / 128.0, 2.9596e-3, 0.6428, 6.3082e-4, 1.1385},
    {1.0 / 256.0, 1.9612e-3, 0.5937, 2.9261e-4, 1.1082},
};

int cmd_table1(const CommonOptions& common) {
    CommonOptions opt = common;
    if (!opt.profile && opt.config.empty()) {
        opt.profile = "desk";
    }
    const RunConfig cfg = resolve_config(opt);
    const auto start = std::chrono::steady_clock::now();
    if (cfg.study.profile == "paper" && !common.quiet) {
        std::fprintf(stderr, "paper profile: M = %zu, h_ref = 2^%.0f; expect hours of CPU time\n", cfg.study.M,
                     std::log2(cfg.study.h_reference));
    }
    const ErrorReport report = run_study(cfg.study, progress_printer(common.quiet, "table1"));
    print_report(report);
    std::printf("\nreference values (M = 20000, h_ref = 2^-12):\n");
    for (const ErrorRow& row : report.rows) {
        for (const ReferenceRow& p : kReferenceTable) {
            if (std::abs(p.h - row.h) < 1e-12) {
                std::printf("2^%-8.0f strong %.4e (%+.1f%%)  weak %.4e (%+.1f%%)  weak order %s vs %s\n",
                            std::log2(row.h), p.strong, 100.0 * (row.strong.value / p.strong - 1.0), p.weak,
                            100.0 * (row.weak.value / p.weak - 1.0), fmt_order(row.weak_order_pairwise).c_str(),
                            fmt_order(p.weak_order).c_str());
            }
        }
    }
    write_study_outputs(cfg.study.out_dir, "table1", cfg, report, seconds_since(start));
    return finish_study(cfg, report);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Splitting exponential Euler / P1 finite elements for the stochastic Allen-Cahn equation"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonOptions common;
    app.add_option("--config", common.config, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--profile", common.profile, "desk or paper defaults");
    app.add_option("--seed", common.seed, "master seed");
    app.add_option("--workers", common.workers, "worker threads");
    app.add_option("--out-dir", common.out_dir, "output directory");
    app.add_flag("--quiet", common.quiet, "no progress output");

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "run one trajectory and write field snapshots");
    simulate->add_option("--mesh", sim.h, "mesh width (default: finest ladder mesh)");
    simulate->add_option("--space", sim.space, "fem or spectral");
    simulate->add_option("--modes", sim.modes, "noise modes (default: from the reference mesh)");
    simulate->add_option("--trajectory", sim.trajectory, "trajectory index in the seed stream");
    simulate->add_option("--snapshots", sim.snapshots, "number of field snapshots");
    simulate->add_flag("--dump-noise", sim.dump_noise, "write raw increments to noise.bin");

    std::string kind = "spatial";
    auto* converge = app.add_subcommand("converge", "run a convergence study");
    converge->add_option("--kind", kind, "spatial or temporal");

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify-ops", "run the invariant and sensitivity suites");
    verify->add_option("--suite", suite, "ops, sensitivity or all");

    auto* table1 = app.add_subcommand("table1", "spatial study printed against the reference table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*simulate) {
            return cmd_simulate(common, sim);
        }
        if (*converge) {
            return cmd_converge(common, kind);
        }
        if (*verify) {
            return cmd_verify(common, suite);
        }
        if (*table1) {
            return cmd_table1(common);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    }
    return 0;
}
