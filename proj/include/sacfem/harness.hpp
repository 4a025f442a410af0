#pragma once

// Monte Carlo convergence studies.
//
// Spatial study: every trajectory m draws one NoisePath(seed, m) with J noise
// modes; the reference FEM run (h_reference) and every ladder run see the same
// increments. Temporal study: a spectral space of fixed size, each tau run
// compared with a tau / refine run on the same path.
//
// Per-trajectory results are stored by index and reduced in index order, so
// reports do not depend on the number of workers.

#include "sacfem/discretization.hpp"
#include "sacfem/model.hpp"
#include "sacfem/schemes.hpp"
#include "sacfem/statistics.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sacfem {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct StudyConfig {
    std::string profile = "desk";
    double T = 1.0;
    double kappa = 1.0 / 200.0;
    std::vector<double> h_ladder = {1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0};
    double h_reference = 1.0 / 256.0;
    std::size_t M = 2000;
    std::uint64_t seed = 20240611;
    std::string observable = "sin_l2norm";
    DiffusionSpec diffusion = DiffusionSpec::standard();
    SchemeKind scheme = SchemeKind::splitting_expo_euler;
    /// Noise modes shared by all runs; 0 means 1/h_reference - 1.
    std::size_t noise_modes = 0;
    std::size_t workers = 1;
    std::string out_dir = "results";
    /// Largest tolerated fraction of aborted trajectories per row.
    double max_abort_fraction = 0.01;

    static StudyConfig desk();
    static StudyConfig paper();
    /// desk() or paper(); throws ConfigError for other names.
    static StudyConfig for_profile(const std::string& name);

    std::size_t resolved_noise_modes() const;
    std::size_t steps() const;
    /// Throws ConfigError describing the first violated constraint.
    void validate() const;
};

struct ErrorRow {
    double h = 0.0;
    Estimate strong;
    Estimate weak;
    double strong_order_pairwise = std::numeric_limits<double>::quiet_NaN();
    double weak_order_pairwise = std::numeric_limits<double>::quiet_NaN();
    std::size_t aborts = 0;
};

struct ErrorReport {
    std::vector<ErrorRow> rows;
    std::optional<OrderFit> strong_fit;
    std::optional<OrderFit> weak_fit;
    std::size_t trajectories = 0;

    /// Largest per-row abort fraction.
    double abort_fraction() const;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs fn(i) for i in [0, count) on `workers` threads; rethrows the first
/// exception after all threads stop.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn,
                  const ProgressFn& progress = {});

/// sin of the L2 norm for tag "sin_l2norm"; throws std::invalid_argument otherwise.
double observable_eval(const std::string& tag, const Discretization& space, std::span<const double> x);

ErrorReport run_study(const StudyConfig& cfg, const ProgressFn& progress = {});

/// Fills pairwise orders and fits from the rows' errors.
void attach_orders(ErrorReport& report);

// ---------------------------------------------------------------------------

enum class TemporalReference {
    /// tau run vs tau / refine run of the same scheme.
    self,
    /// Explicit exponential Euler at step min(tau) / refine with (F_tau, G_tau)
    /// against the same integrator with (F, G): the auxiliary equation against
    /// the original one.
    auxiliary,
};

std::string to_string(TemporalReference r);
TemporalReference temporal_reference_from_string(const std::string& s);

struct TemporalConfig {
    std::size_t modes = 64;
    std::vector<double> tau_ladder = {1.0 / 50.0, 1.0 / 100.0, 1.0 / 200.0, 1.0 / 400.0};
    std::size_t refine = 16;
    std::size_t M = 1000;
    double T = 1.0;
    std::uint64_t seed = 20240611;
    DiffusionSpec diffusion = DiffusionSpec::standard();
    TemporalReference reference = TemporalReference::self;
    std::size_t workers = 1;

    double dt_fine() const;
    void validate() const;
};

struct TemporalRow {
    double tau = 0.0;
    Estimate error;
    std::size_t aborts = 0;
};

struct TemporalReport {
    std::vector<TemporalRow> rows;
    std::optional<OrderFit> fit;
};

TemporalReport run_temporal_study(const TemporalConfig& cfg, const ProgressFn& progress = {});

}  // namespace sacfem
