#include "sacfem/study_io.hpp"

#include <json.hpp>

#include <Eigen/Core>
#include <fftw3.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace sacfem {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr const char* kCsvHeader =
    "h,strong_error,strong_halfwidth,strong_order_pairwise,weak_error,weak_halfwidth,weak_order_pairwise,aborts";

std::string num(double v) {
    if (std::isnan(v)) {
        return "";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_num(std::string_view s, std::size_t line) {
    if (s.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw IoError("CSV line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

// ---------------------------------------------------------------------------
// Config

template <typename T>
T get_as(const json& j, const std::string& key) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

double get_positive_count(const json& j, const std::string& key) {
    const double v = get_as<double>(j, key);
    if (!(v >= 0.0) || v != std::floor(v)) {
        throw ConfigError("config key '" + key + "' must be a nonnegative integer");
    }
    return v;
}

json diffusion_json(const DiffusionSpec& d) {
    return {{"variant", to_string(d.variant)}, {"b0", d.b0},
            {"b1_scale", d.b1_scale},          {"b1_exponent", d.b1_exponent},
            {"g_amplitude", d.g_amplitude},    {"delta", d.delta}};
}

DiffusionSpec parse_diffusion(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("config key 'diffusion' must be an object");
    }
    DiffusionVariant variant = DiffusionVariant::standard;
    if (j.contains("variant")) {
        try {
            variant = diffusion_variant_from_string(get_as<std::string>(j["variant"], "diffusion.variant"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("diffusion.variant: ") + e.what());
        }
    }
    DiffusionSpec d = variant == DiffusionVariant::linear_test ? DiffusionSpec::linear_test()
                                                                : DiffusionSpec::standard();
    d.variant = variant;
    for (const auto& [key, value] : j.items()) {
        if (key == "variant") {
            continue;
        }
        double* field = nullptr;
        if (key == "b0") {
            field = &d.b0;
        } else if (key == "b1_scale") {
            field = &d.b1_scale;
        } else if (key == "b1_exponent") {
            field = &d.b1_exponent;
        } else if (key == "g_amplitude") {
            field = &d.g_amplitude;
        } else if (key == "delta") {
            field = &d.delta;
        } else {
            throw ConfigError("unknown config key 'diffusion." + key + "'");
        }
        const double v = get_as<double>(value, "diffusion." + key);
        if (variant != DiffusionVariant::custom && v != *field) {
            throw ConfigError("diffusion." + key + " can only be changed with diffusion.variant = custom");
        }
        *field = v;
    }
    return d;
}

std::vector<double> parse_ladder(const json& j, const std::string& key) {
    if (!j.is_array()) {
        throw ConfigError("config key '" + key + "' must be an array");
    }
    std::vector<double> out;
    for (const auto& v : j) {
        out.push_back(get_as<double>(v, key));
    }
    return out;
}

void parse_temporal(const json& j, TemporalConfig& t) {
    if (!j.is_object()) {
        throw ConfigError("config key 'temporal' must be an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (key == "modes") {
            t.modes = static_cast<std::size_t>(get_positive_count(value, "temporal.modes"));
        } else if (key == "tau_ladder") {
            t.tau_ladder = parse_ladder(value, "temporal.tau_ladder");
        } else if (key == "refine") {
            t.refine = static_cast<std::size_t>(get_positive_count(value, "temporal.refine"));
        } else if (key == "M") {
            t.M = static_cast<std::size_t>(get_positive_count(value, "temporal.M"));
        } else if (key == "reference") {
            t.reference = temporal_reference_from_string(get_as<std::string>(value, "temporal.reference"));
        } else {
            throw ConfigError("unknown config key 'temporal." + key + "'");
        }
    }
}

json temporal_json(const TemporalConfig& t) {
    return {{"modes", t.modes},
            {"tau_ladder", t.tau_ladder},
            {"refine", t.refine},
            {"M", t.M},
            {"reference", to_string(t.reference)}};
}

}  // namespace

RunConfig run_config_for_profile(const std::string& profile) {
    RunConfig cfg;
    cfg.study = StudyConfig::for_profile(profile);
    cfg.temporal.seed = cfg.study.seed;
    return cfg;
}

RunConfig parse_run_config(std::string_view json_text, const std::optional<std::string>& profile_override) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    std::string profile = "desk";
    if (j.contains("profile")) {
        profile = get_as<std::string>(j["profile"], "profile");
    }
    if (profile_override) {
        profile = *profile_override;
    }
    RunConfig cfg = run_config_for_profile(profile);
    StudyConfig& s = cfg.study;
    bool has_temporal = false;
    for (const auto& [key, value] : j.items()) {
        if (key == "profile") {
            continue;
        } else if (key == "T") {
            s.T = get_as<double>(value, key);
        } else if (key == "kappa") {
            s.kappa = get_as<double>(value, key);
        } else if (key == "h_ladder") {
            s.h_ladder = parse_ladder(value, key);
        } else if (key == "h_reference") {
            s.h_reference = get_as<double>(value, key);
        } else if (key == "M") {
            s.M = static_cast<std::size_t>(get_positive_count(value, key));
        } else if (key == "seed") {
            s.seed = get_as<std::uint64_t>(value, key);
        } else if (key == "observable") {
            s.observable = get_as<std::string>(value, key);
        } else if (key == "scheme") {
            try {
                s.scheme = scheme_kind_from_string(get_as<std::string>(value, key));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("scheme: ") + e.what());
            }
        } else if (key == "noise_modes") {
            s.noise_modes = static_cast<std::size_t>(get_positive_count(value, key));
        } else if (key == "workers") {
            s.workers = static_cast<std::size_t>(get_positive_count(value, key));
        } else if (key == "out_dir") {
            s.out_dir = get_as<std::string>(value, key);
        } else if (key == "max_abort_fraction") {
            s.max_abort_fraction = get_as<double>(value, key);
        } else if (key == "diffusion") {
            s.diffusion = parse_diffusion(value);
        } else if (key == "temporal") {
            parse_temporal(value, cfg.temporal);
            has_temporal = true;
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    cfg.temporal.seed = s.seed;
    cfg.temporal.workers = s.workers;
    cfg.temporal.diffusion = s.diffusion;
    cfg.temporal.T = s.T;
    s.validate();
    if (has_temporal) {
        cfg.temporal.validate();
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& file, const std::optional<std::string>& profile_override) {
    return parse_run_config(read_text(file), profile_override);
}

std::string run_config_json(const RunConfig& cfg) {
    const StudyConfig& s = cfg.study;
    json j = {{"profile", s.profile},
              {"T", s.T},
              {"kappa", s.kappa},
              {"h_ladder", s.h_ladder},
              {"h_reference", s.h_reference},
              {"M", s.M},
              {"seed", s.seed},
              {"observable", s.observable},
              {"scheme", to_string(s.scheme)},
              {"noise_modes", s.resolved_noise_modes()},
              {"workers", s.workers},
              {"out_dir", s.out_dir},
              {"max_abort_fraction", s.max_abort_fraction},
              {"diffusion", diffusion_json(s.diffusion)},
              {"temporal", temporal_json(cfg.temporal)}};
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// CSV

std::string format_csv(const ErrorReport& report) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const ErrorRow& r : report.rows) {
        out += num(r.h) + ',' + num(r.strong.value) + ',' + num(r.strong.halfwidth) + ',' +
               num(r.strong_order_pairwise) + ',' + num(r.weak.value) + ',' + num(r.weak.halfwidth) + ',' +
               num(r.weak_order_pairwise) + ',' + std::to_string(r.aborts) + '\n';
    }
    return out;
}

ErrorReport parse_csv(std::string_view text) {
    ErrorReport report;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        if (!header_seen) {
            if (line != kCsvHeader) {
                throw IoError("CSV header does not match the expected columns");
            }
            header_seen = true;
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != 8) {
            throw IoError("CSV line " + std::to_string(line_no) + ": expected 8 columns");
        }
        ErrorRow r;
        r.h = parse_num(cells[0], line_no);
        r.strong.value = parse_num(cells[1], line_no);
        r.strong.halfwidth = parse_num(cells[2], line_no);
        r.strong_order_pairwise = parse_num(cells[3], line_no);
        r.weak.value = parse_num(cells[4], line_no);
        r.weak.halfwidth = parse_num(cells[5], line_no);
        r.weak_order_pairwise = parse_num(cells[6], line_no);
        const double aborts = parse_num(cells[7], line_no);
        if (!(aborts >= 0.0) || aborts != std::floor(aborts)) {
            throw IoError("CSV line " + std::to_string(line_no) + ": aborts must be a nonnegative integer");
        }
        r.aborts = static_cast<std::size_t>(aborts);
        report.rows.push_back(r);
    }
    if (!header_seen) {
        throw IoError("CSV is empty");
    }
    std::vector<double> h, es, ew;
    for (const ErrorRow& r : report.rows) {
        h.push_back(r.h);
        es.push_back(r.strong.value);
        ew.push_back(r.weak.value);
    }
    auto positive = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
    };
    if (h.size() >= 2 && positive(es)) {
        report.strong_fit = fit_order(h, es);
    }
    if (h.size() >= 2 && positive(ew)) {
        report.weak_fit = fit_order(h, ew);
    }
    return report;
}

std::string format_temporal_csv(const TemporalReport& report) {
    std::string out = "tau,rms_error,halfwidth,order_pairwise,aborts\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const TemporalRow& r = report.rows[i];
        double order = std::numeric_limits<double>::quiet_NaN();
        if (report.fit && i > 0) {
            order = report.fit->pairwise[i - 1];
        }
        out += num(r.tau) + ',' + num(r.error.value) + ',' + num(r.error.halfwidth) + ',' + num(order) + ',' +
               std::to_string(r.aborts) + '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON summaries

namespace {

json nullable(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

json fit_json(const std::optional<OrderFit>& fit) {
    if (!fit) {
        return nullptr;
    }
    return {{"slope", fit->slope}, {"intercept", fit->intercept}, {"residual", fit->residual},
            {"pairwise", fit->pairwise}};
}

}  // namespace

std::string report_json(const ErrorReport& report) {
    json rows = json::array();
    for (const ErrorRow& r : report.rows) {
        rows.push_back({{"h", r.h},
                        {"strong_error", r.strong.value},
                        {"strong_halfwidth", r.strong.halfwidth},
                        {"strong_order_pairwise", nullable(r.strong_order_pairwise)},
                        {"weak_error", r.weak.value},
                        {"weak_halfwidth", r.weak.halfwidth},
                        {"weak_order_pairwise", nullable(r.weak_order_pairwise)},
                        {"aborts", r.aborts}});
    }
    json j = {{"trajectories", report.trajectories},
              {"rows", rows},
              {"strong_fit", fit_json(report.strong_fit)},
              {"weak_fit", fit_json(report.weak_fit)},
              {"abort_fraction", report.abort_fraction()}};
    return j.dump(2);
}

std::string temporal_report_json(const TemporalReport& report) {
    json rows = json::array();
    for (const TemporalRow& r : report.rows) {
        rows.push_back({{"tau", r.tau}, {"rms_error", r.error.value}, {"halfwidth", r.error.halfwidth},
                        {"aborts", r.aborts}});
    }
    json j = {{"rows", rows}, {"fit", fit_json(report.fit)}};
    return j.dump(2);
}

std::string manifest_json(const ManifestInfo& info) {
    json j;
    j["schema"] = 1;
    j["command"] = info.command;
    j["seed"] = info.seed;
    j["workers"] = info.workers;
    j["wall_seconds"] = info.wall_seconds;
    j["versions"] = {{"sacfem", kVersion},
                     {"compiler", std::string(__VERSION__)},
                     {"cxx_standard", __cplusplus},
                     {"fftw", std::string(fftw_version)},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                   "." + std::to_string(EIGEN_MINOR_VERSION)}};
    j["config"] = info.config_json.empty() ? json(nullptr) : json::parse(info.config_json);
    j["results"] = info.results_json.empty() ? json(nullptr) : json::parse(info.results_json);
    return j.dump(2) + "\n";
}

std::string format_gnuplot(const ErrorReport& report) {
    std::string out = "# h strong_error strong_halfwidth weak_error weak_halfwidth\n";
    for (const ErrorRow& r : report.rows) {
        out += num(r.h) + ' ' + num(r.strong.value) + ' ' + num(r.strong.halfwidth) + ' ' + num(r.weak.value) +
               ' ' + num(r.weak.halfwidth) + '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------

void write_text(const std::filesystem::path& file, std::string_view text) {
    std::error_code ec;
    if (file.has_parent_path()) {
        std::filesystem::create_directories(file.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + file.parent_path().string() + ": " + ec.message());
        }
    }
    std::ofstream out(file, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + file.string() + " for writing");
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw IoError("write failed for " + file.string());
    }
}

std::string read_text(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + file.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw IoError("read failed for " + file.string());
    }
    return ss.str();
}

std::string version() { return kVersion; }

}  // namespace sacfem
