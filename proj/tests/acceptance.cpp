// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.
//
//   acceptance [--workers N] [--only 1,2,...]

#include "sacfem/harness.hpp"
#include "sacfem/study_io.hpp"
#include "sacfem/verify.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>
#include <string>
#include <thread>

using namespace sacfem;

namespace {

struct Line {
    int id;
    bool passed;
    std::string text;
};

void print(const Line& l) {
    std::printf("criterion %d [%s] %s\n", l.id, l.passed ? "PASS" : "FAIL", l.text.c_str());
    std::fflush(stdout);
}

template <typename... Args>
std::string format(const char* fmt, Args... args) {
    char buf[1024];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool in_range(double v, double lo, double hi) { return v >= lo && v <= hi; }

std::string suite_failures(const std::vector<CheckResult>& r) {
    std::string out;
    for (const CheckResult& c : r) {
        if (!c.passed) {
            out += "; failed: " + c.module + " / " + c.name + " (" + c.detail + ")";
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--workers" && i + 1 < argc) {
            workers = std::strtoul(argv[++i], nullptr, 10);
        } else if (a == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                only.insert(std::stoi(tok));
            }
        } else {
            std::fprintf(stderr, "usage: acceptance [--workers N] [--only 1,2,...]\n");
            return 2;
        }
    }
    auto wanted = [&](int id) { return only.empty() || only.count(id) > 0; };

    bool all = true;
    auto emit = [&](const Line& l) {
        all = all && l.passed;
        print(l);
    };

    if (wanted(1) || wanted(2)) {
        StudyConfig desk = StudyConfig::desk();
        desk.workers = workers;
        const auto t0 = std::chrono::steady_clock::now();
        const ErrorReport r = run_study(desk);
        const double wall = elapsed(t0);
        std::string rows;
        for (const ErrorRow& row : r.rows) {
            rows += format(" h=1/%.0f strong %.3e weak %.3e;", 1.0 / row.h, row.strong.value, row.weak.value);
        }
        if (wanted(1)) {
            const double w = r.weak_fit ? r.weak_fit->slope : 0.0;
            emit({1, r.weak_fit && in_range(w, 0.8, 1.3) && wall < 600.0,
                  format("desk spatial weak order %.4f in [0.8, 1.3], %.0f s (< 600 s);", w, wall) + rows});
        }
        if (wanted(2)) {
            const double s = r.strong_fit ? r.strong_fit->slope : 0.0;
            emit({2, r.strong_fit && in_range(s, 0.4, 0.75),
                  format("desk spatial strong order %.4f in [0.4, 0.75]", s)});
        }
    }

    if (wanted(3)) {
        TemporalConfig t;
        t.workers = workers;
        const auto t0 = std::chrono::steady_clock::now();
        const TemporalReport r = run_temporal_study(t);
        const double wall = elapsed(t0);
        const double slope = r.fit ? r.fit->slope : 0.0;
        std::string rows;
        for (const TemporalRow& row : r.rows) {
            rows += format(" tau=1/%.0f %.3e;", 1.0 / row.tau, row.error.value);
        }
        emit({3, r.fit && in_range(slope, 0.75, 1.25) && wall < 300.0,
              format("temporal self-convergence RMS order %.4f in [0.75, 1.25], %.0f s (< 300 s);", slope, wall) +
                  rows});
    }

    if (wanted(4)) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = verify_operator_suite(1);
        const double wall = elapsed(t0);
        std::size_t ok = 0;
        for (const CheckResult& c : r) {
            ok += c.passed ? 1 : 0;
        }
        emit({4, all_passed(r) && wall < 120.0,
              format("operator suite %zu/%zu checks, %.1f s (< 120 s)", ok, r.size(), wall) + suite_failures(r)});
    }

    if (wanted(5)) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = verify_sensitivity_suite(1, workers);
        const double wall = elapsed(t0);
        std::size_t ok = 0;
        for (const CheckResult& c : r) {
            ok += c.passed ? 1 : 0;
        }
        emit({5, all_passed(r) && wall < 300.0,
              format("sensitivity suite %zu/%zu checks, %.1f s (< 300 s)", ok, r.size(), wall) + suite_failures(r)});
    }

    if (wanted(6)) {
        StudyConfig c = StudyConfig::desk();
        c.h_ladder = {1.0 / 8.0, 1.0 / 16.0};
        c.h_reference = 1.0 / 64.0;
        c.M = 64;
        c.T = 0.25;
        c.kappa = 1.0 / 100.0;
        std::string first;
        bool same = true;
        std::string sizes;
        for (std::size_t w : {1u, 4u, 16u}) {
            c.workers = w;
            const ErrorReport r = run_study(c);
            const std::string bytes = format_csv(r) + report_json(r);
            if (first.empty()) {
                first = bytes;
            } else {
                same = same && bytes == first;
            }
            sizes += format(" workers=%zu: %zu bytes;", w, bytes.size());
        }
        emit({6, same, std::string("error report bytes identical for workers {1, 4, 16}:") + sizes});
    }

    return all ? 0 : 1;
}
