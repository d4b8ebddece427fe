#include "bmeter/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bmeter/bell.hpp"
#include "bmeter/csv.hpp"
#include "bmeter/kernels.hpp"
#include "bmeter/verification.hpp"

namespace bmeter::run {

namespace fs = std::filesystem;
using config::RunConfig;

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

BuiltModel build_model(const RunConfig& cfg) {
    BuiltModel bm;
    bm.spec.energies = cfg.energies;
    bm.spec.rho0 = cfg.rho0;
    bm.spec.temperature = cfg.temperature;

    if (cfg.family == "onedim-gaussian") {
        onedim::OneDimModel m;
        m.g = cfg.g;
        m.a = cfg.a;
        m.c = cfg.c;
        m.probe_positions = cfg.probes;
        bm.odm = m;
        bm.sd = onedim::export_spectral(m);
        bm.probes = onedim::export_probes(m);
    } else if (cfg.family == "ohmic") {
        bm.sd = model::make_ohmic(cfg.lambda, cfg.omega_c);
    } else if (cfg.family == "power-law") {
        bm.sd = model::make_power_law(cfg.lambda, cfg.s, cfg.omega_c);
    } else {
        throw std::invalid_argument("unknown model family '" + cfg.family + "'");
    }

    const model::ValidationReport rep = model::validate_model(bm.spec, bm.sd, bm.probes);
    if (!rep.ok())
        throw std::runtime_error("model validation failed:\n" + rep.str());
    return bm;
}

namespace {

quad::Settings settings_of(const RunConfig& cfg) {
    quad::Settings qs;
    qs.rel_tol = cfg.rel_tol;
    qs.abs_tol = cfg.abs_tol;
    return qs;
}

std::vector<double> time_grid(const RunConfig& cfg) {
    if (!cfg.t_values.empty()) return cfg.t_values;
    std::vector<double> ts;
    const std::size_t n = std::max<std::size_t>(cfg.t_points, 1);
    if (n == 1 || cfg.t_max == 0.0) return {0.0};
    for (std::size_t i = 0; i < n; ++i)
        ts.push_back(cfg.t_max * static_cast<double>(i) / static_cast<double>(n - 1));
    return ts;
}

void write_manifest(const RunConfig& cfg, const std::string& sub) {
    std::ofstream f(fs::path(cfg.out) / "manifest.txt");
    f << config::format_manifest(cfg, sub);
}

std::string slice_name(const std::string& stem, double t) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_t%g.csv", stem.c_str(), t);
    return buf;
}

void write_prob_csv(const fs::path& path, const expectation::ProbabilityResult& pr,
                    const std::vector<double>& conditional) {
    std::ofstream f(path);
    csv::Row header;
    for (const char* c :
         {"p", "pbar", "total", "separable", "interference", "conditional", "thermal"})
        header.add(std::string(c));
    header.write(f);
    const double norm = 1.0 / (std::sqrt(M_PI) * pr.delta);
    for (std::size_t i = 0; i < pr.p_grid.size(); ++i) {
        const double pbar = pr.p_grid[i] / pr.delta;
        csv::Row row;
        row.add(pr.p_grid[i]);
        row.add(pbar);
        row.add(pr.total[i]);
        row.add(pr.separable[i]);
        row.add(pr.interference[i]);
        row.add(conditional[i]);
        row.add(norm * std::exp(-pbar * pbar));
        row.write(f);
    }
}

std::vector<double> p_grid_of(const RunConfig& cfg, const kernels::KernelSlice& s) {
    if (cfg.p_min < cfg.p_max) {
        std::vector<double> grid(cfg.p_points);
        for (std::size_t i = 0; i < cfg.p_points; ++i)
            grid[i] = cfg.p_min + (cfg.p_max - cfg.p_min) * static_cast<double>(i) /
                                      static_cast<double>(cfg.p_points - 1);
        return grid;
    }
    return expectation::default_p_grid(s, cfg.probe_index, cfg.p_points);
}

Eigen::VectorXcd u_vector(const RunConfig& cfg) {
    Eigen::VectorXcd u(cfg.u.size());
    for (std::size_t i = 0; i < cfg.u.size(); ++i) u(i) = cfg.u[i];
    u.normalize();
    return u;
}

} // namespace

int run_kernels(const RunConfig& cfg) {
    const BuiltModel bm = build_model(cfg);
    const std::vector<double> ts = time_grid(cfg);
    const kernels::TimeKernels tk =
        kernels::compute_time_kernels(bm.sd, bm.probes, ts, cfg.temperature,
                                      settings_of(cfg));
    fs::create_directories(cfg.out);
    std::ofstream f(fs::path(cfg.out) / "kernels.csv");
    kernels::write_kernels_csv(f, tk, bm.probes.labels);
    write_manifest(cfg, "kernels");
    return kExitOk;
}

int run_prob(const RunConfig& cfg) {
    const BuiltModel bm = build_model(cfg);
    if (!bm.sd.has_G())
        throw std::runtime_error("prob: model family carries no probe content");
    const std::vector<double> ts = time_grid(cfg);
    const kernels::TimeKernels tk =
        kernels::compute_time_kernels(bm.sd, bm.probes, ts, cfg.temperature,
                                      settings_of(cfg));
    const Eigen::VectorXcd u = u_vector(cfg);
    fs::create_directories(cfg.out);
    for (std::size_t i = 0; i < tk.slices.size(); ++i) {
        const auto& s = tk.slices[i];
        const auto pr = expectation::joint_probability(bm.spec, s, u, cfg.probe_index,
                                                       p_grid_of(cfg, s));
        const auto cond = expectation::conditional_probability(
            bm.spec, s, u, cfg.probe_index, pr.p_grid);
        write_prob_csv(fs::path(cfg.out) / slice_name("prob", tk.times[i]), pr, cond);
    }
    write_manifest(cfg, "prob");
    return kExitOk;
}

int run_bell(const RunConfig& cfg) {
    const BuiltModel bm = build_model(cfg);
    if (!bm.odm) throw std::runtime_error("bell: requires the onedim-gaussian family");
    const std::vector<double> gs = cfg.g_values.empty() ? std::vector<double>{cfg.g}
                                                        : cfg.g_values;
    const std::vector<double> t0s = cfg.t0_values.empty() ? std::vector<double>{cfg.t0}
                                                          : cfg.t0_values;
    const auto rows = bell::violation_scan(*bm.odm, bm.spec, t0s, gs, settings_of(cfg));
    fs::create_directories(cfg.out);
    std::ofstream f(fs::path(cfg.out) / "bell.csv");
    bell::write_violation_csv(f, rows);
    write_manifest(cfg, "bell");
    return kExitOk;
}

namespace {

const char* kFig1Plot = R"PY(#!/usr/bin/env python3
"""Plot the conditional probe distributions from the fig1 CSV files."""
import csv
import sys
from pathlib import Path

import matplotlib.pyplot as plt

outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(".")

def load(name):
    cols = {}
    with open(outdir / name, newline="") as f:
        reader = csv.DictReader(f)
        for row in reader:
            for k, v in row.items():
                cols.setdefault(k, []).append(float(v))
    return cols

panels = [
    ("x1 = 0", "fig1_x0_t0.6.csv", "fig1_x0_t3.csv", "t = 0.6 a/c", "t = 3 a/c"),
    ("x1 = 2a", "fig1_x2_t0.7.csv", "fig1_x2_t2.csv", "t = 0.7 a/c", "t = 2 a/c"),
]

fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
for ax, (title, early, late, lab1, lab2) in zip(axes, panels):
    d1, d2 = load(early), load(late)
    ax.plot(d1["pbar"], d1["conditional"], "-", label=lab1)
    ax.plot(d2["pbar"], d2["conditional"], "-.", label=lab2)
    # separable part of the conditional distribution: divide by <|u><u|>,
    # recovered as the integral of the joint total
    den = sum(d1["total"]) * (d1["p"][1] - d1["p"][0])
    sep = [s / den for s in d1["separable"]]
    ax.plot(d1["pbar"], sep, "--", label=f"separable part, {lab1}")
    ax.plot(d1["pbar"], d1["thermal"], ":", label="thermal")
    ax.set_title(title)
    ax.set_xlabel(r"$p/\Delta$")
    ax.set_xlim(-6, 6)
    ax.legend(fontsize=8)
axes[0].set_ylabel("P")
fig.tight_layout()
fig.savefig(outdir / "fig1.png", dpi=200)
print(f"wrote {outdir / 'fig1.png'}")
)PY";

} // namespace

int run_fig1(const RunConfig& cfg) {
    RunConfig canned = cfg;
    canned.family = "onedim-gaussian";
    canned.g = 2.5;
    canned.a = 1.0;
    canned.c = 1.0;
    canned.probes = {0.0, 2.0};
    canned.energies = {0.0, 0.0};
    canned.temperature = 0.0;
    canned.u = {std::complex<double>(1.0 / std::sqrt(2.0), 0.0),
                std::complex<double>(1.0 / std::sqrt(2.0), 0.0)};
    Eigen::VectorXcd u = u_vector(canned);
    canned.rho0 = u * u.adjoint();
    canned.t_values = {0.6, 0.7, 2.0, 3.0};

    const BuiltModel bm = build_model(canned);
    const kernels::TimeKernels tk = kernels::compute_time_kernels(
        bm.sd, bm.probes, canned.t_values, 0.0, settings_of(canned));

    fs::create_directories(canned.out);
    for (std::size_t a = 0; a < canned.probes.size(); ++a) {
        for (std::size_t i = 0; i < tk.slices.size(); ++i) {
            const auto& s = tk.slices[i];
            const auto pr = expectation::joint_probability(bm.spec, s, u, a, {});
            const auto cond =
                expectation::conditional_probability(bm.spec, s, u, a, pr.p_grid);
            char stem[32];
            std::snprintf(stem, sizeof(stem), "fig1_x%g", canned.probes[a]);
            write_prob_csv(fs::path(canned.out) / slice_name(stem, tk.times[i]), pr,
                           cond);
        }
    }
    std::ofstream py(fs::path(canned.out) / "plot_fig1.py");
    py << kFig1Plot;
    write_manifest(canned, "fig1");
    return kExitOk;
}

int run_verify(const RunConfig& cfg, bool quick) {
    apply_threads(cfg.threads);
    const std::size_t cases = quick ? 6 : 20;
    auto checks = verification::gaussian_algebra_suite(cases);
    const auto routes = verification::route_equivalence_suite(quick, settings_of(cfg));
    checks.insert(checks.end(), routes.begin(), routes.end());

    bool ok = true;
    for (const auto& c : checks) {
        std::printf("[%s] %s (max deviation %.3e, tolerance %.0e)\n",
                    c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured, c.tolerance);
        ok = ok && c.pass;
    }
    return ok ? kExitOk : kExitNumerical;
}

} // namespace bmeter::run
