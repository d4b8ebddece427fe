#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace bmeter::config {

inline constexpr const char* kToolVersion = "1.0.0";

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, int line, int col)
        : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                             std::to_string(col)),
          line(line), col(col) {}
    int line, col;
};

/// Resolved run configuration: [model], [system] and [run] sections of the
/// config file. Unknown keys are rejected at parse time.
struct RunConfig {
    // [model]
    std::string family = "onedim-gaussian"; // onedim-gaussian | ohmic | power-law
    double g = 1.0, a = 1.0, c = 1.0;       // onedim-gaussian parameters
    std::vector<double> probes{0.0};        // probe positions x_alpha
    double lambda = 1.0, s = 1.0, omega_c = 1.0; // generic families

    // [system]
    std::vector<double> energies{0.0, 0.0};
    Eigen::MatrixXcd rho0;
    double temperature = 0.0;

    // [run]
    std::string out = "out";
    double t_max = 5.0;
    std::size_t t_points = 101;
    std::vector<double> t_values; // explicit time list overrides t_max/t_points
    double t0 = 3.0;
    double p_min = 0.0, p_max = 0.0; // both zero selects the automatic grid
    std::size_t p_points = 513;
    std::vector<std::complex<double>> u; // conditioning state; default (1,..)/sqrt(L)
    std::size_t probe_index = 0;
    std::vector<double> g_values, t0_values; // bell scan grids
    double rel_tol = 1e-9, abs_tol = 1e-12;
    int threads = 0;

    void finalize(); // fill defaults (rho0, u) and sanity-check
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

std::string format_manifest(const RunConfig& cfg, const std::string& subcommand);

} // namespace bmeter::config
