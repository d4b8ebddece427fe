#pragma once

#include <optional>
#include <string>

#include "bmeter/config.hpp"
#include "bmeter/expectation.hpp"
#include "bmeter/onedim.hpp"

namespace bmeter::run {

/// Exit statuses shared with the CLI: 0 success, 2 config error, 3 numerical
/// or model failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct BuiltModel {
    model::SystemSpec spec;
    model::SpectralData sd;
    model::ProbeSet probes;
    std::optional<onedim::OneDimModel> odm;
};

BuiltModel build_model(const config::RunConfig& cfg);

void apply_threads(int threads);

int run_kernels(const config::RunConfig& cfg);
int run_prob(const config::RunConfig& cfg);
int run_bell(const config::RunConfig& cfg);
int run_fig1(const config::RunConfig& cfg);
int run_verify(const config::RunConfig& cfg, bool quick);

} // namespace bmeter::run
