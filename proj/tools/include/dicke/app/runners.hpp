#pragma once

#include <string>
#include <vector>

#include "dicke/app/config.hpp"

namespace dicke::app {

/// Text produced by a subcommand: the main table plus sidecar files named
/// `<out><suffix>`.
struct Artifacts {
  std::string main;
  std::vector<std::pair<std::string, std::string>> sidecars;
};

/// g' and Omega' implied by a coupling convention.
ModelParams with_coupling(ModelParams params, SweepCoupling coupling);

Artifacts run_quasienergies(const RunConfig& config);
Artifacts run_spectrum(const RunConfig& config);
Artifacts run_g2(const RunConfig& config);
Artifacts run_eof(const RunConfig& config);
Artifacts run_sweep(const RunConfig& config, int workers);

/// Value of the sweep observable at one parameter point.
double sweep_point(const ModelParams& params, SweepObservable observable);

/// Writes artifacts to `path` (standard output when empty; sidecars are
/// skipped then).
void write_artifacts(const Artifacts& artifacts, const std::string& path);

}  // namespace dicke::app
