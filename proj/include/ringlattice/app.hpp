#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ringlattice/angular.hpp"
#include "ringlattice/config.hpp"
#include "ringlattice/io.hpp"
#include "ringlattice/radial.hpp"

// Orchestration: figure data, single pipeline stages, acceptance checks and
// the run manifest.

namespace ringlattice::app {

using json = nlohmann::ordered_json;

const char* library_version();

// ---- shared computations --------------------------------------------------

struct RingSetup {
  angular::KickParams kick;
  angular::AngularSpectrum initial;  // over the range of the kicked state
  angular::AngularSpectrum kicked;
};

RingSetup ring_setup(const SimConfig& cfg);
/// Mode sum at time xi_t / xi on the configured grid.
angular::AngularProfile ring_profile(const SimConfig& cfg, const RingSetup& ring, double xi_t);
/// Period-summed propagator applied to the grid-kicked initial profile.
angular::AngularProfile ring_farfield(const SimConfig& cfg, double xi_t,
                                      angular::FarFieldDiagnostics* diagnostics = nullptr);

struct Trace {
  std::vector<double> lambda_t;
  std::vector<double> mean_rho;
  radial::RadialState state;
  radial::CollapseRevival shape;
  double quadrature_error = 0.0;
};

Trace radial_trace(const SimConfig& cfg);

/// Kicked spectrum of the full field and its radial states.
struct FieldModel {
  angular::AngularSpectrum zeta;
  std::shared_ptr<const radial::RadialSet> states;
};

FieldModel field_model(const SimConfig& cfg);
angular::AngularProfile field_slice(const SimConfig& cfg, const FieldModel& model, double lambda_t);

/// Grid indices of local maxima of |f|^2 within |phi - center| <= half_width
/// that exceed floor times the global maximum.
std::vector<int> local_maxima(const angular::AngularProfile& f, double center, double half_width,
                              double floor);
/// Largest |f|^2 within |phi - center| <= half_width over the global maximum.
double window_peak_ratio(const angular::AngularProfile& f, double center, double half_width);

// ---- commands --------------------------------------------------------------

struct RunResult {
  std::string command;
  std::vector<std::pair<std::string, Schema>> files;  // data files relative to the output directory
  std::vector<std::string> plots;
  json summary = json::object();
  std::vector<std::string> warnings;
};

RunResult run_figure(int which, const SimConfig& cfg, const std::filesystem::path& out, bool svg);
RunResult run_stage(const std::string& stage, const SimConfig& cfg, const std::filesystem::path& out, bool svg);

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double runtime_s = 0.0;
  double runtime_limit_s = 0.0;  // 0: no limit
};

using CheckCallback = std::function<void(const CheckResult&)>;

/// Runs acceptance criteria 1..12 in order. Figure data for the determinism
/// criterion are written below out / "check_data" and listed in files.
std::vector<CheckResult> run_checks(const SimConfig& cfg, const std::filesystem::path& out,
                                    const CheckCallback& progress = {},
                                    std::vector<std::pair<std::string, Schema>>* files = nullptr);
std::string format_check(const CheckResult& r);

json config_json(const SimConfig& cfg);
json manifest(const RunResult& run, const SimConfig& cfg, double wall_time_s,
              const std::vector<CheckResult>* checks = nullptr);
/// Writes manifest_<command>.json into out and returns its path.
std::filesystem::path write_manifest(const std::filesystem::path& out, const json& m);

/// Creates out if needed and checks that it is a writable directory.
void prepare_output(const std::filesystem::path& out);

}  // namespace ringlattice::app
