#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kvstring/modal_solver.hpp"
#include "kvstring/reference_fd.hpp"

namespace kvstring::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitAssumption = 2,
  kExitIncompatible = 3,
  kExitViolation = 4,
};

/// Malformed or unknown configuration content.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModeTerm {
  ModeIndex index;
  cplx coeff;
};

/// Initial state: optional lift of d(0), a band-limited modal sum and named
/// kernel profiles that vanish at x = 0 and have zero slope at x = 1.
struct InitialSpec {
  bool lift = true;
  std::vector<ModeTerm> modes;
  std::string x1_profile = "none";
  double x1_scale = 1.0;
  std::string x2_profile = "none";
  double x2_scale = 1.0;
};

struct ExperimentConfig {
  double alpha = 1.0;
  double beta = 1.0;
  double assumption_tol = kDefaultAssumptionTolerance;

  double t_end = 1.0;
  double dt = 1e-2;
  int truncation = kDefaultTruncation;
  int substeps = kDefaultSubsteps;
  std::size_t grid = 1024;
  double compat_tol = kDefaultCompatibilityTolerance;
  double truncation_rel_tol = kDefaultTruncationRelTol;
  FdConfig fd;

  InitialSpec initial;
  BoundarySignal d;
  DistributedSignal u;

  std::uint64_t seed = 1;
  std::size_t random_count = 0;
  unsigned threads = 0;
  double window_fraction = 0.1;
  double guard_band = 1e-3;

  std::filesystem::path out_dir = "out";
  bool write_coefficients = false;
  bool write_final_state = false;
};

/// INI document with sections params, simulation, initial, boundary,
/// distributed, verify and output. Unknown sections or keys raise ConfigError.
/// Relative file references resolve against base_dir.
ExperimentConfig parse_config(std::istream& is, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Validated parameters plus the assembled initial state and signals.
SimulationConfig build_simulation(const ExperimentConfig& cfg);

void write_spectrum_csv(std::ostream& os, const StringParams& params, int k_max);

/// Columns t,norm_spectral,norm_fd,rel_diff.
void write_discrepancy_csv(std::ostream& os, const Trajectory& spectral, const Trajectory& fd);

/// Entry point shared by the executable and the tests; returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kvstring::cli
