#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "manitomo/grid.hpp"
#include "manitomo/optimize.hpp"
#include "manitomo/phantoms.hpp"
#include "manitomo/transforms.hpp"

namespace manitomo::cli {

/// Invalid flag or config value; the CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/**
 * Every setting of a run. Keys in config files and flags share the names
 * listed in `RunConfig::keys()` (`noise-var`, `max-iters`, ...); underscores
 * are accepted in place of hyphens. String-valued "auto" entries are
 * resolved from the other settings.
 */
struct RunConfig {
  std::string out = "out";
  int size = 32;
  double extent = 1.0;
  std::string kind = "curl";
  std::string op = "radon";
  std::string method = "metric";
  std::string metric = "auto";  // auto: sphere for lifted, product otherwise
  std::string param = "auto";   // auto: polar for product, cartesian otherwise
  double alpha = 0.1;
  double gamma = 1.0;
  double beta = 0.1;
  double s = 0.49;
  double p = 2.0;
  double fid_p = 2.0;
  int nrho = 2;
  double sigma_rho = 0.0;  // <= 0: n_rho / 2
  double epsilon = 1e-3;
  double r_max = 0.0;  // <= 0: phantom's r_max when synthesized, else 1
  double noise_var = 0.0;
  std::uint64_t seed = 0;
  int offsets = 0;  // 0: ceil(H sqrt 2) + 2
  int angles = 180;
  double step = 0.0;  // 0: h / 2
  int max_iters = 200;
  double step0 = 1.0;
  double shrink = 0.5;
  double armijo_c = 1e-4;
  double grad_tol = 1e-6;
  std::string init = "constant";
  double init_var = 0.003;
  std::string project = "final";
  std::string input;
  std::string sino;
  std::string truth;

  static const std::vector<std::string>& keys();

  void set(std::string key, const std::string& value);
  std::string get(const std::string& key) const;

  /// Sorted `key = value` lines; values in shortest round-trip form.
  std::string canonical() const;

  /// FNV-1a of the command name and the canonical text.
  std::uint64_t hash(const std::string& command) const;

  /// out/run-<16 hex digits>.
  std::filesystem::path run_directory(const std::string& command) const;

  /// Checks ranges and method/operator/metric combinations.
  void validate() const;

  std::string resolved_metric() const;
  std::string resolved_param() const;
};

/// Applies `key = value` lines ('#' starts a comment) on top of `base`.
RunConfig load_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Observed data and, when known, the ground truth, ready for reconstruction.
struct Problem {
  std::shared_ptr<const Projector> projector;
  OperatorKind op = OperatorKind::radon;
  Sinogram clean;  // empty rows when the sinogram was read from disk
  Sinogram noisy;
  std::optional<VectorField> truth;  // cartesian vectors
  bool angle_data = false;           // truth / data came from a 1-normalized angle image
  double r_max = 1.0;
};

/// Grid, geometry and projector for a run.
std::shared_ptr<const Projector> make_projector(const RunConfig& cfg, const Grid& grid);

/// Phantom of `cfg.kind` written as a field: 1 channel (normalized angle) or 2 channels.
VectorField make_phantom_field(const RunConfig& cfg, double* r_max = nullptr);

/// Cartesian 2-vector view of a field file's content (1-channel fields are normalized angles).
VectorField as_vectors(const VectorField& field);

/// Reads or synthesizes truth and data per `cfg` (input/sino/truth paths, else the phantom).
Problem prepare_problem(const RunConfig& cfg);

struct Outcome {
  std::string method;
  double param = 0.0;
  std::optional<double> snr;
  GDResult result;
  VectorField vectors;  // cartesian reconstruction after the final projection
  VectorField output;   // what gets written: angles for lifted, vectors otherwise
};

/// Runs `method` ("metric", "lifted" or "sobolev") on the problem.
Outcome reconstruct(const RunConfig& cfg, const Problem& problem, const std::string& method);

/// Parses argv and dispatches to a subcommand. Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace manitomo::cli
