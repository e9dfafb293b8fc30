#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plap/eigensolver.hpp"
#include "plap/mesh.hpp"
#include "plap/params.hpp"

namespace plap::cli {

enum class Command { solve, scalar, radial, resonant, bounds, eoc_study, fp_curve };
enum class OutputFormat { csv, json };

/// Invalid configuration; the front end exits with status 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output file could not be written; exit status 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNoConvergence = 2;
inline constexpr int kExitIo = 3;

struct RunConfig {
  Command command = Command::solve;
  DomainSpec domain;
  /// Element count for 1D domains; 0 derives it from the mesh size h.
  std::size_t elements = 0;

  double p = 2.0;
  double q = 2.0;
  double alpha = 1.0;
  std::optional<double> beta;  // derived from the coupling constraint if absent

  OuterConfig outer;
  NewtonConfig newton;

  /// "one", "step2" (1 for x <= 1, 2 beyond) or a file of nodal values.
  std::string weight = "one";
  /// "default", "scalar", "quadratic" ((1-r)^2), "cosine" (cos(pi r/2)),
  /// "bessel" (J0(j r)) or a file with one or two nodal columns.
  std::string guess = "default";

  std::vector<double> h_values{1.0, 0.5, 0.25, 0.125, 0.0625};
  std::vector<double> p_values;  // fp-curve grid; empty means the default grid

  std::filesystem::path out = "plap_out";
  OutputFormat format = OutputFormat::csv;
  bool export_field = false;

  /// Params with beta derived when omitted. Throws ConfigError with the
  /// constraint residual when the quadruple is inadmissible.
  SystemParams params() const;
};

std::string to_string(Command command);
Command command_from_string(const std::string& name);

/// Parses `key = value` lines; '#' starts a comment.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Builds a config from key/value pairs (file keys, '-' and '_' equivalent).
/// Throws ConfigError on unknown keys or malformed values.
RunConfig resolve_config(const std::map<std::string, std::string>& values);

/// Parses command-line arguments (without the program name): a subcommand,
/// flags, and an optional --config file whose entries the flags override.
RunConfig parse_config(const std::vector<std::string>& args);

/// Executes the command and writes summary, history and optional field files
/// into config.out. Returns an exit status; progress goes to `log`.
int run(const RunConfig& config, std::ostream& log);

/// Full front end: parse, run, map errors to exit codes.
int main(int argc, char** argv);

/// Default grid for fp-curve: 1, 1.2, ..., 3, 4, 5, 6, 8, 10 and infinity.
std::vector<double> default_fp_grid();

}  // namespace plap::cli
