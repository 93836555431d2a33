#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Command-line driver: solve, sweep, check-sigma, margin-scan.

namespace thinring::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitRejected = 2;
inline constexpr int kExitUsage = 64;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  double rho = 0.0;
  std::string sigma_kind = "none";
  double sigma_c = 0.0;
  double sigma_p = 1.5;
  std::optional<double> eps;
  std::vector<double> eps_grid;  ///< descending
  int modes = 32;
  int grid = 256;
  double tol = 1e-10;
  std::string out_dir = ".";
  bool plot = false;
  bool force = false;
  /// margin-scan: values of omega (8 rho + 1/(2 pi^2)), linear grid a:b:n.
  std::vector<double> omega_c_grid;
};

/// Log-spaced "a:b:n" (sorted descending) or a comma-separated list.
std::vector<double> parse_eps_grid(const std::string& text);
/// Linear "a:b:n" or a comma-separated list, kept in the given order.
std::vector<double> parse_linear_grid(const std::string& text);

/// Throws UsageError on malformed input. Returns nullopt when help was printed.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

/// Runs the command and returns the process exit code. Failures are reported as
/// JSON on `out` and in <out_dir>/error.json.
int run(const RunConfig& config, std::ostream& out);

/// parse_args + run with usage errors mapped to exit code 64.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace thinring::cli
