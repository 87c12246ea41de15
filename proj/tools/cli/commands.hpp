#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gcomp/estimators.hpp"
#include "gcomp/model.hpp"
#include "gcomp/sampling.hpp"
#include "gcomp/vector_set.hpp"

namespace gcomp::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kValidation = 2, kRuntime = 3 };

enum class Format { Csv, Json, Text };

struct RunConfig {
  std::string set = "x_plus";  // builtin name or path
  bool normalize = false;
  std::string variant = "spherical";
  double beta = 3.0;
  int sign = 1;
  double c3 = 0.1;
  std::optional<std::size_t> m;  // defaults to the set dimension
  std::optional<double> t;
  std::string t_grid = "0:1:0.05";
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::string seed_source = "default";
  std::string route = "direct";  // direct | standard | computed
  std::string out;               // empty: stdout
  std::optional<std::string> format;
  unsigned threads = 0;
  // limits
  std::vector<std::string> checks;
  std::optional<double> c3s;
  // reproduce / export
  std::string table;
  std::string fixture;
  bool raw = false;
};

// Parses `args` (without the program name), runs the subcommand and returns
// its exit code. Diagnostics go to `err`; results go to `out` or --out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_estimate(const RunConfig& config, std::ostream& out);
int cmd_curve(const RunConfig& config, std::ostream& out);
int cmd_limits(const RunConfig& config, std::ostream& out);
int cmd_reproduce(const RunConfig& config, std::ostream& out);
int cmd_verify_identities(const RunConfig& config, std::ostream& out);
int cmd_export_fixture(const RunConfig& config, std::ostream& out);

// "start:stop:step"
std::vector<double> parse_grid(const std::string& text);

}  // namespace gcomp::cli
