#pragma once

// The revsphere command-line front end. run() is the whole program; main only
// forwards to it so tests can drive the CLI in-process.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "revsphere/error.hpp"
#include "revsphere/profiles.hpp"

namespace revsphere::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public Error {
 public:
  using Error::Error;
};

enum class Format { csv, json };

struct FamilySpec {
  std::string name = "unit-sphere";  // unit-sphere | lambda | h | theorem-a
  std::optional<double> lambda;
  std::optional<double> alpha;
  std::optional<int> n;
  std::optional<std::string> b;
};

struct RunConfig {
  std::string command;
  FamilySpec family;
  std::optional<std::size_t> samples;
  std::optional<double> tol;
  std::size_t fan = 4096;
  std::size_t directions = 64;
  double r0 = 1.0471975511965976;  // pi / 3
  double theta0 = 0.0;
  double i_lo = 0.6;
  double i_hi = 0.9;
  double delta = 0.5;
  int n_max = 50;
  std::vector<std::string> checks;
  Format format = Format::csv;
  std::string out;
};

// "sin2sq" or "sin2sq-poly:c0,c1,...". Throws UsageError.
BFunction parse_b(const std::string& text);

// Throws UsageError for unknown families, out-of-domain parameters and
// parameters that do not belong to the family.
MetricProfile build_profile(const FamilySpec& spec);

struct Outcome {
  std::string text;
  int exit_code = kExitOk;
};

Outcome cmd_profile(const RunConfig& cfg);
Outcome cmd_halfperiod(const RunConfig& cfg);
Outcome cmd_cutlocus(const RunConfig& cfg);
Outcome cmd_extrema(const RunConfig& cfg);
Outcome cmd_verify(const RunConfig& cfg);

// Names accepted by verify --check, in report order.
const std::vector<std::string>& check_names();

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace revsphere::cli
