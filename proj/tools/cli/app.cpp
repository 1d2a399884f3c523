#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"

namespace revsphere::cli {

namespace {

// Raw flag storage; presence is read back from the option counts.
struct Flags {
  std::string family = "unit-sphere";
  double lambda = 0.0;
  double alpha = 0.0;
  int n = 0;
  std::string b;
  std::size_t samples = 0;
  double tol = 0.0;
  std::string format = "csv";
};

void add_family_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--family", f.family, "unit-sphere | lambda | h | theorem-a")
      ->check(CLI::IsMember({"unit-sphere", "lambda", "h", "theorem-a"}));
  sub->add_option("--lambda", f.lambda, "lambda-family parameter (>= 0, default 4)");
  sub->add_option("--alpha", f.alpha, "h-family alpha in (0, 1/2), default 1/3");
  sub->add_option("--n", f.n, "perturbation index (theorem-a default 8, h default 0)");
  sub->add_option("--b", f.b, "sin2sq | sin2sq-poly:c0,c1,...");
}

void add_output_flags(CLI::App* sub, Flags& f, RunConfig& cfg, bool csv_allowed) {
  sub->add_option("--format", f.format, csv_allowed ? "csv | json" : "json")
      ->check(CLI::IsMember(csv_allowed ? std::vector<std::string>{"csv", "json"} : std::vector<std::string>{"json"}));
  sub->add_option("--out", cfg.out, "write to this path instead of stdout");
}

Outcome dispatch(const RunConfig& cfg) {
  if (cfg.command == "profile") return cmd_profile(cfg);
  if (cfg.command == "halfperiod") return cmd_halfperiod(cfg);
  if (cfg.command == "cutlocus") return cmd_cutlocus(cfg);
  if (cfg.command == "extrema") return cmd_extrema(cfg);
  return cmd_verify(cfg);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spheres of revolution: curvature, half periods, geodesics and cut loci", "revsphere"};
  app.set_version_flag("--version", REVSPHERE_VERSION);
  app.require_subcommand(1);

  RunConfig cfg;
  Flags f;

  auto* profile = app.add_subcommand("profile", "m, its derivatives and the curvature along a meridian");
  auto* halfperiod = app.add_subcommand("halfperiod", "half-period function table and its monotonicity");
  auto* cutlocus = app.add_subcommand("cutlocus", "cut points of a base point, one per direction");
  auto* extrema = app.add_subcommand("extrema", "curvature extrema on (0, pi/2)");
  auto* verify = app.add_subcommand("verify", "run the verification suite");

  for (CLI::App* sub : {profile, halfperiod, cutlocus, extrema, verify}) {
    add_family_flags(sub, f);
    add_output_flags(sub, f, cfg, sub != verify);
  }
  for (CLI::App* sub : {profile, halfperiod, extrema}) sub->add_option("--samples", f.samples, "grid size");
  for (CLI::App* sub : {halfperiod, cutlocus}) sub->add_option("--tol", f.tol, "quadrature or ODE tolerance");
  for (CLI::App* sub : {cutlocus, verify}) {
    sub->add_option("--fan", cfg.fan, "rays per fan (>= 256)");
    sub->add_option("--directions", cfg.directions, "cut directions");
  }
  cutlocus->add_option("--r0", cfg.r0, "base point r in (0, pi)");
  cutlocus->add_option("--theta0", cfg.theta0, "base point theta");
  extrema->add_option("--i-lo", cfg.i_lo, "t_k window lower end");
  extrema->add_option("--i-hi", cfg.i_hi, "t_k window upper end");
  extrema->add_option("--delta", cfg.delta, "t_k window margin delta in (0, pi/3)");
  verify->add_option("--check", cfg.checks, "run only these checks (repeatable)");
  verify->add_option("--n-max", cfg.n_max, "largest multiple for sin-multiple");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();
  auto* sub = app.get_subcommand(cfg.command);
  auto given = [sub](const char* name) { return sub->get_option_no_throw(name) && sub->get_option(name)->count() > 0; };
  cfg.family.name = f.family;
  if (given("--lambda")) cfg.family.lambda = f.lambda;
  if (given("--alpha")) cfg.family.alpha = f.alpha;
  if (given("--n")) cfg.family.n = f.n;
  if (given("--b")) cfg.family.b = f.b;
  if (given("--samples")) cfg.samples = f.samples;
  if (given("--tol")) cfg.tol = f.tol;
  cfg.format = f.format == "json" || cfg.command == "verify" ? Format::json : Format::csv;

  Outcome result;
  try {
    result = dispatch(cfg);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }

  if (cfg.out.empty()) {
    out << result.text;
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!(file << result.text)) {
      err << "error: cannot write " << cfg.out << '\n';
      return kExitFailure;
    }
  }
  return result.exit_code;
}

}  // namespace revsphere::cli
