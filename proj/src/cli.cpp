#include "posbvp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

#include "posbvp/certification.hpp"
#include "posbvp/corpus.hpp"
#include "posbvp/io.hpp"

namespace posbvp {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void apply_json_config(const std::string& path, RunConfig& cfg,
                       const std::function<bool(const std::string&)>& given) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw UsageError("config must be a JSON object");

  auto take = [&](const char* key, auto& field) {
    if (!doc.contains(key) || given(key)) return;
    try {
      doc.at(key).get_to(field);
    } catch (const json::exception&) {
      throw UsageError(std::string("config field '") + key + "' has the wrong type");
    }
  };
  auto take_opt = [&]<class V>(const char* key, std::optional<V>& field) {
    if (!doc.contains(key) || given(key)) return;
    try {
      field = doc.at(key).get<V>();
    } catch (const json::exception&) {
      throw UsageError(std::string("config field '") + key + "' has the wrong type");
    }
  };
  static const std::vector<std::string> known{
      "problem", "bc",    "T",           "n",           "tol",    "r",
      "R",       "alpha0", "v",          "theta_steps", "alpha_steps",
      "out",     "lambda", "c",          "d",           "kappa",  "guess"};
  for (const auto& item : doc.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw UsageError("unknown config field '" + item.key() + "'");
    }
  }
  take("problem", cfg.problem);
  take_opt("bc", cfg.bc);
  take("T", cfg.T);
  take("n", cfg.n);
  take("tol", cfg.tol);
  take_opt("r", cfg.r);
  take_opt("R", cfg.R);
  take("alpha0", cfg.alpha0);
  take("v", cfg.v);
  take("theta_steps", cfg.theta_steps);
  take("alpha_steps", cfg.alpha_steps);
  take("out", cfg.out);
  take("lambda", cfg.lambda);
  take("c", cfg.c);
  take("d", cfg.d);
  take("kappa", cfg.kappa);
  take_opt("guess", cfg.guess);
}

void validate(const RunConfig& cfg) {
  if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) throw UsageError("T must be positive");
  if (cfg.n < 4) throw UsageError("n must be at least 4");
  if (!(cfg.tol > 0.0)) throw UsageError("tol must be positive");
  if (cfg.r && !(*cfg.r > 0.0)) throw UsageError("r must be positive");
  if (cfg.R && !(*cfg.R > 0.0)) throw UsageError("R must be positive");
  if (!(cfg.alpha0 > 0.0)) throw UsageError("alpha0 must be positive");
  if (cfg.theta_steps < 1 || cfg.alpha_steps < 1) {
    throw UsageError("theta_steps and alpha_steps must be at least 1");
  }
}

ProblemSpec resolve_problem(const RunConfig& cfg) {
  std::string family = cfg.problem;
  std::optional<BoundaryCondition> bc;
  const auto dash = family.rfind('-');
  if (dash != std::string::npos && family.size() - dash == 4 &&
      family.compare(dash + 1, 2, "bc") == 0) {
    bc = parse_boundary_condition(family.substr(dash + 1));
    family = family.substr(0, dash);
  }
  if (cfg.bc) {
    const BoundaryCondition flag = parse_boundary_condition(*cfg.bc);
    if (bc && *bc != flag) {
      throw UsageError("--bc contradicts the boundary condition in '" + cfg.problem + "'");
    }
    bc = flag;
  }
  if (!bc) throw UsageError("no boundary condition: use a name like logistic-bc1 or --bc");

  if (family == "logistic") return logistic_family(cfg.lambda, cfg.c, cfg.T, *bc);
  if (family == "reverse-logistic") return reverse_logistic_family(cfg.lambda, cfg.T, *bc);
  if (family == "mms") {
    return manufactured_problem(*bc, cfg.T, cfg.c == 0.0 ? 1.0 : cfg.c, cfg.d, cfg.kappa);
  }
  throw UsageError("unknown problem '" + cfg.problem + "'");
}

SampledDensity forcing_profile(const std::string& name, const Grid& grid) {
  const double T = grid.length();
  if (name == "one") return SampledDensity::constant(grid, 1.0);
  if (name == "linear") return SampledDensity::sample(grid, [T](double t) { return t / T; });
  if (name == "bump") {
    return SampledDensity::sample(grid, [T](double t) { return std::sin(std::numbers::pi * t / T); });
  }
  throw UsageError("unknown forcing profile '" + name + "' (one, linear, bump)");
}

struct Context {
  RunConfig cfg;
  ProblemSpec spec;
  Grid grid;
  CoincidenceFrame frame;
  ExtendedFn ft;
  SolveOptions solve;
  std::ostream& out;

  Context(RunConfig c, std::ostream& o)
      : cfg(std::move(c)),
        spec(resolve_problem(cfg)),
        grid(cfg.T, cfg.n),
        frame(spec.bc, grid),
        ft(spec.extended()),
        out(o) {
    solve.tol = cfg.tol;
  }

  GridFunction initial() const {
    if (cfg.guess) return frame.embed(*cfg.guess);
    if (cfg.r && cfg.R) {
      return default_initial_guess(frame, std::array<double, 2>{*cfg.r, *cfg.R});
    }
    return frame.embed(frame.kernel_interval(1.0)[1]);
  }

  std::filesystem::path out_path(const std::string& file) const {
    std::filesystem::create_directories(cfg.out);
    return std::filesystem::path(cfg.out) / file;
  }

  void write_text(const std::string& file, const std::string& text) const {
    std::ofstream f(out_path(file), std::ios::binary);
    if (!f) throw UsageError("cannot write " + out_path(file).string());
    f << text;
  }
};

int cmd_solve(const Context& ctx) {
  const SolveReport rep = solve_fixed_point(ctx.initial(), ctx.ft, ctx.frame, HomotopyParams{}, ctx.solve);
  json doc = to_json(rep);
  doc["problem"] = ctx.spec.name;
  doc["positivity"] = to_json(check_positivity(rep.solution, ctx.spec.bc, ctx.cfg.tol));
  ctx.write_text("solution.csv", to_csv(rep.solution));
  ctx.write_text("solve_report.json", doc.dump(2) + "\n");
  ctx.out << doc.dump(2) << "\n";
  return rep.converged ? kExitOk : kExitNoConvergence;
}

int cmd_export(const Context& ctx) {
  const SolveReport rep = solve_fixed_point(ctx.initial(), ctx.ft, ctx.frame, HomotopyParams{}, ctx.solve);
  write_csv(ctx.out, rep.solution);
  return rep.converged ? kExitOk : kExitNoConvergence;
}

int cmd_verify(const Context& ctx) {
  ProbePlan plan;
  plan.T = ctx.cfg.T;
  const GrowthReport growth = verify_growth_conditions(ctx.spec.f, plan);
  const SolveReport rep = solve_fixed_point(ctx.initial(), ctx.ft, ctx.frame, HomotopyParams{}, ctx.solve);
  const PositivityCertificate cert = check_positivity(rep.solution, ctx.spec.bc, ctx.cfg.tol);
  json doc{{"problem", ctx.spec.name},
           {"growth", to_json(growth)},
           {"solve", to_json(rep)},
           {"positivity", to_json(cert)},
           {"meets_claim", meets_claim(cert, ctx.spec.bc)},
           {"zero_propagation_margin", zero_propagation_margin(rep.solution)}};
  ctx.write_text("verify_report.json", doc.dump(2) + "\n");
  ctx.out << doc.dump(2) << "\n";
  if (!rep.converged) return kExitNoConvergence;
  return growth.all_passed() && meets_claim(cert, ctx.spec.bc) ? kExitOk : kExitHypothesis;
}

int cmd_degree(const Context& ctx) {
  if (!ctx.cfg.r || !ctx.cfg.R) throw UsageError("degree needs --r and --R");
  DegreeOptions opts;
  opts.theta_schedule = uniform_schedule(1.0, ctx.cfg.theta_steps, false);
  opts.alpha_schedule = uniform_schedule(ctx.cfg.alpha0, ctx.cfg.alpha_steps, true);
  opts.alpha0 = ctx.cfg.alpha0;
  opts.v = forcing_profile(ctx.cfg.v, ctx.grid);
  opts.hypothesis.solve = ctx.solve;
  const DegreeReport rep = degree_report(*ctx.cfg.r, *ctx.cfg.R, ctx.ft, ctx.frame, opts);
  json doc = to_json(rep);
  doc["problem"] = ctx.spec.name;
  ctx.write_text("degree_report.json", doc.dump(2) + "\n");
  ctx.out << doc.dump(2) << "\n";
  return rep.theorem_applicable ? kExitOk : kExitHypothesis;
}

int cmd_sweep(const Context& ctx, SweepFamily family) {
  const bool theta = family == SweepFamily::Theta;
  const std::vector<double> schedule =
      theta ? uniform_schedule(1.0, ctx.cfg.theta_steps, false)
            : uniform_schedule(ctx.cfg.alpha0, ctx.cfg.alpha_steps, true);
  HomotopyParams base;
  if (!theta) base.v = forcing_profile(ctx.cfg.v, ctx.grid);
  const auto steps = continuation(family, schedule, ctx.initial(), ctx.ft, ctx.frame, base, ctx.solve);

  std::string table = theta ? "theta,converged,sup_norm,min_u\n" : "alpha,converged,sup_norm,min_u\n";
  bool all = true;
  for (const auto& s : steps) {
    all = all && s.report.converged;
    table += format_double(s.parameter) + "," + (s.report.converged ? "1" : "0") + "," +
             format_double(s.report.sup_norm) + "," +
             format_double(s.report.solution.min_value()) + "\n";
  }
  ctx.write_text(theta ? "sweep_theta.csv" : "sweep_alpha.csv", table);
  ctx.out << table;
  return all ? kExitOk : kExitNoConvergence;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out_stream,
            std::ostream& err_stream) {
  CLI::App app{"Positive solutions of u'' + f(t,u,u') = 0 under mixed boundary conditions"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::string bc, r, R, guess;
  struct Flag {
    std::string key;
    CLI::Option* opt;
  };
  std::vector<Flag> flags;
  auto flag = [&](const std::string& name, const std::string& key, auto& var, const std::string& help) {
    flags.push_back({key, app.add_option(name, var, help)});
  };
  app.add_option("--config", config_path, "JSON config file; flags override its fields")
      ->check(CLI::ExistingFile);
  flag("--problem", "problem", cfg.problem, "corpus name (logistic-bc1, mms-bc2, ...) or family");
  flag("--bc", "bc", bc, "boundary condition: bc1, bc2 or bc3");
  flag("--T", "T", cfg.T, "interval length");
  flag("--n", "n", cfg.n, "grid intervals");
  flag("--tol", "tol", cfg.tol, "fixed-point tolerance");
  flag("--r", "r", r, "small radius");
  flag("--R", "R", R, "large radius");
  flag("--alpha0", "alpha0", cfg.alpha0, "forcing level for the large-radius check");
  flag("--v", "v", cfg.v, "forcing profile: one, linear, bump");
  flag("--theta-steps", "theta_steps", cfg.theta_steps, "theta sweep steps");
  flag("--alpha-steps", "alpha_steps", cfg.alpha_steps, "alpha sweep steps");
  flag("--out", "out", cfg.out, "output directory");
  flag("--lambda", "lambda", cfg.lambda, "logistic parameter");
  flag("--c", "c", cfg.c, "logistic drift / manufactured amplitude");
  flag("--d", "d", cfg.d, "manufactured bump amplitude");
  flag("--kappa", "kappa", cfg.kappa, "manufactured nonlinearity strength");
  flag("--guess", "guess", guess, "kernel parameter of the initial guess");

  std::string command;
  for (const char* name : {"solve", "verify", "degree", "sweep-theta", "sweep-alpha", "export"}) {
    app.add_subcommand(name)->fallthrough();
  }
  static const std::map<std::string, std::string> help{
      {"solve", "solve and write solution.csv and solve_report.json"},
      {"verify", "check growth conditions and positivity of the computed solution"},
      {"degree", "degree bookkeeping and hypothesis evidence for --r and --R"},
      {"sweep-theta", "continuation in theta, writes sweep_theta.csv"},
      {"sweep-alpha", "continuation in alpha, writes sweep_alpha.csv"},
      {"export", "solve and print the solution CSV to stdout"}};
  for (auto* sub : app.get_subcommands({})) sub->description(help.at(sub->get_name()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out_stream, err_stream);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    auto given = [&](const std::string& key) {
      for (const auto& f : flags) {
        if (f.key == key) return f.opt->count() > 0;
      }
      return false;
    };
    auto parse_num = [](const std::string& s, const char* what) {
      try {
        return parse_double(s);
      } catch (const FormatError&) {
        throw UsageError(std::string(what) + " is not a number: '" + s + "'");
      }
    };
    if (given("bc")) cfg.bc = bc;
    if (given("r")) cfg.r = parse_num(r, "--r");
    if (given("R")) cfg.R = parse_num(R, "--R");
    if (given("guess")) cfg.guess = parse_num(guess, "--guess");
    if (!config_path.empty()) apply_json_config(config_path, cfg, given);
    validate(cfg);

    command = app.get_subcommands().front()->get_name();
    const Context ctx(cfg, out_stream);
    if (command == "solve") return cmd_solve(ctx);
    if (command == "export") return cmd_export(ctx);
    if (command == "verify") return cmd_verify(ctx);
    if (command == "degree") return cmd_degree(ctx);
    if (command == "sweep-theta") return cmd_sweep(ctx, SweepFamily::Theta);
    return cmd_sweep(ctx, SweepFamily::Alpha);
  } catch (const UsageError& e) {
    err_stream << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err_stream << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err_stream << "error: " << e.what() << "\n";
    return command == "degree" ? kExitHypothesis : kExitNoConvergence;
  }
}

}  // namespace posbvp
