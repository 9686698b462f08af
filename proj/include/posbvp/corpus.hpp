#pragma once

/// \file
/// Concrete problem instances (logistic families and manufactured
/// solutions) and an independent shooting oracle for cross-checks.

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "posbvp/coincidence.hpp"
#include "posbvp/nonlinearity.hpp"
#include "posbvp/numerics.hpp"

namespace posbvp {

/// Closed-form solution with its first two derivatives.
struct KnownSolution {
  ScalarMap u;
  ScalarMap du;
  ScalarMap d2u;

  GridFunction sample(const Grid& grid) const {
    return GridFunction::sample(grid, u, du);
  }
};

struct RadiusPair {
  double r = 0.0;
  double R = 0.0;
  std::string provenance;
};

struct ProblemSpec {
  std::string name;
  BoundaryCondition bc = BoundaryCondition::BC1;
  double T = 1.0;
  CarathFn f;
  std::optional<KnownSolution> known_solution;
  std::optional<RadiusPair> suggested_r_R;
  std::string provenance;
  /// Default shooting bracket for the initial parameter a.
  std::array<double, 2> shoot_bracket{0.05, 3.0};

  ExtendedFn extended() const { return extend_tilde(f); }
};

/// f(t,s,xi) = s(lambda - s) - c s xi.
ProblemSpec logistic_family(double lambda, double c, double T,
                            BoundaryCondition bc);

/// f(t,s,xi) = s(s - lambda).
ProblemSpec reverse_logistic_family(double lambda, double T,
                                    BoundaryCondition bc);

/// f(t,s,xi) = s (g(t) + kappa (u*(t) - s)) with g = -u*''/u*, so that u*
/// solves the problem; with tau = t/T
///   BC1: u* = c(1+t) + d tau^2 (1-tau)^2
///   BC2: u* = c t    + d tau^3 (1-tau)^2
///   BC3: u* = c      + d tau^2 (1-tau)
/// kappa = 0 gives the linear problem f = g s.
ProblemSpec manufactured_problem(BoundaryCondition bc, double T, double c,
                                 double d, double kappa = 1.0);

/// Names: logistic-bcN, reverse-logistic-bcN, mms-bcN (N = 1, 2, 3).
ProblemSpec problem_by_name(std::string_view name, double T = 1.0);
std::vector<std::string> corpus_names();

class NoBracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The shooting map vanishes identically on the bracket.
class DegenerateBracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ShootSettings {
  /// Bracket; NaN means the spec's default bracket.
  double a_lo = std::numeric_limits<double>::quiet_NaN();
  double a_hi = std::numeric_limits<double>::quiet_NaN();
  int scan = 64;
  double theta = 1.0;
  double alpha = 0.0;
  ScalarMap v;  // forcing profile, required when alpha > 0
};

/// Boundary-row mismatch of the trajectory started from parameter a:
/// BC1/BC2: u'(T) - a, BC3: u(T) - a. NaN when the trajectory blows up.
double shooting_map(const ProblemSpec& spec, double a, int steps,
                    const ShootSettings& settings = {});

/// Every root of the shooting map found by scanning the bracket and
/// bisecting sign changes, ascending.
std::vector<double> shooting_roots(const ProblemSpec& spec, int steps,
                                   const ShootSettings& settings = {});

/// RK4 shooting with bisection; returns the lowest root's trajectory
/// sampled on `grid`. n_dense is rounded up to a multiple of the grid's
/// interval count.
GridFunction oracle_shoot(const ProblemSpec& spec, const Grid& grid,
                          int n_dense = 100000,
                          const ShootSettings& settings = {});

}  // namespace posbvp
