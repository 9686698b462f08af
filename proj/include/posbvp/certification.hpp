#pragma once

/// \file
/// Kernel-reduction degree bookkeeping, Nagumo a-priori derivative bounds,
/// maximum-principle positivity certificates and the numerical evidence
/// checks for the small-ball hypothesis (H_r) and the forced-problem
/// hypothesis (H_R).
///
/// Everything here is evidence computed on finite grids and finite sweeps.
/// Reports say so; none of them is a proof.

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "posbvp/coincidence.hpp"
#include "posbvp/nonlinearity.hpp"
#include "posbvp/numerics.hpp"
#include "posbvp/solver.hpp"

namespace posbvp {

class DegenerateEndpointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NoBoundFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// h(a) = -(J Q N)(kernel element a):
///   BC1: -(1/T)     int_0^T f~(t, a + a t, a) dt
///   BC2: -(1/T)     int_0^T f~(t, a t, a) dt
///   BC3: -(2/T^2)   int_0^T int_0^s f~(t, a, 0) dt ds
/// Integrals use composite Simpson on `grid`.
double kernel_h(double a, const ExtendedFn& ft, BoundaryCondition bc,
                const Grid& grid);

/// Brouwer degree of a scalar map on (lo, hi): (sign h(hi) - sign h(lo)) / 2.
/// Throws DegenerateEndpointError when an endpoint value is within
/// `sign_tol` of zero.
int brouwer_degree_1d(const std::function<double(double)>& h, double lo,
                      double hi, double sign_tol = 0.0);

struct NagumoBoundOptions {
  double ceiling = 1e12;
  /// Relative width of the final bisection bracket.
  double resolution = 1e-9;
};

/// Smallest M (to `resolution`) with
///   int_{2r/T}^{M} xi^{(p-1)/p} / phi(xi) dxi > ||psi||_{L^p} (2r)^{(p-1)/p},
/// raised if necessary so that M > r. Throws NoBoundFoundError when the
/// ceiling is reached first.
double nagumo_bound(double r, const NagumoPair& np, double T,
                    const NagumoBoundOptions& opts = {});

enum class PositivityVerdict {
  PositiveClosed,    // u > 0 on [0, T]
  PositiveHalfOpen,  // u(0) = 0, u > 0 on (0, T]
  NonnegativeOnly,
  Fails
};

std::string_view to_string(PositivityVerdict v) noexcept;

struct PositivityCertificate {
  PositivityVerdict verdict = PositivityVerdict::Fails;
  double min_value = 0.0;
  double min_location = 0.0;
  /// min over interior nodes of u.
  double margin_interior = 0.0;
};

PositivityCertificate check_positivity(const GridFunction& u,
                                       BoundaryCondition bc, double tol);

/// True when the certificate is as strong as the frame's positivity claim:
/// [0, T] for BC1 and BC3, (0, T] for BC2.
bool meets_claim(const PositivityCertificate& cert, BoundaryCondition bc);

/// min over interior nodes of |u_i| + |u'_i|. A nontrivial solution cannot
/// have a double zero (u = u' = 0) in the interior.
double zero_propagation_margin(const GridFunction& u);

struct HypothesisOptions {
  /// Norm-avoidance band as a fraction of the target radius.
  double band_fraction = 0.01;
  SolveOptions solve;
  /// Sweep start; defaults to the kernel element on the boundary of the
  /// target ball.
  std::optional<GridFunction> initial;
  /// Restart norms (fractions of R) used for the nonexistence test at
  /// alpha0.
  std::vector<double> restart_fractions{0.1, 0.25, 0.5, 0.75, 1.0};
};

struct HypothesisReport {
  double target = 0.0;
  double band = 0.0;
  double integral_value = 0.0;
  bool integral_passes = false;
  /// (parameter, ||u||_inf) for every converged sweep step.
  std::vector<std::pair<double, double>> sweep_norms;
  std::vector<double> failed_parameters;
  bool norm_avoidance = false;
  /// H_R only: no solution with 0 <= u <= R was found at alpha0.
  bool nonexistence_at_alpha0 = false;
  /// H_R only: the last converged norm of the sweep exceeds R.
  bool norm_escape = false;
  bool passed = false;
  std::string note;
};

/// (H_r) evidence: the kernel integral at the radius-r kernel element and a
/// theta sweep checking that no converged solution has norm within the band
/// of r. integral_value is the untransformed integral, negative required.
HypothesisReport check_Hr(double r, const ExtendedFn& ft,
                          const CoincidenceFrame& frame,
                          std::span<const double> theta_schedule,
                          const HypothesisOptions& opts = {});

/// (H_R) evidence: an alpha sweep checking norm avoidance of R, plus a
/// multi-restart search for solutions in the R-ball at alpha0.
HypothesisReport check_HR(double R, const SampledDensity& v, double alpha0,
                          const ExtendedFn& ft, const CoincidenceFrame& frame,
                          std::span<const double> alpha_schedule,
                          const HypothesisOptions& opts = {});

struct DegreeOptions {
  std::vector<double> theta_schedule;
  std::vector<double> alpha_schedule;
  double alpha0 = 1.0;
  std::optional<SampledDensity> v;  // defaults to v = 1
  HypothesisOptions hypothesis;
  NagumoBoundOptions nagumo;
};

struct DegreeReport {
  double r = 0.0;
  double R = 0.0;
  double M_r = 0.0;
  double M_R = 0.0;
  double h_left = 0.0;
  double h_right = 0.0;
  int deg_kernel = 0;
  int deg_omega_r = 0;
  /// Known only when (H_R) passed (then 0 by homotopy invariance).
  std::optional<int> deg_omega_R;
  std::optional<int> deg_annulus;
  bool theorem_applicable = false;
  HypothesisReport hr;
  HypothesisReport hR;
  std::string note;
};

/// Computes h at the ends of the r-ball kernel interval, the kernel degree
/// (which is the degree on Omega_r by the finite-dimensional reduction),
/// the Nagumo radii and, when (H_R) holds, the annulus degree by
/// additivity.
DegreeReport degree_report(double r, double R, const ExtendedFn& ft,
                           const CoincidenceFrame& frame,
                           const DegreeOptions& opts);

/// Searches for a converged solution with min(r,R) < ||u||_inf < max(r,R),
/// starting from kernel elements whose norms sweep the annulus outward from
/// its midpoint. Returns nullopt when no start lands inside.
std::optional<SolveReport> find_annulus_solution(double r, double R,
                                                 const ExtendedFn& ft,
                                                 const CoincidenceFrame& frame,
                                                 const SolveOptions& opts = {},
                                                 int starts = 9);

/// Linear interpolation of nodal samples.
double interpolate(const SampledDensity& w, double t);

/// Evenly spaced schedule {max/steps, 2 max/steps, ..., max}, or
/// {0, max/steps, ..., max} when include_zero is set.
std::vector<double> uniform_schedule(double max, int steps, bool include_zero);

}  // namespace posbvp
