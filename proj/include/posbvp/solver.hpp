#pragma once

/// \file
/// The fixed-point operator
///
///   Phi(u) = P u + J Q N_a u + theta K_P (Id - Q) N_a u,   N_a u = N u + alpha v,
///
/// whose fixed points are exactly the solutions of L u = theta N u + ...
/// with Q N_a u = 0, together with the damped Picard / Newton-Krylov engine
/// and the theta / alpha continuation sweeps built on it.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "posbvp/coincidence.hpp"
#include "posbvp/nonlinearity.hpp"
#include "posbvp/numerics.hpp"

namespace posbvp {

/// Deformation parameter theta in (0, 1] and forcing alpha * v, alpha >= 0.
struct HomotopyParams {
  double theta = 1.0;
  double alpha = 0.0;
  std::optional<SampledDensity> v;

  /// Throws InvalidArgument when the invariants fail or v lives on a
  /// different grid.
  void validate(const Grid& grid) const;
};

/// N u + alpha v (theta is applied inside Phi, not here).
SampledDensity forced_nemytskii(const ExtendedFn& ft, const GridFunction& u,
                                const HomotopyParams& hp);

GridFunction phi_operator(const GridFunction& u, const ExtendedFn& ft,
                          const CoincidenceFrame& frame,
                          const HomotopyParams& hp);

struct ResidualNorms {
  /// max over interior nodes of |D2 u + theta f~(t,u,u') + alpha v|.
  double interior = 0.0;
  /// ||B(u)||_1 plus max |u' - D1 u| (derivative-sample consistency).
  double boundary = 0.0;
};

/// Requires n >= 4.
ResidualNorms residual(const GridFunction& u, const ExtendedFn& ft,
                       BoundaryCondition bc, const HomotopyParams& hp);

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double norm)
      : std::runtime_error(what), norm_(norm) {}
  double norm() const noexcept { return norm_; }

 private:
  double norm_;
};

struct SolveOptions {
  int max_iters = 5000;
  /// Picard relaxation: u <- (1 - damping) u + damping Phi(u).
  double damping = 0.5;
  /// Tolerance on ||Phi(u) - u||_inf.
  double tol = 1e-10;
  /// Tolerance on both residual channels; negative selects
  /// 100 h^2 max(1, ||N u||_inf), the truncation scale of the scheme.
  double residual_tol = -1.0;
  double divergence_ceiling = 1e8;
  /// Picard counts as stalled when the gap shrinks by less than
  /// stall_progress (relative) over stall_window iterations, or grows
  /// growth_run times in a row.
  int stall_window = 10;
  double stall_progress = 1e-3;
  int growth_run = 3;
  bool allow_newton = true;
  int newton_max_iters = 60;
  int krylov_restart = 60;
  int krylov_max_iters = 600;
};

struct SolveReport {
  GridFunction solution;
  double residual = 0.0;
  double boundary_defect = 0.0;
  double sup_norm = 0.0;
  double deriv_sup_norm = 0.0;
  /// ||Phi(u) - u||_inf at the returned iterate.
  double fixed_point_gap = 0.0;
  int iterations = 0;
  int newton_iterations = 0;
  bool converged = false;
  /// "picard" or "picard+newton".
  std::string method;
  std::string note;
};

SolveReport solve_fixed_point(const GridFunction& initial,
                              const ExtendedFn& ft,
                              const CoincidenceFrame& frame,
                              const HomotopyParams& hp,
                              const SolveOptions& opts = {});

enum class SweepFamily { Theta, Alpha };

struct SweepStep {
  double parameter = 0.0;
  SolveReport report;
};

/// Solves along a monotone schedule of theta (or alpha) values, warm
/// starting every step from the last converged solution. Failed steps are
/// recorded with converged = false and do not stop the sweep.
std::vector<SweepStep> continuation(SweepFamily family,
                                    std::span<const double> schedule,
                                    const GridFunction& initial,
                                    const ExtendedFn& ft,
                                    const CoincidenceFrame& frame,
                                    const HomotopyParams& base,
                                    const SolveOptions& opts = {});

/// Kernel element of norm (r + R) / 2 when a bracket is supplied, else the
/// kernel element with parameter `fallback`.
GridFunction default_initial_guess(const CoincidenceFrame& frame,
                                   std::optional<std::array<double, 2>> bracket,
                                   double fallback = 0.1);

}  // namespace posbvp
