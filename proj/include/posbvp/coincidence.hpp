#pragma once

/// \file
/// The three boundary-condition frames for L u = -u'': kernel embeddings,
/// the image-defect functional, the projections P and Q, the right inverse
/// K_P and the isomorphism J : coker L -> ker L.
///
/// All integrals here use the cumulative trapezoid rule so that the
/// discrete frame is exactly consistent: Q fixes constants, the complement
/// w - Qw has zero image defect to rounding, and K_P meets its side
/// conditions at the nodes.

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

#include "posbvp/numerics.hpp"

namespace posbvp {

/// BC1: u'(0) = u'(T) = u(0).
/// BC2: u'(0) = u'(T), u(0) = 0.
/// BC3: u(0) = u(T), u'(0) = 0.
enum class BoundaryCondition { BC1, BC2, BC3 };

std::string_view to_string(BoundaryCondition bc) noexcept;
/// Accepts "bc1"/"BC1" etc. Throws InvalidArgument otherwise.
BoundaryCondition parse_boundary_condition(std::string_view name);

/// B(u) in R^2 evaluated from the end samples of (u, u').
std::array<double, 2> boundary_operator(const GridFunction& u,
                                        BoundaryCondition bc);

/// A point of ker L, identified with its real parameter.
struct KernelElement {
  double a = 0.0;
  BoundaryCondition bc = BoundaryCondition::BC1;

  /// Value and slope of the embedded function at t.
  double value(double t) const noexcept;
  double slope() const noexcept;
};

/// Raised by right_inverse_KP when w is not (numerically) in Im L.
class NotInImageError : public std::domain_error {
 public:
  NotInImageError(const std::string& what, double defect)
      : std::domain_error(what), defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

GridFunction kernel_embed(const KernelElement& e, const Grid& grid);

/// int_0^T w for BC1/BC2, int_0^T int_0^s w for BC3.
double image_defect(const SampledDensity& w, BoundaryCondition bc);

/// Kernel parameter of P u.
double project_P_parameter(const GridFunction& u, BoundaryCondition bc);
GridFunction project_P(const GridFunction& u, BoundaryCondition bc);

/// The coker L coordinate of w: (1/T) int w for BC1/BC2 and
/// (2/T^2) int int w for BC3.
double project_Q(const SampledDensity& w, BoundaryCondition bc);

/// Default image-membership tolerance: 10 h^2 max(||w||_inf, 1).
double image_tolerance(const SampledDensity& w);

/// The unique u in dom L cap ker P with -u'' = w. Throws NotInImageError
/// when |image_defect(w)| exceeds `tolerance` (negative selects the
/// default image_tolerance).
GridFunction right_inverse_KP(const SampledDensity& w, BoundaryCondition bc,
                              double tolerance = -1.0);

/// J : coker L -> ker L, the identity on real coordinates.
KernelElement iso_J(double c, BoundaryCondition bc) noexcept;

/// A boundary condition bound to a grid; convenience wrapper over the free
/// functions above.
class CoincidenceFrame {
 public:
  CoincidenceFrame(BoundaryCondition bc, Grid grid) : bc_(bc), grid_(grid) {}

  BoundaryCondition bc() const noexcept { return bc_; }
  const Grid& grid() const noexcept { return grid_; }

  GridFunction embed(double a) const { return kernel_embed({a, bc_}, grid_); }
  double defect(const SampledDensity& w) const { return image_defect(w, bc_); }
  GridFunction P(const GridFunction& u) const { return project_P(u, bc_); }
  double Q(const SampledDensity& w) const { return project_Q(w, bc_); }
  /// w - Q w, which lies in Im L.
  SampledDensity complement(const SampledDensity& w) const;
  GridFunction KP(const SampledDensity& w, double tolerance = -1.0) const {
    return right_inverse_KP(w, bc_, tolerance);
  }
  KernelElement J(double c) const noexcept { return iso_J(c, bc_); }

  /// Open interval of kernel parameters a with ||embed(a)||_inf < radius.
  std::array<double, 2> kernel_interval(double radius) const;

 private:
  BoundaryCondition bc_;
  Grid grid_;
};

}  // namespace posbvp
