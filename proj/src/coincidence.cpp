#include "posbvp/coincidence.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace posbvp {

std::string_view to_string(BoundaryCondition bc) noexcept {
  switch (bc) {
    case BoundaryCondition::BC1: return "bc1";
    case BoundaryCondition::BC2: return "bc2";
    case BoundaryCondition::BC3: return "bc3";
  }
  return "unknown";
}

BoundaryCondition parse_boundary_condition(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "bc1") return BoundaryCondition::BC1;
  if (lower == "bc2") return BoundaryCondition::BC2;
  if (lower == "bc3") return BoundaryCondition::BC3;
  throw InvalidArgument("unknown boundary condition '" + std::string(name) +
                        "' (expected bc1, bc2 or bc3)");
}

std::array<double, 2> boundary_operator(const GridFunction& u,
                                        BoundaryCondition bc) {
  const auto us = u.u();
  const auto dus = u.du();
  const double u0 = us.front(), uT = us.back();
  const double du0 = dus.front(), duT = dus.back();
  switch (bc) {
    case BoundaryCondition::BC1: return {duT - u0, du0 - u0};
    case BoundaryCondition::BC2: return {duT - du0, u0};
    case BoundaryCondition::BC3: return {uT - u0, du0};
  }
  return {0.0, 0.0};
}

double KernelElement::value(double t) const noexcept {
  switch (bc) {
    case BoundaryCondition::BC1: return a + a * t;
    case BoundaryCondition::BC2: return a * t;
    case BoundaryCondition::BC3: return a;
  }
  return 0.0;
}

double KernelElement::slope() const noexcept {
  return bc == BoundaryCondition::BC3 ? 0.0 : a;
}

GridFunction kernel_embed(const KernelElement& e, const Grid& grid) {
  std::vector<double> u(grid.size()), du(grid.size(), e.slope());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = e.value(grid.node(i));
  return GridFunction(grid, std::move(u), std::move(du));
}

double image_defect(const SampledDensity& w, BoundaryCondition bc) {
  if (bc == BoundaryCondition::BC3) return double_cumulative(w).values().back();
  return trapezoid(w);
}

double project_P_parameter(const GridFunction& u, BoundaryCondition bc) {
  const double T = u.grid().length();
  const auto us = u.u();
  switch (bc) {
    case BoundaryCondition::BC1: return (us.back() - us.front()) / T;
    case BoundaryCondition::BC2: return u.du().front();
    case BoundaryCondition::BC3: {
      SampledDensity values(u.grid(), {us.begin(), us.end()});
      return trapezoid(values) / T;
    }
  }
  return 0.0;
}

GridFunction project_P(const GridFunction& u, BoundaryCondition bc) {
  return kernel_embed({project_P_parameter(u, bc), bc}, u.grid());
}

double project_Q(const SampledDensity& w, BoundaryCondition bc) {
  const double T = w.grid().length();
  if (bc == BoundaryCondition::BC3) return 2.0 / (T * T) * image_defect(w, bc);
  return image_defect(w, bc) / T;
}

double image_tolerance(const SampledDensity& w) {
  const double h = w.grid().spacing();
  return 10.0 * h * h * std::max(w.sup_norm(), 1.0);
}

GridFunction right_inverse_KP(const SampledDensity& w, BoundaryCondition bc,
                              double tolerance) {
  if (tolerance < 0.0) tolerance = image_tolerance(w);
  const double defect = image_defect(w, bc);
  if (!(std::abs(defect) <= tolerance)) {
    std::ostringstream os;
    os << "density is not in the image of L for " << to_string(bc)
       << ": defect " << defect << " exceeds tolerance " << tolerance;
    throw NotInImageError(os.str(), defect);
  }

  const Grid& grid = w.grid();
  const double T = grid.length();
  const SampledDensity V = cumulative_integral(w);
  const SampledDensity W = cumulative_integral(V);
  std::vector<double> u(grid.size()), du(grid.size());

  switch (bc) {
    case BoundaryCondition::BC1: {
      // (D/T)(1 + s) - W(s) with D = W(T) meets u'(0)=u'(T)=u(0)=u(T)
      const double c = W.values().back() / T;
      for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = c * (1.0 + grid.node(i)) - W[i];
        du[i] = c - V[i];
      }
      break;
    }
    case BoundaryCondition::BC2:
      for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = -W[i];
        du[i] = -V[i];
      }
      break;
    case BoundaryCondition::BC3: {
      const double mean = trapezoid(W) / T;
      for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = mean - W[i];
        du[i] = -V[i];
      }
      break;
    }
  }
  return GridFunction(grid, std::move(u), std::move(du));
}

KernelElement iso_J(double c, BoundaryCondition bc) noexcept { return {c, bc}; }

SampledDensity CoincidenceFrame::complement(const SampledDensity& w) const {
  return w - SampledDensity::constant(w.grid(), project_Q(w, bc_));
}

std::array<double, 2> CoincidenceFrame::kernel_interval(double radius) const {
  const double T = grid_.length();
  double bound = radius;
  if (bc_ == BoundaryCondition::BC1) bound = radius / (1.0 + T);
  if (bc_ == BoundaryCondition::BC2) bound = radius / T;
  return {-bound, bound};
}

}  // namespace posbvp
