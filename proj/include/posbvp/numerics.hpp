#pragma once

/// \file
/// Uniform grids on [0,T], sampled C^1 functions and the quadrature
/// primitives (single and iterated integrals) used by every other module.

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace posbvp {

/// Raised when a precondition on user-supplied arguments does not hold.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform partition t_i = i*T/n, i = 0..n, of [0,T].
class Grid {
 public:
  /// Throws InvalidArgument unless T > 0 and n >= 2.
  Grid(double T, int n);

  double length() const noexcept { return T_; }
  int intervals() const noexcept { return n_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) + 1; }
  double spacing() const noexcept { return T_ / n_; }

  /// Node i; node(0) == 0 and node(n) == T exactly.
  double node(std::size_t i) const noexcept;
  std::vector<double> nodes() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double T_;
  int n_;
};

Grid make_grid(double T, int n);

/// Samples of a real density w on a grid (discrete stand-in for L^1).
class SampledDensity {
 public:
  SampledDensity(Grid grid, std::vector<double> w);

  /// w_i = fn(t_i).
  static SampledDensity sample(const Grid& grid,
                               const std::function<double(double)>& fn);
  static SampledDensity constant(const Grid& grid, double value);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return w_; }
  double operator[](std::size_t i) const noexcept { return w_[i]; }
  std::size_t size() const noexcept { return w_.size(); }

  double sup_norm() const noexcept;

  SampledDensity operator+(const SampledDensity& other) const;
  SampledDensity operator-(const SampledDensity& other) const;
  SampledDensity scaled(double factor) const;

 private:
  Grid grid_;
  std::vector<double> w_;
};

/// Sampled (u, u') pair representing a C^1 candidate solution. The
/// derivative samples are carried explicitly rather than differenced.
class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<double> u, std::vector<double> du);

  static GridFunction sample(const Grid& grid,
                             const std::function<double(double)>& u,
                             const std::function<double(double)>& du);
  static GridFunction zero(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> u() const noexcept { return u_; }
  std::span<const double> du() const noexcept { return du_; }
  std::size_t size() const noexcept { return u_.size(); }

  double sup_norm() const noexcept;
  double deriv_sup_norm() const noexcept;
  /// ||u||_inf + ||u'||_inf.
  double c1_norm() const noexcept { return sup_norm() + deriv_sup_norm(); }
  double max_value() const noexcept;
  double min_value() const noexcept;

  GridFunction operator+(const GridFunction& other) const;
  GridFunction operator-(const GridFunction& other) const;
  GridFunction scaled(double factor) const;
  /// (1 - weight) * this + weight * other.
  GridFunction blend(const GridFunction& other, double weight) const;

  /// Largest nodal difference over both channels.
  double distance(const GridFunction& other) const;

 private:
  Grid grid_;
  std::vector<double> u_;
  std::vector<double> du_;
};

/// Composite Simpson rule, trapezoid when n is odd. Exact on cubics for
/// even n.
double integrate(const SampledDensity& w);

/// Composite trapezoid value of the whole integral; equals the last node of
/// cumulative_integral.
double trapezoid(const SampledDensity& w);

/// s -> int_0^s w, by the cumulative trapezoid rule (order 2).
SampledDensity cumulative_integral(const SampledDensity& w);

/// s -> int_0^s int_0^t w; cumulative_integral applied twice.
SampledDensity double_cumulative(const SampledDensity& w);

/// Composite Simpson over an arbitrary interval [a, b] with `panels` even
/// subintervals. Used for scalar integrals outside the grid machinery.
double simpson(const std::function<double(double)>& fn, double a, double b,
               int panels);

}  // namespace posbvp
