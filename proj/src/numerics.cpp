#include "posbvp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace posbvp {

namespace {

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw InvalidArgument("grid mismatch between operands");
}

double max_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

Grid::Grid(double T, int n) : T_(T), n_(n) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    std::ostringstream os;
    os << "grid length must be positive and finite, got " << T;
    throw InvalidArgument(os.str());
  }
  if (n < 2) {
    std::ostringstream os;
    os << "grid needs at least 2 subintervals, got " << n;
    throw InvalidArgument(os.str());
  }
}

double Grid::node(std::size_t i) const noexcept {
  if (i == 0) return 0.0;
  if (i == static_cast<std::size_t>(n_)) return T_;
  return T_ * static_cast<double>(i) / n_;
}

std::vector<double> Grid::nodes() const {
  std::vector<double> t(size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = node(i);
  return t;
}

Grid make_grid(double T, int n) { return Grid(T, n); }

// --- SampledDensity --------------------------------------------------------

SampledDensity::SampledDensity(Grid grid, std::vector<double> w)
    : grid_(grid), w_(std::move(w)) {
  if (w_.size() != grid_.size()) {
    throw InvalidArgument("density sample count does not match grid");
  }
  for (double v : w_) {
    if (!std::isfinite(v)) throw InvalidArgument("density sample is not finite");
  }
}

SampledDensity SampledDensity::sample(const Grid& grid,
                                      const std::function<double(double)>& fn) {
  std::vector<double> w(grid.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = fn(grid.node(i));
  return SampledDensity(grid, std::move(w));
}

SampledDensity SampledDensity::constant(const Grid& grid, double value) {
  return SampledDensity(grid, std::vector<double>(grid.size(), value));
}

double SampledDensity::sup_norm() const noexcept { return max_abs(w_); }

SampledDensity SampledDensity::operator+(const SampledDensity& other) const {
  require_same_grid(grid_, other.grid_);
  std::vector<double> w(w_);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += other.w_[i];
  return SampledDensity(grid_, std::move(w));
}

SampledDensity SampledDensity::operator-(const SampledDensity& other) const {
  require_same_grid(grid_, other.grid_);
  std::vector<double> w(w_);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= other.w_[i];
  return SampledDensity(grid_, std::move(w));
}

SampledDensity SampledDensity::scaled(double factor) const {
  std::vector<double> w(w_);
  for (double& v : w) v *= factor;
  return SampledDensity(grid_, std::move(w));
}

// --- GridFunction ----------------------------------------------------------

GridFunction::GridFunction(Grid grid, std::vector<double> u,
                           std::vector<double> du)
    : grid_(grid), u_(std::move(u)), du_(std::move(du)) {
  if (u_.size() != grid_.size() || du_.size() != grid_.size()) {
    throw InvalidArgument("grid function sample count does not match grid");
  }
}

GridFunction GridFunction::sample(const Grid& grid,
                                  const std::function<double(double)>& u,
                                  const std::function<double(double)>& du) {
  std::vector<double> us(grid.size()), dus(grid.size());
  for (std::size_t i = 0; i < us.size(); ++i) {
    us[i] = u(grid.node(i));
    dus[i] = du(grid.node(i));
  }
  return GridFunction(grid, std::move(us), std::move(dus));
}

GridFunction GridFunction::zero(const Grid& grid) {
  return GridFunction(grid, std::vector<double>(grid.size(), 0.0),
                      std::vector<double>(grid.size(), 0.0));
}

double GridFunction::sup_norm() const noexcept { return max_abs(u_); }
double GridFunction::deriv_sup_norm() const noexcept { return max_abs(du_); }

double GridFunction::max_value() const noexcept {
  return *std::max_element(u_.begin(), u_.end());
}

double GridFunction::min_value() const noexcept {
  return *std::min_element(u_.begin(), u_.end());
}

GridFunction GridFunction::operator+(const GridFunction& other) const {
  require_same_grid(grid_, other.grid_);
  std::vector<double> u(u_), du(du_);
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] += other.u_[i];
    du[i] += other.du_[i];
  }
  return GridFunction(grid_, std::move(u), std::move(du));
}

GridFunction GridFunction::operator-(const GridFunction& other) const {
  return *this + other.scaled(-1.0);
}

GridFunction GridFunction::scaled(double factor) const {
  std::vector<double> u(u_), du(du_);
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] *= factor;
    du[i] *= factor;
  }
  return GridFunction(grid_, std::move(u), std::move(du));
}

GridFunction GridFunction::blend(const GridFunction& other,
                                 double weight) const {
  require_same_grid(grid_, other.grid_);
  std::vector<double> u(u_.size()), du(du_.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = (1.0 - weight) * u_[i] + weight * other.u_[i];
    du[i] = (1.0 - weight) * du_[i] + weight * other.du_[i];
  }
  return GridFunction(grid_, std::move(u), std::move(du));
}

double GridFunction::distance(const GridFunction& other) const {
  require_same_grid(grid_, other.grid_);
  double d = 0.0;
  for (std::size_t i = 0; i < u_.size(); ++i) {
    d = std::max(d, std::abs(u_[i] - other.u_[i]));
    d = std::max(d, std::abs(du_[i] - other.du_[i]));
  }
  return d;
}

// --- quadrature ------------------------------------------------------------

double integrate(const SampledDensity& w) {
  const int n = w.grid().intervals();
  const double h = w.grid().spacing();
  if (n % 2 != 0) return trapezoid(w);
  double odd = 0.0, even = 0.0;
  for (int i = 1; i < n; ++i) (i % 2 ? odd : even) += w[i];
  return h / 3.0 * (w[0] + 4.0 * odd + 2.0 * even + w[n]);
}

double trapezoid(const SampledDensity& w) {
  return cumulative_integral(w).values().back();
}

SampledDensity cumulative_integral(const SampledDensity& w) {
  const double half_h = 0.5 * w.grid().spacing();
  std::vector<double> out(w.size(), 0.0);
  for (std::size_t i = 1; i < out.size(); ++i) {
    out[i] = out[i - 1] + half_h * (w[i - 1] + w[i]);
  }
  return SampledDensity(w.grid(), std::move(out));
}

SampledDensity double_cumulative(const SampledDensity& w) {
  return cumulative_integral(cumulative_integral(w));
}

double simpson(const std::function<double(double)>& fn, double a, double b,
               int panels) {
  if (panels < 2) panels = 2;
  if (panels % 2 != 0) ++panels;
  const double h = (b - a) / panels;
  double sum = fn(a) + fn(b);
  for (int i = 1; i < panels; ++i) {
    sum += (i % 2 ? 4.0 : 2.0) * fn(a + i * h);
  }
  return sum * h / 3.0;
}

}  // namespace posbvp
