#include "posbvp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace posbvp {

void HomotopyParams::validate(const Grid& grid) const {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw InvalidArgument("theta must lie in (0, 1]");
  }
  if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be nonnegative");
  if (v) {
    if (!(v->grid() == grid)) throw InvalidArgument("forcing profile grid mismatch");
    bool nonzero = false;
    for (double x : v->values()) {
      if (x < 0.0) throw InvalidArgument("forcing profile must be nonnegative");
      nonzero = nonzero || x > 0.0;
    }
    if (alpha > 0.0 && !nonzero) {
      throw InvalidArgument("forcing profile vanishes identically");
    }
  } else if (alpha > 0.0) {
    throw InvalidArgument("alpha > 0 requires a forcing profile");
  }
}

SampledDensity forced_nemytskii(const ExtendedFn& ft, const GridFunction& u,
                                const HomotopyParams& hp) {
  SampledDensity w = nemytskii(ft, u);
  if (hp.v && hp.alpha != 0.0) w = w + hp.v->scaled(hp.alpha);
  return w;
}

GridFunction phi_operator(const GridFunction& u, const ExtendedFn& ft,
                          const CoincidenceFrame& frame,
                          const HomotopyParams& hp) {
  const SampledDensity w = forced_nemytskii(ft, u, hp);
  const double q = frame.Q(w);
  const double a = project_P_parameter(u, frame.bc()) + frame.J(q).a;
  const SampledDensity image_part =
      w - SampledDensity::constant(w.grid(), q);
  const GridFunction correction =
      frame.KP(image_part, image_tolerance(w)).scaled(hp.theta);
  return frame.embed(a) + correction;
}

ResidualNorms residual(const GridFunction& u, const ExtendedFn& ft,
                       BoundaryCondition bc, const HomotopyParams& hp) {
  const Grid& grid = u.grid();
  const std::size_t n = static_cast<std::size_t>(grid.intervals());
  if (n < 4) throw InvalidArgument("residual needs a grid with n >= 4");
  const double h = grid.spacing();
  const auto us = u.u();
  const auto dus = u.du();

  ResidualNorms out;
  for (std::size_t i = 1; i < n; ++i) {
    const double t = grid.node(i);
    const double d2 = (us[i + 1] - 2.0 * us[i] + us[i - 1]) / (h * h);
    double r = d2 + hp.theta * ft(t, us[i], dus[i]);
    if (hp.v) r += hp.alpha * (*hp.v)[i];
    out.interior = std::max(out.interior, std::abs(r));
  }

  double consistency = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d1 = (us[i + 1] - us[i - 1]) / (2.0 * h);
    consistency = std::max(consistency, std::abs(dus[i] - d1));
  }
  const double d1_left = (-3.0 * us[0] + 4.0 * us[1] - us[2]) / (2.0 * h);
  const double d1_right =
      (3.0 * us[n] - 4.0 * us[n - 1] + us[n - 2]) / (2.0 * h);
  consistency = std::max(consistency, std::abs(dus[0] - d1_left));
  consistency = std::max(consistency, std::abs(dus[n] - d1_right));

  const auto b = boundary_operator(u, bc);
  out.boundary = std::abs(b[0]) + std::abs(b[1]) + consistency;
  return out;
}

namespace {

using Vec = std::vector<double>;

Vec pack(const GridFunction& u) {
  Vec x(u.u().begin(), u.u().end());
  x.insert(x.end(), u.du().begin(), u.du().end());
  return x;
}

GridFunction unpack(const Grid& grid, const Vec& x) {
  const std::size_t m = grid.size();
  return GridFunction(grid, Vec(x.begin(), x.begin() + m),
                      Vec(x.begin() + m, x.end()));
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(const GridFunction& u) {
  for (double v : u.u()) if (!std::isfinite(v)) return false;
  for (double v : u.du()) if (!std::isfinite(v)) return false;
  return true;
}

/// Restarted GMRES for A x = b with A given as a matrix-free product.
template <typename Apply>
Vec gmres(const Apply& apply, const Vec& b, double rel_tol, int restart,
          int max_iters) {
  const std::size_t n = b.size();
  Vec x(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return x;
  int total = 0;
  while (total < max_iters) {
    Vec r = b;
    if (total > 0) {
      const Vec ax = apply(x);
      for (std::size_t i = 0; i < n; ++i) r[i] -= ax[i];
    }
    double beta = norm2(r);
    if (beta <= rel_tol * bnorm) break;

    const int m = restart;
    std::vector<Vec> V;
    V.reserve(m + 1);
    V.push_back(r);
    for (double& v : V[0]) v /= beta;
    std::vector<Vec> H(m + 1, Vec(m, 0.0));
    Vec cs(m, 0.0), sn(m, 0.0), g(m + 1, 0.0);
    g[0] = beta;

    int k = 0;
    for (; k < m && total < max_iters; ++k, ++total) {
      Vec w = apply(V[k]);
      for (int j = 0; j <= k; ++j) {
        H[j][k] = dot(w, V[j]);
        for (std::size_t i = 0; i < n; ++i) w[i] -= H[j][k] * V[j][i];
      }
      H[k + 1][k] = norm2(w);
      for (int j = 0; j < k; ++j) {
        const double tmp = cs[j] * H[j][k] + sn[j] * H[j + 1][k];
        H[j + 1][k] = -sn[j] * H[j][k] + cs[j] * H[j + 1][k];
        H[j][k] = tmp;
      }
      const double denom = std::hypot(H[k][k], H[k + 1][k]);
      cs[k] = denom == 0.0 ? 1.0 : H[k][k] / denom;
      sn[k] = denom == 0.0 ? 0.0 : H[k + 1][k] / denom;
      const double hk1 = H[k + 1][k];
      H[k][k] = cs[k] * H[k][k] + sn[k] * hk1;
      H[k + 1][k] = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];

      const bool done = std::abs(g[k + 1]) <= rel_tol * bnorm;
      if (hk1 > 0.0 && !done) {
        for (double& v : w) v /= hk1;
        V.push_back(std::move(w));
      } else {
        ++k;
        ++total;
        break;
      }
    }

    // back substitution on the k x k triangle
    Vec y(k, 0.0);
    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int j = i + 1; j < k; ++j) s -= H[i][j] * y[j];
      y[i] = H[i][i] == 0.0 ? 0.0 : s / H[i][i];
    }
    for (int j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < n; ++i) x[i] += y[j] * V[j][i];
    }
    if (std::abs(g[k]) <= rel_tol * bnorm) break;
  }
  return x;
}

struct NewtonOutcome {
  GridFunction u;
  int iterations = 0;
  bool converged = false;
  std::string note;
};

/// Inexact Newton on G(x) = x - Phi(x) with finite-difference directional
/// derivatives inside GMRES and a backtracking line search on ||G||_2.
NewtonOutcome newton_krylov(const GridFunction& start, const ExtendedFn& ft,
                            const CoincidenceFrame& frame,
                            const HomotopyParams& hp,
                            const SolveOptions& opts) {
  const Grid& grid = frame.grid();
  auto G = [&](const Vec& x) {
    const GridFunction u = unpack(grid, x);
    const Vec phi = pack(phi_operator(u, ft, frame, hp));
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i] - phi[i];
    return g;
  };

  Vec x = pack(start);
  Vec g = G(x);
  NewtonOutcome out{start, 0, false, {}};
  const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());

  for (int it = 0; it < opts.newton_max_iters; ++it) {
    if (norm_inf(g) <= opts.tol) {
      out.converged = true;
      break;
    }
    const double xnorm = norm2(x);
    auto jv = [&](const Vec& v) {
      const double vnorm = norm2(v);
      if (vnorm == 0.0) return Vec(v.size(), 0.0);
      const double eps = sqrt_eps * (1.0 + xnorm) / vnorm;
      Vec xp(x);
      for (std::size_t i = 0; i < x.size(); ++i) xp[i] += eps * v[i];
      Vec gp = G(xp);
      for (std::size_t i = 0; i < gp.size(); ++i) gp[i] = (gp[i] - g[i]) / eps;
      return gp;
    };
    Vec rhs(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) rhs[i] = -g[i];
    const Vec step = gmres(jv, rhs, 1e-10, opts.krylov_restart,
                           opts.krylov_max_iters);

    const double g0 = norm2(g);
    double t = 1.0;
    bool accepted = false;
    Vec x_trial(x.size()), g_trial;
    while (t >= 1.0 / 1024.0) {
      for (std::size_t i = 0; i < x.size(); ++i) x_trial[i] = x[i] + t * step[i];
      try {
        g_trial = G(x_trial);
      } catch (const EvaluationError&) {
        t *= 0.5;
        continue;
      }
      const double gn = norm2(g_trial);
      if (std::isfinite(gn) && gn <= (1.0 - 1e-4 * t) * g0) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    ++out.iterations;
    if (!accepted) {
      out.note = "Newton line search failed to reduce the fixed-point gap";
      break;
    }
    x = x_trial;
    g = g_trial;
    if (norm_inf(x) > opts.divergence_ceiling) {
      std::ostringstream os;
      os << "Newton iterate norm " << norm_inf(x) << " exceeds ceiling "
         << opts.divergence_ceiling;
      throw DivergenceError(os.str(), norm_inf(x));
    }
  }
  if (!out.converged && norm_inf(g) <= opts.tol) out.converged = true;
  out.u = unpack(grid, x);
  if (!out.converged && out.note.empty()) {
    out.note = "Newton iteration limit reached";
  }
  return out;
}

double auto_residual_tol(const GridFunction& u, const ExtendedFn& ft,
                         const HomotopyParams& hp) {
  const double h = u.grid().spacing();
  double scale = 1.0;
  try {
    scale = std::max(scale, forced_nemytskii(ft, u, hp).sup_norm());
  } catch (const EvaluationError&) {
  }
  return 100.0 * h * h * scale;
}

SolveReport finish(GridFunction u, const ExtendedFn& ft,
                   const CoincidenceFrame& frame, const HomotopyParams& hp,
                   const SolveOptions& opts, double gap, int iterations,
                   int newton_iterations, bool reached, std::string method,
                   std::string note) {
  SolveReport report{u, 0.0, 0.0, u.sup_norm(), u.deriv_sup_norm(), gap,
                     iterations, newton_iterations, false, std::move(method),
                     std::move(note)};
  const ResidualNorms res = residual(u, ft, frame.bc(), hp);
  report.residual = res.interior;
  report.boundary_defect = res.boundary;
  const double rtol = opts.residual_tol > 0.0 ? opts.residual_tol
                                              : auto_residual_tol(u, ft, hp);
  if (reached) {
    report.converged = res.interior <= rtol && res.boundary <= rtol;
    if (!report.converged) {
      std::ostringstream os;
      os << "fixed point reached but discrete residual (" << res.interior
         << ", " << res.boundary << ") exceeds " << rtol;
      report.note = os.str();
    }
  }
  return report;
}

}  // namespace

SolveReport solve_fixed_point(const GridFunction& initial,
                              const ExtendedFn& ft,
                              const CoincidenceFrame& frame,
                              const HomotopyParams& hp,
                              const SolveOptions& opts) {
  if (!(initial.grid() == frame.grid())) {
    throw InvalidArgument("initial guess is not on the frame's grid");
  }
  if (!(opts.damping > 0.0 && opts.damping <= 1.0)) {
    throw InvalidArgument("damping must lie in (0, 1]");
  }
  if (opts.max_iters < 1) throw InvalidArgument("max_iters must be positive");
  hp.validate(frame.grid());

  GridFunction u = initial;
  std::vector<double> gaps;
  int growth = 0;
  for (int k = 0; k < opts.max_iters; ++k) {
    const GridFunction phi = phi_operator(u, ft, frame, hp);
    const double gap = phi.distance(u);
    if (!std::isfinite(gap)) {
      throw DivergenceError("fixed-point map produced non-finite values",
                            std::numeric_limits<double>::infinity());
    }
    if (gap <= opts.tol) {
      return finish(u, ft, frame, hp, opts, gap, k, 0, true, "picard", {});
    }
    if (!gaps.empty()) growth = gap > gaps.back() ? growth + 1 : 0;
    gaps.push_back(gap);

    const int w = opts.stall_window;
    const bool stalled =
        (static_cast<int>(gaps.size()) > w &&
         (gaps[gaps.size() - 1 - w] - gap) < opts.stall_progress *
                                                 gaps[gaps.size() - 1 - w]) ||
        growth >= opts.growth_run;
    if (stalled && opts.allow_newton) {
      NewtonOutcome nk = newton_krylov(u, ft, frame, hp, opts);
      const double final_gap =
          phi_operator(nk.u, ft, frame, hp).distance(nk.u);
      return finish(std::move(nk.u), ft, frame, hp, opts, final_gap,
                    k + nk.iterations, nk.iterations, nk.converged,
                    "picard+newton", nk.note);
    }

    u = u.blend(phi, opts.damping);
    if (!all_finite(u) || u.c1_norm() > opts.divergence_ceiling) {
      std::ostringstream os;
      os << "Picard iterate norm " << u.c1_norm() << " exceeds ceiling "
         << opts.divergence_ceiling;
      throw DivergenceError(os.str(), u.c1_norm());
    }
  }
  const double gap = phi_operator(u, ft, frame, hp).distance(u);
  return finish(u, ft, frame, hp, opts, gap, opts.max_iters, 0, false,
                "picard", "iteration limit reached");
}

std::vector<SweepStep> continuation(SweepFamily family,
                                    std::span<const double> schedule,
                                    const GridFunction& initial,
                                    const ExtendedFn& ft,
                                    const CoincidenceFrame& frame,
                                    const HomotopyParams& base,
                                    const SolveOptions& opts) {
  if (schedule.empty()) throw InvalidArgument("continuation schedule is empty");
  const bool up = std::is_sorted(schedule.begin(), schedule.end());
  const bool down = std::is_sorted(schedule.rbegin(), schedule.rend());
  if (!up && !down) throw InvalidArgument("continuation schedule is not monotone");

  std::vector<SweepStep> steps;
  steps.reserve(schedule.size());
  GridFunction warm = initial;
  for (double value : schedule) {
    HomotopyParams hp = base;
    (family == SweepFamily::Theta ? hp.theta : hp.alpha) = value;
    try {
      SolveReport report = solve_fixed_point(warm, ft, frame, hp, opts);
      if (report.converged) warm = report.solution;
      steps.push_back({value, std::move(report)});
    } catch (const DivergenceError& e) {
      steps.push_back({value, SolveReport{warm, 0.0, 0.0, warm.sup_norm(),
                                          warm.deriv_sup_norm(),
                                          std::numeric_limits<double>::infinity(),
                                          0, 0, false, "picard", e.what()}});
    } catch (const EvaluationError& e) {
      steps.push_back({value, SolveReport{warm, 0.0, 0.0, warm.sup_norm(),
                                          warm.deriv_sup_norm(),
                                          std::numeric_limits<double>::infinity(),
                                          0, 0, false, "picard", e.what()}});
    }
  }
  return steps;
}

GridFunction default_initial_guess(const CoincidenceFrame& frame,
                                   std::optional<std::array<double, 2>> bracket,
                                   double fallback) {
  if (bracket) {
    const double radius = 0.5 * ((*bracket)[0] + (*bracket)[1]);
    return frame.embed(frame.kernel_interval(radius)[1]);
  }
  return frame.embed(fallback);
}

}  // namespace posbvp
