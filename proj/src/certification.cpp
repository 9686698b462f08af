#include "posbvp/certification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace posbvp {

double kernel_h(double a, const ExtendedFn& ft, BoundaryCondition bc,
                const Grid& grid) {
  const double T = grid.length();
  switch (bc) {
    case BoundaryCondition::BC1: {
      auto w = SampledDensity::sample(
          grid, [&](double t) { return ft(t, a + a * t, a); });
      return -integrate(w) / T;
    }
    case BoundaryCondition::BC2: {
      auto w = SampledDensity::sample(
          grid, [&](double t) { return ft(t, a * t, a); });
      return -integrate(w) / T;
    }
    case BoundaryCondition::BC3: {
      // int_0^T int_0^s g = int_0^T (T - t) g(t) dt
      auto w = SampledDensity::sample(
          grid, [&](double t) { return (T - t) * ft(t, a, 0.0); });
      return -2.0 / (T * T) * integrate(w);
    }
  }
  return 0.0;
}

int brouwer_degree_1d(const std::function<double(double)>& h, double lo,
                      double hi, double sign_tol) {
  const double left = h(lo);
  const double right = h(hi);
  if (!(std::abs(left) > sign_tol) || !(std::abs(right) > sign_tol)) {
    std::ostringstream os;
    os << "degenerate endpoint: h(" << lo << ")=" << left << ", h(" << hi
       << ")=" << right << " with sign tolerance " << sign_tol;
    throw DegenerateEndpointError(os.str());
  }
  const int sl = left > 0.0 ? 1 : -1;
  const int sr = right > 0.0 ? 1 : -1;
  return (sr - sl) / 2;
}

double nagumo_bound(double r, const NagumoPair& np, double T,
                    const NagumoBoundOptions& opts) {
  if (!(r > 0.0) || !(T > 0.0)) {
    throw InvalidArgument("nagumo_bound needs r > 0 and T > 0");
  }
  if (!(np.p >= 1.0) || !std::isfinite(np.p)) {
    throw InvalidArgument("nagumo_bound needs a finite exponent p >= 1");
  }
  const double nu = 2.0 * r / T;
  const double rhs = np.psi_norm(T) * std::pow(2.0 * r, np.exponent());
  auto excess = [&](double M) { return nagumo_integral(np, nu, M) - rhs; };

  double lo = nu;
  double hi = nu;
  if (rhs <= 0.0) {
    // any M above nu satisfies the strict inequality
    hi = nu * (1.0 + opts.resolution);
  } else {
    hi = 2.0 * nu;
    while (!(excess(hi) > 0.0)) {
      lo = hi;
      hi *= 2.0;
      if (hi > opts.ceiling) {
        std::ostringstream os;
        os << "no Nagumo bound below " << opts.ceiling << " for r=" << r
           << " (phi grows too fast or the divergence is too slow)";
        throw NoBoundFoundError(os.str());
      }
    }
    while (hi - lo > opts.resolution * hi) {
      const double mid = 0.5 * (lo + hi);
      (excess(mid) > 0.0 ? hi : lo) = mid;
    }
  }
  if (!(hi > r)) hi = r * (1.0 + opts.resolution);
  return hi;
}

std::string_view to_string(PositivityVerdict v) noexcept {
  switch (v) {
    case PositivityVerdict::PositiveClosed: return "positive-on-[0,T]";
    case PositivityVerdict::PositiveHalfOpen: return "positive-on-(0,T]";
    case PositivityVerdict::NonnegativeOnly: return "nonnegative-only";
    case PositivityVerdict::Fails: return "fails";
  }
  return "fails";
}

PositivityCertificate check_positivity(const GridFunction& u,
                                       BoundaryCondition bc, double tol) {
  const auto us = u.u();
  const std::size_t n = us.size() - 1;
  PositivityCertificate cert;
  const auto it = std::min_element(us.begin(), us.end());
  cert.min_value = *it;
  cert.min_location =
      u.grid().node(static_cast<std::size_t>(std::distance(us.begin(), it)));
  cert.margin_interior = *std::min_element(us.begin() + 1, us.begin() + n);

  const double min_after_zero = *std::min_element(us.begin() + 1, us.end());
  if (cert.min_value > tol) {
    cert.verdict = PositivityVerdict::PositiveClosed;
  } else if (bc == BoundaryCondition::BC2 && std::abs(us[0]) <= tol &&
             min_after_zero > tol) {
    cert.verdict = PositivityVerdict::PositiveHalfOpen;
  } else if (cert.min_value >= -tol) {
    cert.verdict = PositivityVerdict::NonnegativeOnly;
  } else {
    cert.verdict = PositivityVerdict::Fails;
  }
  return cert;
}

bool meets_claim(const PositivityCertificate& cert, BoundaryCondition bc) {
  if (cert.verdict == PositivityVerdict::PositiveClosed) return true;
  return bc == BoundaryCondition::BC2 &&
         cert.verdict == PositivityVerdict::PositiveHalfOpen;
}

double zero_propagation_margin(const GridFunction& u) {
  const auto us = u.u();
  const auto dus = u.du();
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < us.size(); ++i) {
    m = std::min(m, std::abs(us[i]) + std::abs(dus[i]));
  }
  return m;
}

namespace {

void record_sweep(const std::vector<SweepStep>& steps, HypothesisReport& out) {
  for (const auto& step : steps) {
    if (step.report.converged) {
      out.sweep_norms.emplace_back(step.parameter, step.report.sup_norm);
    } else {
      out.failed_parameters.push_back(step.parameter);
    }
  }
  out.norm_avoidance = std::all_of(
      out.sweep_norms.begin(), out.sweep_norms.end(),
      [&](const auto& pn) { return std::abs(pn.second - out.target) > out.band; });
}

}  // namespace

HypothesisReport check_Hr(double r, const ExtendedFn& ft,
                          const CoincidenceFrame& frame,
                          std::span<const double> theta_schedule,
                          const HypothesisOptions& opts) {
  if (!(r > 0.0)) throw InvalidArgument("check_Hr needs r > 0");
  for (double th : theta_schedule) {
    if (!(th > 0.0 && th <= 1.0)) {
      throw InvalidArgument("theta schedule must lie in (0, 1]");
    }
  }
  HypothesisReport out;
  out.target = r;
  out.band = opts.band_fraction * r;

  const Grid& grid = frame.grid();
  const double T = grid.length();
  const double a_r = frame.kernel_interval(r)[1];
  const double h = kernel_h(a_r, ft, frame.bc(), grid);
  // undo the -(1/T) or -(2/T^2) normalisation of h
  const double scale = frame.bc() == BoundaryCondition::BC3 ? 0.5 * T * T : T;
  out.integral_value = -scale * h;
  out.integral_passes = out.integral_value < 0.0;

  if (!theta_schedule.empty()) {
    const GridFunction start =
        opts.initial ? *opts.initial : frame.embed(a_r);
    record_sweep(continuation(SweepFamily::Theta, theta_schedule, start, ft,
                              frame, HomotopyParams{}, opts.solve),
                 out);
  } else {
    out.norm_avoidance = true;
  }
  out.passed = out.integral_passes && out.norm_avoidance;
  out.note =
      "theta sweep is sampled evidence for the norm clause, not a proof";
  return out;
}

HypothesisReport check_HR(double R, const SampledDensity& v, double alpha0,
                          const ExtendedFn& ft, const CoincidenceFrame& frame,
                          std::span<const double> alpha_schedule,
                          const HypothesisOptions& opts) {
  if (!(R > 0.0)) throw InvalidArgument("check_HR needs R > 0");
  if (!(alpha0 > 0.0)) throw InvalidArgument("check_HR needs alpha0 > 0");
  if (!(v.grid() == frame.grid())) {
    throw InvalidArgument("forcing profile is not on the frame's grid");
  }
  bool nonzero = false;
  for (double x : v.values()) {
    if (x < 0.0) throw InvalidArgument("forcing profile v must be nonnegative");
    nonzero = nonzero || x > 0.0;
  }
  if (!nonzero) throw InvalidArgument("forcing profile v vanishes identically");
  if (alpha_schedule.empty()) throw InvalidArgument("alpha schedule is empty");
  for (double a : alpha_schedule) {
    if (!(a >= 0.0 && a <= alpha0)) {
      throw InvalidArgument("alpha schedule must lie in [0, alpha0]");
    }
  }

  HypothesisReport out;
  out.target = R;
  out.band = opts.band_fraction * R;
  out.integral_passes = true;  // no integral clause in (H_R)

  HomotopyParams base;
  base.v = v;
  const double a_R = frame.kernel_interval(R)[1];
  const GridFunction start = opts.initial ? *opts.initial : frame.embed(a_R);
  const auto steps = continuation(SweepFamily::Alpha, alpha_schedule, start,
                                  ft, frame, base, opts.solve);
  record_sweep(steps, out);
  if (!out.sweep_norms.empty()) {
    out.norm_escape = out.sweep_norms.back().second > R;
  }

  const double tol = opts.solve.tol;
  auto in_ball = [&](const SolveReport& rep) {
    return rep.converged && rep.solution.min_value() >= -10.0 * tol &&
           rep.sup_norm <= R;
  };

  if (alpha_schedule.back() == alpha0) {
    bool found = in_ball(steps.back().report);
    HomotopyParams hp = base;
    hp.alpha = alpha0;
    for (double frac : opts.restart_fractions) {
      if (found) break;
      const GridFunction guess = frame.embed(frame.kernel_interval(frac * R)[1]);
      try {
        found = in_ball(solve_fixed_point(guess, ft, frame, hp, opts.solve));
      } catch (const DivergenceError&) {
      } catch (const EvaluationError&) {
      }
    }
    out.nonexistence_at_alpha0 = !found;
  }
  out.passed = out.norm_avoidance && out.nonexistence_at_alpha0;
  out.note =
      "alpha sweep and restarts at alpha0 are a semi-decision: failure to "
      "find a solution in the R-ball is evidence of nonexistence, not proof";
  return out;
}

std::optional<SolveReport> find_annulus_solution(double r, double R,
                                                 const ExtendedFn& ft,
                                                 const CoincidenceFrame& frame,
                                                 const SolveOptions& opts,
                                                 int starts) {
  if (!(r > 0.0) || !(R > 0.0) || r == R) {
    throw InvalidArgument("annulus needs distinct positive radii");
  }
  if (starts < 1) throw InvalidArgument("annulus search needs at least one start");
  const double lo = std::min(r, R), hi = std::max(r, R);
  // midpoint first, then alternate outward
  std::vector<double> norms;
  for (int k = 0; k < starts; ++k) {
    const int step = (k + 1) / 2;
    const double offset = (k % 2 == 1 ? -1.0 : 1.0) * step / (starts + 1.0);
    norms.push_back(lo + (hi - lo) * (0.5 + offset));
  }
  for (double norm : norms) {
    try {
      SolveReport rep = solve_fixed_point(frame.embed(frame.kernel_interval(norm)[1]), ft,
                                          frame, HomotopyParams{}, opts);
      if (rep.converged && lo < rep.sup_norm && rep.sup_norm < hi) return rep;
    } catch (const DivergenceError&) {
    } catch (const EvaluationError&) {
    }
  }
  return std::nullopt;
}

double interpolate(const SampledDensity& w, double t) {
  const Grid& g = w.grid();
  const double x = std::clamp(t / g.spacing(), 0.0,
                              static_cast<double>(g.intervals()));
  const std::size_t i = std::min(static_cast<std::size_t>(x),
                                 static_cast<std::size_t>(g.intervals() - 1));
  const double frac = x - static_cast<double>(i);
  return (1.0 - frac) * w[i] + frac * w[i + 1];
}

std::vector<double> uniform_schedule(double max, int steps, bool include_zero) {
  if (steps < 1) throw InvalidArgument("schedule needs at least one step");
  std::vector<double> out;
  if (include_zero) out.push_back(0.0);
  for (int i = 1; i <= steps; ++i) out.push_back(i == steps ? max : max * i / steps);
  return out;
}

DegreeReport degree_report(double r, double R, const ExtendedFn& ft,
                           const CoincidenceFrame& frame,
                           const DegreeOptions& opts) {
  if (!(r > 0.0) || !(R > 0.0)) throw InvalidArgument("r and R must be positive");
  if (r == R) throw InvalidArgument("r and R must differ");

  const Grid& grid = frame.grid();
  const double T = grid.length();
  DegreeReport rep;
  rep.r = r;
  rep.R = R;

  const auto [lo, hi] = frame.kernel_interval(r);
  auto h = [&](double a) { return kernel_h(a, ft, frame.bc(), grid); };
  rep.h_left = h(lo);
  rep.h_right = h(hi);
  rep.deg_kernel = brouwer_degree_1d(h, lo, hi);
  rep.deg_omega_r = rep.deg_kernel;

  const SampledDensity v = opts.v ? *opts.v : SampledDensity::constant(grid, 1.0);
  rep.hr = check_Hr(r, ft, frame, opts.theta_schedule, opts.hypothesis);
  std::vector<double> alphas = opts.alpha_schedule;
  if (alphas.empty()) alphas = uniform_schedule(opts.alpha0, 10, true);
  rep.hR = check_HR(R, v, opts.alpha0, ft, frame, alphas, opts.hypothesis);

  // Nagumo radii; the forced problem uses psi + alpha0 v and phi + 1
  const CarathFn& base = ft.base();
  if (base.nagumo) {
    rep.M_r = nagumo_bound(r, base.nagumo(r), T, opts.nagumo);
    NagumoPair forced = base.nagumo(R);
    const ScalarMap psi = forced.psi;
    const ScalarMap phi = forced.phi;
    const double alpha0 = opts.alpha0;
    forced.psi = [psi, v, alpha0](double t) {
      return psi(t) + alpha0 * interpolate(v, t);
    };
    forced.phi = [phi](double xi) { return phi(xi) + 1.0; };
    rep.M_R = nagumo_bound(R, forced, T, opts.nagumo);
    if (r < R && !(rep.M_R > rep.M_r)) rep.M_R = rep.M_r * (1.0 + 1e-9);
    if (R < r && !(rep.M_r > rep.M_R)) rep.M_r = rep.M_R * (1.0 + 1e-9);
  }

  std::ostringstream note;
  if (rep.hR.passed) {
    rep.deg_omega_R = 0;
    rep.deg_annulus = r < R ? *rep.deg_omega_R - rep.deg_omega_r
                            : rep.deg_omega_r - *rep.deg_omega_R;
  } else {
    note << "(H_R) evidence failed; degree on Omega_R unknown. ";
  }
  if (rep.deg_kernel != 1) note << "kernel degree is not 1. ";
  if (!rep.hr.passed) note << "(H_r) evidence failed. ";
  rep.theorem_applicable = rep.deg_kernel == 1 && rep.hr.passed && rep.hR.passed;
  note << (rep.theorem_applicable
               ? "hypotheses hold numerically; a solution is expected with "
                 "min(r,R) < max u < max(r,R)"
               : "theorem inapplicable on this evidence");
  rep.note = note.str();
  return rep;
}

}  // namespace posbvp
