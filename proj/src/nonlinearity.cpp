#include "posbvp/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace posbvp {

double NagumoPair::psi_norm(double T, int panels) const {
  auto integrand = [&](double t) { return std::pow(std::abs(psi(t)), p); };
  return std::pow(simpson(integrand, 0.0, T, panels), 1.0 / p);
}

ExtendedFn extend_tilde(CarathFn base) { return ExtendedFn(std::move(base)); }

SampledDensity nemytskii(const ExtendedFn& ft, const GridFunction& u) {
  const Grid& grid = u.grid();
  std::vector<double> w(grid.size());
  const auto us = u.u();
  const auto dus = u.du();
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double t = grid.node(i);
    w[i] = ft(t, us[i], dus[i]);
    if (!std::isfinite(w[i])) {
      std::ostringstream os;
      os << "nonlinearity is not finite at node " << i << " (t=" << t
         << ", s=" << us[i] << ", xi=" << dus[i] << ")";
      throw EvaluationError(os.str(), i, t);
    }
  }
  return SampledDensity(grid, std::move(w));
}

double nagumo_integral(const NagumoPair& np, double from, double to,
                       int panels) {
  if (!(to > from)) return 0.0;
  const double q = np.exponent();
  // xi = from * e^y keeps long ranges well resolved
  if (from > 0.0) {
    auto integrand = [&](double y) {
      const double xi = from * std::exp(y);
      return std::pow(xi, q) * xi / np.phi(xi);
    };
    const double value = simpson(integrand, 0.0, std::log(to / from), panels);
    return std::isnan(value) ? std::numeric_limits<double>::infinity() : value;
  }
  auto integrand = [&](double xi) { return std::pow(xi, q) / np.phi(xi); };
  const double value = simpson(integrand, from, to, panels);
  return std::isnan(value) ? std::numeric_limits<double>::infinity() : value;
}

namespace {

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> out(static_cast<std::size_t>(std::max(count, 2)));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = a + (b - a) * static_cast<double>(i) / (out.size() - 1);
  }
  return out;
}

std::vector<double> log_tail(double from, double to, int count) {
  auto ys = linspace(std::log(from), std::log(to), count);
  for (double& y : ys) y = std::exp(y);
  return ys;
}

std::string describe(const ProbePlan& probes, std::size_t eta_count) {
  std::ostringstream os;
  os << probes.t_nodes << " t-probes x " << probes.s_nodes << " s-probes x "
     << probes.xi_nodes << " xi-probes; " << eta_count << " eta values; "
     << probes.tail_nodes << " log-spaced tail probes on [" << probes.tail_start
     << ", " << probes.cutoff << "]";
  return os.str();
}

}  // namespace

GrowthReport verify_growth_conditions(const CarathFn& base,
                                      const ProbePlan& probes) {
  GrowthReport report;
  const auto ts = linspace(0.0, probes.T, probes.t_nodes);
  const double ninf = -std::numeric_limits<double>::infinity();

  // (f1): f(t, 0, xi) = 0
  {
    double worst = 0.0;
    for (double t : ts) {
      for (double xi : linspace(-probes.xi_max, probes.xi_max, probes.xi_nodes)) {
        worst = std::max(worst, std::abs(base.f(t, 0.0, xi)));
      }
    }
    report.f1 = {worst <= probes.slack, worst, "max |f(t,0,xi)|"};
  }

  // (f2): |f| <= k(t)(|s| + |xi|) on [0, rho] x [-rho, rho]
  {
    double worst = ninf;
    for (double t : ts) {
      const double kt = base.k(t);
      for (double s : linspace(0.0, base.rho, probes.s_nodes)) {
        for (double xi : linspace(-base.rho, base.rho, probes.xi_nodes)) {
          const double excess =
              std::abs(base.f(t, s, xi)) - kt * (std::abs(s) + std::abs(xi));
          worst = std::max(worst, excess);
        }
      }
    }
    report.f2 = {worst <= probes.slack, worst,
                 "max |f| - k(t)(|s|+|xi|) for s, |xi| <= rho"};
  }

  std::vector<double> etas = probes.etas;
  if (etas.empty()) etas = {0.5 * base.rho, base.rho, 2.0 * base.rho};
  report.probe_density = describe(probes, etas.size());

  if (!base.nagumo) {
    report.nagumo_bound = {false, 0.0, "no Nagumo family supplied"};
    report.nagumo_liminf = report.nagumo_bound;
    report.nagumo_divergence = report.nagumo_bound;
    return report;
  }

  const auto tail = log_tail(probes.tail_start, probes.cutoff, probes.tail_nodes);
  const double tail_floor = std::sqrt(probes.tail_start * probes.cutoff);

  double bound_worst = ninf;
  double liminf = std::numeric_limits<double>::infinity();
  double divergence = std::numeric_limits<double>::infinity();
  bool exponent_ok = true;
  for (double eta : etas) {
    const NagumoPair np = base.nagumo(eta);
    if (!(np.p >= 1.0) || !std::isfinite(np.p)) exponent_ok = false;

    for (double t : ts) {
      const double psi = np.psi(t);
      for (double s : linspace(0.0, eta, probes.s_nodes)) {
        for (double xi :
             linspace(-probes.xi_max, probes.xi_max, probes.xi_nodes)) {
          const double excess =
              std::abs(base.f(t, s, xi)) - psi * np.phi(std::abs(xi));
          bound_worst = std::max(bound_worst, excess);
        }
      }
    }
    // liminf is probed on the upper half (log scale) of the tail
    for (double xi : tail) {
      if (xi >= tail_floor) liminf = std::min(liminf, np.phi(xi));
    }
    divergence = std::min(
        divergence, nagumo_integral(np, probes.tail_start, probes.cutoff));
  }

  report.nagumo_bound = {bound_worst <= probes.slack, bound_worst,
                         "max |f| - psi(t) phi(|xi|) for s in [0, eta]"};
  report.nagumo_liminf = {liminf >= probes.liminf_floor && exponent_ok, liminf,
                          "min phi over the upper tail probes"};
  std::ostringstream note;
  note << "surrogate passed at cutoff X=" << probes.cutoff
       << " (threshold " << probes.divergence_threshold
       << "); a finite probe cannot certify divergence";
  if (!exponent_ok) note.str("exponent p must be finite and >= 1");
  report.nagumo_divergence = {
      exponent_ok && divergence >= probes.divergence_threshold, divergence,
      note.str()};
  if (!report.nagumo_divergence.passed && exponent_ok) {
    std::ostringstream fail;
    fail << "surrogate integral " << divergence << " below threshold "
         << probes.divergence_threshold << " at cutoff X=" << probes.cutoff;
    report.nagumo_divergence.note = fail.str();
  }
  return report;
}

}  // namespace posbvp
