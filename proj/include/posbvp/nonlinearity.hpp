#pragma once

/// \file
/// The Caratheodory nonlinearity f(t, s, xi) with its growth metadata, the
/// extension f~ to negative states, and the Nemytskii (substitution)
/// operator u -> f~(., u, u').

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "posbvp/numerics.hpp"

namespace posbvp {

using ScalarMap = std::function<double(double)>;
using StateMap = std::function<double(double t, double s, double xi)>;

/// Raised when a user-supplied nonlinearity returns NaN or infinity.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, std::size_t node, double t)
      : std::runtime_error(what), node_(node), t_(t) {}
  std::size_t node() const noexcept { return node_; }
  double time() const noexcept { return t_; }

 private:
  std::size_t node_;
  double t_;
};

/// Bernstein-Nagumo data for one range bound eta:
/// |f(t,s,xi)| <= psi(t) * phi(|xi|) for s in [0, eta].
struct NagumoPair {
  double eta = 1.0;
  ScalarMap phi;  // [0, inf) -> [0, inf)
  ScalarMap psi;  // [0, T] -> [0, inf)
  double p = 1.0;  // integrability exponent, finite and >= 1

  /// (p - 1) / p.
  double exponent() const noexcept { return (p - 1.0) / p; }
  /// ||psi||_{L^p(0,T)} by composite Simpson.
  double psi_norm(double T, int panels = 2000) const;
};

/// f together with the (f2) bound data (k, rho) and the Nagumo family.
struct CarathFn {
  StateMap f;
  ScalarMap k;
  double rho = 1.0;
  std::function<NagumoPair(double eta)> nagumo;
};

/// f~(t,s,xi) = f(t,s,xi) for s >= 0 and -s for s < 0.
class ExtendedFn {
 public:
  explicit ExtendedFn(CarathFn base) : base_(std::move(base)) {}

  double operator()(double t, double s, double xi) const {
    return s >= 0.0 ? base_.f(t, s, xi) : -s;
  }

  const CarathFn& base() const noexcept { return base_; }

 private:
  CarathFn base_;
};

ExtendedFn extend_tilde(CarathFn base);

/// w_i = f~(t_i, u_i, u'_i). Throws EvaluationError on a non-finite value.
SampledDensity nemytskii(const ExtendedFn& ft, const GridFunction& u);

// --- growth-condition verification ----------------------------------------

/// Probe density for verify_growth_conditions. All checks run on finite
/// sets; "almost every t" is replaced by the t probes.
struct ProbePlan {
  double T = 1.0;
  int t_nodes = 11;
  int s_nodes = 21;
  int xi_nodes = 21;
  /// Range bounds eta at which the Nagumo inequality is probed; empty means
  /// {rho/2, rho, 2 rho}.
  std::vector<double> etas;
  /// |xi| range for the Nagumo inequality probes.
  double xi_max = 50.0;
  /// Tail probes for liminf phi > 0 and the divergence surrogate.
  double tail_start = 1.0;
  double cutoff = 1e6;
  int tail_nodes = 241;
  double divergence_threshold = 1e3;
  double liminf_floor = 1e-6;
  /// Slack allowed before an inequality counts as violated.
  double slack = 1e-12;
};

struct ConditionCheck {
  bool passed = false;
  /// Worst violation (positive means violated) or, for the tail checks, the
  /// probed quantity itself.
  double margin = 0.0;
  std::string note;
};

struct GrowthReport {
  ConditionCheck f1;
  ConditionCheck f2;
  ConditionCheck nagumo_bound;
  ConditionCheck nagumo_liminf;
  ConditionCheck nagumo_divergence;
  std::string probe_density;

  bool all_passed() const noexcept {
    return f1.passed && f2.passed && nagumo_bound.passed &&
           nagumo_liminf.passed && nagumo_divergence.passed;
  }
};

GrowthReport verify_growth_conditions(const CarathFn& base,
                                      const ProbePlan& probes);

/// int_{from}^{to} xi^{(p-1)/p} / phi(xi) dxi, evaluated in the log variable.
/// Returns +inf when the integrand overflows.
double nagumo_integral(const NagumoPair& np, double from, double to,
                       int panels = 4000);

}  // namespace posbvp
