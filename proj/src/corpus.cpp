#include "posbvp/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace posbvp {

namespace {

std::string bc_suffix(BoundaryCondition bc) { return std::string(to_string(bc)); }

// Polynomial bump q(tau) and its tau-derivatives for each boundary condition.
struct Bump {
  double q, dq, d2q;
};

Bump bump(BoundaryCondition bc, double tau) {
  const double s = 1.0 - tau;
  switch (bc) {
    case BoundaryCondition::BC1:
      return {tau * tau * s * s, 2.0 * tau - 6.0 * tau * tau + 4.0 * tau * tau * tau,
              2.0 - 12.0 * tau + 12.0 * tau * tau};
    case BoundaryCondition::BC2:
      return {tau * tau * tau * s * s,
              3.0 * tau * tau - 8.0 * tau * tau * tau + 5.0 * std::pow(tau, 4),
              6.0 * tau - 24.0 * tau * tau + 20.0 * tau * tau * tau};
    case BoundaryCondition::BC3:
      return {tau * tau * s, 2.0 * tau - 3.0 * tau * tau, 2.0 - 6.0 * tau};
  }
  return {0.0, 0.0, 0.0};
}

}  // namespace

ProblemSpec logistic_family(double lambda, double c, double T,
                            BoundaryCondition bc) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("logistic_family needs lambda > 0");
  }
  if (!std::isfinite(c)) throw InvalidArgument("logistic_family needs finite c");
  if (!(T > 0.0)) throw InvalidArgument("logistic_family needs T > 0");

  ProblemSpec spec;
  std::ostringstream name;
  name << "logistic-" << bc_suffix(bc);
  spec.name = name.str();
  spec.bc = bc;
  spec.T = T;
  spec.f.rho = 1.0;
  spec.f.f = [lambda, c](double, double s, double xi) {
    return s * (lambda - s) - c * s * xi;
  };
  const double k = lambda + spec.f.rho + std::abs(c) * spec.f.rho;
  spec.f.k = [k](double) { return k; };
  if (c == 0.0) {
    spec.f.nagumo = [lambda](double eta) {
      return NagumoPair{eta, [](double) { return 1.0; },
                        [eta, lambda](double) { return eta * (lambda + eta); }, 1.0};
    };
  } else {
    const double ac = std::abs(c);
    spec.f.nagumo = [lambda, ac](double eta) {
      return NagumoPair{eta, [](double xi) { return 1.0 + xi; },
                        [eta, lambda, ac](double) { return eta * (lambda + eta + ac); },
                        2.0};
    };
  }
  spec.provenance = "implementation-derived instance";
  spec.shoot_bracket = {0.05, 3.0};
  return spec;
}

ProblemSpec reverse_logistic_family(double lambda, double T,
                                    BoundaryCondition bc) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("reverse_logistic_family needs lambda > 0");
  }
  if (!(T > 0.0)) throw InvalidArgument("reverse_logistic_family needs T > 0");
  ProblemSpec spec;
  spec.name = "reverse-logistic-" + bc_suffix(bc);
  spec.bc = bc;
  spec.T = T;
  spec.f.rho = 1.0;
  spec.f.f = [lambda](double, double s, double) { return s * (s - lambda); };
  const double k = lambda + spec.f.rho;
  spec.f.k = [k](double) { return k; };
  spec.f.nagumo = [lambda](double eta) {
    return NagumoPair{eta, [](double) { return 1.0; },
                      [eta, lambda](double) { return eta * (eta + lambda); }, 1.0};
  };
  spec.provenance = "implementation-derived instance";
  spec.shoot_bracket = {0.05, 3.0};
  return spec;
}

ProblemSpec manufactured_problem(BoundaryCondition bc, double T, double c,
                                 double d, double kappa) {
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("manufactured_problem needs T > 0");
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("manufactured_problem needs c > 0");
  if (!std::isfinite(d)) throw InvalidArgument("manufactured_problem needs finite d");
  if (!(kappa >= 0.0)) throw InvalidArgument("manufactured_problem needs kappa >= 0");

  auto ustar = [bc, T, c, d](double t) {
    const double q = bump(bc, t / T).q;
    switch (bc) {
      case BoundaryCondition::BC1: return c * (1.0 + t) + d * q;
      case BoundaryCondition::BC2: return c * t + d * q;
      case BoundaryCondition::BC3: return c + d * q;
    }
    return 0.0;
  };
  auto dustar = [bc, T, c, d](double t) {
    const double dq = bump(bc, t / T).dq / T;
    return bc == BoundaryCondition::BC3 ? d * dq : c + d * dq;
  };
  auto d2ustar = [bc, T, d](double t) { return d * bump(bc, t / T).d2q / (T * T); };

  // u* > 0 on [0, T] (BC1, BC3) or u*/t > 0 on (0, T] (BC2)
  const int probes = 20000;
  for (int i = 0; i <= probes; ++i) {
    const double tau = static_cast<double>(i) / probes;
    double value = 0.0;
    if (bc == BoundaryCondition::BC2) {
      value = c * T + d * tau * tau * (1.0 - tau) * (1.0 - tau);
    } else {
      value = ustar(tau * T);
    }
    if (!(value > 0.0)) {
      std::ostringstream os;
      os << "manufactured solution vanishes near t=" << tau * T
         << " for c=" << c << ", d=" << d;
      throw InvalidArgument(os.str());
    }
  }

  ScalarMap g;
  if (bc == BoundaryCondition::BC2) {
    g = [T, c, d](double t) {
      const double tau = t / T;
      const double s = 1.0 - tau;
      return -(d / (T * T)) * (6.0 - 24.0 * tau + 20.0 * tau * tau) /
             (c * T + d * tau * tau * s * s);
    };
  } else {
    g = [ustar, d2ustar](double t) { return -d2ustar(t) / ustar(t); };
  }

  ProblemSpec spec;
  spec.name = "mms-" + bc_suffix(bc);
  spec.bc = bc;
  spec.T = T;
  spec.f.rho = 1.0;
  spec.f.f = [g, ustar, kappa](double t, double s, double) {
    return s * (g(t) + kappa * (ustar(t) - s));
  };
  const double rho = spec.f.rho;
  spec.f.k = [g, ustar, kappa, rho](double t) {
    return std::abs(g(t)) + kappa * (ustar(t) + rho);
  };
  spec.f.nagumo = [g, ustar, kappa](double eta) {
    return NagumoPair{eta, [](double) { return 1.0; },
                      [eta, g, ustar, kappa](double t) {
                        return eta * (std::abs(g(t)) + kappa * (ustar(t) + eta));
                      },
                      1.0};
  };
  spec.known_solution = KnownSolution{ustar, dustar, d2ustar};
  spec.provenance = "manufactured solution";
  spec.shoot_bracket = {0.5 * c, 1.5 * c};
  return spec;
}

ProblemSpec problem_by_name(std::string_view name, double T) {
  const std::string n(name);
  auto bc_of = [&](std::string_view prefix) -> std::optional<BoundaryCondition> {
    if (n.size() != prefix.size() + 3 || n.compare(0, prefix.size(), prefix) != 0) {
      return std::nullopt;
    }
    try {
      return parse_boundary_condition(std::string_view(n).substr(prefix.size()));
    } catch (const InvalidArgument&) {
      return std::nullopt;
    }
  };
  if (auto bc = bc_of("logistic-")) return logistic_family(1.0, 0.0, T, *bc);
  if (auto bc = bc_of("reverse-logistic-")) return reverse_logistic_family(1.0, T, *bc);
  if (auto bc = bc_of("mms-")) {
    const double d = *bc == BoundaryCondition::BC2 ? 2.0 : 1.0;
    return manufactured_problem(*bc, T, 1.0, d);
  }
  throw InvalidArgument("unknown corpus problem '" + n + "'");
}

std::vector<std::string> corpus_names() {
  std::vector<std::string> out;
  for (const char* family : {"logistic-", "reverse-logistic-", "mms-"}) {
    for (const char* bc : {"bc1", "bc2", "bc3"}) out.push_back(std::string(family) + bc);
  }
  return out;
}

// --- shooting oracle ------------------------------------------------------

namespace {

struct State {
  double u, du;
};

class Shooter {
 public:
  Shooter(const ProblemSpec& spec, const ShootSettings& s)
      : spec_(spec), ft_(spec.extended()), s_(s) {
    if (s_.alpha > 0.0 && !s_.v) {
      throw InvalidArgument("shooting with alpha > 0 needs a forcing profile");
    }
  }

  State initial(double a) const {
    switch (spec_.bc) {
      case BoundaryCondition::BC1: return {a, a};
      case BoundaryCondition::BC2: return {0.0, a};
      case BoundaryCondition::BC3: return {a, 0.0};
    }
    return {0.0, 0.0};
  }

  State rhs(double t, State y) const {
    double acc = -s_.theta * ft_(t, y.u, y.du);
    if (s_.alpha > 0.0) acc -= s_.alpha * s_.v(t);
    return {y.du, acc};
  }

  // Integrates to T, calling visit(step, state) at every step; returns the
  // final state or NaNs on blow-up.
  template <class Visit>
  State integrate(double a, int steps, Visit&& visit) const {
    const double h = spec_.T / steps;
    State y = initial(a);
    visit(0, y);
    for (int i = 0; i < steps; ++i) {
      const double t = spec_.T * i / steps;
      const State k1 = rhs(t, y);
      const State k2 = rhs(t + 0.5 * h, {y.u + 0.5 * h * k1.u, y.du + 0.5 * h * k1.du});
      const State k3 = rhs(t + 0.5 * h, {y.u + 0.5 * h * k2.u, y.du + 0.5 * h * k2.du});
      const State k4 = rhs(t + h, {y.u + h * k3.u, y.du + h * k3.du});
      y.u += h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
      y.du += h / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
      if (!std::isfinite(y.u) || !std::isfinite(y.du) || std::abs(y.u) > 1e12) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan};
      }
      visit(i + 1, y);
    }
    return y;
  }

  double mismatch(double a, int steps) const {
    const State end = integrate(a, steps, [](int, const State&) {});
    return spec_.bc == BoundaryCondition::BC3 ? end.u - a : end.du - a;
  }

 private:
  const ProblemSpec& spec_;
  ExtendedFn ft_;
  const ShootSettings& s_;
};

std::array<double, 2> bracket_of(const ProblemSpec& spec, const ShootSettings& s) {
  std::array<double, 2> b = spec.shoot_bracket;
  if (!std::isnan(s.a_lo)) b[0] = s.a_lo;
  if (!std::isnan(s.a_hi)) b[1] = s.a_hi;
  if (!(b[0] < b[1])) throw InvalidArgument("shooting bracket must have a_lo < a_hi");
  if (s.scan < 2) throw InvalidArgument("shooting scan needs at least 2 points");
  return b;
}

}  // namespace

double shooting_map(const ProblemSpec& spec, double a, int steps,
                    const ShootSettings& settings) {
  if (steps < 1) throw InvalidArgument("shooting needs at least one step");
  return Shooter(spec, settings).mismatch(a, steps);
}

std::vector<double> shooting_roots(const ProblemSpec& spec, int steps,
                                   const ShootSettings& settings) {
  if (steps < 1) throw InvalidArgument("shooting needs at least one step");
  const Shooter shooter(spec, settings);
  const auto [lo, hi] = bracket_of(spec, settings);
  const int m = settings.scan;

  std::vector<double> as(m + 1), fs(m + 1);
  bool all_zero = true;
  for (int i = 0; i <= m; ++i) {
    as[i] = lo + (hi - lo) * i / m;
    fs[i] = shooter.mismatch(as[i], steps);
    all_zero = all_zero && fs[i] == 0.0;
  }
  if (all_zero) {
    throw DegenerateBracketError(
        "shooting map vanishes on the whole bracket (kernel degeneracy)");
  }

  std::vector<double> roots;
  int prev = -1;  // index of the last finite scan point
  for (int i = 0; i <= m; ++i) {
    if (std::isnan(fs[i])) continue;
    if (fs[i] == 0.0) {
      roots.push_back(as[i]);
    } else if (prev >= 0 && fs[prev] != 0.0 && (fs[prev] < 0.0) != (fs[i] < 0.0)) {
      double a = as[prev], b = as[i], fa = fs[prev];
      for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = shooter.mismatch(mid, steps);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if (std::isnan(fm)) break;
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev = i;
  }
  return roots;
}

GridFunction oracle_shoot(const ProblemSpec& spec, const Grid& grid,
                          int n_dense, const ShootSettings& settings) {
  if (n_dense < 10000) throw InvalidArgument("oracle_shoot needs n_dense >= 1e4");
  if (grid.length() != spec.T) {
    throw InvalidArgument("grid length does not match the problem's T");
  }
  const int n = static_cast<int>(grid.intervals());
  const int stride = (n_dense + n - 1) / n;
  const int steps = stride * n;

  const auto roots = shooting_roots(spec, steps, settings);
  if (roots.empty()) {
    const auto b = bracket_of(spec, settings);
    std::ostringstream os;
    os << "no sign change of the shooting map for " << spec.name << " on ["
       << b[0] << ", " << b[1] << "]";
    throw NoBracketError(os.str());
  }

  const Shooter shooter(spec, settings);
  std::vector<double> u(grid.size()), du(grid.size());
  const State end = shooter.integrate(roots.front(), steps, [&](int i, const State& y) {
    if (i % stride == 0) {
      u[i / stride] = y.u;
      du[i / stride] = y.du;
    }
  });
  if (std::isnan(end.u)) throw NoBracketError("shooting trajectory blew up at the root");
  return GridFunction(grid, std::move(u), std::move(du));
}

}  // namespace posbvp
