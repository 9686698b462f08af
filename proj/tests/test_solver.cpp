#include <gtest/gtest.h>

#include <cmath>

#include "posbvp/corpus.hpp"
#include "posbvp/solver.hpp"

using namespace posbvp;

namespace {

const BoundaryCondition kAll[] = {BoundaryCondition::BC1, BoundaryCondition::BC2,
                                  BoundaryCondition::BC3};

double sup_error(const GridFunction& u, const KnownSolution& exact) {
  double e = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    e = std::max(e, std::abs(u.u()[i] - exact.u(u.grid().node(i))));
  }
  return e;
}

CarathFn zero_fn() {
  CarathFn f;
  f.f = [](double, double, double) { return 0.0; };
  f.k = [](double) { return 0.0; };
  f.nagumo = [](double eta) {
    return NagumoPair{eta, [](double) { return 1.0; }, [](double) { return 0.0; }, 1.0};
  };
  return f;
}

}  // namespace

TEST(HomotopyParams, Validation) {
  const Grid g(1.0, 10);
  EXPECT_NO_THROW(HomotopyParams{}.validate(g));
  EXPECT_THROW((HomotopyParams{0.0, 0.0, std::nullopt}.validate(g)), InvalidArgument);
  EXPECT_THROW((HomotopyParams{1.5, 0.0, std::nullopt}.validate(g)), InvalidArgument);
  EXPECT_THROW((HomotopyParams{1.0, -1.0, std::nullopt}.validate(g)), InvalidArgument);
  EXPECT_THROW((HomotopyParams{1.0, 1.0, std::nullopt}.validate(g)), InvalidArgument);
  EXPECT_THROW((HomotopyParams{1.0, 1.0, SampledDensity::constant(g, 0.0)}.validate(g)),
               InvalidArgument);
  EXPECT_THROW((HomotopyParams{1.0, 0.0, SampledDensity::constant(g, -1.0)}.validate(g)),
               InvalidArgument);
}

TEST(PhiOperator, ManufacturedSolutionIsNearlyFixed) {
  for (auto bc : kAll) {
    const ProblemSpec spec = problem_by_name("mms-" + std::string(to_string(bc)));
    const CoincidenceFrame frame(bc, Grid(1.0, 1000));
    const GridFunction us = spec.known_solution->sample(frame.grid());
    const GridFunction phi = phi_operator(us, spec.extended(), frame, {});
    EXPECT_LE(phi.distance(us), 1e-5) << to_string(bc);
  }
}

TEST(PhiOperator, ZeroNonlinearityFixesKernel) {
  const ExtendedFn ft = extend_tilde(zero_fn());
  for (auto bc : kAll) {
    const CoincidenceFrame frame(bc, Grid(1.0, 100));
    const GridFunction e = frame.embed(0.8);
    EXPECT_LE(phi_operator(e, ft, frame, {}).distance(e), 1e-15);
  }
}

TEST(PhiOperator, ZeroIsFixed) {
  const ExtendedFn ft = problem_by_name("logistic-bc1").extended();
  for (auto bc : kAll) {
    const CoincidenceFrame frame(bc, Grid(1.0, 100));
    const GridFunction z = GridFunction::zero(frame.grid());
    EXPECT_EQ(phi_operator(z, ft, frame, {}).c1_norm(), 0.0);
  }
}

TEST(Residual, ManufacturedMatchesTruncationBound) {
  // central second difference error is at most h^2 max|u''''| / 12; the
  // fourth derivatives of the three bumps are 24 d, (120 tau - 48) d and 0
  const double m4[] = {24.0 * 1.0, 72.0 * 2.0, 0.0};
  int k = 0;
  for (auto bc : kAll) {
    const ProblemSpec spec = problem_by_name("mms-" + std::string(to_string(bc)));
    for (int n : {100, 200, 400}) {
      const Grid g(1.0, n);
      const double h = g.spacing();
      const ResidualNorms r = residual(spec.known_solution->sample(g), spec.extended(), bc, {});
      EXPECT_LE(r.interior, h * h * m4[k] / 12.0 * (1.0 + 1e-6) + 1e-9) << to_string(bc) << " n=" << n;
    }
    ++k;
  }
}

TEST(Residual, ZeroFunction) {
  const ExtendedFn ft = problem_by_name("logistic-bc2").extended();
  const ResidualNorms r = residual(GridFunction::zero(Grid(1.0, 10)), ft, BoundaryCondition::BC2, {});
  EXPECT_EQ(r.interior, 0.0);
  EXPECT_EQ(r.boundary, 0.0);
}

TEST(Residual, BoundaryRowsForIdentityOnBC3) {
  const double T = 2.0;
  const auto u = GridFunction::sample(Grid(T, 40), [](double t) { return t; }, [](double) { return 1.0; });
  const ResidualNorms r =
      residual(u, extend_tilde(zero_fn()), BoundaryCondition::BC3, {});
  EXPECT_NEAR(r.boundary, T + 1.0, 1e-12);
}

TEST(Residual, NeedsFourIntervals) {
  EXPECT_THROW(residual(GridFunction::zero(Grid(1.0, 3)), extend_tilde(zero_fn()),
                        BoundaryCondition::BC1, {}),
               InvalidArgument);
}

TEST(Solve, ManufacturedFromPerturbedProjection) {
  for (auto bc : kAll) {
    const ProblemSpec spec = problem_by_name("mms-" + std::string(to_string(bc)));
    const CoincidenceFrame frame(bc, Grid(1.0, 1000));
    const GridFunction start = frame.P(spec.known_solution->sample(frame.grid())).scaled(1.1);
    const SolveReport rep = solve_fixed_point(start, spec.extended(), frame, {});
    ASSERT_TRUE(rep.converged) << to_string(bc) << " " << rep.note;
    EXPECT_LE(sup_error(rep.solution, *spec.known_solution), 1e-4);
  }
}

TEST(Solve, ZeroNonlinearityConvergesImmediately) {
  const CoincidenceFrame frame(BoundaryCondition::BC1, Grid(1.0, 50));
  const SolveReport rep = solve_fixed_point(GridFunction::zero(frame.grid()),
                                            extend_tilde(zero_fn()), frame, {});
  EXPECT_TRUE(rep.converged);
  EXPECT_LE(rep.iterations, 1);
  EXPECT_EQ(rep.sup_norm, 0.0);
}

TEST(Solve, ConvergedImpliesFixedPointAndResidual) {
  for (const auto& name : corpus_names()) {
    const ProblemSpec spec = problem_by_name(name);
    const CoincidenceFrame frame(spec.bc, Grid(1.0, 400));
    SolveOptions opts;
    const SolveReport rep = solve_fixed_point(frame.embed(frame.kernel_interval(1.0)[1]),
                                              spec.extended(), frame, {}, opts);
    if (!rep.converged) continue;
    const GridFunction phi = phi_operator(rep.solution, spec.extended(), frame, {});
    EXPECT_LE(phi.distance(rep.solution), 10 * opts.tol) << name;
    const ResidualNorms r = residual(rep.solution, spec.extended(), spec.bc, {});
    EXPECT_DOUBLE_EQ(r.interior, rep.residual);
    const double h = frame.grid().spacing();
    const double scale = std::max(1.0, nemytskii(spec.extended(), rep.solution).sup_norm());
    EXPECT_LE(rep.residual, 100 * h * h * scale) << name;
    EXPECT_LE(rep.boundary_defect, 100 * h * h * scale) << name;
  }
}

TEST(Solve, Deterministic) {
  const ProblemSpec spec = problem_by_name("reverse-logistic-bc1");
  const CoincidenceFrame frame(spec.bc, Grid(1.0, 300));
  const GridFunction start = frame.embed(0.5);
  const SolveReport a = solve_fixed_point(start, spec.extended(), frame, {});
  const SolveReport b = solve_fixed_point(start, spec.extended(), frame, {});
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.solution.distance(b.solution), 0.0);
  EXPECT_EQ(a.residual, b.residual);
}

TEST(Solve, DivergenceRaises) {
  CarathFn f = zero_fn();
  f.f = [](double, double s, double) { return s * (1.0 + s); };
  const CoincidenceFrame frame(BoundaryCondition::BC3, Grid(1.0, 50));
  SolveOptions opts;
  opts.allow_newton = false;
  opts.divergence_ceiling = 1e6;
  EXPECT_THROW(solve_fixed_point(frame.embed(50.0), extend_tilde(f), frame, {}, opts),
               DivergenceError);
}

TEST(Solve, MaxItersGivesReportNotError) {
  const ProblemSpec spec = problem_by_name("mms-bc2");
  const CoincidenceFrame frame(spec.bc, Grid(1.0, 200));
  SolveOptions opts;
  opts.max_iters = 2;
  opts.allow_newton = false;
  const SolveReport rep = solve_fixed_point(frame.embed(0.5), spec.extended(), frame, {}, opts);
  EXPECT_FALSE(rep.converged);
  EXPECT_EQ(rep.iterations, 2);
}

TEST(Continuation, ThetaSweepEndsAtDirectSolve) {
  const ProblemSpec spec = problem_by_name("mms-bc1");
  const CoincidenceFrame frame(spec.bc, Grid(1.0, 400));
  std::vector<double> schedule;
  for (int i = 1; i <= 10; ++i) schedule.push_back(i / 10.0);
  const GridFunction start = spec.known_solution->sample(frame.grid());
  const auto steps = continuation(SweepFamily::Theta, schedule, start, spec.extended(), frame, {});
  ASSERT_EQ(steps.size(), schedule.size());
  for (const auto& s : steps) EXPECT_TRUE(s.report.converged) << "theta=" << s.parameter;
  const SolveReport direct = solve_fixed_point(start, spec.extended(), frame, {});
  EXPECT_LE(steps.back().report.solution.distance(direct.solution), 1e-8);
}

TEST(Continuation, AlphaZeroMatchesDirectSolve) {
  const ProblemSpec spec = problem_by_name("logistic-bc3");
  const CoincidenceFrame frame(spec.bc, Grid(1.0, 200));
  HomotopyParams base;
  base.v = SampledDensity::constant(frame.grid(), 1.0);
  const std::vector<double> schedule{0.0};
  const GridFunction start = frame.embed(0.7);
  const auto steps = continuation(SweepFamily::Alpha, schedule, start, spec.extended(), frame, base);
  const SolveReport direct = solve_fixed_point(start, spec.extended(), frame, {});
  ASSERT_EQ(steps.size(), 1u);
  EXPECT_EQ(steps[0].report.solution.distance(direct.solution), 0.0);
}

TEST(Continuation, AlphaPastSolvabilityFailsAtTheEnd) {
  const ProblemSpec spec = problem_by_name("reverse-logistic-bc1");
  const CoincidenceFrame frame(spec.bc, Grid(1.0, 200));
  HomotopyParams base;
  base.v = SampledDensity::constant(frame.grid(), 1.0);
  const std::vector<double> schedule{0.0, 0.1, 0.2, 0.4, 0.6};
  const auto steps = continuation(SweepFamily::Alpha, schedule, frame.embed(0.6), spec.extended(),
                                  frame, base);
  EXPECT_TRUE(steps.front().report.converged);
  EXPECT_FALSE(steps[3].report.converged);
  EXPECT_FALSE(steps[4].report.converged);
  // the oracle sees no root at the last two levels either
  for (double alpha : {0.4, 0.6}) {
    ShootSettings s;
    s.alpha = alpha;
    s.v = [](double) { return 1.0; };
    s.a_lo = 0.0;
    s.a_hi = 3.0;
    EXPECT_TRUE(shooting_roots(spec, 20000, s).empty()) << alpha;
  }
}

TEST(Continuation, RejectsEmptyOrNonMonotoneSchedules) {
  const ProblemSpec spec = problem_by_name("logistic-bc1");
  const CoincidenceFrame frame(spec.bc, Grid(1.0, 50));
  const std::vector<double> empty;
  EXPECT_THROW(continuation(SweepFamily::Theta, empty, frame.embed(0.5), spec.extended(), frame, {}),
               InvalidArgument);
  const std::vector<double> bad{0.3, 0.5, 0.4};
  EXPECT_THROW(continuation(SweepFamily::Theta, bad, frame.embed(0.5), spec.extended(), frame, {}),
               InvalidArgument);
}

TEST(InitialGuess, BracketMidpointOrFallback) {
  const CoincidenceFrame frame(BoundaryCondition::BC1, Grid(1.0, 10));
  const GridFunction g = default_initial_guess(frame, std::array<double, 2>{1.0, 3.0});
  EXPECT_NEAR(g.sup_norm(), 2.0, 1e-14);
  EXPECT_NEAR(default_initial_guess(frame, std::nullopt).u()[0], 0.1, 1e-15);
}
