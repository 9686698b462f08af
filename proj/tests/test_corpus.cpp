#include <gtest/gtest.h>

#include <cmath>

#include "posbvp/corpus.hpp"
#include "posbvp/solver.hpp"

using namespace posbvp;

namespace {

const BoundaryCondition kAll[] = {BoundaryCondition::BC1, BoundaryCondition::BC2,
                                  BoundaryCondition::BC3};

double sup_error(const GridFunction& u, const ScalarMap& exact) {
  double e = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    e = std::max(e, std::abs(u.u()[i] - exact(u.grid().node(i))));
  }
  return e;
}

}  // namespace

TEST(Logistic, GrowthConditionsHold) {
  const ProblemSpec spec = logistic_family(1.0, 0.0, 1.0, BoundaryCondition::BC1);
  EXPECT_TRUE(verify_growth_conditions(spec.f, ProbePlan{}).all_passed());
  EXPECT_EQ(spec.f.f(0.4, 0.0, 5.0), 0.0);
  EXPECT_FALSE(spec.suggested_r_R.has_value());
}

TEST(Logistic, DriftMetadata) {
  const ProblemSpec spec = logistic_family(2.0, 0.5, 1.0, BoundaryCondition::BC2);
  for (double t : {0.0, 0.5, 1.0}) EXPECT_DOUBLE_EQ(spec.f.k(t), 3.5);
  EXPECT_DOUBLE_EQ(std::abs(spec.f.f(0.3, 1.0, 1.0)), 0.5);
  EXPECT_LE(std::abs(spec.f.f(0.3, 1.0, 1.0)), spec.f.k(0.3) * 2.0);
  EXPECT_TRUE(verify_growth_conditions(spec.f, ProbePlan{}).all_passed());
}

TEST(Logistic, RejectsNonpositiveLambda) {
  EXPECT_THROW(logistic_family(0.0, 0.0, 1.0, BoundaryCondition::BC1), InvalidArgument);
  EXPECT_THROW(logistic_family(-1.0, 0.0, 1.0, BoundaryCondition::BC1), InvalidArgument);
  EXPECT_THROW(reverse_logistic_family(0.0, 1.0, BoundaryCondition::BC1), InvalidArgument);
}

TEST(Corpus, EveryInstancePassesGrowthConditions) {
  for (const auto& name : corpus_names()) {
    for (double T : {0.5, 1.0, 2.0}) {
      const ProblemSpec spec = problem_by_name(name, T);
      ProbePlan plan;
      plan.T = T;
      const GrowthReport rep = verify_growth_conditions(spec.f, plan);
      EXPECT_TRUE(rep.all_passed()) << name << " T=" << T << " f2 margin " << rep.f2.margin
                                    << " nagumo margin " << rep.nagumo_bound.margin;
    }
  }
}

TEST(Corpus, NamesResolve) {
  EXPECT_EQ(corpus_names().size(), 9u);
  for (const auto& name : corpus_names()) EXPECT_EQ(problem_by_name(name).name, name);
  EXPECT_THROW(problem_by_name("logistic-bc4"), InvalidArgument);
  EXPECT_THROW(problem_by_name("nope"), InvalidArgument);
}

TEST(Manufactured, ZeroAmplitudeIsKernel) {
  const ProblemSpec spec = manufactured_problem(BoundaryCondition::BC1, 1.0, 1.0, 0.0, 0.0);
  const Grid g(1.0, 50);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(spec.f.f(g.node(i), 3.0, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(spec.known_solution->u(g.node(i)), 1.0 + g.node(i));
  }
  const ResidualNorms r = residual(spec.known_solution->sample(g), spec.extended(), spec.bc, {});
  EXPECT_LE(r.interior, 1e-12);
  EXPECT_LE(r.boundary, 1e-12);
}

TEST(Manufactured, BC1ClosedForm) {
  const ProblemSpec spec = manufactured_problem(BoundaryCondition::BC1, 1.0, 1.0, 1.0);
  const KnownSolution& s = *spec.known_solution;
  EXPECT_DOUBLE_EQ(s.u(0.0), 1.0);
  EXPECT_DOUBLE_EQ(s.du(0.0), 1.0);
  EXPECT_DOUBLE_EQ(s.du(1.0), 1.0);
  for (double t : {0.0, 0.3, 0.8}) {
    EXPECT_NEAR(s.u(t), 1 + t + t * t * (1 - t) * (1 - t), 1e-15);
    EXPECT_NEAR(s.d2u(t), 2 - 12 * t + 12 * t * t, 1e-13);
    // f(t, u*, .) = -u*''
    EXPECT_NEAR(spec.f.f(t, s.u(t), s.du(t)), -s.d2u(t), 1e-13);
  }
}

TEST(Manufactured, BC2ClosedForm) {
  const ProblemSpec spec = manufactured_problem(BoundaryCondition::BC2, 1.0, 1.0, 2.0);
  const KnownSolution& s = *spec.known_solution;
  EXPECT_EQ(s.u(0.0), 0.0);
  EXPECT_DOUBLE_EQ(s.du(0.0), 1.0);
  EXPECT_DOUBLE_EQ(s.du(1.0), 1.0);
  for (int i = 1; i <= 100; ++i) EXPECT_GT(s.u(i / 100.0), 0.0);
  for (double t : {0.0, 1e-6, 0.4, 1.0}) {
    EXPECT_TRUE(std::isfinite(spec.f.f(t, 1.0, 0.0)));
    EXPECT_NEAR(spec.f.f(t, s.u(t), s.du(t)), -s.d2u(t), 1e-12);
  }
}

TEST(Manufactured, GeneralTRescales) {
  for (auto bc : kAll) {
    const double T = 2.5;
    const ProblemSpec spec = manufactured_problem(bc, T, 1.0, 1.0);
    const GridFunction u = spec.known_solution->sample(Grid(T, 100));
    const auto b = boundary_operator(u, bc);
    EXPECT_NEAR(b[0], 0.0, 1e-13) << to_string(bc);
    EXPECT_NEAR(b[1], 0.0, 1e-13) << to_string(bc);
    // second derivative by central difference of the closed form
    for (double t : {0.4, 1.1, 2.2}) {
      const double h = 1e-4;
      const double fd = (spec.known_solution->u(t + h) - 2 * spec.known_solution->u(t) +
                         spec.known_solution->u(t - h)) / (h * h);
      EXPECT_NEAR(spec.known_solution->d2u(t), fd, 1e-5);
    }
  }
}

TEST(Manufactured, RejectsVanishingSolution) {
  EXPECT_THROW(manufactured_problem(BoundaryCondition::BC3, 1.0, 1.0, -10.0), InvalidArgument);
  EXPECT_THROW(manufactured_problem(BoundaryCondition::BC1, 1.0, 0.1, -20.0), InvalidArgument);
  EXPECT_THROW(manufactured_problem(BoundaryCondition::BC2, 1.0, 1.0, -20.0), InvalidArgument);
  EXPECT_THROW(manufactured_problem(BoundaryCondition::BC1, 1.0, 0.0, 1.0), InvalidArgument);
}

TEST(Oracle, RecoversManufacturedSolution) {
  for (auto bc : kAll) {
    const ProblemSpec spec = problem_by_name("mms-" + std::string(to_string(bc)));
    const GridFunction u = oracle_shoot(spec, Grid(1.0, 100), 100000);
    EXPECT_LE(sup_error(u, spec.known_solution->u), 1e-8) << to_string(bc);
  }
}

TEST(Oracle, DegenerateBracketForZeroNonlinearity) {
  const ProblemSpec spec = manufactured_problem(BoundaryCondition::BC2, 1.0, 1.0, 0.0, 0.0);
  EXPECT_THROW(oracle_shoot(spec, Grid(1.0, 100), 10000), DegenerateBracketError);
}

TEST(Oracle, NoBracket) {
  const ProblemSpec spec = problem_by_name("logistic-bc1");
  ShootSettings s;
  s.a_lo = 1.0;
  s.a_hi = 1.2;
  s.scan = 10;
  EXPECT_THROW(oracle_shoot(spec, Grid(1.0, 100), 10000, s), NoBracketError);
}

TEST(Oracle, Preconditions) {
  const ProblemSpec spec = problem_by_name("logistic-bc1");
  EXPECT_THROW(oracle_shoot(spec, Grid(1.0, 100), 9999), InvalidArgument);
  EXPECT_THROW(oracle_shoot(spec, Grid(2.0, 100), 10000), InvalidArgument);
  ShootSettings s;
  s.alpha = 1.0;
  EXPECT_THROW(shooting_map(spec, 0.5, 100, s), InvalidArgument);
}

TEST(Oracle, ExactRootOnScanPoint) {
  // u = 1 solves the BC3 logistic problem and a = 1 lies on the scan
  const ProblemSpec spec = problem_by_name("logistic-bc3");
  ShootSettings s;
  s.a_lo = 0.5;
  s.a_hi = 1.5;
  s.scan = 10;
  const auto roots = shooting_roots(spec, 10000, s);
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_EQ(roots[0], 1.0);
}

TEST(Oracle, AgreesWithLogisticSolve) {
  const ProblemSpec spec = problem_by_name("logistic-bc1");
  const CoincidenceFrame frame(spec.bc, Grid(1.0, 1000));
  const SolveReport rep = solve_fixed_point(frame.embed(0.5), spec.extended(), frame, {});
  ASSERT_TRUE(rep.converged);
  const GridFunction shot = oracle_shoot(spec, frame.grid(), 100000);
  EXPECT_LE(rep.solution.distance(shot), 1e-4);
  EXPECT_GT(rep.solution.min_value(), 0.0);
}
