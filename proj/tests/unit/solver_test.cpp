#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include <degenpde/errors.hpp>
#include <degenpde/profiles.hpp>
#include <degenpde/solver.hpp>

#include "param_sets.hpp"

using namespace degenpde;
using namespace degenpde::fixtures;

namespace {

ProblemParams heat() {
    ProblemParams pr;
    pr.source = false;
    return pr;
}

double vmax(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

TEST(Grid, VolumesIntegrateTheWeight) {
    const Grid g(100, 2.0, 1.0);
    double total = 0.0;
    for (double v : g.volumes()) total += v;
    EXPECT_NEAR(total, 2.0, 1e-12);  // integral of r over [0, 2]
    EXPECT_DOUBLE_EQ(g.h(), 0.02);
    EXPECT_THROW(Grid(8, 1.0), DomainError);
    EXPECT_THROW(Grid(100, 1.0, -1.0), DomainError);
}

TEST(SolverConfig, Validation) {
    EXPECT_TRUE(validate(SolverConfig{}).empty());
    SolverConfig c;
    c.dt = 0.0;
    c.M = 4;
    EXPECT_EQ(validate(c).size(), 2u);
}

TEST(InitialCondition, E2) {
    const DerivedConstants d = derive(e2());
    const Grid g = make_grid(400, 4.0, e2());
    const GridState st = initial_condition(d, 0.5, 1.0, g);
    EXPECT_NEAR(st.v[0], 0.35355, 5e-6);
    for (int i = 0; i <= g.M(); ++i)
        if (g.r(i) >= std::sqrt(2.0)) EXPECT_EQ(st.v[static_cast<std::size_t>(i)], 0.0);
    const double rd = front_radius_theory(d, 0.5, rescaled_time(d, 1.0));
    EXPECT_LE(std::fabs(st.front_index * g.h() - rd), g.h());
    EXPECT_NEAR(st.r_front, rd, 0.1 * g.h());
}

TEST(InitialCondition, VanishesWithAmplitude) {
    const DerivedConstants d = derive(e2());
    const Grid g = make_grid(400, 4.0, e2());
    const GridState st = initial_condition(d, 1e-12, 1.0, g);
    EXPECT_LE(vmax(st.v), 1e-12);
}

TEST(FluxCoefficient, DegenerateRegionTransmitsNothing) {
    const DerivedConstants d = derive(e2());
    const Grid g = make_grid(100, 4.0, e2());
    const std::vector<double> zero(g.size(), 0.0);
    EXPECT_EQ(flux_coefficient(d, g, zero, 50), 0.0);
}

TEST(FluxCoefficient, ClassicalLimitIsOne) {
    const DerivedConstants d = derive(heat());
    const Grid g = make_grid(100, 4.0, heat());
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(-0.1 * static_cast<double>(i));
    for (int i : {0, 10, 99}) EXPECT_DOUBLE_EQ(flux_coefficient(d, g, v, i), 1.0);
}

TEST(FluxCoefficient, E2MidSupportMatchesProfile) {
    const DerivedConstants d = derive(e2());
    const Grid g = make_grid(400, 4.0, e2());
    const GridState st = initial_condition(d, 0.5, 1.0, g);
    const int i = st.front_index / 2;
    const double D = flux_coefficient(d, g, st.v, i);
    // m = 2, p = 2: the coefficient is the midpoint value itself.
    EXPECT_GT(D, 0.0);
    EXPECT_DOUBLE_EQ(D, 0.5 * (st.v[static_cast<std::size_t>(i)] + st.v[static_cast<std::size_t>(i + 1)]));
}

TEST(Assemble, ClassicalStencil) {
    const ProblemParams pr = heat();
    const DerivedConstants d = derive(pr);
    const Grid g = make_grid(50, 1.0, pr);
    GridState st;
    st.t = 1.0;
    st.v.assign(g.size(), 1.0);
    const double dt = 1e-3;
    const TridiagonalSystem sys = assemble_system(d, g, st, st.v, dt, 1.0 + dt);
    const double ratio = dt / (g.h() * g.h());
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        EXPECT_NEAR(sys.diag[i] / g.h(), 1.0 + 2.0 * ratio, 1e-12);
        EXPECT_NEAR(sys.upper[i] / g.h(), -ratio, 1e-12);
        EXPECT_NEAR(sys.lower[i - 1] / g.h(), -ratio, 1e-12);
        EXPECT_NEAR(sys.rhs[i] / g.h(), 1.0, 1e-12);
    }
    // Zero-flux closure at the axis, Dirichlet at R.
    EXPECT_NEAR(sys.diag[0], 0.5 * g.h() + dt / g.h(), 1e-15);
    EXPECT_EQ(sys.diag.back(), 1.0);
    EXPECT_EQ(sys.rhs.back(), 0.0);
}

TEST(Assemble, TendsToIdentityAsDtVanishes) {
    const DerivedConstants d = derive(e2());
    const Grid g = make_grid(100, 4.0, e2());
    const GridState st = initial_condition(d, 0.5, 1.0, g);
    const TridiagonalSystem sys = assemble_system(d, g, st, st.v, 1e-14, 1.0);
    const std::vector<double> x = thomas_solve(sys);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(x[i], st.v[i], 1e-12);
}

TEST(Assemble, AbsorptionIsDiagonallyDominant) {
    ProblemParams pr = e2();
    const DerivedConstants d_source = derive(pr);
    pr.epsilon = -1;
    const DerivedConstants d = derive(pr);
    const Grid g = make_grid(400, 4.0, pr);
    const GridState st = initial_condition(d_source, 0.5, 1.0, g);
    for (Linearization lin : {Linearization::picard, Linearization::gradient_newton}) {
        const TridiagonalSystem sys = assemble_system(d, g, st, st.v, 1e-2, 1.01, lin);
        for (std::size_t i = 0; i < sys.diag.size(); ++i) {
            const double off = (i > 0 ? std::fabs(sys.lower[i - 1]) : 0.0) +
                               (i + 1 < sys.diag.size() ? std::fabs(sys.upper[i]) : 0.0);
            EXPECT_GE(std::fabs(sys.diag[i]), off) << "row " << i;
        }
    }
}

TEST(PicardStep, ZeroStateInOneIteration) {
    const DerivedConstants d = derive(e2());
    const Grid g = make_grid(100, 4.0, e2());
    GridState st;
    st.t = 1.0;
    st.v.assign(g.size(), 0.0);
    const StepResult r = picard_step(d, g, st, 1e-3, SolverConfig{});
    EXPECT_EQ(r.iterations, 1);
    EXPECT_EQ(vmax(r.state.v), 0.0);
}

TEST(PicardStep, E2ConvergesQuickly) {
    const DerivedConstants d = derive(e2());
    const Grid g = make_grid(400, 4.0, e2());
    GridState st = initial_condition(d, 0.5, 1.0, g);
    for (int k = 0; k < 20; ++k) {
        const StepResult r = picard_step(d, g, st, 1e-3, SolverConfig{});
        EXPECT_LE(r.iterations, 5);
        st = r.state;
    }
}

TEST(PicardStep, FailureReportsTime) {
    const DerivedConstants d = derive(e2());
    const Grid g = make_grid(400, 4.0, e2());
    const GridState st = initial_condition(d, 0.5, 1.0, g);
    SolverConfig c;
    c.picard_max = 1;
    c.picard_tol = 1e-300;
    try {
        picard_step(d, g, st, 1e-2, c);
        FAIL() << "expected PicardFailure";
    } catch (const PicardFailure& e) {
        EXPECT_NEAR(e.time(), 1.01, 1e-15);
        EXPECT_GT(e.last_change(), 0.0);
    }
}

TEST(PicardStep, HalvingDtNeverIncreasesCount) {
    const ProblemParams pr = e2();
    SolverConfig coarse;
    coarse.t_end = 1.1;
    coarse.R = 4.0;
    SolverConfig fine = coarse;
    fine.dt = coarse.dt / 2.0;
    const SolveReport rc = run(pr, coarse);
    const SolveReport rf = run(pr, fine);
    ASSERT_EQ(rc.iterations_per_step.size(), 100u);
    ASSERT_EQ(rf.iterations_per_step.size(), 200u);
    for (std::size_t k = 0; k < 100; ++k) {
        EXPECT_LE(rf.iterations_per_step[2 * k], rc.iterations_per_step[k]);
        EXPECT_LE(rf.iterations_per_step[2 * k + 1], rc.iterations_per_step[k]);
    }
}

TEST(Run, TEndAtT0GivesInitialSnapshotOnly) {
    SolverConfig c;
    c.t_end = 1.0;
    const SolveReport r = run(e2(), c);
    ASSERT_EQ(r.snapshots.size(), 1u);
    EXPECT_EQ(r.snapshots[0].t, 1.0);
    EXPECT_TRUE(r.iterations_per_step.empty());
    EXPECT_EQ(r.termination, Termination::completed);
}

TEST(Run, SnapshotsAtRequestedTimes) {
    SolverConfig c;
    c.t_end = 1.5;
    c.snapshot_times = {1.25, 1.1, 7.0};
    const SolveReport r = run(e2(), c);
    ASSERT_EQ(r.snapshots.size(), 4u);
    EXPECT_NEAR(r.snapshots[1].t, 1.1, 1e-12);
    EXPECT_NEAR(r.snapshots[2].t, 1.25, 1e-12);
    EXPECT_NEAR(r.snapshots[3].t, 1.5, 1e-12);
}

TEST(Run, E2CompletesBoundedAndDecaying) {
    SolverConfig c;
    c.t_end = 4.0;
    std::vector<double> peaks;
    const SolveReport r = run(e2(), c, [&](const GridState& st, int) { peaks.push_back(vmax(st.v)); });
    EXPECT_EQ(r.termination, Termination::completed);
    EXPECT_NEAR(r.termination_time, 4.0, 1e-12);
    EXPECT_LT(peaks.back(), peaks.front());
    for (std::size_t k = 500; k < peaks.size(); k += 500) EXPECT_LT(peaks[k], peaks[k - 500]);
    for (int it : r.iterations_per_step) EXPECT_LE(it, 5);
    EXPECT_TRUE(r.warnings.empty());
}

TEST(Run, NonnegativeWithNegligibleClamping) {
    SolverConfig c;
    c.t_end = 2.0;
    c.snapshot_times = {1.5};
    const ProblemParams pr = e2();
    const SolveReport r = run(pr, c);
    const Grid g = make_grid(r.M, r.R, pr);
    for (const GridState& st : r.snapshots)
        for (double x : st.v) EXPECT_GE(x, 0.0);
    const double m = mass(g, r.snapshots.back().v);
    for (double cm : r.clamped_mass) EXPECT_LE(cm, 1e-8 * m);
}

TEST(Run, FrontMovesAtMostTwoCellsPerStep) {
    const ProblemParams pr = e2();
    SolverConfig c;
    c.R = 4.0;
    c.M = 200;
    c.t_end = 1.5;
    c.dt = (c.R / c.M) * (c.R / c.M);
    const SolveReport r = run(pr, c);
    const double h = c.R / c.M;
    for (std::size_t k = 1; k < r.front_history.size(); ++k) {
        const double jump = r.front_history[k].r_front - r.front_history[k - 1].r_front;
        EXPECT_LE(std::fabs(jump), 2.0 * h);
    }
    EXPECT_GT(r.front_history.back().r_front, r.front_history.front().r_front);
}

TEST(Run, AbsorptionFrontStaysInsideTheoreticalRadius) {
    ProblemParams pr = e2();
    const DerivedConstants ds = derive(pr);
    pr.epsilon = -1;
    const DerivedConstants d = derive(pr);
    const Grid g = make_grid(400, 4.0, pr);
    SolverConfig c;
    c.t_end = 3.0;
    GridState init = initial_condition(ds, 0.5, 1.0, g);
    for (double& x : init.v) x *= 0.5;
    const SolveReport r = run(d, g, init, c);
    ASSERT_EQ(r.termination, Termination::completed);
    // The extrapolated discrete front leads the continuous one by O(h).
    for (const FrontSample& s : r.front_history)
        EXPECT_LE(s.r_front, front_radius_theory(ds, 0.5, rescaled_time(ds, s.t)) + 2.0 * g.h());
}

TEST(Run, E1BlowsUp) {
    ProblemParams pr = e1();
    SolverConfig c;
    c.t_end = 6.0;
    const SolveReport r = run(pr, c);
    EXPECT_EQ(r.termination, Termination::blowup);
    EXPECT_GT(r.termination_time, 1.0);
    EXPECT_LT(r.termination_time, 6.0);
}

TEST(Run, ZeroDataStaysZero) {
    SolverConfig c;
    c.t_end = 1.1;
    c.rho = 0.0;
    const SolveReport r = run(e2(), c);
    EXPECT_EQ(vmax(r.snapshots.back().v), 0.0);
}

TEST(Run, DefaultRadiusTwiceTheFront) {
    const DerivedConstants d = derive(e2());
    SolverConfig c;
    c.t_end = 2.0;
    EXPECT_NEAR(default_radius(d, c), 2.0 * front_radius_theory(d, 0.5, rescaled_time(d, 2.0)), 1e-12);
    EXPECT_EQ(default_radius(derive(e3()), c), 20.0);
}

TEST(Run, RejectsBadInput) {
    SolverConfig c;
    c.t_end = 0.5;
    EXPECT_THROW(run(e2(), c), DomainError);
    ProblemParams bad = e2();
    bad.N = 0;
    EXPECT_THROW(run(bad, SolverConfig{}), DomainError);
}
