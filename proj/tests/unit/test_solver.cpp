#include <gtest/gtest.h>

#include <cmath>

#include "plastiq/errors.hpp"
#include "plastiq/solver.hpp"
#include "support.hpp"

using namespace plastiq;
using plastiq::testing::square_mesh;

namespace {

Problem make_problem(std::shared_ptr<const Mesh> mesh, Vec2 final_force, double yield = 1.0) {
    EnergyOptions o;
    o.dirichlet_weight = 4.0;
    DissipationModel d;
    d.yield_scale = yield;
    d.det_tolerance = 1e-5;
    Loading l = Loading::uniform(mesh, {0.0, 1.0}, {{0, 0}, final_force}, {{0, 0}, {0, 0}});
    return Problem{EnergyModel(o), d, std::move(l)};
}

SolverConfig fast_config() {
    SolverConfig c;
    c.max_outer_iterations = 2000;
    c.alternation_rounds = 3;
    return c;
}

// Brute-force minimum of the full single-point toy objective over (f, p).
std::pair<double, double> toy_grid_oracle(double ell, double p_prev) {
    double best = INFINITY, bf = 0, bp = 0;
    for (int i = 0; i <= 400; ++i) {
        const double p = 0.5 + i * 0.0025;
        for (int j = 0; j <= 400; ++j) {
            const double f = j * 0.0025;
            const double g = 0.5 * (f / p) * (f / p) + 0.5 * p * p - ell * f + std::abs(std::log(p / p_prev));
            if (g < best) best = g, bf = f, bp = p;
        }
    }
    return {bf, bp};
}

}  // namespace

TEST(TimeGrid, Validation) {
    EXPECT_NO_THROW(TimeGrid({0.0, 0.5, 1.0}));
    EXPECT_THROW(TimeGrid({0.0, 0.0}), InvalidArgument);
    EXPECT_THROW(TimeGrid({1.0, 0.5}), InvalidArgument);
    EXPECT_THROW(TimeGrid({0.0, NAN}), InvalidArgument);
    EXPECT_THROW(TimeGrid(std::vector<double>{}), InvalidArgument);
    const TimeGrid g = TimeGrid::uniform(2.0, 4);
    EXPECT_EQ(g.size(), 5u);
    EXPECT_DOUBLE_EQ(g[4], 2.0);
    EXPECT_DOUBLE_EQ(g.fineness(), 0.5);
    EXPECT_EQ(TimeGrid({3.0}).fineness(), 0.0);
}

TEST(Toy, SubcriticalLoadStaysElastic) {
    const auto steps = run_1d_toy(0.5, TimeGrid::uniform(1.0, 10));
    for (const auto& s : steps) {
        EXPECT_NEAR(s.p, 1.0, 1e-8);
        EXPECT_NEAR(s.f, s.ell, 1e-8);
        EXPECT_FALSE(s.runaway);
        EXPECT_NEAR(s.dissipation, 0.0, 1e-8);
    }
    const auto [f, p] = toy_grid_oracle(0.5, 1.0);
    EXPECT_NEAR(steps.back().f, f, 2.5e-3);
    EXPECT_NEAR(steps.back().p, p, 2.5e-3);
}

TEST(Toy, ReducedObjectiveMatchesFullObjective) {
    for (double ell : {0.0, 0.4, 0.9}) {
        for (double p : {0.7, 1.0, 1.6}) {
            const double f = ell * p * p;  // exact f-minimizer
            const double full = 0.5 * (f / p) * (f / p) + 0.5 * p * p - ell * f + std::abs(std::log(p / 1.2));
            EXPECT_NEAR(toy_reduced_objective(ell, p, 1.2), full, 1e-14);
        }
    }
}

TEST(Toy, SupercriticalLoadRunsAway) {
    const auto steps = run_1d_toy(2.0, TimeGrid::uniform(1.0, 40), 0.05, 10.0);
    for (const auto& s : steps) {
        if (s.t <= 0.5 + 1e-12) {
            EXPECT_FALSE(s.runaway) << "t = " << s.t;
            EXPECT_EQ(s.p, 1.0) << "t = " << s.t;
        } else {
            EXPECT_TRUE(s.runaway) << "t = " << s.t;
            EXPECT_NEAR(s.p, 10.0, 1e-6);
        }
    }
    // brute-force check at the first knot past the threshold, t = 0.525
    double best = INFINITY, best_p = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        const double p = 0.05 + i * (10.0 - 0.05) / 20000;
        const double g = toy_reduced_objective(1.05, p, 1.0);
        if (g < best) best = g, best_p = p;
    }
    EXPECT_NEAR(best_p, 10.0, 1e-9);
}

TEST(Toy, ArgumentValidation) {
    EXPECT_THROW(run_1d_toy(0.5, TimeGrid::uniform(1.0, 2), 0.0), InvalidArgument);
    EXPECT_THROW(run_1d_toy(0.5, TimeGrid::uniform(1.0, 2), 2.0, 1.0), InvalidArgument);
    EXPECT_THROW(run_1d_toy(0.5, TimeGrid::uniform(1.0, 2), 0.05, 20.0, 0.0), InvalidArgument);
}

TEST(IncrementalSolve, ReferenceIsFixedWithoutLoad) {
    auto mesh = square_mesh(3, SquareSides::all());
    const Problem pr = make_problem(mesh, {0, 0});
    const State ref = reference_state(mesh);
    SolveStats st;
    const State out = incremental_solve(ref, 0.5, pr, fast_config(), &st);
    EXPECT_NEAR(incremental_objective(pr, 0.5, ref.yp, out), 2.0, 1e-12);
    EXPECT_LE(st.objective_end, st.objective_start);
}

TEST(IncrementalSolve, ObjectiveNeverIncreases) {
    auto mesh = square_mesh(3, SquareSides::all());
    const Problem pr = make_problem(mesh, {0.5, -0.5}, 0.05);
    Rng rng(61);
    for (int k = 0; k < 3; ++k) {
        const State start = random_admissible_state(mesh, rng, 0.03);
        SolveStats st;
        const State out = incremental_solve(start, 1.0, pr, fast_config(), &st);
        const double before = incremental_objective(pr, 1.0, start.yp, start);
        const double after = incremental_objective(pr, 1.0, start.yp, out);
        EXPECT_LE(after, before + 1e-12);
        EXPECT_NEAR(st.objective_end, after, 1e-10 * (1 + std::abs(after)));
        EXPECT_TRUE(check_admissible(out, 1e-5).pass);
    }
}

TEST(IncrementalSolve, BeatsRandomCompetitors) {
    auto mesh = square_mesh(3, SquareSides::all());
    const Problem pr = make_problem(mesh, {0.4, 0.0});
    const State ref = reference_state(mesh);
    const State out = incremental_solve(ref, 1.0, pr, fast_config());
    const double best = incremental_objective(pr, 1.0, ref.yp, out);
    Rng rng(62);
    for (int k = 0; k < 50; ++k) {
        State c = out;
        const double amp = std::pow(10.0, -3 + k % 3);
        c.y = perturb_field(out.y, rng, amp);
        EXPECT_GE(incremental_objective(pr, 1.0, ref.yp, c), best - 1e-8 * (1 + best));
    }
}

TEST(Quasistatic, ZeroLoadHasNoDissipation) {
    auto mesh = square_mesh(2, SquareSides::all());
    const Problem pr = make_problem(mesh, {0, 0});
    const Trajectory tr = run_quasistatic(reference_state(mesh), TimeGrid::uniform(1.0, 3), pr, fast_config());
    ASSERT_EQ(tr.states.size(), 4u);
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
        EXPECT_EQ(tr.delta_accumulated[i], 0.0);
        EXPECT_NEAR(tr.energies[i].total, 2.0, 1e-12);
    }
    EXPECT_NEAR(tr.energy_bound, 2.0, 1e-12);
}

TEST(Quasistatic, RampTrajectoryInvariants) {
    auto mesh = square_mesh(3, SquareSides::all());
    const Problem pr = make_problem(mesh, {2.0, 0.0}, 0.05);
    const Trajectory tr = run_quasistatic(reference_state(mesh), TimeGrid::uniform(1.0, 4), pr, fast_config());
    ASSERT_EQ(tr.states.size(), 5u);
    EXPECT_EQ(tr.increments[0], 0.0);
    double sup = -INFINITY;
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
        if (i > 0) EXPECT_GE(tr.delta_accumulated[i], tr.delta_accumulated[i - 1]);
        EXPECT_TRUE(check_admissible(tr.states[i], 1e-5).pass) << "knot " << i;
        sup = std::max(sup, tr.energies[i].total);
    }
    EXPECT_NEAR(tr.energy_bound, sup + tr.delta_accumulated.back(), 1e-12);

    Trajectory copy = tr;
    refresh_trajectory(copy, pr);
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
        EXPECT_NEAR(copy.energies[i].total, tr.energies[i].total, 1e-12);
        EXPECT_NEAR(copy.delta_accumulated[i], tr.delta_accumulated[i], 1e-12);
    }
}

TEST(Quasistatic, ElasticOnlyRunKeepsPlasticField) {
    auto mesh = square_mesh(2, SquareSides::all());
    const Problem pr = make_problem(mesh, {1.0, 0.0}, 0.01);
    SolverConfig cfg = fast_config();
    cfg.plastic_updates = false;
    const State ref = reference_state(mesh);
    const Trajectory tr = run_quasistatic(ref, TimeGrid::uniform(1.0, 2), pr, cfg);
    for (const State& s : tr.states) EXPECT_EQ(s.yp.values, ref.yp.values);
    EXPECT_EQ(tr.delta_accumulated.back(), 0.0);
}

TEST(Quasistatic, StateAtIsRightContinuous) {
    auto mesh = square_mesh(2, SquareSides::all());
    const Problem pr = make_problem(mesh, {0.3, 0.0});
    const Trajectory tr = run_quasistatic(reference_state(mesh), TimeGrid::uniform(1.0, 2), pr, fast_config());
    EXPECT_EQ(&tr.state_at(-1.0), &tr.states[0]);
    EXPECT_EQ(&tr.state_at(0.49), &tr.states[0]);
    EXPECT_EQ(&tr.state_at(0.5), &tr.states[1]);
    EXPECT_EQ(&tr.state_at(7.0), &tr.states[2]);
}

TEST(Quasistatic, InadmissibleStartIsReportedWithKnot) {
    auto mesh = square_mesh(2, SquareSides::all());
    const Problem pr = make_problem(mesh, {0.3, 0.0});
    State bad = reference_state(mesh);
    bad.yp = affine_field(mesh, Mat{{1.3, 0}, {0, 1}});
    try {
        run_quasistatic(bad, TimeGrid::uniform(1.0, 2), pr, fast_config());
        FAIL() << "expected SolverFailure";
    } catch (const SolverFailure& e) {
        EXPECT_LE(e.knot(), 1u);
    }
}
