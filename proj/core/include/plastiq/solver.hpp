#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "plastiq/dissipation.hpp"
#include "plastiq/energy.hpp"
#include "plastiq/state.hpp"

namespace plastiq {

/// Partition 0 = t_0 < t_1 < ... < t_N = T.
class TimeGrid {
public:
    /// Throws InvalidArgument unless the knots are finite and strictly increasing.
    explicit TimeGrid(std::vector<double> knots);
    static TimeGrid uniform(double t_end, std::size_t intervals, double t_begin = 0.0);

    const std::vector<double>& knots() const noexcept { return knots_; }
    std::size_t size() const noexcept { return knots_.size(); }
    double operator[](std::size_t i) const { return knots_[i]; }
    /// max(t_i - t_{i-1}); zero for a single knot.
    double fineness() const noexcept;

private:
    std::vector<double> knots_;
};

struct SolverConfig {
    /// Pattern-search sweeps per minimization phase.
    std::size_t max_outer_iterations = 20000;
    /// Alternations between the y and y_p phases per time step.
    std::size_t alternation_rounds = 6;
    double step_init = 0.05;
    double step_floor = 1e-9;
    double det_tolerance = 1e-6;
    /// Random competitors for stability spot checks.
    std::size_t perturbation_count = 50;
    std::uint64_t seed = 1;
    /// Allow plastic updates; false gives a purely elastic evolution.
    bool plastic_updates = true;
};

/// Energy, dissipation and loading of one problem.
struct Problem {
    EnergyModel energy;
    DissipationModel dissipation;
    Loading loading;
};

/// E(t, y_e, y_p) + D(grad y_p(prev), grad y_p): the incremental objective.
double incremental_objective(const Problem& problem, double t, const Field& prev_yp, const State& state);

struct SolveStats {
    double objective_start = 0.0;
    double objective_end = 0.0;
    std::size_t rounds = 0;
    std::size_t elastic_moves = 0;
    std::size_t plastic_moves = 0;
    std::size_t projection_stalls = 0;
    bool kept_previous = false;
};

/// One incremental step: alternating derivative-free minimization over y
/// (y_p fixed) and y_p (projected to det = 1 after each trial), started at
/// prev. The result never has a larger objective than prev; when the search
/// finds no decrease prev is returned unchanged.
State incremental_solve(const State& prev, double t, const Problem& problem, const SolverConfig& config,
                        SolveStats* stats = nullptr);

/// Minimizes E(t, ., y_p) over y alone.
State relax_elastic(const State& state, double t, const Problem& problem, const SolverConfig& config,
                    SolveStats* stats = nullptr);

struct Trajectory {
    TimeGrid grid{std::vector<double>{0.0}};
    std::vector<State> states;
    std::vector<EnergyBreakdown> energies;
    /// increments[i] = D(grad y_p(t_{i-1}), grad y_p(t_i)); increments[0] = 0.
    std::vector<double> increments;
    /// delta_accumulated[i] = sum_{j <= i} increments[j].
    std::vector<double> delta_accumulated;
    /// sup_t E(t) + Diss(0, T).
    double energy_bound = 0.0;
    std::vector<SolveStats> stats;

    /// Right-continuous piecewise-constant interpolant: the state at the
    /// largest knot <= t (the first state for t before the grid).
    const State& state_at(double t) const;
};

/// states[0] = initial, states[i] = incremental_solve(states[i-1], t_i).
/// Failures are rethrown as SolverFailure carrying the knot index.
Trajectory run_quasistatic(const State& initial, const TimeGrid& grid, const Problem& problem,
                           const SolverConfig& config);

/// Recomputes energies, increments, accumulated dissipation and the energy
/// bound of a trajectory from its states.
void refresh_trajectory(Trajectory& traj, const Problem& problem);

struct ToyStep {
    double t = 0.0;
    double ell = 0.0;
    double f = 0.0;
    double p = 1.0;
    /// Accumulated sum of |log p_i - log p_{i-1}|.
    double dissipation = 0.0;
    bool runaway = false;
};

/// Single material point in one dimension with loading l(t) = lambda t:
/// minimizes 1/2 |f/p|^2 + 1/2 p^2 - l f + |log p - log p_prev| per knot.
/// The f-minimization is exact (f = l p^2); p is found by grid search with
/// spacing `resolution` on [p_min, p_max] and golden-section refinement to
/// 1e-8. p = p_prev is kept on ties within 1e-14. Hitting a bound sets runaway.
std::vector<ToyStep> run_1d_toy(double lambda, const TimeGrid& grid, double p_min = 0.05, double p_max = 20.0,
                                double resolution = 1e-4);

/// Reduced toy objective g(p) = 1/2 (1 - l^2) p^2 + |log p - log p_prev|.
double toy_reduced_objective(double ell, double p, double p_prev);

}  // namespace plastiq
