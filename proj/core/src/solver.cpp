#include "plastiq/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "plastiq/errors.hpp"

namespace plastiq {

// ---------------------------------------------------------------------------
// Time grid

TimeGrid::TimeGrid(std::vector<double> knots) : knots_(std::move(knots)) {
    if (knots_.empty()) throw InvalidArgument("time grid needs at least one knot");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!std::isfinite(knots_[i])) throw InvalidArgument("time knot is not finite");
        if (i > 0 && !(knots_[i] > knots_[i - 1])) throw InvalidArgument("time knots must increase strictly");
    }
}

TimeGrid TimeGrid::uniform(double t_end, std::size_t intervals, double t_begin) {
    if (intervals < 1) throw InvalidArgument("time grid needs at least one interval");
    if (!(t_end > t_begin)) throw InvalidArgument("time grid needs T > t_0");
    std::vector<double> k(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i)
        k[i] = t_begin + (t_end - t_begin) * static_cast<double>(i) / static_cast<double>(intervals);
    k.back() = t_end;
    return TimeGrid(std::move(k));
}

double TimeGrid::fineness() const noexcept {
    double f = 0.0;
    for (std::size_t i = 1; i < knots_.size(); ++i) f = std::max(f, knots_[i] - knots_[i - 1]);
    return f;
}

// ---------------------------------------------------------------------------
// Objective

double incremental_objective(const Problem& problem, double t, const Field& prev_yp, const State& state) {
    const double e = total_energy(problem.energy, problem.loading, t, state).total;
    return e + global_distance(prev_yp, state.yp, problem.dissipation);
}

namespace {

constexpr double kTie = 1e-14;

/// A search direction: displacement coefficients for a set of nodes.
struct Direction {
    std::vector<std::pair<std::size_t, Vec2>> parts;
    std::vector<std::size_t> elements;
    std::vector<std::size_t> edges;
    double load_slope = 0.0;
    double step = 0.0;
};

std::vector<std::vector<std::size_t>> dirichlet_chains(const Mesh& mesh) {
    std::map<std::size_t, std::vector<std::size_t>> adj;
    for (const auto& e : mesh.gamma_d()) {
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
    }
    std::map<std::size_t, bool> seen;
    std::vector<std::vector<std::size_t>> chains;
    // open chains start at nodes of degree one, loops anywhere
    auto walk = [&](std::size_t start) {
        std::vector<std::size_t> chain{start};
        seen[start] = true;
        std::size_t cur = start;
        for (;;) {
            std::size_t next = cur;
            for (auto n : adj[cur])
                if (!seen[n]) {
                    next = n;
                    break;
                }
            if (next == cur) break;
            seen[next] = true;
            chain.push_back(next);
            cur = next;
        }
        chains.push_back(std::move(chain));
    };
    for (const auto& [node, nb] : adj)
        if (nb.size() == 1 && !seen[node]) walk(node);
    for (const auto& [node, nb] : adj)
        if (!seen[node]) walk(node);
    return chains;
}

/// Pattern search over the nodal values of y with y_p fixed.
class ElasticSearch {
public:
    ElasticSearch(const Problem& problem, double t, State& state, const SolverConfig& config)
        : pb_(problem), state_(state), cfg_(config), mesh_(*state.y.mesh) {
        for (std::size_t e = 0; e < mesh_.element_count(); ++e) fp_inv_.push_back(inverse(gradient(state.yp, e)));
        load_ = problem.loading.knots().empty() ? std::vector<Vec2>(mesh_.node_count())
                                                : problem.loading.load_vector(t);
        node_edges_.resize(mesh_.node_count());
        for (std::size_t k = 0; k < mesh_.gamma_d().size(); ++k) {
            node_edges_[mesh_.gamma_d()[k][0]].push_back(k);
            node_edges_[mesh_.gamma_d()[k][1]].push_back(k);
        }
        build_directions();
        refresh_caches();
    }

    std::size_t run() {
        std::size_t accepted = 0;
        for (std::size_t sweep = 0; sweep < cfg_.max_outer_iterations; ++sweep) {
            bool active = false;
            std::size_t moved = 0;
            const std::vector<Vec2> start = state_.y.values;
            for (auto& d : dirs_) {
                if (d.step < cfg_.step_floor) continue;
                active = true;
                bool ok = false;
                for (double sign : {1.0, -1.0}) {
                    const double h = sign * d.step;
                    if (trial(d, h) < -kTie) {
                        commit(d, h);
                        ok = true;
                        break;
                    }
                }
                if (ok) {
                    ++moved;
                    d.step = std::min(2.0 * d.step, max_step_);
                } else {
                    d.step *= 0.5;
                }
            }
            accepted += moved;
            if (moved > 0) accepted += extrapolate(start);
            if (!active) break;
        }
        return accepted;
    }

private:
    double element_energy(std::size_t e) const {
        return element_elastic_energy(pb_.energy, gradient(state_.y, e), fp_inv_[e], mesh_.element_area(e));
    }
    double edge_energy(std::size_t k) const {
        return edge_boundary_energy(pb_.energy, mesh_, mesh_.gamma_d()[k], state_.y);
    }

    void refresh_caches() {
        el_.resize(mesh_.element_count());
        bd_.resize(mesh_.gamma_d().size());
        for (std::size_t e = 0; e < el_.size(); ++e) el_[e] = element_energy(e);
        for (std::size_t k = 0; k < bd_.size(); ++k) bd_[k] = edge_energy(k);
    }

    double full_value() const {
        double s = 0.0;
        for (double v : el_) s += v;
        for (double v : bd_) s += v;
        for (std::size_t k = 0; k < load_.size(); ++k) s -= dot(load_[k], state_.y.values[k]);
        return s;
    }

    void add_direction(std::vector<std::pair<std::size_t, Vec2>> parts) {
        Direction d;
        d.parts = std::move(parts);
        for (const auto& [node, c] : d.parts) {
            for (auto e : mesh_.node_elements()[node]) d.elements.push_back(e);
            for (auto k : node_edges_[node]) d.edges.push_back(k);
            d.load_slope += dot(load_[node], c);
        }
        std::sort(d.elements.begin(), d.elements.end());
        d.elements.erase(std::unique(d.elements.begin(), d.elements.end()), d.elements.end());
        std::sort(d.edges.begin(), d.edges.end());
        d.edges.erase(std::unique(d.edges.begin(), d.edges.end()), d.edges.end());
        d.step = cfg_.step_init;
        dirs_.push_back(std::move(d));
    }

    void build_directions() {
        max_step_ = 0.25 * mesh_.diameter();
        const Vec2 axes[2] = {{1.0, 0.0}, {0.0, 1.0}};
        for (std::size_t k = 0; k < mesh_.node_count(); ++k)
            for (const auto& a : axes) add_direction({{k, a}});
        // moves that keep the midpoint of a Dirichlet edge fixed
        for (const auto& e : mesh_.gamma_d())
            for (const auto& a : axes) add_direction({{e[0], a}, {e[1], a * -1.0}});
        for (const auto& chain : dirichlet_chains(mesh_)) {
            if (chain.size() < 3) continue;
            for (const auto& a : axes) {
                std::vector<std::pair<std::size_t, Vec2>> parts;
                for (std::size_t j = 0; j < chain.size(); ++j) parts.push_back({chain[j], a * (j % 2 ? -1.0 : 1.0)});
                add_direction(std::move(parts));
            }
        }
    }

    void displace(const Direction& d, double h) {
        for (const auto& [node, c] : d.parts) state_.y.values[node] += c * h;
    }

    double trial(const Direction& d, double h) {
        displace(d, h);
        double delta = -h * d.load_slope;
        for (auto e : d.elements) delta += element_energy(e) - el_[e];
        for (auto k : d.edges) delta += edge_energy(k) - bd_[k];
        displace(d, -h);
        return std::isnan(delta) ? std::numeric_limits<double>::infinity() : delta;
    }

    void commit(const Direction& d, double h) {
        displace(d, h);
        for (auto e : d.elements) el_[e] = element_energy(e);
        for (auto k : d.edges) bd_[k] = edge_energy(k);
    }

    /// Pattern move along the displacement of the last sweep.
    std::size_t extrapolate(const std::vector<Vec2>& start) {
        const double before = full_value();
        const std::vector<Vec2> base = state_.y.values;
        for (std::size_t k = 0; k < base.size(); ++k) state_.y.values[k] = base[k] + (base[k] - start[k]);
        const auto el = el_;
        const auto bd = bd_;
        refresh_caches();
        if (full_value() < before - kTie) return 1;
        state_.y.values = base;
        el_ = el;
        bd_ = bd;
        return 0;
    }

    const Problem& pb_;
    State& state_;
    const SolverConfig& cfg_;
    const Mesh& mesh_;
    std::vector<Mat> fp_inv_;
    std::vector<Vec2> load_;
    std::vector<std::vector<std::size_t>> node_edges_;
    std::vector<Direction> dirs_;
    std::vector<double> el_;
    std::vector<double> bd_;
    double max_step_ = 1.0;
};

/// Pattern search over the nodal values of y_p with y fixed. Every trial is
/// projected back to det = 1 and must pass the Ciarlet-Necas test.
class PlasticSearch {
public:
    PlasticSearch(const Problem& problem, double t, const Field& prev_yp, State& state, const SolverConfig& config,
                  SolveStats& stats)
        : pb_(problem), t_(t), prev_(prev_yp), state_(state), cfg_(config), stats_(stats) {
        const std::size_t n = state.yp.mesh->node_count();
        for (std::size_t k = 0; k < n; ++k)
            for (int a = 0; a < 2; ++a) dirs_.push_back({static_cast<int>(k), a, config.step_init});
        for (int g = 0; g < 3; ++g) dirs_.push_back({-1, g, config.step_init});
        value_ = incremental_objective(pb_, t_, prev_, state_);
    }

    std::size_t run() {
        std::size_t accepted = 0;
        for (std::size_t sweep = 0; sweep < cfg_.max_outer_iterations; ++sweep) {
            bool active = false;
            for (auto& d : dirs_) {
                if (d.step < cfg_.step_floor) continue;
                active = true;
                bool ok = false;
                for (double sign : {1.0, -1.0})
                    if (attempt(d, sign * d.step)) {
                        ok = true;
                        break;
                    }
                if (ok) {
                    ++accepted;
                    d.step = std::min(2.0 * d.step, 0.25);
                } else {
                    d.step *= 0.5;
                }
            }
            if (!active) break;
        }
        return accepted;
    }

private:
    struct Dir {
        int node;  // -1 for a global trace-free generator
        int axis;
        double step;
    };

    bool attempt(const Dir& d, double h) {
        Field trial = state_.yp;
        if (d.node >= 0) {
            Vec2& v = trial.values[static_cast<std::size_t>(d.node)];
            (d.axis == 0 ? v.x : v.y) += h;
            try {
                trial = project_isochoric(std::move(trial), cfg_.det_tolerance);
            } catch (const ProjectionStall&) {
                ++stats_.projection_stalls;
                return false;
            }
        } else {
            static const Mat generators[3] = {Mat{{1.0, 0.0}, {0.0, -1.0}}, Mat{{0.0, 1.0}, {1.0, 0.0}},
                                              Mat{{0.0, -1.0}, {1.0, 0.0}}};
            const Mat m = mat_exp(generators[d.axis] * h);
            for (auto& v : trial.values) v = apply(m, v);
            recenter(trial);
        }
        State cand{state_.y, std::move(trial)};
        double value;
        try {
            value = incremental_objective(pb_, t_, prev_, cand);
        } catch (const NotIsochoric&) {
            return false;
        }
        if (!(value < value_ - kTie)) return false;
        if (!ciarlet_necas_check(cand.yp).pass) return false;
        state_.yp = std::move(cand.yp);
        value_ = value;
        return true;
    }

    const Problem& pb_;
    double t_;
    const Field& prev_;
    State& state_;
    const SolverConfig& cfg_;
    SolveStats& stats_;
    std::vector<Dir> dirs_;
    double value_ = 0.0;
};

}  // namespace

State relax_elastic(const State& state, double t, const Problem& problem, const SolverConfig& config,
                    SolveStats* stats) {
    SolveStats local;
    SolveStats& st = stats ? *stats : local;
    st = {};
    const double start = total_energy(problem.energy, problem.loading, t, state).total;
    State s = state;
    ElasticSearch search(problem, t, s, config);
    st.elastic_moves = search.run();
    st.rounds = 1;
    const double end = total_energy(problem.energy, problem.loading, t, s).total;
    st.objective_start = start;
    if (!(end <= start)) {
        st.kept_previous = true;
        st.objective_end = start;
        return state;
    }
    st.objective_end = end;
    return s;
}

State incremental_solve(const State& prev, double t, const Problem& problem, const SolverConfig& config,
                        SolveStats* stats) {
    SolveStats local;
    SolveStats& st = stats ? *stats : local;
    st = {};
    const double start = incremental_objective(problem, t, prev.yp, prev);
    st.objective_start = start;
    State s = prev;
    double value = start;
    for (std::size_t round = 0; round < config.alternation_rounds; ++round) {
        ++st.rounds;
        ElasticSearch elastic(problem, t, s, config);
        st.elastic_moves += elastic.run();
        std::size_t plastic_moves = 0;
        if (config.plastic_updates) {
            PlasticSearch plastic(problem, t, prev.yp, s, config, st);
            plastic_moves = plastic.run();
            st.plastic_moves += plastic_moves;
        }
        const double next = incremental_objective(problem, t, prev.yp, s);
        const double decrease = value - next;
        value = next;
        if (plastic_moves == 0 || decrease < 1e-10 * (1.0 + std::abs(value))) break;
    }
    if (!(value <= start)) {
        st.kept_previous = true;
        st.objective_end = start;
        return prev;
    }
    st.objective_end = value;
    return s;
}

// ---------------------------------------------------------------------------
// Time loop

const State& Trajectory::state_at(double t) const {
    const auto& k = grid.knots();
    const auto it = std::upper_bound(k.begin(), k.end(), t);
    if (it == k.begin()) return states.front();
    return states[static_cast<std::size_t>(it - k.begin()) - 1];
}

void refresh_trajectory(Trajectory& traj, const Problem& problem) {
    const std::size_t n = traj.states.size();
    traj.energies.assign(n, {});
    traj.increments.assign(n, 0.0);
    traj.delta_accumulated.assign(n, 0.0);
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        traj.energies[i] = total_energy(problem.energy, problem.loading, traj.grid[i], traj.states[i]);
        if (i > 0) {
            traj.increments[i] = global_distance(traj.states[i - 1].yp, traj.states[i].yp, problem.dissipation);
            traj.delta_accumulated[i] = traj.delta_accumulated[i - 1] + traj.increments[i];
        }
        sup = std::max(sup, traj.energies[i].total);
    }
    traj.energy_bound = n ? sup + traj.delta_accumulated.back() : 0.0;
}

Trajectory run_quasistatic(const State& initial, const TimeGrid& grid, const Problem& problem,
                           const SolverConfig& config) {
    Trajectory traj;
    traj.grid = grid;
    traj.states.push_back(initial);
    traj.stats.push_back({});
    auto where = [&](std::size_t i) { return "knot " + std::to_string(i) + " (t = " + std::to_string(grid[i]) + "): "; };
    try {
        if (!std::isfinite(total_energy(problem.energy, problem.loading, grid[0], initial).total))
            throw SolverFailure(where(0) + "initial state has infinite energy", 0);
    } catch (const SolverFailure&) {
        throw;
    } catch (const Error& e) {
        throw SolverFailure(where(0) + e.what(), 0);
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        SolveStats st;
        try {
            traj.states.push_back(incremental_solve(traj.states.back(), grid[i], problem, config, &st));
        } catch (const SolverFailure&) {
            throw;
        } catch (const Error& e) {
            throw SolverFailure(where(i) + e.what(), i);
        }
        if (!std::isfinite(st.objective_end)) throw SolverFailure(where(i) + "no finite-energy state found", i);
        traj.stats.push_back(st);
    }
    try {
        refresh_trajectory(traj, problem);
    } catch (const Error& e) {
        throw SolverFailure(std::string("trajectory evaluation failed: ") + e.what(), grid.size() - 1);
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Single material point

double toy_reduced_objective(double ell, double p, double p_prev) {
    return 0.5 * (1.0 - ell * ell) * p * p + std::abs(std::log(p) - std::log(p_prev));
}

std::vector<ToyStep> run_1d_toy(double lambda, const TimeGrid& grid, double p_min, double p_max, double resolution) {
    if (!std::isfinite(lambda)) throw InvalidArgument("lambda must be finite");
    if (!(p_min > 0 && p_max > p_min && std::isfinite(p_max)))
        throw InvalidArgument("p bounds must satisfy 0 < p_min < p_max");
    if (!(resolution > 0)) throw InvalidArgument("search resolution must be positive");
    if (!(p_min <= 1.0 && 1.0 <= p_max)) throw InvalidArgument("p bounds must contain p_0 = 1");

    std::vector<ToyStep> out;
    double p_prev = 1.0;
    double diss = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        const double ell = lambda * t;
        double p = p_prev;
        if (i > 0) {
            auto g = [&](double q) { return toy_reduced_objective(ell, q, p_prev); };
            // grid search, with the incumbent and both bounds as explicit candidates
            double best_p = p_prev, best = g(p_prev);
            auto offer = [&](double q) {
                const double v = g(q);
                if (v < best - 1e-14) {
                    best = v;
                    best_p = q;
                }
            };
            const auto steps = static_cast<std::size_t>(std::floor((p_max - p_min) / resolution));
            for (std::size_t k = 0; k <= steps; ++k) offer(p_min + resolution * static_cast<double>(k));
            offer(p_max);
            // golden-section refinement around the best grid point
            if (best_p != p_prev && best_p > p_min && best_p < p_max) {
                double a = std::max(p_min, best_p - resolution), b = std::min(p_max, best_p + resolution);
                const double r = 0.5 * (std::sqrt(5.0) - 1.0);
                double c = b - r * (b - a), d = a + r * (b - a);
                double gc = g(c), gd = g(d);
                while (b - a > 1e-8) {
                    if (gc < gd) {
                        b = d;
                        d = c;
                        gd = gc;
                        c = b - r * (b - a);
                        gc = g(c);
                    } else {
                        a = c;
                        c = d;
                        gc = gd;
                        d = a + r * (b - a);
                        gd = g(d);
                    }
                }
                offer(0.5 * (a + b));
            }
            p = best_p;
        }
        diss += std::abs(std::log(p) - std::log(p_prev));
        ToyStep s;
        s.t = t;
        s.ell = ell;
        s.p = p;
        s.f = ell * p * p;
        s.dissipation = diss;
        s.runaway = p <= p_min || p >= p_max;
        out.push_back(s);
        p_prev = p;
    }
    return out;
}

}  // namespace plastiq
