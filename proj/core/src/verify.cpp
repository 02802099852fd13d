#include "plastiq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "plastiq/errors.hpp"
#include "plastiq/parallel.hpp"
#include "plastiq/random.hpp"

namespace plastiq {

const char* to_string(CertificateKind kind) {
    switch (kind) {
        case CertificateKind::SDiscr: return "S_discr";
        case CertificateKind::EDiscr: return "E_discr";
        case CertificateKind::SSemi: return "S_semi";
        case CertificateKind::ELimit: return "E";
        case CertificateKind::Bound: return "bound";
    }
    return "unknown";
}

namespace {

void require_index(const Trajectory& traj, std::size_t i) {
    if (i >= traj.states.size()) throw InvalidArgument("knot index " + std::to_string(i) + " out of range");
    if (traj.energies.size() != traj.states.size() || traj.delta_accumulated.size() != traj.states.size())
        throw InvalidArgument("trajectory energies are not evaluated");
}

Field perturb_y(const Field& y, Rng& rng, double amplitude, bool single_node) {
    if (!single_node) return perturb_field(y, rng, amplitude);
    Field out = y;
    const auto k = static_cast<std::size_t>(rng.next_u64() % y.values.size());
    out.values[k] += Vec2{rng.uniform(-amplitude, amplitude), rng.uniform(-amplitude, amplitude)};
    return out;
}

struct Outcome {
    double margin = std::numeric_limits<double>::infinity();
    bool skipped = false;
};

Certificate stability(CertificateKind kind, const Trajectory& traj, std::size_t t_index, std::size_t competitors,
                      std::uint64_t seed, const Problem& problem, double det_tolerance) {
    require_index(traj, t_index);
    const State& cur = traj.states[t_index];
    const double t = traj.grid[t_index];
    const double e_cur = total_energy(problem.energy, problem.loading, t, cur).total;
    const double diam = cur.y.mesh->diameter();
    const auto& amps = competitor_amplitudes();

    Certificate c;
    c.kind = kind;
    c.knot = c.knot_end = t_index;
    c.tolerance = 1e-8 * (1.0 + std::abs(e_cur));
    c.amplitudes = amps;
    if (competitors == 0) {
        c.vacuous = true;
        c.pass = true;
        c.detail = "no competitors";
        return c;
    }
    std::vector<Outcome> out(competitors);
    const Rng root(seed, t_index);
    parallel_for(competitors, [&](std::size_t k) {
        Rng rng = root.split(k);
        const double a = amps[k % amps.size()] * diam;
        State comp{perturb_y(cur.y, rng, a, (k / amps.size()) % 2 == 1), cur.yp};
        double extra = 0.0;
        if (kind == CertificateKind::SDiscr && k % 2 == 1) {
            const Mat m = mat_exp(random_trace_free(rng, 2, a));
            Field yp = cur.yp;
            for (auto& v : yp.values) v = apply(m, v);
            yp = perturb_field(yp, rng, 0.1 * a);
            try {
                comp.yp = project_isochoric(std::move(yp), det_tolerance);
                if (!ciarlet_necas_check(comp.yp).pass) {
                    out[k].skipped = true;
                    return;
                }
                extra = global_distance(cur.yp, comp.yp, problem.dissipation);
            } catch (const ProjectionStall&) {
                out[k].skipped = true;
                return;
            } catch (const NotIsochoric&) {
                out[k].skipped = true;
                return;
            }
        }
        out[k].margin = total_energy(problem.energy, problem.loading, t, comp).total + extra - e_cur;
    });
    c.margin = std::numeric_limits<double>::infinity();
    for (const auto& o : out) {
        if (o.skipped) {
            ++c.skipped;
            continue;
        }
        ++c.competitors;
        c.margin = std::min(c.margin, o.margin);
    }
    if (c.competitors == 0) {
        c.vacuous = true;
        c.margin = 0.0;
    }
    c.pass = c.margin >= -c.tolerance;
    return c;
}

}  // namespace

Certificate check_S_discr(const Trajectory& traj, std::size_t t_index, std::size_t competitors, std::uint64_t seed,
                          const Problem& problem, double det_tolerance) {
    return stability(CertificateKind::SDiscr, traj, t_index, competitors, seed, problem, det_tolerance);
}

Certificate check_S_semi(const Trajectory& traj, std::size_t t_index, std::size_t competitors, std::uint64_t seed,
                         const Problem& problem) {
    return stability(CertificateKind::SSemi, traj, t_index, competitors, seed, problem, 0.0);
}

double work_integral(const Trajectory& traj, const Problem& problem, std::size_t s_index, std::size_t t_index) {
    const auto& lk = problem.loading.knots();
    double w = 0.0;
    for (std::size_t i = s_index + 1; i <= t_index; ++i) {
        // y is constant on [t_{i-1}, t_i); split at loading knots where l' jumps
        const double a = traj.grid[i - 1], b = traj.grid[i];
        std::vector<double> cuts{a};
        for (double k : lk)
            if (k > a && k < b) cuts.push_back(k);
        cuts.push_back(b);
        for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
            w += (cuts[j + 1] - cuts[j]) * load_rate_pairing(problem.loading, cuts[j], traj.states[i - 1].y);
    }
    return w;
}

Certificate check_E_discr(const Trajectory& traj, std::size_t s_index, std::size_t t_index, const Problem& problem) {
    require_index(traj, s_index);
    require_index(traj, t_index);
    if (s_index > t_index) throw InvalidArgument("check_E_discr needs s <= t");
    Certificate c;
    c.kind = CertificateKind::EDiscr;
    c.knot = s_index;
    c.knot_end = t_index;
    double diss = 0.0;
    for (std::size_t i = s_index + 1; i <= t_index; ++i) diss += traj.increments[i];
    const double es = traj.energies[s_index].total;
    const double lhs = traj.energies[t_index].total - es + diss;
    const double rhs = -work_integral(traj, problem, s_index, t_index);
    c.margin = rhs - lhs;
    c.tolerance = 1e-8 * (1.0 + std::abs(es));
    c.pass = c.margin >= -c.tolerance;
    return c;
}

std::vector<double> energy_inequality_margins(const Trajectory& traj, const Problem& problem) {
    require_index(traj, 0);
    std::vector<double> m(traj.states.size());
    const double e0 = traj.energies[0].total;
    double work = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i > 0) work += work_integral(traj, problem, i - 1, i);
        m[i] = (e0 - work) - (traj.energies[i].total + traj.delta_accumulated[i]);
    }
    return m;
}

Certificate check_E_limit(const Trajectory& traj, const Problem& problem) {
    const auto m = energy_inequality_margins(traj, problem);
    Certificate c;
    c.kind = CertificateKind::ELimit;
    c.tolerance = 1e-8 * (1.0 + std::abs(traj.energies[0].total));
    c.margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] < c.margin) {
            c.margin = m[i];
            c.knot = c.knot_end = i;
        }
    c.pass = c.margin >= -c.tolerance;
    return c;
}

Certificate check_energy_bound(const Trajectory& traj, double ceiling) {
    require_index(traj, 0);
    Certificate c;
    c.kind = CertificateKind::Bound;
    c.knot = 0;
    c.knot_end = traj.states.size() - 1;
    double sup = -std::numeric_limits<double>::infinity();
    for (const auto& e : traj.energies) sup = std::max(sup, e.total);
    const double value = sup + traj.delta_accumulated.back();
    c.margin = ceiling - value;
    c.tolerance = 0.0;
    c.pass = std::isfinite(value) && c.margin >= 0.0;
    c.detail = "sup E + Diss(0,T) = " + std::to_string(value);
    return c;
}

}  // namespace plastiq
