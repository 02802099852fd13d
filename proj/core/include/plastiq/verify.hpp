#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "plastiq/solver.hpp"

namespace plastiq {

enum class CertificateKind { SDiscr, EDiscr, SSemi, ELimit, Bound };

const char* to_string(CertificateKind kind);

/// Outcome of one check. pass <=> margin >= -tolerance.
struct Certificate {
    CertificateKind kind = CertificateKind::SDiscr;
    /// Knot index, or (s, t) for pairwise checks.
    std::size_t knot = 0;
    std::size_t knot_end = 0;
    double margin = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    /// Competitors evaluated (stability kinds); skipped ones were not admissible.
    std::size_t competitors = 0;
    std::size_t skipped = 0;
    std::vector<double> amplitudes;
    bool vacuous = false;
    std::string detail;
};

/// Amplitudes of stability competitors, as multiples of the domain diameter.
inline const std::vector<double>& competitor_amplitudes() {
    static const std::vector<double> a{1e-3, 1e-2, 1e-1};
    return a;
}

/// Random admissible competitors (y and y_p perturbed, y_p projected) at knot
/// t_index; margin = min [E(t, competitor) + D(current, competitor) - E(t, current)].
/// Passes when margin >= -1e-8 (1 + |E|).
Certificate check_S_discr(const Trajectory& traj, std::size_t t_index, std::size_t competitors, std::uint64_t seed,
                          const Problem& problem, double det_tolerance = 1e-6);

/// Discrete energy inequality between knots s <= t:
/// margin = -int_s^t <l', y> - [E(t) - E(s) + Diss(s, t)], tolerance 1e-8 (1 + |E(s)|).
Certificate check_E_discr(const Trajectory& traj, std::size_t s_index, std::size_t t_index, const Problem& problem);

/// Competitors perturb y only; y_p(t) is frozen.
Certificate check_S_semi(const Trajectory& traj, std::size_t t_index, std::size_t competitors, std::uint64_t seed,
                         const Problem& problem);

/// E(t) + delta(t) <= E(0) - int_0^t <l', y> at every knot. The margin is
/// the worst over knots, with tolerance 1e-8 (1 + |E(0)|).
Certificate check_E_limit(const Trajectory& traj, const Problem& problem);
/// Per-knot margins of the inequality above.
std::vector<double> energy_inequality_margins(const Trajectory& traj, const Problem& problem);

/// sup_t E + Diss(0, T) below `ceiling`.
Certificate check_energy_bound(const Trajectory& traj, double ceiling = 1e6);

/// int_{t_s}^{t_t} <l'(r), y(r)> dr for the piecewise-constant trajectory.
double work_integral(const Trajectory& traj, const Problem& problem, std::size_t s_index, std::size_t t_index);

}  // namespace plastiq
