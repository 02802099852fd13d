#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "plastiq/geometry.hpp"
#include "plastiq/solver.hpp"
#include "plastiq/verify.hpp"

namespace plastiq {

/// Verification toggles of a scenario.
struct VerifySettings {
    bool enabled = true;
    std::size_t semistability_competitors = 200;
    std::size_t stability_competitors = 50;
    std::uint64_t seed = 7;
    double energy_ceiling = 1e6;
};

/// Output paths; empty disables the output. Relative paths resolve against
/// the output directory chosen on the command line.
struct OutputSettings {
    std::string csv;
    std::string trajectory;
    std::string summary;
};

/// A complete, validated run description (JSON, schema 1).
struct Scenario {
    std::string name;
    std::shared_ptr<const Mesh> mesh;
    EnergyOptions energy;
    DissipationModel dissipation;
    std::vector<double> load_knots;
    std::vector<Vec2> body_force;
    std::vector<Vec2> traction;
    TimeGrid grid{std::vector<double>{0.0}};
    SolverConfig solver;
    VerifySettings verify;
    OutputSettings output;

    Problem problem() const;
};

/// Parses and validates a scenario. Unknown keys, out-of-range values and
/// missing files raise InvalidScenario; malformed JSON reports line and column.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = ".");
Scenario load_scenario(const std::filesystem::path& path);

/// Relaxes y at the first knot from the reference state, then runs the
/// incremental scheme over the scenario grid. Throws SolverFailure.
Trajectory run_scenario(const Scenario& scenario);

/// Mesh JSON: nodes [[x,y]], triangles [[a,b,c]], gamma_D / gamma_N [[a,b]].
std::shared_ptr<const Mesh> load_mesh(const std::filesystem::path& path);
std::string mesh_to_json(const Mesh& mesh);

/// Polygon JSON: {"vertices": [[x,y], ...]} or a bare vertex array.
Polygon load_polygon(const std::filesystem::path& path);

/// Field JSON: {"mesh": <mesh object> | "mesh_file": path, "values": [[x,y]]}.
Field load_field(const std::filesystem::path& path);

/// CSV with header t,elastic,plastic,boundary,load,total,delta; one row per knot.
std::string trajectory_csv(const Trajectory& traj);

/// Trajectory JSON: knot times, nodal y and y_p per knot, energies,
/// increments, accumulated dissipation and the energy bound.
std::string trajectory_to_json(const Trajectory& traj);
/// Reads states and accumulated dissipation; energies and increments are
/// left for refresh_trajectory. Throws InvalidScenario on malformed input
/// and on an empty trajectory.
Trajectory trajectory_from_json(const std::string& text, std::shared_ptr<const Mesh> mesh);

std::string certificates_to_json(const std::vector<Certificate>& certs);

/// Full certificate set of a trajectory: S_discr and S_semi at every knot,
/// E_discr for every knot pair s <= t, the accumulated energy inequality and
/// the energy bound. Uses the trajectory's stored delta column as given.
std::vector<Certificate> certify_trajectory(const Trajectory& traj, const Problem& problem,
                                            const VerifySettings& settings, double det_tolerance);

/// Run summary: name, knot count, final energies, delta(T), energy bound,
/// per-knot solver statistics and, when given, the certificates.
std::string run_summary_json(const Scenario& scenario, const Trajectory& traj,
                             const std::vector<Certificate>* certs = nullptr);

/// Reads a whole file; throws InvalidScenario when it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// printf("%.17g").
std::string format_double(double v);

}  // namespace plastiq
