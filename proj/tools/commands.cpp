#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "plastiq/errors.hpp"
#include "plastiq/geometry.hpp"
#include "plastiq/parallel.hpp"
#include "plastiq/scenario.hpp"

namespace plastiq::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json pairs_json(const std::vector<PointPair>& pairs, std::size_t limit) {
    json a = json::array();
    for (std::size_t i = 0; i < pairs.size() && i < limit; ++i)
        a.push_back({{"x", {pairs[i].x.x, pairs[i].x.y}}, {"y", {pairs[i].y.x, pairs[i].y.y}}});
    return a;
}

void list_failures(const std::vector<Certificate>& certs, std::ostream& err) {
    for (const auto& c : certs) {
        if (c.pass) continue;
        err << "FAILED " << to_string(c.kind) << " knot " << c.knot;
        if (c.knot_end != c.knot) err << ".." << c.knot_end;
        err << " margin " << format_double(c.margin) << " tolerance " << format_double(c.tolerance) << "\n";
    }
}

bool all_pass(const std::vector<Certificate>& certs) {
    for (const auto& c : certs)
        if (!c.pass) return false;
    return true;
}

// ---------------------------------------------------------------------------

struct Run1dArgs {
    double lambda = std::numeric_limits<double>::quiet_NaN();
    double t_end = 1.0;
    std::size_t knots = 0;
    double p_max = 20.0;
    double p_min = 0.05;
    double resolution = 1e-4;
    std::string out;
};

int cmd_run1d(const Run1dArgs& a, std::ostream& out, std::ostream& err) {
    if (!std::isfinite(a.lambda) || !(a.t_end > 0) || !std::isfinite(a.t_end) || a.knots < 1 || !(a.p_max > 1.0) ||
        !(a.p_min > 0 && a.p_min < 1.0) || !(a.resolution > 0)) {
        err << "run1d: need finite --lambda, --T > 0, --knots >= 1, --p-min in (0, 1) and --p-max > 1\n";
        return kUsage;
    }
    const auto steps = run_1d_toy(a.lambda, TimeGrid::uniform(a.t_end, a.knots), a.p_min, a.p_max, a.resolution);
    std::string csv = "t,ell,f,p,dissipation,runaway_flag\n";
    for (const auto& s : steps) {
        csv += format_double(s.t) + "," + format_double(s.ell) + "," + format_double(s.f) + "," + format_double(s.p) +
               "," + format_double(s.dissipation) + "," + (s.runaway ? "1" : "0") + "\n";
    }
    if (a.out.empty()) out << csv;
    else write_text_file(a.out, csv);
    return kOk;
}

// ---------------------------------------------------------------------------

struct RunResult {
    int code = kOk;
    std::string message;
};

RunResult run_one(const fs::path& scenario_path, const fs::path& out_dir, bool verify_override_off) {
    Scenario sc;
    try {
        sc = load_scenario(scenario_path);
    } catch (const Error& e) {
        return {kUsage, e.what()};
    }
    Trajectory traj;
    try {
        traj = run_scenario(sc);
    } catch (const SolverFailure& e) {
        return {kSolverFailure, "solver failure at knot " + std::to_string(e.knot()) + ": " + e.what()};
    }
    const Problem problem = sc.problem();
    std::vector<Certificate> certs;
    const bool verify = sc.verify.enabled && !verify_override_off;
    if (verify) certs = certify_trajectory(traj, problem, sc.verify, sc.solver.det_tolerance);

    if (!sc.output.csv.empty()) write_text_file(out_dir / sc.output.csv, trajectory_csv(traj));
    if (!sc.output.trajectory.empty()) write_text_file(out_dir / sc.output.trajectory, trajectory_to_json(traj));
    if (!sc.output.summary.empty())
        write_text_file(out_dir / sc.output.summary, run_summary_json(sc, traj, verify ? &certs : nullptr));

    std::ostringstream msg;
    msg << sc.name << ": " << traj.states.size() << " knots, E(T) = " << format_double(traj.energies.back().total)
        << ", delta(T) = " << format_double(traj.delta_accumulated.back());
    if (verify && !all_pass(certs)) {
        std::ostringstream failures;
        list_failures(certs, failures);
        return {kCertificateFailure, msg.str() + "\n" + failures.str()};
    }
    return {kOk, msg.str()};
}

int cmd_run2d(const std::string& scenario, const std::string& out_dir, bool no_verify, std::ostream& out,
              std::ostream& err) {
    const RunResult r = run_one(scenario, out_dir, no_verify);
    (r.code == kOk ? out : err) << r.message << "\n";
    return r.code;
}

int cmd_sweep(const std::vector<std::string>& scenarios, const std::string& out_dir, bool no_verify, std::ostream& out,
              std::ostream& err) {
    std::vector<RunResult> results(scenarios.size());
    parallel_for(scenarios.size(), [&](std::size_t i) {
        const fs::path p(scenarios[i]);
        results[i] = run_one(p, fs::path(out_dir) / p.stem(), no_verify);
    });
    int code = kOk;
    for (std::size_t i = 0; i < results.size(); ++i) {
        (results[i].code == kOk ? out : err) << scenarios[i] << ": " << results[i].message << "\n";
        code = std::max(code, results[i].code);
    }
    return code;
}

// ---------------------------------------------------------------------------

int cmd_verify(const std::string& traj_path, const std::string& scenario_path, const std::string& out_path,
               std::ostream& out, std::ostream& err) {
    std::vector<Certificate> certs;
    try {
        const Scenario sc = load_scenario(scenario_path);
        const Problem problem = sc.problem();
        Trajectory traj = trajectory_from_json(read_text_file(traj_path), sc.mesh);
        if (traj.grid.knots() != sc.grid.knots()) throw InvalidScenario("trajectory times differ from the scenario grid");
        // energies and increments come from the states; the delta column is checked as stored
        const std::vector<double> stored_delta = traj.delta_accumulated;
        refresh_trajectory(traj, problem);
        traj.delta_accumulated = stored_delta;
        double sup = -std::numeric_limits<double>::infinity();
        for (const auto& e : traj.energies) sup = std::max(sup, e.total);
        traj.energy_bound = sup + stored_delta.back();
        certs = certify_trajectory(traj, problem, sc.verify, sc.solver.det_tolerance);
    } catch (const Error& e) {
        err << "verify: " << e.what() << "\n";
        return kUsage;
    }
    const std::string text = certificates_to_json(certs);
    if (out_path.empty()) out << text;
    else write_text_file(out_path, text);
    if (!all_pass(certs)) {
        list_failures(certs, err);
        return kCertificateFailure;
    }
    return kOk;
}

// ---------------------------------------------------------------------------

int cmd_hausdorff(const std::string& a_path, const std::string& b_path, double h, std::ostream& out) {
    const Polygon a = load_polygon(a_path);
    const Polygon b = load_polygon(b_path);
    if (!(h > 0)) h = std::min(a.diameter(), b.diameter()) / 100.0;
    const auto sa = sample_polygon(a, h);
    const auto sb = sample_polygon(b, h);
    const double ab = directed_hausdorff(sa, sb);
    const double ba = directed_hausdorff(sb, sa);
    json j{{"hausdorff", std::max(ab, ba)}, {"a_to_b", ab}, {"b_to_a", ba}, {"spacing", h}, {"slack", 2.0 * h},
           {"samples_a", sa.size()}, {"samples_b", sb.size()}};
    out << j.dump(2) << "\n";
    return kOk;
}

int cmd_jones(const std::string& poly_path, double eps, double delta, std::size_t pairs, std::uint64_t seed,
              std::ostream& out) {
    const Polygon poly = load_polygon(poly_path);
    const JonesReport r = jones_verify(poly, eps, delta, pairs, seed);
    json j{{"epsilon", r.epsilon},
           {"delta", r.delta},
           {"pairs_checked", r.pairs_checked},
           {"cond1_failure_count", r.cond1_failures.size()},
           {"cond1_failures", pairs_json(r.cond1_failures, 20)},
           {"cond2_inconclusive_count", r.cond2_inconclusive.size()},
           {"cond2_inconclusive", pairs_json(r.cond2_inconclusive, 20)},
           {"epsilon_max_estimate", number_or_null(r.epsilon_max_estimate)}};
    out << j.dump(2) << "\n";
    return kOk;
}

int cmd_cn(const std::string& field_path, std::ostream& out) {
    const Field f = load_field(field_path);
    const CiarletNecasReport r = ciarlet_necas_check(f);
    json j{{"pass", r.pass},
           {"margin", r.margin},
           {"reference_area", r.reference_area},
           {"det_integral", r.det_integral},
           {"image_area", r.image_area},
           {"area_tolerance", r.area_tolerance}};
    out << j.dump(2) << "\n";
    return kOk;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-strain plasticity with compatible plastic strains: solver and verifiers"};
    app.require_subcommand(1);

    Run1dArgs r1;
    auto* run1d = app.add_subcommand("run1d", "Single material point under linear loading; CSV output");
    run1d->add_option("--lambda", r1.lambda, "Loading rate, l(t) = lambda t")->required();
    run1d->add_option("--T", r1.t_end, "Final time")->required();
    run1d->add_option("--knots", r1.knots, "Number of time intervals")->required();
    run1d->add_option("--p-max", r1.p_max, "Upper bound of the plastic search interval")->capture_default_str();
    run1d->add_option("--p-min", r1.p_min, "Lower bound of the plastic search interval")->capture_default_str();
    run1d->add_option("--resolution", r1.resolution, "Grid-search spacing")->capture_default_str();
    run1d->add_option("--out", r1.out, "CSV path (default: standard output)");

    std::string scenario, out_dir = ".";
    bool no_verify = false;
    auto* run2d = app.add_subcommand("run2d", "Run a scenario; writes CSV, trajectory and summary");
    run2d->add_option("scenario", scenario, "Scenario JSON")->required();
    run2d->add_option("--out-dir", out_dir, "Directory for outputs")->capture_default_str();
    run2d->add_flag("--no-verify", no_verify, "Skip certificates even when the scenario enables them");

    std::vector<std::string> sweep_scenarios;
    auto* sweep = app.add_subcommand("sweep", "Run independent scenarios on worker threads");
    sweep->add_option("scenarios", sweep_scenarios, "Scenario JSON files")->required();
    sweep->add_option("--out-dir", out_dir, "Root directory; each scenario writes to <out-dir>/<stem>")
        ->capture_default_str();
    sweep->add_flag("--no-verify", no_verify, "Skip certificates");

    std::string traj_path, cert_out;
    auto* verify = app.add_subcommand("verify", "Certify a trajectory against its scenario");
    verify->add_option("trajectory", traj_path, "Trajectory JSON written by run2d")->required();
    verify->add_option("scenario", scenario, "Scenario JSON")->required();
    verify->add_option("--out", cert_out, "Certificate JSON path (default: standard output)");

    auto* geom = app.add_subcommand("geom", "Geometric verifiers");
    geom->require_subcommand(1);
    std::string a_path, b_path, poly_path, field_path;
    double h = 0.0, eps = 0.0, delta = 0.0;
    std::size_t pairs = 2000;
    std::uint64_t seed = 1;
    auto* haus = geom->add_subcommand("hausdorff", "Hausdorff distance of two polygonal regions");
    haus->add_option("--a", a_path, "Polygon JSON")->required();
    haus->add_option("--b", b_path, "Polygon JSON")->required();
    haus->add_option("--spacing", h, "Sampling spacing (default: smaller diameter / 100)");
    auto* jones = geom->add_subcommand("jones", "Sampled (epsilon, delta)-domain conditions");
    jones->add_option("--poly", poly_path, "Polygon JSON")->required();
    jones->add_option("--eps", eps, "epsilon in (0, 1]")->required();
    jones->add_option("--delta", delta, "delta > 0")->required();
    jones->add_option("--pairs", pairs, "Sampled point pairs")->capture_default_str();
    jones->add_option("--seed", seed, "Sampling seed")->capture_default_str();
    auto* cn = geom->add_subcommand("cn", "Ciarlet-Necas test of a plastic deformation field");
    cn->add_option("--field", field_path, "Field JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << e.what() << "\n";
        auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return kUsage;
    }

    try {
        if (*run1d) return cmd_run1d(r1, out, err);
        if (*run2d) return cmd_run2d(scenario, out_dir, no_verify, out, err);
        if (*sweep) return cmd_sweep(sweep_scenarios, out_dir, no_verify, out, err);
        if (*verify) return cmd_verify(traj_path, scenario, cert_out, out, err);
        if (*haus) return cmd_hausdorff(a_path, b_path, h, out);
        if (*jones) return cmd_jones(poly_path, eps, delta, pairs, seed, out);
        if (*cn) return cmd_cn(field_path, out);
    } catch (const InvalidGeometry& e) {
        err << "invalid geometry: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidScenario& e) {
        err << e.what() << "\n";
        return kUsage;
    } catch (const InvalidArgument& e) {
        err << e.what() << "\n";
        return kUsage;
    } catch (const InvalidMesh& e) {
        err << "invalid mesh: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}

}  // namespace plastiq::cli
