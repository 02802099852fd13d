#include "plastiq/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "plastiq/errors.hpp"

namespace plastiq {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw InvalidScenario(where.empty() ? what : where + ": " + what);
}

json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        fail(origin, "malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col));
    }
}

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) fail(where, "expected an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items())
        if (!ok.count(k)) fail(where, "unknown key '" + k + "'");
}

double get_number(const json& obj, const char* key, const std::string& where, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(where + "." + key, "expected a finite number");
    return d;
}

std::size_t get_count(const json& obj, const char* key, const std::string& where, std::size_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(where + "." + key, "expected a non-negative integer");
    return v.get<std::size_t>();
}

std::string get_string(const json& obj, const char* key, const std::string& where, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_string()) fail(where + "." + key, "expected a string");
    return obj.at(key).get<std::string>();
}

bool get_bool(const json& obj, const char* key, const std::string& where, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean()) fail(where + "." + key, "expected true or false");
    return obj.at(key).get<bool>();
}

Vec2 to_vec2(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) fail(where, "expected [x, y]");
    const Vec2 p{v[0].get<double>(), v[1].get<double>()};
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) fail(where, "coordinates must be finite");
    return p;
}

std::vector<Vec2> to_points(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected an array of [x, y]");
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(to_vec2(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

template <std::size_t N>
std::vector<std::array<std::size_t, N>> to_index_tuples(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected an array of index tuples");
    std::vector<std::array<std::size_t, N>> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const json& t = v[i];
        if (!t.is_array() || t.size() != N) fail(where + "[" + std::to_string(i) + "]", "wrong tuple size");
        std::array<std::size_t, N> a{};
        for (std::size_t k = 0; k < N; ++k) {
            if (!t[k].is_number_integer() || t[k].get<long long>() < 0)
                fail(where + "[" + std::to_string(i) + "]", "indices must be non-negative integers");
            a[k] = t[k].get<std::size_t>();
        }
        out.push_back(a);
    }
    return out;
}

std::shared_ptr<const Mesh> mesh_from_json(const json& j, const std::string& where) {
    allow_keys(j, where, {"nodes", "triangles", "gamma_D", "gamma_N"});
    for (const char* k : {"nodes", "triangles", "gamma_D"})
        if (!j.contains(k)) fail(where, std::string("missing '") + k + "'");
    try {
        return std::make_shared<const Mesh>(to_points(j.at("nodes"), where + ".nodes"),
                                            to_index_tuples<3>(j.at("triangles"), where + ".triangles"),
                                            to_index_tuples<2>(j.at("gamma_D"), where + ".gamma_D"),
                                            j.contains("gamma_N") ? to_index_tuples<2>(j.at("gamma_N"), where + ".gamma_N")
                                                                  : std::vector<Edge>{});
    } catch (const InvalidMesh& e) {
        fail(where, e.what());
    }
}

json points_json(const std::vector<Vec2>& pts) {
    json a = json::array();
    for (const auto& p : pts) a.push_back({p.x, p.y});
    return a;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidScenario("cannot open '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidScenario("cannot write '" + path.string() + "'");
    out << text;
}

// ---------------------------------------------------------------------------
// Scenario

Problem Scenario::problem() const {
    Loading loading(mesh);
    if (!load_knots.empty()) {
        std::vector<Vec2> traction_values = traction;
        if (traction_values.empty()) traction_values.assign(load_knots.size(), Vec2{});
        loading = Loading::uniform(mesh, load_knots, body_force, traction_values);
    }
    return Problem{EnergyModel(energy), dissipation, std::move(loading)};
}

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
    const json j = parse_json(text, "scenario");
    allow_keys(j, "scenario",
               {"schema", "name", "mesh", "energy", "dissipation", "loading", "time", "solver", "verify", "output"});
    if (!j.contains("schema") || !j.at("schema").is_number_integer() || j.at("schema").get<int>() != 1)
        fail("scenario.schema", "must be 1");
    Scenario s;
    s.name = get_string(j, "name", "scenario", "scenario");

    // mesh
    if (!j.contains("mesh")) fail("scenario", "missing 'mesh'");
    const json& m = j.at("mesh");
    allow_keys(m, "mesh", {"unit_square", "dirichlet", "file"});
    if (m.contains("file") == m.contains("unit_square")) fail("mesh", "give exactly one of 'file' and 'unit_square'");
    if (m.contains("file")) {
        if (m.contains("dirichlet")) fail("mesh.dirichlet", "only valid with unit_square");
        s.mesh = load_mesh(base_dir / get_string(m, "file", "mesh", ""));
    } else {
        const std::size_t n = get_count(m, "unit_square", "mesh", 0);
        if (n < 1 || n > 256) fail("mesh.unit_square", "must be in [1, 256]");
        SquareSides sides{false, false, false, false};
        const json dir = m.contains("dirichlet") ? m.at("dirichlet") : json::array({"left"});
        if (!dir.is_array() || dir.empty()) fail("mesh.dirichlet", "expected a non-empty array of sides");
        for (const auto& side : dir) {
            const std::string v = side.is_string() ? side.get<std::string>() : "";
            if (v == "left") sides.left = true;
            else if (v == "right") sides.right = true;
            else if (v == "bottom") sides.bottom = true;
            else if (v == "top") sides.top = true;
            else fail("mesh.dirichlet", "sides are left, right, bottom, top");
        }
        s.mesh = std::make_shared<const Mesh>(Mesh::unit_square(static_cast<int>(n), sides));
    }

    // energy
    if (j.contains("energy")) {
        const json& e = j.at("energy");
        allow_keys(e, "energy",
                   {"elastic", "plastic", "q_e", "q_p", "growth_constant", "dirichlet_weight", "det_tolerance",
                    "lipschitz_cap"});
        s.energy.elastic_density = get_string(e, "elastic", "energy", s.energy.elastic_density);
        s.energy.plastic_density = get_string(e, "plastic", "energy", s.energy.plastic_density);
        s.energy.q_e = get_number(e, "q_e", "energy", s.energy.q_e);
        s.energy.q_p = get_number(e, "q_p", "energy", s.energy.q_p);
        s.energy.growth_constant = get_number(e, "growth_constant", "energy", s.energy.growth_constant);
        s.energy.dirichlet_weight = get_number(e, "dirichlet_weight", "energy", s.energy.dirichlet_weight);
        s.energy.det_tolerance = get_number(e, "det_tolerance", "energy", s.energy.det_tolerance);
        if (e.contains("lipschitz_cap")) s.energy.lipschitz_cap = get_number(e, "lipschitz_cap", "energy", 0.0);
    }
    try {
        EnergyModel check(s.energy);
    } catch (const InvalidArgument& err) {
        fail("energy", err.what());
    }

    // dissipation
    s.dissipation.det_tolerance = 1e-5;
    if (j.contains("dissipation")) {
        const json& d = j.at("dissipation");
        allow_keys(d, "dissipation", {"yield_scale", "density", "det_tolerance"});
        s.dissipation.yield_scale = get_number(d, "yield_scale", "dissipation", 1.0);
        if (get_string(d, "density", "dissipation", "log_singular_values") != "log_singular_values")
            fail("dissipation.density", "only 'log_singular_values' is available from scenario files");
        s.dissipation.det_tolerance = get_number(d, "det_tolerance", "dissipation", s.dissipation.det_tolerance);
    }
    if (!(s.dissipation.yield_scale > 0)) fail("dissipation.yield_scale", "must be positive");
    if (!(s.dissipation.det_tolerance > 0)) fail("dissipation.det_tolerance", "must be positive");

    // loading
    if (j.contains("loading")) {
        const json& l = j.at("loading");
        allow_keys(l, "loading", {"knots", "body_force", "traction"});
        if (!l.contains("knots") || !l.at("knots").is_array()) fail("loading.knots", "expected an array");
        for (const auto& k : l.at("knots")) {
            if (!k.is_number()) fail("loading.knots", "expected numbers");
            s.load_knots.push_back(k.get<double>());
        }
        if (l.contains("body_force")) s.body_force = to_points(l.at("body_force"), "loading.body_force");
        else s.body_force.assign(s.load_knots.size(), Vec2{});
        if (l.contains("traction")) s.traction = to_points(l.at("traction"), "loading.traction");
        else s.traction.assign(s.load_knots.size(), Vec2{});
        if (s.body_force.size() != s.load_knots.size() || s.traction.size() != s.load_knots.size())
            fail("loading", "body_force and traction need one entry per knot");
        try {
            Loading::uniform(s.mesh, s.load_knots, s.body_force, s.traction);
        } catch (const InvalidArgument& err) {
            fail("loading", err.what());
        }
    }

    // time grid
    if (!j.contains("time")) fail("scenario", "missing 'time'");
    const json& t = j.at("time");
    allow_keys(t, "time", {"T", "intervals", "t0", "knots"});
    try {
        if (t.contains("knots")) {
            if (t.contains("T") || t.contains("intervals")) fail("time", "give either 'knots' or 'T' and 'intervals'");
            std::vector<double> k;
            if (!t.at("knots").is_array()) fail("time.knots", "expected an array");
            for (const auto& v : t.at("knots")) {
                if (!v.is_number()) fail("time.knots", "expected numbers");
                k.push_back(v.get<double>());
            }
            s.grid = TimeGrid(std::move(k));
        } else {
            const double T = get_number(t, "T", "time", 1.0);
            const std::size_t n = get_count(t, "intervals", "time", 0);
            if (n < 1 || n > 100000) fail("time.intervals", "must be in [1, 100000]");
            s.grid = TimeGrid::uniform(T, n, get_number(t, "t0", "time", 0.0));
        }
    } catch (const InvalidArgument& err) {
        fail("time", err.what());
    }

    // solver
    if (j.contains("solver")) {
        const json& c = j.at("solver");
        allow_keys(c, "solver",
                   {"max_outer_iterations", "alternation_rounds", "step_init", "step_floor", "det_tolerance",
                    "perturbation_count", "seed", "plastic_updates"});
        auto& cfg = s.solver;
        cfg.max_outer_iterations = get_count(c, "max_outer_iterations", "solver", cfg.max_outer_iterations);
        cfg.alternation_rounds = get_count(c, "alternation_rounds", "solver", cfg.alternation_rounds);
        cfg.step_init = get_number(c, "step_init", "solver", cfg.step_init);
        cfg.step_floor = get_number(c, "step_floor", "solver", cfg.step_floor);
        cfg.det_tolerance = get_number(c, "det_tolerance", "solver", cfg.det_tolerance);
        cfg.perturbation_count = get_count(c, "perturbation_count", "solver", cfg.perturbation_count);
        cfg.seed = get_count(c, "seed", "solver", cfg.seed);
        cfg.plastic_updates = get_bool(c, "plastic_updates", "solver", cfg.plastic_updates);
    }
    {
        const auto& cfg = s.solver;
        if (cfg.max_outer_iterations < 1 || cfg.alternation_rounds < 1 || cfg.perturbation_count < 1)
            fail("solver", "iteration counts must be positive");
        if (!(cfg.step_init > 0 && cfg.step_floor > 0 && cfg.step_floor < cfg.step_init))
            fail("solver", "need 0 < step_floor < step_init");
        if (!(cfg.det_tolerance > 0 && cfg.det_tolerance <= s.energy.det_tolerance))
            fail("solver.det_tolerance", "must be positive and not above energy.det_tolerance");
    }

    if (j.contains("verify")) {
        const json& v = j.at("verify");
        allow_keys(v, "verify",
                   {"enabled", "semistability_competitors", "stability_competitors", "seed", "energy_ceiling"});
        s.verify.enabled = get_bool(v, "enabled", "verify", s.verify.enabled);
        s.verify.semistability_competitors =
            get_count(v, "semistability_competitors", "verify", s.verify.semistability_competitors);
        s.verify.stability_competitors = get_count(v, "stability_competitors", "verify", s.verify.stability_competitors);
        s.verify.seed = get_count(v, "seed", "verify", s.verify.seed);
        s.verify.energy_ceiling = get_number(v, "energy_ceiling", "verify", s.verify.energy_ceiling);
        if (!(s.verify.energy_ceiling > 0)) fail("verify.energy_ceiling", "must be positive");
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        allow_keys(o, "output", {"csv", "trajectory", "summary"});
        s.output.csv = get_string(o, "csv", "output", "");
        s.output.trajectory = get_string(o, "trajectory", "output", "");
        s.output.summary = get_string(o, "summary", "output", "");
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return parse_scenario(text, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
    } catch (const InvalidScenario& e) {
        throw InvalidScenario(path.string() + ": " + e.what());
    }
}

Trajectory run_scenario(const Scenario& scenario) {
    const Problem problem = scenario.problem();
    State initial;
    try {
        initial = relax_elastic(reference_state(scenario.mesh), scenario.grid[0], problem, scenario.solver);
    } catch (const Error& e) {
        throw SolverFailure(std::string("knot 0: ") + e.what(), 0);
    }
    return run_quasistatic(initial, scenario.grid, problem, scenario.solver);
}

// ---------------------------------------------------------------------------
// Geometry inputs

std::shared_ptr<const Mesh> load_mesh(const std::filesystem::path& path) {
    return mesh_from_json(parse_json(read_text_file(path), path.string()), path.string());
}

std::string mesh_to_json(const Mesh& mesh) {
    json j;
    j["nodes"] = points_json(mesh.nodes());
    j["triangles"] = mesh.triangles();
    j["gamma_D"] = mesh.gamma_d();
    j["gamma_N"] = mesh.gamma_n();
    return j.dump(2) + "\n";
}

Polygon load_polygon(const std::filesystem::path& path) {
    const json j = parse_json(read_text_file(path), path.string());
    const json* verts = &j;
    if (j.is_object()) {
        allow_keys(j, path.string(), {"vertices"});
        if (!j.contains("vertices")) fail(path.string(), "missing 'vertices'");
        verts = &j.at("vertices");
    }
    return Polygon(to_points(*verts, path.string() + ".vertices"));
}

Field load_field(const std::filesystem::path& path) {
    const json j = parse_json(read_text_file(path), path.string());
    allow_keys(j, path.string(), {"mesh", "mesh_file", "values"});
    std::shared_ptr<const Mesh> mesh;
    if (j.contains("mesh") == j.contains("mesh_file")) fail(path.string(), "give exactly one of 'mesh' and 'mesh_file'");
    if (j.contains("mesh")) mesh = mesh_from_json(j.at("mesh"), path.string() + ".mesh");
    else mesh = load_mesh(path.parent_path() / get_string(j, "mesh_file", path.string(), ""));
    if (!j.contains("values")) fail(path.string(), "missing 'values'");
    Field f{mesh, to_points(j.at("values"), path.string() + ".values")};
    if (f.values.size() != mesh->node_count()) fail(path.string(), "one value per mesh node is required");
    return f;
}

// ---------------------------------------------------------------------------
// Trajectories

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,elastic,plastic,boundary,load,total,delta\n";
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const auto& e = traj.energies[i];
        for (double v : {traj.grid[i], e.elastic, e.plastic, e.boundary, e.load, e.total})
            out += format_double(v) + ",";
        out += format_double(traj.delta_accumulated[i]) + "\n";
    }
    return out;
}

std::string trajectory_to_json(const Trajectory& traj) {
    json j;
    j["schema"] = 1;
    j["times"] = traj.grid.knots();
    json y = json::array(), yp = json::array(), en = json::array();
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        y.push_back(points_json(traj.states[i].y.values));
        yp.push_back(points_json(traj.states[i].yp.values));
        const auto& e = traj.energies[i];
        en.push_back({{"elastic", e.elastic},
                      {"plastic", e.plastic},
                      {"boundary", e.boundary},
                      {"load", e.load},
                      {"total", e.total}});
    }
    j["y"] = y;
    j["yp"] = yp;
    j["energies"] = en;
    j["increments"] = traj.increments;
    j["delta"] = traj.delta_accumulated;
    j["energy_bound"] = traj.energy_bound;
    return j.dump() + "\n";
}

Trajectory trajectory_from_json(const std::string& text, std::shared_ptr<const Mesh> mesh) {
    const json j = parse_json(text, "trajectory");
    allow_keys(j, "trajectory", {"schema", "times", "y", "yp", "energies", "increments", "delta", "energy_bound"});
    for (const char* k : {"times", "y", "yp", "delta"})
        if (!j.contains(k) || !j.at(k).is_array()) fail("trajectory", std::string("missing array '") + k + "'");
    const std::size_t n = j.at("times").size();
    if (n == 0) fail("trajectory", "empty trajectory");
    if (j.at("y").size() != n || j.at("yp").size() != n || j.at("delta").size() != n)
        fail("trajectory", "times, y, yp and delta must have equal length");
    Trajectory traj;
    std::vector<double> times;
    for (const auto& t : j.at("times")) {
        if (!t.is_number()) fail("trajectory.times", "expected numbers");
        times.push_back(t.get<double>());
    }
    try {
        traj.grid = TimeGrid(times);
    } catch (const InvalidArgument& e) {
        fail("trajectory.times", e.what());
    }
    for (std::size_t i = 0; i < n; ++i) {
        State s{Field{mesh, to_points(j.at("y")[i], "trajectory.y")},
                Field{mesh, to_points(j.at("yp")[i], "trajectory.yp")}};
        if (s.y.values.size() != mesh->node_count() || s.yp.values.size() != mesh->node_count())
            fail("trajectory", "state " + std::to_string(i) + " does not match the scenario mesh");
        traj.states.push_back(std::move(s));
        if (!j.at("delta")[i].is_number()) fail("trajectory.delta", "expected numbers");
        traj.delta_accumulated.push_back(j.at("delta")[i].get<double>());
    }
    return traj;
}

std::string certificates_to_json(const std::vector<Certificate>& certs) {
    json a = json::array();
    for (const auto& c : certs) {
        json o{{"kind", to_string(c.kind)},
               {"knot", c.knot},
               {"knot_end", c.knot_end},
               {"margin", c.margin},
               {"tolerance", c.tolerance},
               {"pass", c.pass}};
        if (c.kind == CertificateKind::SDiscr || c.kind == CertificateKind::SSemi) {
            o["competitors"] = c.competitors;
            o["skipped"] = c.skipped;
            o["amplitudes"] = c.amplitudes;
            o["vacuous"] = c.vacuous;
        }
        if (!c.detail.empty()) o["detail"] = c.detail;
        a.push_back(o);
    }
    return a.dump(2) + "\n";
}

std::vector<Certificate> certify_trajectory(const Trajectory& traj, const Problem& problem,
                                            const VerifySettings& settings, double det_tolerance) {
    std::vector<Certificate> certs;
    const std::size_t n = traj.states.size();
    for (std::size_t i = 0; i < n; ++i)
        certs.push_back(check_S_discr(traj, i, settings.stability_competitors, settings.seed, problem, det_tolerance));
    for (std::size_t i = 0; i < n; ++i)
        certs.push_back(check_S_semi(traj, i, settings.semistability_competitors, settings.seed + 1, problem));
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = s; t < n; ++t) certs.push_back(check_E_discr(traj, s, t, problem));
    certs.push_back(check_E_limit(traj, problem));
    certs.push_back(check_energy_bound(traj, settings.energy_ceiling));
    return certs;
}

std::string run_summary_json(const Scenario& scenario, const Trajectory& traj, const std::vector<Certificate>* certs) {
    json j;
    j["name"] = scenario.name;
    j["knots"] = traj.states.size();
    const auto& e = traj.energies.back();
    j["final"] = {{"t", traj.grid[traj.grid.size() - 1]},
                  {"elastic", e.elastic},
                  {"plastic", e.plastic},
                  {"boundary", e.boundary},
                  {"load", e.load},
                  {"total", e.total},
                  {"delta", traj.delta_accumulated.back()}};
    j["energy_bound"] = traj.energy_bound;
    json stats = json::array();
    for (const auto& s : traj.stats)
        stats.push_back({{"objective_start", s.objective_start},
                         {"objective_end", s.objective_end},
                         {"rounds", s.rounds},
                         {"elastic_moves", s.elastic_moves},
                         {"plastic_moves", s.plastic_moves},
                         {"projection_stalls", s.projection_stalls},
                         {"kept_previous", s.kept_previous}});
    j["solver"] = stats;
    if (certs) {
        std::size_t failed = 0;
        for (const auto& c : *certs) failed += c.pass ? 0 : 1;
        j["certificates"] = {{"count", certs->size()}, {"failed", failed},
                             {"items", json::parse(certificates_to_json(*certs))}};
    }
    return j.dump(2) + "\n";
}

}  // namespace plastiq
