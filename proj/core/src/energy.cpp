#include "plastiq/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plastiq/errors.hpp"
#include "plastiq/random.hpp"

namespace plastiq {

namespace {

enum Kind { kPolyconvexQuartic = 1, kQuartic = 2, kQuadratic = 3 };

double sq(double x) { return x * x; }

double frob2(const Mat& m) { return inner(m, m); }

}  // namespace

EnergyModel::EnergyModel(EnergyOptions options) : opt_(std::move(options)) {
    const double d = opt_.dim;
    if (opt_.dim < 1 || opt_.dim > 3) throw InvalidArgument("dimension must be 1, 2 or 3");
    if (!(opt_.q_e > d)) throw InvalidArgument("q_e must exceed the dimension");
    if (!(opt_.q_p > d * (d - 1))) throw InvalidArgument("q_p must exceed d(d-1)");
    if (!(opt_.growth_constant > 0)) throw InvalidArgument("growth constant must be positive");
    if (!(opt_.dirichlet_weight >= 0) || !std::isfinite(opt_.dirichlet_weight))
        throw InvalidArgument("dirichlet_weight must be finite and non-negative");
    if (!(opt_.det_tolerance > 0)) throw InvalidArgument("det_tolerance must be positive");
    if (!(opt_.lipschitz_cap > 0)) throw InvalidArgument("lipschitz_cap must be positive");

    if (opt_.elastic_density == "polyconvex_quartic") {
        elastic_kind_ = kPolyconvexQuartic;
        if (opt_.q_e != 4.0) throw InvalidArgument("polyconvex_quartic has growth exponent 4");
        if (2.0 * opt_.dim > opt_.q_e) throw InvalidArgument("det term needs 2d <= q_e");
    } else if (opt_.elastic_density == "quadratic") {
        elastic_kind_ = kQuadratic;
        if (opt_.q_e != 2.0) throw InvalidArgument("quadratic elastic density has growth exponent 2");
    } else {
        throw InvalidArgument("unknown elastic density '" + opt_.elastic_density + "'");
    }
    if (opt_.plastic_density == "quartic") {
        plastic_kind_ = kQuartic;
        if (opt_.q_p != 4.0) throw InvalidArgument("quartic plastic density has growth exponent 4");
    } else if (opt_.plastic_density == "quadratic") {
        plastic_kind_ = kQuadratic;
        if (opt_.q_p != 2.0) throw InvalidArgument("quadratic plastic density has growth exponent 2");
    } else {
        throw InvalidArgument("unknown plastic density '" + opt_.plastic_density + "'");
    }
}

EnergyModel EnergyModel::toy_1d() {
    EnergyOptions o;
    o.dim = 1;
    o.q_e = 2.0;
    o.q_p = 2.0;
    o.elastic_density = "quadratic";
    o.plastic_density = "quadratic";
    o.growth_constant = 0.25;
    o.det_tolerance = std::numeric_limits<double>::infinity();
    return EnergyModel(o);
}

double EnergyModel::elastic(const Mat& f) const {
    if (std::isfinite(opt_.lipschitz_cap) && singular_values(f)[0] > opt_.lipschitz_cap)
        return std::numeric_limits<double>::infinity();
    const double n2 = frob2(f);
    if (elastic_kind_ == kPolyconvexQuartic) return 0.25 * n2 * n2 + 0.5 * sq(det(f) - 1.0);
    return 0.5 * n2;
}

double EnergyModel::plastic_raw(const Mat& fp) const {
    const double n2 = frob2(fp);
    if (plastic_kind_ == kQuartic) return 0.25 * n2 * n2;
    return 0.5 * n2;
}

double EnergyModel::elastic_hat(const Mat& f, const Mat&, double determinant) const {
    const double n2 = frob2(f);
    if (elastic_kind_ == kPolyconvexQuartic) return 0.25 * n2 * n2 + 0.5 * sq(determinant - 1.0);
    return 0.5 * n2;
}

double EnergyModel::plastic_hat(const Mat& fp, const Mat&) const { return plastic_raw(fp); }

double we_eval(const EnergyModel& model, const Mat& f) { return model.elastic(f); }

double wp_eval(const EnergyModel& model, const Mat& fp) {
    const double d = det(fp);
    if (!(std::abs(d - 1.0) <= model.options().det_tolerance)) {
        std::ostringstream os;
        os << "plastic strain is not isochoric (det = " << d << ")";
        throw NotIsochoric(os.str());
    }
    return model.plastic_raw(fp);
}

// ---------------------------------------------------------------------------
// Growth audit

namespace {

struct BoundCheck {
    double margin;
    const char* name;
};

void audit_point(const EnergyModel& model, const Mat& f, bool plastic, GrowthReport& r) {
    const double c = model.options().growth_constant;
    const double q = plastic ? model.options().q_p : model.options().q_e;
    const double nq = std::pow(std::sqrt(frob2(f)), q);
    const double w = plastic ? model.plastic_raw(f) : model.elastic(f);
    const double scale = 1.0 + nq;
    const BoundCheck checks[2] = {
        {(w - (c * nq - 1.0 / c)) / scale, plastic ? "plastic lower" : "elastic lower"},
        {((1.0 / c) * (1.0 + nq) - w) / scale, plastic ? "plastic upper" : "elastic upper"},
    };
    ++r.samples;
    for (const auto& ch : checks)
        if (ch.margin < r.worst_margin) {
            r.worst_margin = ch.margin;
            r.worst_matrix = f;
            r.worst_bound = ch.name;
        }
}

void finish(GrowthReport& r) {
    r.pass = r.worst_margin >= -1e-12;
    if (!r.pass) {
        std::ostringstream os;
        os << r.worst_bound << " growth bound violated at F = " << r.worst_matrix << " (relative margin "
           << r.worst_margin << ")";
        throw GrowthViolation(os.str());
    }
}

}  // namespace

GrowthReport growth_audit(const EnergyModel& model, std::size_t samples, std::uint64_t seed) {
    if (samples < 1) throw InvalidArgument("growth audit needs at least one sample");
    const int d = model.dim();
    Rng rng(seed);
    GrowthReport r;
    for (std::size_t i = 0; i < samples; ++i) {
        const double target = std::pow(10.0, rng.uniform(-3.0, 3.0));
        Mat m = random_matrix(rng, d);
        const double n = frobenius_norm(m);
        if (n == 0) continue;
        audit_point(model, m * (target / n), false, r);

        // plastic samples live in SL(d); norms start at sqrt(d)
        const double lo = 0.5 * std::log10(static_cast<double>(d));
        const double pnorm = std::pow(10.0, rng.uniform(lo, 3.0));
        Mat p = Mat::identity(d);
        if (d == 2) {
            const double s = 0.5 * std::acosh(std::max(1.0, pnorm * pnorm / 2.0));
            p = random_rotation(rng, 2) * Mat::diagonal({std::exp(s), std::exp(-s)}) * random_rotation(rng, 2);
        } else if (d == 3) {
            p = random_sl(rng, 3, std::log(pnorm));
        }
        audit_point(model, p, true, r);
    }
    finish(r);
    return r;
}

GrowthReport growth_audit_points(const EnergyModel& model, std::span<const Mat> points) {
    if (points.empty()) throw InvalidArgument("growth audit needs at least one sample");
    GrowthReport r;
    for (const auto& f : points) {
        audit_point(model, f, false, r);
        audit_point(model, f, true, r);
        r.samples -= 1;
    }
    finish(r);
    return r;
}

// ---------------------------------------------------------------------------
// Loading

Loading::Loading(std::shared_ptr<const Mesh> mesh) : mesh_(std::move(mesh)) {}

Loading::Loading(std::shared_ptr<const Mesh> mesh, std::vector<double> knots, std::vector<std::vector<Vec2>> body,
                 std::vector<std::vector<Vec2>> traction)
    : mesh_(std::move(mesh)), knots_(std::move(knots)), body_(std::move(body)), traction_(std::move(traction)) {
    if (body_.size() != knots_.size() || traction_.size() != knots_.size())
        throw InvalidArgument("loading needs one body and one traction sample per knot");
    for (std::size_t k = 0; k < knots_.size(); ++k) {
        if (!std::isfinite(knots_[k])) throw InvalidArgument("loading knot is not finite");
        if (k > 0 && !(knots_[k] > knots_[k - 1])) throw InvalidArgument("loading knots must increase strictly");
        if (body_[k].size() != mesh_->node_count() || traction_[k].size() != mesh_->node_count())
            throw InvalidArgument("loading samples must have one value per node");
        for (const auto& v : body_[k])
            if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw InvalidArgument("body force is not finite");
        for (const auto& v : traction_[k])
            if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw InvalidArgument("traction is not finite");
    }
}

Loading Loading::uniform(std::shared_ptr<const Mesh> mesh, std::vector<double> knots, std::vector<Vec2> body,
                         std::vector<Vec2> traction) {
    const std::size_t n = mesh->node_count();
    std::vector<std::vector<Vec2>> b, g;
    for (const auto& v : body) b.emplace_back(n, v);
    for (const auto& v : traction) g.emplace_back(n, v);
    return Loading(std::move(mesh), std::move(knots), std::move(b), std::move(g));
}

std::size_t Loading::segment(double t) const {
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    if (it == knots_.begin()) return 0;
    return static_cast<std::size_t>(it - knots_.begin()) - 1;
}

namespace {

std::vector<Vec2> interpolate(const std::vector<double>& knots, const std::vector<std::vector<Vec2>>& samples,
                              std::size_t n, double t, std::size_t k) {
    if (knots.empty()) return std::vector<Vec2>(n);
    if (t <= knots.front()) return samples.front();
    if (k + 1 >= knots.size()) return samples.back();
    const double s = (t - knots[k]) / (knots[k + 1] - knots[k]);
    std::vector<Vec2> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = samples[k][i] * (1.0 - s) + samples[k + 1][i] * s;
    return out;
}

std::vector<Vec2> slope(const std::vector<double>& knots, const std::vector<std::vector<Vec2>>& samples,
                        std::size_t n, double t, std::size_t k) {
    std::vector<Vec2> out(n);
    if (knots.size() < 2 || t < knots.front() || k + 1 >= knots.size()) return out;
    const double inv = 1.0 / (knots[k + 1] - knots[k]);
    for (std::size_t i = 0; i < n; ++i) out[i] = (samples[k + 1][i] - samples[k][i]) * inv;
    return out;
}

}  // namespace

std::vector<Vec2> Loading::body_at(double t) const {
    return interpolate(knots_, body_, mesh_->node_count(), t, segment(t));
}
std::vector<Vec2> Loading::traction_at(double t) const {
    return interpolate(knots_, traction_, mesh_->node_count(), t, segment(t));
}
std::vector<Vec2> Loading::body_rate(double t) const { return slope(knots_, body_, mesh_->node_count(), t, segment(t)); }
std::vector<Vec2> Loading::traction_rate(double t) const {
    return slope(knots_, traction_, mesh_->node_count(), t, segment(t));
}

std::vector<Vec2> Loading::load_vector(double t) const {
    return plastiq::load_vector(*mesh_, body_at(t), traction_at(t));
}

std::vector<Vec2> load_vector(const Mesh& mesh, std::span<const Vec2> body, std::span<const Vec2> traction) {
    std::vector<Vec2> l(mesh.node_count());
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const auto& t = mesh.triangles()[e];
        const double w = mesh.element_area(e) / 12.0;
        const Vec2 sum = body[t[0]] + body[t[1]] + body[t[2]];
        for (int j = 0; j < 3; ++j) l[t[j]] += (sum + body[t[j]]) * w;
    }
    for (const auto& edge : mesh.gamma_n()) {
        const double len = norm(mesh.nodes()[edge[1]] - mesh.nodes()[edge[0]]);
        const Vec2 ga = traction[edge[0]], gb = traction[edge[1]];
        l[edge[0]] += (ga * 2.0 + gb) * (len / 6.0);
        l[edge[1]] += (ga + gb * 2.0) * (len / 6.0);
    }
    return l;
}

double pairing(const Mesh& mesh, std::span<const Vec2> body, std::span<const Vec2> traction, const Field& y) {
    const auto l = load_vector(mesh, body, traction);
    double s = 0.0;
    for (std::size_t k = 0; k < l.size(); ++k) s += dot(l[k], y.values[k]);
    return s;
}

double load_pairing(const Loading& loading, double t, const Field& y) {
    if (loading.knots().empty()) return 0.0;
    return pairing(*y.mesh, loading.body_at(t), loading.traction_at(t), y);
}

double load_rate_pairing(const Loading& loading, double t, const Field& y) {
    if (loading.is_static()) return 0.0;
    return pairing(*y.mesh, loading.body_rate(t), loading.traction_rate(t), y);
}

// ---------------------------------------------------------------------------
// Energy assembly

double element_elastic_energy(const EnergyModel& model, const Mat& f, const Mat& fp_inverse, double area) {
    return area * model.elastic(f * fp_inverse);
}

double element_plastic_energy(const EnergyModel& model, const Mat& fp, double area) {
    return area * wp_eval(model, fp);
}

double edge_boundary_energy(const EnergyModel& model, const Mesh& mesh, const Edge& edge, const Field& y) {
    const Vec2& xa = mesh.nodes()[edge[0]];
    const Vec2& xb = mesh.nodes()[edge[1]];
    const Vec2 gap = (y.values[edge[0]] + y.values[edge[1]]) * 0.5 - (xa + xb) * 0.5;
    return model.options().dirichlet_weight * norm(xb - xa) * norm(gap);
}

EnergyBreakdown stored_energy(const EnergyModel& model, const State& state) {
    const Mesh& mesh = *state.y.mesh;
    EnergyBreakdown b;
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const Mat fp = gradient(state.yp, e);
        const double a = mesh.element_area(e);
        b.plastic += element_plastic_energy(model, fp, a);
        b.elastic += element_elastic_energy(model, gradient(state.y, e), inverse(fp), a);
    }
    for (const auto& edge : mesh.gamma_d()) b.boundary += edge_boundary_energy(model, mesh, edge, state.y);
    b.total = b.elastic + b.plastic + b.boundary;
    return b;
}

EnergyBreakdown total_energy(const EnergyModel& model, const Loading& loading, double t, const State& state) {
    EnergyBreakdown b = stored_energy(model, state);
    b.load = load_pairing(loading, t, state.y);
    b.total = b.elastic + b.plastic + b.boundary - b.load;
    return b;
}

double elastic_energy_on(const EnergyModel& model, const State& state, std::span<const std::size_t> elements) {
    const Mesh& mesh = *state.y.mesh;
    double s = 0.0;
    for (auto e : elements) {
        const Mat fe = elastic_strain(state, e, model.options().det_tolerance);
        s += mesh.element_area(e) * model.elastic(fe);
    }
    return s;
}

double lagrangian_elastic_energy(const EnergyModel& model, const State& state) {
    std::vector<std::size_t> all(state.y.mesh->element_count());
    for (std::size_t e = 0; e < all.size(); ++e) all[e] = e;
    return elastic_energy_on(model, state, all);
}

double eulerian_elastic_energy(const EnergyModel& model, const State& state) {
    const PushForward pf = push_forward(state);
    double s = 0.0;
    for (std::size_t e = 0; e < pf.mesh->element_count(); ++e)
        s += pf.mesh->element_area(e) * model.elastic(gradient(pf.elastic, e));
    return s;
}

}  // namespace plastiq
