#include "plastiq/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "plastiq/errors.hpp"

namespace plastiq {

State reference_state(std::shared_ptr<const Mesh> mesh) {
    State s{identity_field(mesh), identity_field(mesh)};
    recenter(s.yp);
    return s;
}

void recenter(Field& field) {
    const Vec2 m = nodal_mean(field);
    for (auto& v : field.values) v -= m;
}

double max_det_error(const Field& field) {
    double worst = 0.0;
    for (std::size_t e = 0; e < field.mesh->element_count(); ++e)
        worst = std::max(worst, std::abs(image_area(field, e) / field.mesh->element_area(e) - 1.0));
    return worst;
}

AdmissibilityReport check_admissible(const State& state, double det_tolerance) {
    AdmissibilityReport r;
    if (state.y.mesh != state.yp.mesh || state.y.values.size() != state.yp.values.size()) {
        r.reason = "y and y_p live on different meshes";
        return r;
    }
    r.max_det_error = max_det_error(state.yp);
    r.mean_norm = norm(nodal_mean(state.yp));
    if (r.max_det_error > det_tolerance) {
        r.reason = "det grad y_p deviates from 1 by " + std::to_string(r.max_det_error);
        return r;
    }
    if (r.mean_norm > 1e-10) {
        r.reason = "nodal mean of y_p is not zero";
        return r;
    }
    r.cn = ciarlet_necas_check(state.yp);
    if (!r.cn.pass) {
        r.reason = "Ciarlet-Necas test failed";
        return r;
    }
    r.pass = true;
    return r;
}

Mat elastic_strain(const State& state, std::size_t element, double det_tolerance) {
    const Mat fp = gradient(state.yp, element);
    const double d = det(fp);
    if (!(std::abs(d - 1.0) <= det_tolerance))
        throw NotIsochoric("plastic strain not isochoric on element " + std::to_string(element) +
                               " (det = " + std::to_string(d) + ")",
                           static_cast<std::ptrdiff_t>(element));
    return gradient(state.y, element) * transpose(cof(fp)) * (1.0 / d);
}

PushForward push_forward(const State& state) {
    const auto cn = ciarlet_necas_check(state.yp);
    if (!cn.pass) throw CNViolation("plastic deformation overlaps itself (margin " + std::to_string(cn.margin) + ")");
    const Mesh& ref = *state.yp.mesh;
    auto image = std::make_shared<const Mesh>(state.yp.values, ref.triangles(), ref.gamma_d(), ref.gamma_n());
    return {image, Field{image, state.y.values}};
}

ChainEstimateReport chain_estimate_audit(const State& state, double q_e, double q_p) {
    const Mesh& mesh = *state.y.mesh;
    ChainEstimateReport r;
    r.q = 1.0 / (1.0 / q_e + 1.0 / q_p);
    double st = 0.0, se = 0.0, sp = 0.0;
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const Mat f = gradient(state.y, e);
        const Mat fp = gradient(state.yp, e);
        const Mat fe = f * inverse(fp);
        const double a = mesh.element_area(e);
        st += a * std::pow(frobenius_norm(f), r.q);
        se += std::abs(image_area(state.yp, e)) * std::pow(frobenius_norm(fe), q_e);
        sp += a * std::pow(frobenius_norm(fp), q_p);
    }
    r.total_norm = std::pow(st, 1.0 / r.q);
    r.elastic_norm = std::pow(se, 1.0 / q_e);
    r.plastic_norm = std::pow(sp, 1.0 / q_p);
    const double rhs = r.elastic_norm * r.plastic_norm;
    r.pass = r.total_norm <= rhs * (1.0 + 1e-10) + 1e-10;
    return r;
}

Field project_isochoric(Field yp, double tolerance, int max_sweeps) {
    const Mesh& mesh = *yp.mesh;
    auto& v = yp.values;
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const double ratio = image_area(yp, e) / mesh.element_area(e);
        if (!(ratio >= 0.2 && ratio <= 5.0))
            throw ProjectionStall("element " + std::to_string(e) + " has det " + std::to_string(ratio) +
                                  " outside [0.2, 5]");
    }
    double err = max_det_error(yp);
    for (int sweep = 0; sweep < max_sweeps && err > tolerance; ++sweep) {
        for (std::size_t e = 0; e < mesh.element_count(); ++e) {
            const auto& t = mesh.triangles()[e];
            Vec2& a = v[t[0]];
            Vec2& b = v[t[1]];
            Vec2& c = v[t[2]];
            const double r = 0.5 * cross(b - a, c - a) - mesh.element_area(e);
            // gradient of the signed area with respect to (a, b, c)
            const Vec2 ga{0.5 * (b.y - c.y), 0.5 * (c.x - b.x)};
            const Vec2 gb{0.5 * (c.y - a.y), 0.5 * (a.x - c.x)};
            const Vec2 gc{0.5 * (a.y - b.y), 0.5 * (b.x - a.x)};
            const double g2 = dot(ga, ga) + dot(gb, gb) + dot(gc, gc);
            const double s = -r / g2;
            a += ga * s;
            b += gb * s;
            c += gc * s;
        }
        err = max_det_error(yp);
        if (!std::isfinite(err)) break;
    }
    if (!(err <= tolerance))
        throw ProjectionStall("isochoric projection stalled at max |det - 1| = " + std::to_string(err));
    recenter(yp);
    return yp;
}

Field perturb_field(const Field& field, Rng& rng, double amplitude) {
    Field out = field;
    for (auto& p : out.values) {
        p.x += rng.uniform(-amplitude, amplitude);
        p.y += rng.uniform(-amplitude, amplitude);
    }
    return out;
}

State random_admissible_state(std::shared_ptr<const Mesh> mesh, Rng& rng, double amplitude, double det_tolerance) {
    double hmin = std::numeric_limits<double>::infinity();
    for (auto a : mesh->element_areas()) hmin = std::min(hmin, std::sqrt(a));
    for (int attempt = 0; attempt < 100; ++attempt) {
        const Mat m = random_sl(rng, 2, 4.0 * amplitude) * random_rotation(rng, 2);
        Field yp = perturb_field(affine_field(mesh, m), rng, amplitude * hmin);
        Mat a = Mat::identity(2) + random_matrix(rng, 2, -2.0 * amplitude, 2.0 * amplitude);
        if (det(a) <= 0.1) continue;
        Field y = perturb_field(affine_field(mesh, a, {rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1)}), rng,
                                amplitude * hmin);
        try {
            yp = project_isochoric(std::move(yp), det_tolerance, 5000);
        } catch (const ProjectionStall&) {
            continue;
        }
        State s{std::move(y), std::move(yp)};
        if (check_admissible(s, std::max(det_tolerance, 1e-12)).pass) return s;
    }
    throw ProjectionStall("could not draw an admissible random state");
}

}  // namespace plastiq
