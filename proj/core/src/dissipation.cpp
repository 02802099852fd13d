#include "plastiq/dissipation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "plastiq/errors.hpp"
#include "plastiq/parallel.hpp"
#include "plastiq/random.hpp"

namespace plastiq {

namespace {

void require_isochoric(const Mat& m, double tolerance, const char* what) {
    const double d = det(m);
    if (!(std::abs(d - 1.0) <= tolerance)) {
        std::ostringstream os;
        os << what << " is not in SL(" << m.dim() << ") (det = " << d << ")";
        throw NotIsochoric(os.str());
    }
}

}  // namespace

double rate_potential(const Mat& p, const Mat& pdot, const DissipationModel& model) {
    require_isochoric(p, model.det_tolerance, "P");
    return model.yield_scale * frobenius_norm(pdot * inverse(p));
}

double one_step_distance(const Mat& f, const DissipationModel& model) {
    if (f.dim() == 1) {
        if (!(f(0, 0) > 0)) throw InvalidArgument("scalar plastic strain must be positive");
        return model.yield_scale * std::abs(std::log(f(0, 0)));
    }
    require_isochoric(f, model.det_tolerance, "plastic increment");
    if (model.kind == DissipationKind::Custom) {
        if (!model.custom) throw InvalidArgument("custom dissipation density is not set");
        return model.yield_scale * model.custom(f, cof(f));
    }
    if (f.dim() != 2) throw InvalidArgument("the log-singular-value density is implemented for d = 2");
    const auto s = singular_values(f);
    return model.yield_scale * std::log(s[0] / s[1]);
}

double global_distance(std::span<const Mat> fp0, std::span<const Mat> fp1, std::span<const double> areas,
                       const DissipationModel& model) {
    if (fp0.size() != fp1.size() || fp0.size() != areas.size())
        throw InvalidArgument("global_distance needs matching element lists");
    std::vector<double> part(fp0.size());
    auto body = [&](std::size_t e) {
        try {
            part[e] = areas[e] * one_step_distance(fp1[e] * inverse(fp0[e]), model);
        } catch (const NotIsochoric& err) {
            throw NotIsochoric(std::string(err.what()) + " on element " + std::to_string(e),
                               static_cast<std::ptrdiff_t>(e));
        }
    };
    if (fp0.size() >= 4096)
        parallel_for(fp0.size(), body);
    else
        for (std::size_t e = 0; e < fp0.size(); ++e) body(e);
    double s = 0.0;
    for (double v : part) s += v;
    return s;
}

double global_distance(const Field& yp0, const Field& yp1, const DissipationModel& model) {
    return global_distance(gradients(yp0), gradients(yp1), yp0.mesh->element_areas(), model);
}

double trajectory_dissipation(std::span<const Field> plastic, const DissipationModel& model, std::size_t s,
                              std::size_t t) {
    if (s > t || t >= plastic.size()) throw InvalidArgument("trajectory_dissipation needs s <= t < size");
    double sum = 0.0;
    for (std::size_t i = s + 1; i <= t; ++i) sum += global_distance(plastic[i - 1], plastic[i], model);
    return sum;
}

// ---------------------------------------------------------------------------
// Path estimate of Delta

bool principal_log_sl2(const Mat& f, Mat& out) {
    const double tau = 0.5 * trace(f);
    const Mat n = f - Mat::identity(2) * tau;
    if (tau <= -1.0) return false;
    double factor = 1.0;
    if (tau > 1.0 + 1e-12) {
        const double u = std::acosh(tau);
        factor = u / std::sinh(u);
    } else if (tau < 1.0 - 1e-12) {
        const double w = std::acos(tau);
        factor = w / std::sin(w);
    }
    out = n * factor;
    return true;
}

namespace {

struct Closing {
    double cost;
    std::vector<Mat> legs;
};

Closing close_path(const Mat& residual) {
    Closing best{std::numeric_limits<double>::infinity(), {}};
    Mat l(2);
    if (principal_log_sl2(residual, l)) best = {frobenius_norm(l), {l}};
    const Polar pd = polar(residual);
    const Mat ls = mat_log_spd(pd.stretch);
    const double theta = signed_rotation_angle_2d(pd.rotation);
    const Mat w{{0.0, -theta}, {theta, 0.0}};
    const double c = frobenius_norm(ls) + std::sqrt(2.0) * std::abs(theta);
    if (c < best.cost) best = {c, {ls, w}};
    return best;
}

Mat velocity(const std::vector<double>& x, std::size_t k) {
    return Mat{{x[3 * k], x[3 * k + 1]}, {x[3 * k + 2], -x[3 * k]}};
}

double path_cost(const Mat& target, const std::vector<double>& x, std::vector<Mat>* legs) {
    Mat p = Mat::identity(2);
    double cost = 0.0;
    const std::size_t free = x.size() / 3;
    for (std::size_t k = 0; k < free; ++k) {
        const Mat a = velocity(x, k);
        cost += frobenius_norm(a);
        p = mat_exp(a) * p;
        if (legs) legs->push_back(a);
    }
    const Closing c = close_path(target * inverse(p));
    if (legs) legs->insert(legs->end(), c.legs.begin(), c.legs.end());
    return cost + c.cost;
}

}  // namespace

DeltaEstimate delta_estimate(const Mat& target, std::size_t segments, const DissipationModel& model) {
    if (segments < 1) throw InvalidArgument("delta_estimate needs at least one segment");
    DeltaEstimate out;
    if (target.dim() == 1) {
        out.value = one_step_distance(target, model);
        return out;
    }
    if (target.dim() != 2) throw InvalidArgument("delta_estimate is implemented for d = 1 and d = 2");
    require_isochoric(target, model.det_tolerance, "target");

    constexpr std::size_t kMaxPasses = 5000;
    constexpr double kStepFloor = 1e-9;
    std::vector<double> x;
    double best = path_cost(target, x, nullptr);
    for (std::size_t n = 2; n <= segments; ++n) {
        x.resize(3 * (n - 1), 0.0);
        std::vector<double> step(x.size(), 0.1);
        std::size_t pass = 0;
        for (; pass < kMaxPasses; ++pass) {
            if (*std::max_element(step.begin(), step.end()) < kStepFloor) break;
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (step[i] < kStepFloor) continue;
                bool moved = false;
                for (double sign : {1.0, -1.0}) {
                    const double keep = x[i];
                    x[i] = keep + sign * step[i];
                    const double c = path_cost(target, x, nullptr);
                    if (c < best - 1e-15) {
                        best = c;
                        moved = true;
                        break;
                    }
                    x[i] = keep;
                }
                step[i] = moved ? std::min(2.0 * step[i], 1.0) : 0.5 * step[i];
            }
        }
        out.iterations += pass;
        if (pass == kMaxPasses) out.converged = false;
    }
    path_cost(target, x, &out.increments);
    out.value = model.yield_scale * best;
    return out;
}

ConvexityProbe midpoint_convexity_probe(const DissipationModel& model, std::size_t segments, std::uint64_t seed,
                                        double tolerance) {
    ConvexityProbe r;
    r.worst_excess = -std::numeric_limits<double>::infinity();
    const Rng root(seed);
    for (std::size_t i = 0; i < segments; ++i) {
        Rng rng = root.split(i);
        const Mat f = random_sl(rng, 2, 1.0);
        const Mat c = cof(f);
        const Vec2 v{rng.normal(), rng.normal()};
        const Vec2 cv = apply(c, v);
        const Vec2 u{-cv.y, cv.x};
        Mat n{{u.x * v.x, u.x * v.y}, {u.y * v.x, u.y * v.y}};
        const double nn = frobenius_norm(n);
        if (nn == 0) continue;
        n *= rng.uniform(0.1, 2.0) / nn;
        const Mat a = f - n, b = f + n;
        const double excess = one_step_distance(f, model) - 0.5 * (one_step_distance(a, model) + one_step_distance(b, model));
        ++r.segments;
        if (excess > r.worst_excess) {
            r.worst_excess = excess;
            r.worst_a = a;
            r.worst_b = b;
        }
    }
    r.convex = r.worst_excess <= tolerance;
    return r;
}

}  // namespace plastiq
