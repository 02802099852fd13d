#include "plastiq/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "plastiq/errors.hpp"
#include "plastiq/parallel.hpp"
#include "plastiq/random.hpp"

namespace plastiq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); }

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
    const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
    const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    if (d1 == 0 && on_segment(q1, q2, p1)) return true;
    if (d2 == 0 && on_segment(q1, q2, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, p2, q2)) return true;
    return false;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + ab * t));
}

using ConvexPoly = std::vector<Vec2>;

double poly_area(const ConvexPoly& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += cross(p[i], p[(i + 1) % p.size()]);
    return 0.5 * s;
}

// Keeps the part of p on the left of a->b (keep_left) or on the right.
ConvexPoly clip(const ConvexPoly& p, const Vec2& a, const Vec2& b, bool keep_left) {
    ConvexPoly out;
    const std::size_t n = p.size();
    if (n == 0) return out;
    auto side = [&](const Vec2& z) {
        const double s = orient(a, b, z);
        return keep_left ? s : -s;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& cur = p[i];
        const Vec2& nxt = p[(i + 1) % n];
        const double sc = side(cur), sn = side(nxt);
        if (sc >= 0) out.push_back(cur);
        if ((sc > 0 && sn < 0) || (sc < 0 && sn > 0)) {
            const double t = sc / (sc - sn);
            out.push_back(cur + (nxt - cur) * t);
        }
    }
    return out;
}

struct Box {
    Vec2 lo, hi;
    bool overlaps(const Box& o) const {
        return lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y && o.lo.y <= hi.y;
    }
};

Box box_of(std::span<const Vec2> pts) {
    Box b{{kInf, kInf}, {-kInf, -kInf}};
    for (const auto& p : pts) {
        b.lo.x = std::min(b.lo.x, p.x);
        b.lo.y = std::min(b.lo.y, p.y);
        b.hi.x = std::max(b.hi.x, p.x);
        b.hi.y = std::max(b.hi.y, p.y);
    }
    return b;
}

// Uniform bucket grid for exact nearest-point queries.
class PointGrid {
public:
    PointGrid(std::span<const Vec2> points, const Box& bounds) : points_(points), box_(bounds) {
        const double w = std::max(box_.hi.x - box_.lo.x, 1e-12);
        const double h = std::max(box_.hi.y - box_.lo.y, 1e-12);
        cell_ = std::max(std::sqrt(w * h / std::max<std::size_t>(points.size(), 1)) * 1.5, 1e-12);
        nx_ = std::clamp(static_cast<int>(std::ceil(w / cell_)), 1, 4096);
        ny_ = std::clamp(static_cast<int>(std::ceil(h / cell_)), 1, 4096);
        cell_x_ = w / nx_;
        cell_y_ = h / ny_;
        buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
        for (std::size_t i = 0; i < points.size(); ++i) buckets_[index(cell_of(points[i]))].push_back(i);
    }

    double nearest(const Vec2& p) const {
        const auto [ci, cj] = cell_of(p);
        double best = kInf;
        for (int r = 0;; ++r) {
            const int i0 = ci - r, i1 = ci + r, j0 = cj - r, j1 = cj + r;
            for (int j = std::max(j0, 0); j <= std::min(j1, ny_ - 1); ++j)
                for (int i = std::max(i0, 0); i <= std::min(i1, nx_ - 1); ++i) {
                    if (i != i0 && i != i1 && j != j0 && j != j1) continue;
                    for (auto k : buckets_[index({i, j})]) best = std::min(best, norm(points_[k] - p));
                }
            // distance from p to the cells outside the searched block
            double bound = kInf;
            if (i0 > 0) bound = std::min(bound, p.x - (box_.lo.x + i0 * cell_x_));
            if (i1 < nx_ - 1) bound = std::min(bound, box_.lo.x + (i1 + 1) * cell_x_ - p.x);
            if (j0 > 0) bound = std::min(bound, p.y - (box_.lo.y + j0 * cell_y_));
            if (j1 < ny_ - 1) bound = std::min(bound, box_.lo.y + (j1 + 1) * cell_y_ - p.y);
            if (best <= bound || bound == kInf) return best;
        }
    }

private:
    std::pair<int, int> cell_of(const Vec2& p) const {
        const int i = std::clamp(static_cast<int>((p.x - box_.lo.x) / cell_x_), 0, nx_ - 1);
        const int j = std::clamp(static_cast<int>((p.y - box_.lo.y) / cell_y_), 0, ny_ - 1);
        return {i, j};
    }
    std::size_t index(std::pair<int, int> c) const { return static_cast<std::size_t>(c.second) * nx_ + c.first; }

    std::span<const Vec2> points_;
    Box box_;
    double cell_ = 1.0, cell_x_ = 1.0, cell_y_ = 1.0;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Polygon

Polygon::Polygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
    const std::size_t n = vertices_.size();
    if (n < 3) throw InvalidGeometry("polygon needs at least 3 vertices");
    for (const auto& v : vertices_)
        if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw InvalidGeometry("polygon vertex is not finite");
    for (std::size_t i = 0; i < n; ++i) {
        const auto [a, b] = edge(i);
        if (a == b) throw InvalidGeometry("polygon has a repeated vertex");
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto [c, d] = edge(j);
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) {
                // neighbours share one vertex; they must not fold back onto each other
                const Vec2 shared = (j == i + 1) ? b : a;
                const Vec2 p = (j == i + 1) ? a : b;
                const Vec2 q = (j == i + 1) ? d : c;
                if (orient(p, shared, q) == 0 && dot(p - shared, q - shared) > 0)
                    throw InvalidGeometry("polygon edges overlap");
                continue;
            }
            if (segments_intersect(a, b, c, d))
                throw InvalidGeometry("polygon is not simple (edges " + std::to_string(i) + " and " +
                                      std::to_string(j) + " intersect)");
        }
    }
    area_ = poly_area(vertices_);
    if (!(area_ > 0)) throw InvalidGeometry("polygon vertices must be counterclockwise");
    const Box b = box_of(vertices_);
    lo_ = b.lo;
    hi_ = b.hi;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) diameter_ = std::max(diameter_, norm(vertices_[i] - vertices_[j]));
}

double Polygon::boundary_distance(const Vec2& p) const {
    double best = kInf;
    for (std::size_t i = 0; i < size(); ++i) {
        const auto [a, b] = edge(i);
        best = std::min(best, point_segment_distance(p, a, b));
    }
    return best;
}

bool Polygon::winding_inside(const Vec2& p) const {
    bool inside = false;
    for (std::size_t i = 0, j = size() - 1; i < size(); j = i++) {
        const Vec2& a = vertices_[i];
        const Vec2& b = vertices_[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xc = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xc) inside = !inside;
        }
    }
    return inside;
}

bool Polygon::contains_closed(const Vec2& p) const {
    return boundary_distance(p) <= 1e-12 * diameter_ || winding_inside(p);
}

bool Polygon::contains_open(const Vec2& p) const {
    return boundary_distance(p) > 1e-12 * diameter_ && winding_inside(p);
}

bool Polygon::segment_inside(const Vec2& p, const Vec2& q) const {
    if (!contains_closed(p) || !contains_closed(q)) return false;
    const Vec2 d = q - p;
    const double len2 = dot(d, d);
    if (len2 == 0) return true;
    std::vector<double> ts{0.0, 1.0};
    for (std::size_t i = 0; i < size(); ++i) {
        const auto [a, b] = edge(i);
        const Vec2 e = b - a;
        const double denom = cross(d, e);
        const double scale = std::sqrt(len2 * dot(e, e));
        if (std::abs(denom) <= 1e-14 * scale) {
            // parallel: only collinear overlaps matter
            if (std::abs(cross(a - p, d)) <= 1e-12 * std::sqrt(len2) * diameter_) {
                for (const Vec2& v : {a, b}) {
                    const double t = dot(v - p, d) / len2;
                    if (t > 0 && t < 1) ts.push_back(t);
                }
            }
            continue;
        }
        const double t = cross(a - p, e) / denom;
        const double u = cross(a - p, d) / denom;
        if (t >= -1e-12 && t <= 1 + 1e-12 && u >= -1e-12 && u <= 1 + 1e-12) ts.push_back(std::clamp(t, 0.0, 1.0));
    }
    std::sort(ts.begin(), ts.end());
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        if (ts[k + 1] - ts[k] <= 1e-12) continue;
        const Vec2 mid = p + d * (0.5 * (ts[k] + ts[k + 1]));
        if (!contains_closed(mid)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Sampling and Hausdorff distance

std::vector<Vec2> sample_boundary(const Polygon& poly, double h) {
    if (!(h > 0)) throw InvalidGeometry("sampling spacing must be positive");
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto [a, b] = poly.edge(i);
        const int m = std::max(1, static_cast<int>(std::ceil(norm(b - a) / h)));
        for (int k = 0; k < m; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / m));
    }
    return out;
}

std::vector<Vec2> sample_polygon(const Polygon& poly, double h) {
    std::vector<Vec2> out = sample_boundary(poly, h);
    const Vec2 lo = poly.lower(), hi = poly.upper();
    const int nx = static_cast<int>(std::floor((hi.x - lo.x) / h + 1e-9));
    const int ny = static_cast<int>(std::floor((hi.y - lo.y) / h + 1e-9));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            const Vec2 p{lo.x + i * h, lo.y + j * h};
            if (poly.contains_open(p)) out.push_back(p);
        }
    return out;
}

double directed_hausdorff(std::span<const Vec2> x, std::span<const Vec2> y) {
    if (x.empty() || y.empty()) throw EmptySet("Hausdorff distance needs non-empty sets");
    Box b = box_of(y);
    const Box bx = box_of(x);
    b.lo.x = std::min(b.lo.x, bx.lo.x);
    b.lo.y = std::min(b.lo.y, bx.lo.y);
    b.hi.x = std::max(b.hi.x, bx.hi.x);
    b.hi.y = std::max(b.hi.y, bx.hi.y);
    const PointGrid grid(y, b);
    double worst = 0.0;
    for (const auto& p : x) worst = std::max(worst, grid.nearest(p));
    return worst;
}

double hausdorff(std::span<const Vec2> x, std::span<const Vec2> y) {
    return std::max(directed_hausdorff(x, y), directed_hausdorff(y, x));
}

// ---------------------------------------------------------------------------
// Union area and the Ciarlet-Necas test

double triangle_union_area(std::span<const std::array<Vec2, 3>> triangles) {
    std::vector<ConvexPoly> tris;
    std::vector<Box> boxes;
    tris.reserve(triangles.size());
    for (std::size_t i = 0; i < triangles.size(); ++i) {
        ConvexPoly t(triangles[i].begin(), triangles[i].end());
        const double a = poly_area(t);
        if (!(std::abs(a) >= 1e-14))
            throw DegenerateElement("image triangle " + std::to_string(i) + " is degenerate",
                                    static_cast<std::ptrdiff_t>(i));
        if (a < 0) std::reverse(t.begin(), t.end());
        boxes.push_back(box_of(t));
        tris.push_back(std::move(t));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < tris.size(); ++i) {
        // area of T_i minus the union of the earlier triangles
        std::vector<ConvexPoly> pieces{tris[i]};
        for (std::size_t j = 0; j < i && !pieces.empty(); ++j) {
            if (!boxes[i].overlaps(boxes[j])) continue;
            const ConvexPoly& c = tris[j];
            std::vector<ConvexPoly> next;
            for (ConvexPoly p : pieces) {
                for (std::size_t k = 0; k < 3 && !p.empty(); ++k) {
                    const Vec2& a = c[k];
                    const Vec2& b = c[(k + 1) % 3];
                    ConvexPoly out = clip(p, a, b, false);
                    if (out.size() >= 3 && poly_area(out) > 1e-18) next.push_back(std::move(out));
                    p = clip(p, a, b, true);
                    if (p.size() < 3 || poly_area(p) <= 1e-18) p.clear();
                }
            }
            pieces = std::move(next);
        }
        for (const auto& p : pieces) total += poly_area(p);
    }
    return total;
}

CiarletNecasReport ciarlet_necas_check(const Field& yp) {
    const Mesh& mesh = *yp.mesh;
    std::vector<std::array<Vec2, 3>> images;
    images.reserve(mesh.element_count());
    CiarletNecasReport r;
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const auto& t = mesh.triangles()[e];
        images.push_back({yp.values[t[0]], yp.values[t[1]], yp.values[t[2]]});
        r.det_integral += std::abs(image_area(yp, e));
    }
    r.reference_area = mesh.total_area();
    r.image_area = triangle_union_area(images);
    r.margin = r.image_area - r.det_integral;
    r.area_tolerance = 1e-8 * r.reference_area;
    r.pass = r.margin >= -r.area_tolerance;
    return r;
}

Polygon image_polygon(const Field& yp) {
    std::vector<Vec2> verts;
    for (auto k : yp.mesh->boundary_loop()) verts.push_back(yp.values[k]);
    return Polygon(std::move(verts));
}

// ---------------------------------------------------------------------------
// Shortest paths and the (epsilon, delta) conditions

namespace {

class VisibilityGraph {
public:
    explicit VisibilityGraph(const Polygon& poly) : poly_(poly) {
        const std::size_t n = poly.size();
        dist_.assign(n * n, kInf);
        for (std::size_t i = 0; i < n; ++i) {
            dist_[i * n + i] = 0.0;
            for (std::size_t j = i + 1; j < n; ++j) {
                const Vec2& a = poly.vertices()[i];
                const Vec2& b = poly.vertices()[j];
                if (poly.segment_inside(a, b)) dist_[i * n + j] = dist_[j * n + i] = norm(a - b);
            }
        }
    }

    double shortest(const Vec2& x, const Vec2& y, std::vector<Vec2>* path) const {
        if (!poly_.contains_closed(x) || !poly_.contains_closed(y)) return kInf;
        if (poly_.segment_inside(x, y)) {
            if (path) *path = {x, y};
            return norm(x - y);
        }
        const std::size_t n = poly_.size();
        // nodes: 0..n-1 polygon vertices, n = x, n+1 = y
        std::vector<double> from_x(n, kInf), to_y(n, kInf);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& v = poly_.vertices()[i];
            if (poly_.segment_inside(x, v)) from_x[i] = norm(x - v);
            if (poly_.segment_inside(v, y)) to_y[i] = norm(v - y);
        }
        std::vector<double> d = from_x;
        std::vector<std::ptrdiff_t> prev(n, -1);
        std::vector<bool> done(n, false);
        for (std::size_t it = 0; it < n; ++it) {
            std::size_t u = n;
            for (std::size_t i = 0; i < n; ++i)
                if (!done[i] && (u == n || d[i] < d[u])) u = i;
            if (u == n || d[u] == kInf) break;
            done[u] = true;
            for (std::size_t v = 0; v < n; ++v) {
                const double w = dist_[u * n + v];
                if (!done[v] && w < kInf && d[u] + w < d[v]) {
                    d[v] = d[u] + w;
                    prev[v] = static_cast<std::ptrdiff_t>(u);
                }
            }
        }
        double best = kInf;
        std::size_t last = n;
        for (std::size_t i = 0; i < n; ++i)
            if (d[i] + to_y[i] < best) {
                best = d[i] + to_y[i];
                last = i;
            }
        if (path && last < n) {
            std::vector<Vec2> rev{y};
            for (auto k = static_cast<std::ptrdiff_t>(last); k >= 0; k = prev[k]) rev.push_back(poly_.vertices()[k]);
            rev.push_back(x);
            path->assign(rev.rbegin(), rev.rend());
        }
        return best;
    }

private:
    const Polygon& poly_;
    std::vector<double> dist_;
};

struct PairOutcome {
    bool checked = false;
    bool cond1_fail = false;
    bool cond2_inconclusive = false;
    double ratio = 1.0;
};

PairOutcome check_pair(const Polygon& poly, const VisibilityGraph& graph, double epsilon, const PointPair& pr) {
    PairOutcome out;
    std::vector<Vec2> path;
    const double dxy = norm(pr.x - pr.y);
    if (dxy == 0) return out;
    const double len = graph.shortest(pr.x, pr.y, &path);
    if (!std::isfinite(len)) return out;
    out.checked = true;
    out.ratio = dxy / len;
    out.cond1_fail = len > (dxy / epsilon) * (1.0 + 1e-12);
    // boundary-distance condition at 64 arc-length samples of the shortest path
    constexpr int kSamples = 64;
    std::vector<double> cum{0.0};
    for (std::size_t k = 1; k < path.size(); ++k) cum.push_back(cum.back() + norm(path[k] - path[k - 1]));
    std::size_t seg = 0;
    for (int s = 0; s < kSamples; ++s) {
        const double arc = len * s / (kSamples - 1);
        while (seg + 2 < path.size() && cum[seg + 1] < arc) ++seg;
        const double seg_len = cum[seg + 1] - cum[seg];
        const double t = seg_len > 0 ? std::clamp((arc - cum[seg]) / seg_len, 0.0, 1.0) : 0.0;
        const Vec2 g = path[seg] + (path[seg + 1] - path[seg]) * t;
        const double need = epsilon * norm(pr.x - g) * norm(g - pr.y) / dxy;
        if (poly.boundary_distance(g) < need - 1e-12 * poly.diameter()) {
            out.cond2_inconclusive = true;
            break;
        }
    }
    return out;
}

JonesReport collect(double epsilon, double delta, std::span<const PointPair> pairs,
                    const std::vector<PairOutcome>& outcomes) {
    JonesReport rep;
    rep.epsilon = epsilon;
    rep.delta = delta;
    rep.epsilon_max_estimate = std::numeric_limits<double>::quiet_NaN();
    double est = kInf;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        if (!o.checked) continue;
        ++rep.pairs_checked;
        est = std::min(est, o.ratio);
        if (o.cond1_fail) rep.cond1_failures.push_back(pairs[i]);
        if (o.cond2_inconclusive) rep.cond2_inconclusive.push_back(pairs[i]);
    }
    if (rep.pairs_checked > 0) rep.epsilon_max_estimate = est;
    return rep;
}

void check_parameters(double epsilon, double delta) {
    if (!(epsilon > 0 && epsilon <= 1)) throw InvalidEpsilon("epsilon must lie in (0, 1]");
    if (!(delta > 0) || !std::isfinite(delta)) throw InvalidDelta("delta must be positive");
}

Vec2 sample_interior(const Polygon& poly, Rng& rng) {
    const Vec2 lo = poly.lower(), hi = poly.upper();
    for (;;) {
        const Vec2 p{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
        if (poly.contains_open(p)) return p;
    }
}

}  // namespace

double shortest_interior_path(const Polygon& poly, const Vec2& x, const Vec2& y, std::vector<Vec2>* path) {
    return VisibilityGraph(poly).shortest(x, y, path);
}

JonesReport jones_check_pairs(const Polygon& poly, double epsilon, double delta, std::span<const PointPair> pairs) {
    check_parameters(epsilon, delta);
    const VisibilityGraph graph(poly);
    std::vector<PairOutcome> outcomes(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t i) {
        const auto& pr = pairs[i];
        if (!(norm(pr.x - pr.y) < delta) || !poly.contains_open(pr.x) || !poly.contains_open(pr.y)) return;
        outcomes[i] = check_pair(poly, graph, epsilon, pr);
    });
    return collect(epsilon, delta, pairs, outcomes);
}

JonesReport jones_verify(const Polygon& poly, double epsilon, double delta, std::size_t sample_pairs,
                         std::uint64_t seed) {
    check_parameters(epsilon, delta);
    std::vector<PointPair> pairs(sample_pairs);
    const Rng root(seed);
    parallel_for(sample_pairs, [&](std::size_t i) {
        Rng rng = root.split(i);
        for (;;) {
            const Vec2 x = sample_interior(poly, rng);
            for (int attempt = 0; attempt < 64; ++attempt) {
                const double r = delta * std::sqrt(rng.uniform());
                const double phi = rng.uniform(0.0, 2.0 * M_PI);
                const Vec2 y = x + Vec2{r * std::cos(phi), r * std::sin(phi)};
                if (norm(x - y) < delta && norm(x - y) > 0 && poly.contains_open(y)) {
                    pairs[i] = {x, y};
                    return;
                }
            }
        }
    });
    return jones_check_pairs(poly, epsilon, delta, pairs);
}

// ---------------------------------------------------------------------------
// Hausdorff convergence of intermediate configurations

namespace {

struct ReferenceSampling {
    // barycentric samples per element and per boundary edge
    std::vector<std::pair<std::size_t, std::array<double, 3>>> interior;
    std::vector<std::pair<Edge, double>> boundary;
};

ReferenceSampling reference_sampling(const Mesh& mesh, double h) {
    ReferenceSampling s;
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const auto& t = mesh.triangles()[e];
        double longest = 0.0;
        for (int k = 0; k < 3; ++k) longest = std::max(longest, norm(mesh.nodes()[t[(k + 1) % 3]] - mesh.nodes()[t[k]]));
        const int m = std::max(1, static_cast<int>(std::ceil(longest / h)));
        for (int i = 0; i <= m; ++i)
            for (int j = 0; i + j <= m; ++j) {
                const double b1 = static_cast<double>(i) / m, b2 = static_cast<double>(j) / m;
                s.interior.push_back({e, {1.0 - b1 - b2, b1, b2}});
            }
    }
    for (const auto& part : {mesh.gamma_d(), mesh.gamma_n()})
        for (const auto& edge : part) {
            const double len = norm(mesh.nodes()[edge[1]] - mesh.nodes()[edge[0]]);
            const int m = std::max(1, static_cast<int>(std::ceil(len / h)));
            for (int k = 0; k <= m; ++k) s.boundary.push_back({edge, static_cast<double>(k) / m});
        }
    return s;
}

std::vector<Vec2> map_interior(const ReferenceSampling& s, const Field& f) {
    std::vector<Vec2> out;
    out.reserve(s.interior.size());
    for (const auto& [e, b] : s.interior) {
        const auto& t = f.mesh->triangles()[e];
        out.push_back(f.values[t[0]] * b[0] + f.values[t[1]] * b[1] + f.values[t[2]] * b[2]);
    }
    return out;
}

std::vector<Vec2> map_boundary(const ReferenceSampling& s, const Field& f) {
    std::vector<Vec2> out;
    out.reserve(s.boundary.size());
    for (const auto& [edge, t] : s.boundary) out.push_back(f.values[edge[0]] * (1.0 - t) + f.values[edge[1]] * t);
    return out;
}

}  // namespace

HausdorffProbeReport hausdorff_convergence_probe(std::span<const Field> sequence, const Field& limit, double h) {
    if (!(h > 0)) throw InvalidGeometry("sampling spacing must be positive");
    const ReferenceSampling s = reference_sampling(*limit.mesh, h);
    const auto lim_in = map_interior(s, limit);
    const auto lim_bd = map_boundary(s, limit);
    HausdorffProbeReport rep;
    rep.spacing = h;
    for (const auto& f : sequence) {
        if (f.mesh != limit.mesh && f.values.size() != limit.values.size())
            throw InvalidArgument("probe fields must share the reference mesh");
        const auto in = map_interior(s, f);
        const auto bd = map_boundary(s, f);
        rep.closure_distance.push_back(hausdorff(in, lim_in));
        rep.boundary_distance.push_back(hausdorff(bd, lim_bd));
        double u = 0.0;
        for (std::size_t k = 0; k < f.values.size(); ++k) u = std::max(u, norm(f.values[k] - limit.values[k]));
        rep.uniform_distance.push_back(u);
    }
    return rep;
}

}  // namespace plastiq
