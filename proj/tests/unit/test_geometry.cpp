#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "plastiq/errors.hpp"
#include "plastiq/geometry.hpp"
#include "plastiq/random.hpp"
#include "support.hpp"

using namespace plastiq;
using plastiq::testing::rotation;
using plastiq::testing::square_mesh;

namespace {

Polygon unit_square_polygon() { return Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

Polygon slit_polygon(double width = 0.01, double depth = 0.8) {
    const double a = 0.5 - 0.5 * width, b = 0.5 + 0.5 * width;
    return Polygon({{0, 0}, {a, 0}, {a, depth}, {b, depth}, {b, 0}, {1, 0}, {1, 1}, {0, 1}});
}

double brute_directed(const std::vector<Vec2>& x, const std::vector<Vec2>& y) {
    double worst = 0.0;
    for (const auto& p : x) {
        double best = INFINITY;
        for (const auto& q : y) best = std::min(best, norm(p - q));
        worst = std::max(worst, best);
    }
    return worst;
}

std::vector<Vec2> random_points(Rng& rng, std::size_t n, double lo, double hi) {
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back({rng.uniform(lo, hi), rng.uniform(lo, hi)});
    return out;
}

bool in_triangle(const Vec2& p, const std::array<Vec2, 3>& t) {
    const double d1 = cross(t[1] - t[0], p - t[0]);
    const double d2 = cross(t[2] - t[1], p - t[1]);
    const double d3 = cross(t[0] - t[2], p - t[2]);
    return (d1 >= 0 && d2 >= 0 && d3 >= 0) || (d1 <= 0 && d2 <= 0 && d3 <= 0);
}

// Midpoint-rule pixel count of the union over [0,1]^2.
double pixel_union_area(const std::vector<std::array<Vec2, 3>>& tris, int n) {
    int hits = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const Vec2 p{(i + 0.5) / n, (j + 0.5) / n};
            for (const auto& t : tris)
                if (in_triangle(p, t)) {
                    ++hits;
                    break;
                }
        }
    return static_cast<double>(hits) / (static_cast<double>(n) * n);
}

}  // namespace

TEST(Polygon, ValidatesSimplicityAndOrientation) {
    EXPECT_NO_THROW(unit_square_polygon());
    EXPECT_THROW(Polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), InvalidGeometry);  // clockwise
    EXPECT_THROW(Polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), InvalidGeometry);  // bow tie
    EXPECT_THROW(Polygon({{0, 0}, {1, 0}}), InvalidGeometry);
    EXPECT_THROW(Polygon({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), InvalidGeometry);  // repeated vertex
    EXPECT_THROW(Polygon({{0, 0}, {2, 0}, {1, 0}, {1, 1}}), InvalidGeometry);  // folded edge
}

TEST(Polygon, AreaDiameterAndContainment) {
    const Polygon s = slit_polygon();
    EXPECT_NEAR(s.signed_area(), 1.0 - 0.01 * 0.8, 1e-14);
    EXPECT_NEAR(s.diameter(), std::sqrt(2.0), 1e-14);
    EXPECT_TRUE(s.contains_open({0.2, 0.5}));
    EXPECT_FALSE(s.contains_open({0.5, 0.5}));   // inside the slit
    EXPECT_TRUE(s.contains_closed({0.495, 0.5}));  // on the slit wall
    EXPECT_FALSE(s.contains_open({0.495, 0.5}));
    EXPECT_TRUE(s.segment_inside({0.2, 0.9}, {0.8, 0.9}));
    EXPECT_FALSE(s.segment_inside({0.2, 0.5}, {0.8, 0.5}));
    EXPECT_TRUE(s.segment_inside({0.0, 0.0}, {0.495, 0.0}));  // along the boundary
}

TEST(Hausdorff, MatchesBruteForce) {
    Rng rng(21);
    for (int k = 0; k < 20; ++k) {
        const auto x = random_points(rng, 300, -1.0, 1.0);
        const auto y = random_points(rng, 200, -0.5, 2.0);
        EXPECT_DOUBLE_EQ(directed_hausdorff(x, y), brute_directed(x, y));
        EXPECT_DOUBLE_EQ(directed_hausdorff(y, x), brute_directed(y, x));
        EXPECT_DOUBLE_EQ(hausdorff(x, y), hausdorff(y, x));
        EXPECT_EQ(hausdorff(x, x), 0.0);
    }
}

TEST(Hausdorff, TriangleInequality) {
    Rng rng(22);
    for (int k = 0; k < 30; ++k) {
        const auto x = random_points(rng, 100, 0.0, 1.0);
        const auto y = random_points(rng, 150, -1.0, 1.0);
        const auto z = random_points(rng, 80, 0.5, 3.0);
        EXPECT_LE(hausdorff(x, z), hausdorff(x, y) + hausdorff(y, z) + 1e-12);
    }
}

TEST(Hausdorff, EmptySetThrows) {
    const std::vector<Vec2> none, one{{0, 0}};
    EXPECT_THROW(hausdorff(none, one), EmptySet);
    EXPECT_THROW(hausdorff(one, none), EmptySet);
}

TEST(Hausdorff, NestedSquares) {
    const double h = 0.01;
    const auto a = sample_polygon(unit_square_polygon(), h);
    const auto b = sample_polygon(Polygon({{0, 0}, {2, 0}, {2, 2}, {0, 2}}), h);
    // the farthest point of [0,2]^2 from the unit square is (2,2)
    EXPECT_NEAR(hausdorff(a, b), std::sqrt(2.0), 2 * h);
}

TEST(Hausdorff, SamplingCoversThePolygon) {
    const Polygon s = slit_polygon();
    const double h = 0.02;
    const auto pts = sample_polygon(s, h);
    for (const auto& p : pts) EXPECT_TRUE(s.contains_closed(p));
    Rng rng(23);
    for (int k = 0; k < 500; ++k) {
        const Vec2 q{rng.uniform(0, 1), rng.uniform(0, 1)};
        if (!s.contains_closed(q)) continue;
        double best = INFINITY;
        for (const auto& p : pts) best = std::min(best, norm(p - q));
        EXPECT_LE(best, h);
    }
}

TEST(UnionArea, OverlappingTrianglesExact) {
    const std::vector<std::array<Vec2, 3>> tris{{{{0, 0}, {2, 0}, {0, 2}}}, {{{0, 0}, {2, 0}, {2, 2}}}};
    // overlap is the triangle (0,0), (2,0), (1,1) of area 1
    EXPECT_NEAR(triangle_union_area(tris), 3.0, 1e-14);
    const std::vector<std::array<Vec2, 3>> flipped{{{{0, 0}, {0, 2}, {2, 0}}}, {{{0, 0}, {2, 0}, {2, 2}}}};
    EXPECT_NEAR(triangle_union_area(flipped), 3.0, 1e-14);
}

TEST(UnionArea, MatchesPixelCount) {
    Rng rng(24);
    for (int k = 0; k < 5; ++k) {
        std::vector<std::array<Vec2, 3>> tris;
        for (int i = 0; i < 6; ++i) {
            std::array<Vec2, 3> t;
            for (auto& v : t) v = {rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95)};
            if (std::abs(cross(t[1] - t[0], t[2] - t[0])) < 1e-3) continue;
            tris.push_back(t);
        }
        EXPECT_NEAR(triangle_union_area(tris), pixel_union_area(tris, 800), 5e-3);
    }
}

TEST(UnionArea, DegenerateTriangleThrows) {
    const std::vector<std::array<Vec2, 3>> tris{{{{0, 0}, {1, 1}, {2, 2}}}};
    EXPECT_THROW(triangle_union_area(tris), DegenerateElement);
}

TEST(CiarletNecas, IdentityAndRigidMotionsPass) {
    auto mesh = square_mesh(4);
    const auto id = ciarlet_necas_check(identity_field(mesh));
    EXPECT_TRUE(id.pass);
    EXPECT_NEAR(id.margin, 0.0, 1e-12);
    EXPECT_NEAR(id.image_area, 1.0, 1e-12);
    const auto rot = ciarlet_necas_check(affine_field(mesh, rotation(0.7), {3.0, -1.0}));
    EXPECT_TRUE(rot.pass);
    EXPECT_NEAR(rot.margin, id.margin, 1e-10);
}

TEST(CiarletNecas, FoldFails) {
    auto mesh = std::make_shared<const Mesh>(std::vector<Vec2>{{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                                             std::vector<Triangle>{{0, 1, 2}, {0, 2, 3}},
                                             std::vector<Edge>{{0, 1}}, std::vector<Edge>{{1, 2}, {2, 3}, {3, 0}});
    Field fold = identity_field(mesh);
    fold.values[3] = {1, 0};  // second triangle lands on the first
    const auto r = ciarlet_necas_check(fold);
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(r.image_area, 0.5, 1e-14);
    EXPECT_NEAR(r.margin, -0.5, 1e-14);
}

TEST(CiarletNecas, OverlapInsideLargerMeshFails) {
    auto mesh = square_mesh(3);
    Field f = identity_field(mesh);
    // push an interior node across its neighbours so that image triangles overlap
    f.values[5] = {0.9, 0.2};
    EXPECT_FALSE(ciarlet_necas_check(f).pass);
}

TEST(ImagePolygon, IsTheImageBoundary) {
    auto mesh = square_mesh(3);
    const Polygon p = image_polygon(affine_field(mesh, rotation(0.3)));
    EXPECT_EQ(p.size(), 12u);
    EXPECT_NEAR(p.signed_area(), 1.0, 1e-12);
}

TEST(ShortestPath, DetoursAroundTheSlit) {
    const Polygon s = slit_polygon();
    const Vec2 x{0.4, 0.1}, y{0.6, 0.1};
    const Vec2 c1{0.495, 0.8}, c2{0.505, 0.8};
    const double expected = norm(c1 - x) + norm(c2 - c1) + norm(y - c2);
    std::vector<Vec2> path;
    EXPECT_NEAR(shortest_interior_path(s, x, y, &path), expected, 1e-12);
    ASSERT_EQ(path.size(), 4u);
    EXPECT_NEAR(shortest_interior_path(s, {0.2, 0.2}, {0.3, 0.4}), norm(Vec2{0.1, 0.2}), 1e-15);
    EXPECT_TRUE(std::isinf(shortest_interior_path(s, {0.2, 0.2}, {1.5, 0.4})));
}

TEST(Jones, UnitSquareIsConvex) {
    const auto r = jones_verify(unit_square_polygon(), 0.9, 0.5, 2000, 1);
    EXPECT_EQ(r.pairs_checked, 2000u);
    EXPECT_TRUE(r.cond1_failures.empty());
    EXPECT_NEAR(r.epsilon_max_estimate, 1.0, 1e-9);
    const auto r2 = jones_verify(unit_square_polygon(), 0.5, 0.5, 2000, 2);
    EXPECT_TRUE(r2.cond1_failures.empty());
}

TEST(Jones, ConvexPolygonsNeverFailCondition1) {
    std::vector<Vec2> hex;
    for (int k = 0; k < 6; ++k) hex.push_back({std::cos(k * M_PI / 3), std::sin(k * M_PI / 3)});
    const Polygon p(hex);
    for (double eps : {0.1, 0.5, 1.0}) {
        const auto r = jones_verify(p, eps, 1.0, 1000, 3);
        EXPECT_TRUE(r.cond1_failures.empty()) << "eps = " << eps;
    }
}

TEST(Jones, SlitProducesDefinitiveFailures) {
    const auto r = jones_verify(slit_polygon(), 0.5, 1.0, 2000, 4);
    EXPECT_GE(r.cond1_failures.size(), 1u);
    EXPECT_LT(r.epsilon_max_estimate, 0.5);
    for (const auto& pr : r.cond1_failures) {
        // every definitive failure straddles the slit
        EXPECT_TRUE((pr.x.x < 0.5) != (pr.y.x < 0.5));
        EXPECT_GT(shortest_interior_path(slit_polygon(), pr.x, pr.y), norm(pr.x - pr.y) / 0.5);
    }
}

TEST(Jones, ClassesAreNested) {
    const Polygon s = slit_polygon(0.05, 0.6);
    Rng rng(25);
    std::vector<PointPair> pairs;
    while (pairs.size() < 600) {
        const Vec2 x{rng.uniform(0, 1), rng.uniform(0, 1)}, y{rng.uniform(0, 1), rng.uniform(0, 1)};
        if (s.contains_open(x) && s.contains_open(y)) pairs.push_back({x, y});
    }
    const double eps[] = {0.2, 0.4, 0.7, 1.0};
    const double dls[] = {0.2, 0.5, 1.5};
    for (double e1 : eps)
        for (double e2 : eps)
            for (double d1 : dls)
                for (double d2 : dls) {
                    if (e2 < e1 || d2 < d1) continue;
                    const auto weak = jones_check_pairs(s, e1, d1, pairs);
                    const auto strong = jones_check_pairs(s, e2, d2, pairs);
                    EXPECT_LE(weak.cond1_failures.size(), strong.cond1_failures.size());
                    if (strong.cond1_failures.empty()) EXPECT_TRUE(weak.cond1_failures.empty());
                }
}

TEST(Jones, RejectsInvalidParameters) {
    EXPECT_THROW(jones_verify(unit_square_polygon(), 0.0, 0.5, 10, 1), InvalidEpsilon);
    EXPECT_THROW(jones_verify(unit_square_polygon(), 1.5, 0.5, 10, 1), InvalidEpsilon);
    EXPECT_THROW(jones_verify(unit_square_polygon(), 0.5, -1.0, 10, 1), InvalidDelta);
}

TEST(Jones, DeterministicForSeed) {
    const auto a = jones_verify(slit_polygon(), 0.5, 1.0, 300, 9);
    const auto b = jones_verify(slit_polygon(), 0.5, 1.0, 300, 9);
    ASSERT_EQ(a.cond1_failures.size(), b.cond1_failures.size());
    for (std::size_t i = 0; i < a.cond1_failures.size(); ++i) EXPECT_EQ(a.cond1_failures[i].x, b.cond1_failures[i].x);
    EXPECT_EQ(a.epsilon_max_estimate, b.epsilon_max_estimate);
}

TEST(HausdorffProbe, ConstantSequenceIsZero) {
    auto mesh = square_mesh(3);
    const Field id = identity_field(mesh);
    const std::vector<Field> seq(3, id);
    const auto r = hausdorff_convergence_probe(seq, id, 0.05);
    for (double d : r.closure_distance) EXPECT_EQ(d, 0.0);
    for (double d : r.boundary_distance) EXPECT_EQ(d, 0.0);
    for (double d : r.uniform_distance) EXPECT_EQ(d, 0.0);
}

TEST(HausdorffProbe, ShearSequenceConvergesLikeOneOverN) {
    auto mesh = square_mesh(4);
    const Field id = identity_field(mesh);
    std::vector<Field> seq;
    for (int n = 1; n <= 16; n *= 2) seq.push_back(affine_field(mesh, Mat{{1, 1.0 / n}, {0, 1}}));
    const auto r = hausdorff_convergence_probe(seq, id, 0.01);
    for (std::size_t k = 0; k < seq.size(); ++k) {
        const double n = std::pow(2.0, static_cast<double>(k));
        EXPECT_LE(r.closure_distance[k], 2.0 / n * mesh->diameter());
        EXPECT_LE(r.boundary_distance[k], 2.0 / n * mesh->diameter());
        // set distances never exceed the uniform distance of the maps
        EXPECT_LE(r.closure_distance[k], r.uniform_distance[k] + 1e-12);
    }
    EXPECT_LT(r.closure_distance.back(), 0.1);
}
