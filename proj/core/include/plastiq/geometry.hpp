#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "plastiq/mesh.hpp"

namespace plastiq {

/// Simple polygon with counterclockwise vertex order.
class Polygon {
public:
    /// Validates simplicity (segment-pair sweep) and positive signed area;
    /// throws InvalidGeometry otherwise.
    explicit Polygon(std::vector<Vec2> vertices);

    const std::vector<Vec2>& vertices() const noexcept { return vertices_; }
    std::size_t size() const noexcept { return vertices_.size(); }
    std::pair<Vec2, Vec2> edge(std::size_t i) const {
        return {vertices_[i], vertices_[(i + 1) % vertices_.size()]};
    }

    double signed_area() const noexcept { return area_; }
    double diameter() const noexcept { return diameter_; }
    Vec2 lower() const noexcept { return lo_; }
    Vec2 upper() const noexcept { return hi_; }

    /// Distance from p to the polygon boundary.
    double boundary_distance(const Vec2& p) const;
    /// Point in the closed polygon (interior or boundary, up to 1e-12 * diameter).
    bool contains_closed(const Vec2& p) const;
    /// Point strictly inside.
    bool contains_open(const Vec2& p) const;
    /// Segment pq contained in the closed polygon.
    bool segment_inside(const Vec2& p, const Vec2& q) const;

private:
    bool winding_inside(const Vec2& p) const;

    std::vector<Vec2> vertices_;
    double area_ = 0.0;
    double diameter_ = 0.0;
    Vec2 lo_, hi_;
};

/// Dense samples of a closed polygonal region: grid points of spacing h inside
/// plus boundary points at spacing <= h (vertices included).
std::vector<Vec2> sample_polygon(const Polygon& poly, double h);
/// Boundary samples only.
std::vector<Vec2> sample_boundary(const Polygon& poly, double h);

/// sup_{x in X} dist(x, Y), exact on the samples.
double directed_hausdorff(std::span<const Vec2> x, std::span<const Vec2> y);
/// max of both directed distances. Throws EmptySet on empty input.
double hausdorff(std::span<const Vec2> x, std::span<const Vec2> y);

/// Area of the union of triangles (any orientation) by convex clipping.
/// Throws DegenerateElement for a triangle with |area| < 1e-14.
double triangle_union_area(std::span<const std::array<Vec2, 3>> triangles);

struct CiarletNecasReport {
    bool pass = false;
    /// L(y_p(Omega)) - int_Omega |det grad y_p|; never positive, zero without overlap.
    double margin = 0.0;
    double reference_area = 0.0;
    /// int_Omega |det grad y_p|; equals reference_area for isochoric fields.
    double det_integral = 0.0;
    double image_area = 0.0;
    double area_tolerance = 0.0;
};

/// Discrete Ciarlet-Necas test L(Omega) <= L(y_p(Omega)) for a
/// piecewise-affine plastic deformation.
CiarletNecasReport ciarlet_necas_check(const Field& yp);

/// Boundary of the image y_p(Omega) as a polygon (image of the mesh boundary loop).
Polygon image_polygon(const Field& yp);

struct PointPair {
    Vec2 x;
    Vec2 y;
};

struct JonesReport {
    double epsilon = 0.0;
    double delta = 0.0;
    std::size_t pairs_checked = 0;
    /// Pairs whose shortest interior path is longer than |x - y| / epsilon.
    std::vector<PointPair> cond1_failures;
    /// Pairs whose shortest path violates the boundary-distance condition at a
    /// sampled parameter; another curve might still satisfy it.
    std::vector<PointPair> cond2_inconclusive;
    /// min over checked pairs of |x - y| / length(shortest path); NaN if none.
    double epsilon_max_estimate = 0.0;
};

/// Shortest path between two points of the closed polygon through its
/// visibility graph. Returns the length; fills `path` when non-null.
/// Returns +inf when no path exists (a point outside the polygon).
double shortest_interior_path(const Polygon& poly, const Vec2& x, const Vec2& y, std::vector<Vec2>* path = nullptr);

/// Sampled verifier of the (epsilon, delta)-domain conditions: draws
/// `sample_pairs` interior pairs with |x - y| < delta from `seed`.
JonesReport jones_verify(const Polygon& poly, double epsilon, double delta, std::size_t sample_pairs,
                         std::uint64_t seed);

/// Same checks on an explicit pair list; pairs with |x - y| >= delta or not
/// strictly inside are skipped.
JonesReport jones_check_pairs(const Polygon& poly, double epsilon, double delta, std::span<const PointPair> pairs);

struct HausdorffProbeReport {
    /// d_H(closure y_p^n(Omega), closure y_p(Omega)) per member of the sequence.
    std::vector<double> closure_distance;
    /// d_H(boundary of y_p^n(Omega), boundary of y_p(Omega)).
    std::vector<double> boundary_distance;
    /// max nodal |y_p^n - y_p|, the uniform distance of the piecewise-affine maps.
    std::vector<double> uniform_distance;
    /// Sampling spacing of the reference domain.
    double spacing = 0.0;
};

/// Hausdorff distances of intermediate configurations along a sequence of
/// plastic deformations towards `limit`. Closures are sampled as images of a
/// common reference sampling with spacing h.
HausdorffProbeReport hausdorff_convergence_probe(std::span<const Field> sequence, const Field& limit, double h);

}  // namespace plastiq
