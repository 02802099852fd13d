#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <vector>

#include "plastiq/algebra.hpp"

namespace plastiq {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2& operator+=(const Vec2& o) noexcept {
        x += o.x;
        y += o.y;
        return *this;
    }
    Vec2& operator-=(const Vec2& o) noexcept {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    Vec2& operator*=(double s) noexcept {
        x *= s;
        y *= s;
        return *this;
    }
    friend Vec2 operator+(Vec2 a, const Vec2& b) noexcept { return a += b; }
    friend Vec2 operator-(Vec2 a, const Vec2& b) noexcept { return a -= b; }
    friend Vec2 operator*(Vec2 a, double s) noexcept { return a *= s; }
    friend Vec2 operator*(double s, Vec2 a) noexcept { return a *= s; }
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(const Vec2& a, const Vec2& b) noexcept { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) noexcept { return std::hypot(a.x, a.y); }
inline Vec2 apply(const Mat& m, const Vec2& v) noexcept {
    return {m(0, 0) * v.x + m(0, 1) * v.y, m(1, 0) * v.x + m(1, 1) * v.y};
}

using Triangle = std::array<std::size_t, 3>;
using Edge = std::array<std::size_t, 2>;

/// Which sides of the unit square belong to the Dirichlet part of the boundary.
struct SquareSides {
    bool left = true;
    bool right = false;
    bool bottom = false;
    bool top = false;

    static SquareSides all() { return {true, true, true, true}; }
};

/// Conforming, positively oriented reference triangulation with the boundary
/// split into a Dirichlet part gamma_D (non-empty) and a Neumann part gamma_N.
/// Immutable after construction; construction validates every invariant and
/// throws InvalidMesh otherwise.
class Mesh {
public:
    Mesh(std::vector<Vec2> nodes, std::vector<Triangle> triangles, std::vector<Edge> gamma_d,
         std::vector<Edge> gamma_n);

    /// Structured n x n grid on [0,1]^2 with 2 n^2 triangles.
    static Mesh unit_square(int n, SquareSides dirichlet = {});

    const std::vector<Vec2>& nodes() const noexcept { return nodes_; }
    const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
    const std::vector<Edge>& gamma_d() const noexcept { return gamma_d_; }
    const std::vector<Edge>& gamma_n() const noexcept { return gamma_n_; }

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t element_count() const noexcept { return triangles_.size(); }

    double element_area(std::size_t e) const { return areas_[e]; }
    const std::vector<double>& element_areas() const noexcept { return areas_; }
    double total_area() const noexcept { return total_area_; }
    double diameter() const noexcept { return diameter_; }

    /// Inverse of the reference edge matrix [x_b - x_a, x_c - x_a].
    const Mat& reference_inverse(std::size_t e) const { return ref_inverse_[e]; }

    /// Elements incident to each node.
    const std::vector<std::vector<std::size_t>>& node_elements() const noexcept { return node_elements_; }

    /// Boundary nodes in counterclockwise order; throws InvalidMesh when the
    /// boundary is not a single closed loop.
    std::vector<std::size_t> boundary_loop() const;

private:
    std::vector<Vec2> nodes_;
    std::vector<Triangle> triangles_;
    std::vector<Edge> gamma_d_;
    std::vector<Edge> gamma_n_;
    std::vector<double> areas_;
    std::vector<Mat> ref_inverse_;
    std::vector<std::vector<std::size_t>> node_elements_;
    std::vector<Edge> boundary_edges_;
    double total_area_ = 0.0;
    double diameter_ = 0.0;
};

/// Continuous piecewise-affine vector field given by its nodal values.
struct Field {
    std::shared_ptr<const Mesh> mesh;
    std::vector<Vec2> values;
};

Field identity_field(std::shared_ptr<const Mesh> mesh);
/// Nodal interpolant of x -> A x + b.
Field affine_field(std::shared_ptr<const Mesh> mesh, const Mat& a, const Vec2& b = {});

/// Constant gradient of the field on one element. Throws DegenerateElement.
Mat gradient(const Field& field, std::size_t element);
std::vector<Mat> gradients(const Field& field);

/// Arithmetic mean of the nodal values.
Vec2 nodal_mean(const Field& field);

/// Signed area of the image of element e under the field.
double image_area(const Field& field, std::size_t element);

}  // namespace plastiq
