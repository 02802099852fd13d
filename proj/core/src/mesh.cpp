#include "plastiq/mesh.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "plastiq/errors.hpp"

namespace plastiq {

namespace {

Edge sorted(Edge e) {
    if (e[0] > e[1]) std::swap(e[0], e[1]);
    return e;
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> nodes, std::vector<Triangle> triangles, std::vector<Edge> gamma_d,
           std::vector<Edge> gamma_n)
    : nodes_(std::move(nodes)),
      triangles_(std::move(triangles)),
      gamma_d_(std::move(gamma_d)),
      gamma_n_(std::move(gamma_n)) {
    if (nodes_.empty() || triangles_.empty()) throw InvalidMesh("mesh needs nodes and triangles");
    for (const auto& p : nodes_)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InvalidMesh("node coordinate is not finite");

    node_elements_.resize(nodes_.size());
    std::map<Edge, int> edge_count;
    std::map<Edge, Edge> oriented;
    for (std::size_t e = 0; e < triangles_.size(); ++e) {
        const auto& t = triangles_[e];
        for (auto v : t)
            if (v >= nodes_.size()) throw InvalidMesh("triangle " + std::to_string(e) + " references a missing node");
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw InvalidMesh("triangle " + std::to_string(e) + " repeats a node");
        const Vec2 ab = nodes_[t[1]] - nodes_[t[0]];
        const Vec2 ac = nodes_[t[2]] - nodes_[t[0]];
        const double area = 0.5 * cross(ab, ac);
        if (!(area > 1e-14)) throw InvalidMesh("triangle " + std::to_string(e) + " is degenerate or clockwise");
        areas_.push_back(area);
        total_area_ += area;
        ref_inverse_.push_back(inverse(Mat{{ab.x, ac.x}, {ab.y, ac.y}}));
        for (int k = 0; k < 3; ++k) {
            node_elements_[t[k]].push_back(e);
            const Edge edge{t[k], t[(k + 1) % 3]};
            ++edge_count[sorted(edge)];
            oriented[sorted(edge)] = edge;
        }
    }
    std::map<Edge, int> boundary;
    for (const auto& [edge, count] : edge_count) {
        if (count > 2) throw InvalidMesh("edge shared by more than two triangles");
        if (count == 1) {
            boundary[edge] = 0;
            boundary_edges_.push_back(oriented[edge]);
        }
    }
    auto mark = [&](const std::vector<Edge>& part, const char* name) {
        for (const auto& e : part) {
            auto it = boundary.find(sorted(e));
            if (it == boundary.end()) throw InvalidMesh(std::string(name) + " contains a non-boundary edge");
            if (++it->second > 1) throw InvalidMesh("boundary edge listed more than once in gamma_D/gamma_N");
        }
    };
    if (gamma_d_.empty()) throw InvalidMesh("gamma_D must be non-empty");
    mark(gamma_d_, "gamma_D");
    mark(gamma_n_, "gamma_N");
    for (const auto& [edge, count] : boundary)
        if (count != 1) throw InvalidMesh("boundary edge belongs to neither gamma_D nor gamma_N");

    for (std::size_t i = 0; i < nodes_.size(); ++i)
        for (std::size_t j = i + 1; j < nodes_.size(); ++j)
            diameter_ = std::max(diameter_, norm(nodes_[i] - nodes_[j]));
}

Mesh Mesh::unit_square(int n, SquareSides dirichlet) {
    if (n < 1) throw InvalidMesh("unit_square needs n >= 1");
    const auto idx = [n](int i, int j) { return static_cast<std::size_t>(j * (n + 1) + i); };
    std::vector<Vec2> nodes;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) nodes.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    std::vector<Triangle> tris;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            tris.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
            tris.push_back({idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)});
        }
    std::vector<Edge> gd, gn;
    for (int k = 0; k < n; ++k) {
        (dirichlet.bottom ? gd : gn).push_back({idx(k, 0), idx(k + 1, 0)});
        (dirichlet.right ? gd : gn).push_back({idx(n, k), idx(n, k + 1)});
        (dirichlet.top ? gd : gn).push_back({idx(k + 1, n), idx(k, n)});
        (dirichlet.left ? gd : gn).push_back({idx(0, k + 1), idx(0, k)});
    }
    return Mesh(std::move(nodes), std::move(tris), std::move(gd), std::move(gn));
}

std::vector<std::size_t> Mesh::boundary_loop() const {
    std::map<std::size_t, std::size_t> next;
    for (const auto& e : boundary_edges_) {
        if (!next.emplace(e[0], e[1]).second) throw InvalidMesh("boundary is not a simple closed curve");
    }
    std::vector<std::size_t> loop;
    const std::size_t start = next.begin()->first;
    std::size_t cur = start;
    do {
        loop.push_back(cur);
        auto it = next.find(cur);
        if (it == next.end()) throw InvalidMesh("boundary is not closed");
        cur = it->second;
    } while (cur != start && loop.size() <= next.size());
    if (loop.size() != next.size()) throw InvalidMesh("boundary has more than one component");
    return loop;
}

Field identity_field(std::shared_ptr<const Mesh> mesh) {
    Field f{mesh, mesh->nodes()};
    return f;
}

Field affine_field(std::shared_ptr<const Mesh> mesh, const Mat& a, const Vec2& b) {
    Field f{mesh, {}};
    f.values.reserve(mesh->node_count());
    for (const auto& p : mesh->nodes()) f.values.push_back(apply(a, p) + b);
    return f;
}

Mat gradient(const Field& field, std::size_t element) {
    const auto& t = field.mesh->triangles().at(element);
    if (!(field.mesh->element_area(element) > 1e-14))
        throw DegenerateElement("degenerate reference element", static_cast<std::ptrdiff_t>(element));
    const Vec2 du = field.values[t[1]] - field.values[t[0]];
    const Vec2 dv = field.values[t[2]] - field.values[t[0]];
    return Mat{{du.x, dv.x}, {du.y, dv.y}} * field.mesh->reference_inverse(element);
}

std::vector<Mat> gradients(const Field& field) {
    std::vector<Mat> out;
    out.reserve(field.mesh->element_count());
    for (std::size_t e = 0; e < field.mesh->element_count(); ++e) out.push_back(gradient(field, e));
    return out;
}

Vec2 nodal_mean(const Field& field) {
    Vec2 s;
    for (const auto& v : field.values) s += v;
    return s * (1.0 / static_cast<double>(field.values.size()));
}

double image_area(const Field& field, std::size_t element) {
    const auto& t = field.mesh->triangles()[element];
    return 0.5 * cross(field.values[t[1]] - field.values[t[0]], field.values[t[2]] - field.values[t[0]]);
}

}  // namespace plastiq
