#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "plastiq/algebra.hpp"
#include "plastiq/mesh.hpp"
#include "plastiq/state.hpp"

namespace plastiq {

/// Stored-energy densities and constants.
///
/// Density descriptors:
///   elastic "polyconvex_quartic": 1/4 |F|^4 + 1/2 (det F - 1)^2   (q_e = 4)
///   elastic "quadratic":          1/2 |F|^2                       (q_e = 2)
///   plastic "quartic":            1/4 |F_p|^4                     (q_p = 4)
///   plastic "quadratic":          1/2 |F_p|^2                     (q_p = 2)
struct EnergyOptions {
    int dim = 2;
    double q_e = 4.0;
    double q_p = 4.0;
    std::string elastic_density = "polyconvex_quartic";
    std::string plastic_density = "quartic";
    double growth_constant = 0.125;
    double dirichlet_weight = 1.0;
    /// Admissible |det F_p - 1| for plastic-density evaluation.
    double det_tolerance = 1e-6;
    /// Locking cap: W_e = +inf when the spectral norm of F_e exceeds it.
    double lipschitz_cap = std::numeric_limits<double>::infinity();
};

class EnergyModel {
public:
    /// Validates q_e > d, q_p > d(d - 1), c > 0, weight >= 0 and the
    /// descriptors. Throws InvalidArgument.
    explicit EnergyModel(EnergyOptions options = {});

    /// The 1D single-point model: W_e = 1/2 f^2, W_p = 1/2 p^2.
    static EnergyModel toy_1d();

    const EnergyOptions& options() const noexcept { return opt_; }
    int dim() const noexcept { return opt_.dim; }

    /// W_e(F).
    double elastic(const Mat& f) const;
    /// W_p(F_p) without the isochoric check.
    double plastic_raw(const Mat& fp) const;
    /// Convex representatives in (F, cof F, det F).
    double elastic_hat(const Mat& f, const Mat& cofactor, double determinant) const;
    double plastic_hat(const Mat& fp, const Mat& cofactor) const;

private:
    EnergyOptions opt_;
    int elastic_kind_ = 0;
    int plastic_kind_ = 0;
};

double we_eval(const EnergyModel& model, const Mat& f);
/// Throws NotIsochoric when |det F_p - 1| exceeds the model tolerance.
double wp_eval(const EnergyModel& model, const Mat& fp);

struct GrowthReport {
    std::size_t samples = 0;
    /// Smallest slack over all samples and all four bounds; negative on violation.
    double worst_margin = std::numeric_limits<double>::infinity();
    Mat worst_matrix;
    std::string worst_bound;
    bool pass = false;
};

/// Evaluates c|F|^q - 1/c <= W(F) <= (1/c)(1 + |F|^q) for both densities at
/// random matrices with log-uniform norm in [1e-3, 1e3] (plastic samples in
/// SL(d)). Throws GrowthViolation naming the offending matrix.
GrowthReport growth_audit(const EnergyModel& model, std::size_t samples, std::uint64_t seed = 1);
/// Same bounds at explicit matrices (used for both densities).
GrowthReport growth_audit_points(const EnergyModel& model, std::span<const Mat> points);

/// Time-dependent loading: nodal body-force density f and nodal traction g
/// (only Gamma_N edges carry traction), piecewise linear between knots.
class Loading {
public:
    /// No loading.
    explicit Loading(std::shared_ptr<const Mesh> mesh);
    /// `body[k]` and `traction[k]` are nodal samples at `knots[k]`.
    Loading(std::shared_ptr<const Mesh> mesh, std::vector<double> knots, std::vector<std::vector<Vec2>> body,
            std::vector<std::vector<Vec2>> traction);

    /// Spatially uniform body force and traction given per knot.
    static Loading uniform(std::shared_ptr<const Mesh> mesh, std::vector<double> knots, std::vector<Vec2> body,
                           std::vector<Vec2> traction);

    const std::shared_ptr<const Mesh>& mesh() const noexcept { return mesh_; }
    const std::vector<double>& knots() const noexcept { return knots_; }
    bool is_static() const noexcept { return knots_.size() < 2; }

    std::vector<Vec2> body_at(double t) const;
    std::vector<Vec2> traction_at(double t) const;
    /// Piecewise-constant time derivative; right derivative at knots, zero
    /// outside [first knot, last knot).
    std::vector<Vec2> body_rate(double t) const;
    std::vector<Vec2> traction_rate(double t) const;

    /// Nodal load vector L(t) with <l(t), y> = sum_k L_k . y_k.
    std::vector<Vec2> load_vector(double t) const;

private:
    std::size_t segment(double t) const;

    std::shared_ptr<const Mesh> mesh_;
    std::vector<double> knots_;
    std::vector<std::vector<Vec2>> body_;
    std::vector<std::vector<Vec2>> traction_;
};

/// Exact P1 pairing int_Omega f.y + int_{Gamma_N} g.y for nodal fields.
double pairing(const Mesh& mesh, std::span<const Vec2> body, std::span<const Vec2> traction, const Field& y);
/// Nodal load vector of the pairing above.
std::vector<Vec2> load_vector(const Mesh& mesh, std::span<const Vec2> body, std::span<const Vec2> traction);

/// <l(t), y>.
double load_pairing(const Loading& loading, double t, const Field& y);
/// <l'(t), y>.
double load_rate_pairing(const Loading& loading, double t, const Field& y);

struct EnergyBreakdown {
    double elastic = 0.0;
    double plastic = 0.0;
    double boundary = 0.0;
    double load = 0.0;
    double total = 0.0;
};

/// Per-element contributions, used by the solver's local updates.
double element_elastic_energy(const EnergyModel& model, const Mat& f, const Mat& fp_inverse, double area);
double element_plastic_energy(const EnergyModel& model, const Mat& fp, double area);
/// w * len * |y(mid) - mid| for one Dirichlet edge.
double edge_boundary_energy(const EnergyModel& model, const Mesh& mesh, const Edge& edge, const Field& y);

/// E(t, y_e, y_p) with the elastic term in Lagrangian form
/// int_Omega W_e(grad y (grad y_p)^{-1}). Throws NotIsochoric.
EnergyBreakdown total_energy(const EnergyModel& model, const Loading& loading, double t, const State& state);

/// Same without loading.
EnergyBreakdown stored_energy(const EnergyModel& model, const State& state);

/// Elastic energy over the listed elements only (Lagrangian form).
double elastic_energy_on(const EnergyModel& model, const State& state, std::span<const std::size_t> elements);
/// Lagrangian elastic energy over all elements.
double lagrangian_elastic_energy(const EnergyModel& model, const State& state);
/// Eulerian elastic energy int_{y_p(Omega)} W_e(grad y_e) over the image mesh.
double eulerian_elastic_energy(const EnergyModel& model, const State& state);

}  // namespace plastiq
