#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "plastiq/algebra.hpp"
#include "plastiq/mesh.hpp"

namespace plastiq {

enum class DissipationKind {
    /// D(F) = rho log(sigma_1 / sigma_d); equals 2 rho log sigma_1 on SL(2).
    LogSingularValues,
    /// D(F) = rho * custom(F, cof F).
    Custom,
};

struct DissipationModel {
    double yield_scale = 1.0;
    DissipationKind kind = DissipationKind::LogSingularValues;
    std::function<double(const Mat&, const Mat&)> custom;
    /// Admissible |det - 1| for arguments that must lie in SL(d).
    double det_tolerance = 1e-8;
};

/// R(P, Pdot) = rho |Pdot P^{-1}|_F. Throws NotIsochoric.
double rate_potential(const Mat& p, const Mat& pdot, const DissipationModel& model);

/// D(F) = Delta(I, F) under the model density. For d = 1, rho |log p|
/// without the isochoric constraint. Throws NotIsochoric.
double one_step_distance(const Mat& f, const DissipationModel& model);

/// Area-weighted sum of D(F_p1 F_p0^{-1}) over elements. Throws NotIsochoric
/// carrying the element index.
double global_distance(std::span<const Mat> fp0, std::span<const Mat> fp1, std::span<const double> areas,
                       const DissipationModel& model);
/// Same for two plastic deformation fields on one mesh.
double global_distance(const Field& yp0, const Field& yp1, const DissipationModel& model);

/// Sum of global distances between consecutive entries s..t.
double trajectory_dissipation(std::span<const Field> plastic, const DissipationModel& model, std::size_t s,
                              std::size_t t);

struct DeltaEstimate {
    /// Upper bound on Delta(I, F): cost of the best path found.
    double value = 0.0;
    bool converged = true;
    std::size_t iterations = 0;
    /// Velocities of the free segments followed by the closing segments.
    std::vector<Mat> increments;
};

/// Path estimate of Delta(I, F) over piecewise-exponential paths
/// P_k = exp(A_k) P_{k-1} with trace-free A_k. The first N - 1 velocities are
/// free; the last leg joins the endpoint either through the principal
/// logarithm of the residual or through its polar factors (stretch, then
/// rotation). Coordinate descent is warm-started over n = 1..N segments, so
/// the value does not increase with N. d = 2 only (d = 1 is closed form).
DeltaEstimate delta_estimate(const Mat& target, std::size_t segments, const DissipationModel& model);

/// Principal real logarithm of F in SL(2) when it exists (trace > -2).
bool principal_log_sl2(const Mat& f, Mat& out);

struct ConvexityProbe {
    std::size_t segments = 0;
    /// max over segments of D(mid) - (D(a) + D(b)) / 2.
    double worst_excess = 0.0;
    Mat worst_a;
    Mat worst_b;
    bool convex = true;
};

/// Midpoint-convexity probe of D along random straight segments contained
/// in SL(2) (lines F + s N with N rank one and cof(F) : N = 0).
ConvexityProbe midpoint_convexity_probe(const DissipationModel& model, std::size_t segments, std::uint64_t seed,
                                        double tolerance = 1e-8);

}  // namespace plastiq
