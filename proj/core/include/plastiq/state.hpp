#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "plastiq/geometry.hpp"
#include "plastiq/mesh.hpp"
#include "plastiq/random.hpp"

namespace plastiq {

/// Admissible pair: total deformation y and plastic deformation y_p on a
/// common reference mesh. The elastic field lives on y_p(Omega) and is
/// derived, never stored.
struct State {
    Field y;
    Field yp;
};

/// y = id and y_p = id shifted to zero nodal mean.
State reference_state(std::shared_ptr<const Mesh> mesh);

/// Shifts the nodal values so that their mean is zero.
void recenter(Field& field);

struct AdmissibilityReport {
    bool pass = false;
    double max_det_error = 0.0;
    double mean_norm = 0.0;
    CiarletNecasReport cn;
    std::string reason;
};

/// Checks every state invariant: |det grad y_p - 1| <= det_tolerance per
/// element, zero nodal mean of y_p (1e-10) and the Ciarlet-Necas test.
AdmissibilityReport check_admissible(const State& state, double det_tolerance = 1e-6);

/// grad y (grad y_p)^{-1} on one element. Throws NotIsochoric.
Mat elastic_strain(const State& state, std::size_t element, double det_tolerance = 1e-6);

/// Intermediate configuration: the image mesh y_p(Omega) with the same
/// connectivity, and the elastic deformation as a field on it.
struct PushForward {
    std::shared_ptr<const Mesh> mesh;
    Field elastic;
};

/// Throws CNViolation when the Ciarlet-Necas test fails.
PushForward push_forward(const State& state);

struct ChainEstimateReport {
    double q = 0.0;
    /// ||grad y||_{L^q(Omega)}
    double total_norm = 0.0;
    /// ||grad y_e||_{L^{q_e}(y_p(Omega))}
    double elastic_norm = 0.0;
    /// ||grad y_p||_{L^{q_p}(Omega)}
    double plastic_norm = 0.0;
    bool pass = false;
};

/// Hoelder bound ||grad y||_q <= ||grad y_e||_{q_e} ||grad y_p||_{q_p} with
/// 1/q = 1/q_e + 1/q_p, checked with slack 1e-10.
ChainEstimateReport chain_estimate_audit(const State& state, double q_e, double q_p);

/// Restores det grad y_p = 1 elementwise by Gauss-Seidel sweeps: each element
/// takes the minimum-norm Newton step on its three nodes towards its reference
/// area. Stops when max |det - 1| <= tolerance, then re-centers the mean.
/// Throws ProjectionStall when an element det leaves [0.2, 5] or the
/// tolerance is not met after max_sweeps.
Field project_isochoric(Field yp, double tolerance = 1e-6, int max_sweeps = 50);

/// Largest |det grad f - 1| over the elements.
double max_det_error(const Field& field);

/// Adds independent uniform noise in [-amplitude, amplitude] to every nodal component.
Field perturb_field(const Field& field, Rng& rng, double amplitude);

/// Random admissible state near the reference: y_p is a random SL(2) affine
/// map composed with nodal noise and projected to `det_tolerance`; y is a
/// random affine map plus nodal noise. Retries until admissible.
State random_admissible_state(std::shared_ptr<const Mesh> mesh, Rng& rng, double amplitude = 0.05,
                              double det_tolerance = 1e-13);

}  // namespace plastiq
