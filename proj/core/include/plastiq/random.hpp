#pragma once

#include <cstdint>
#include <random>

#include "plastiq/algebra.hpp"

namespace plastiq {

/// Seeded generator with reproducible sub-streams: `Rng(seed, stream)` yields
/// the same sequence regardless of which thread consumes it.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();

    /// Child generator for the given sub-stream index.
    Rng split(std::uint64_t stream) const { return Rng(seed_, stream_ * 0x9E3779B97F4A7C15ull + stream + 1); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

/// Uniform rotation in SO(d), d in {1, 2, 3}.
Mat random_rotation(Rng& rng, int dim);

/// Matrix with i.i.d. entries uniform in [lo, hi].
Mat random_matrix(Rng& rng, int dim, double lo = -1.0, double hi = 1.0);

/// Random element of SL(d): R1 diag(s) R2 with log-stretches uniform in
/// [-max_log_stretch, max_log_stretch] (rescaled to unit determinant).
Mat random_sl(Rng& rng, int dim, double max_log_stretch = 1.0);

/// Random trace-free matrix with Frobenius norm `norm`.
Mat random_trace_free(Rng& rng, int dim, double norm);

}  // namespace plastiq
