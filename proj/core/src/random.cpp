#include "plastiq/random.hpp"

#include <cmath>
#include <numbers>

namespace plastiq {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(splitmix64(seed ^ splitmix64(stream))) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    // Box-Muller; one draw per call keeps the stream layout simple
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Mat random_rotation(Rng& rng, int dim) {
    if (dim == 1) return Mat::identity(1);
    if (dim == 2) {
        const double th = rng.uniform(-std::numbers::pi, std::numbers::pi);
        return Mat{{std::cos(th), -std::sin(th)}, {std::sin(th), std::cos(th)}};
    }
    // uniform unit quaternion
    double q[4];
    double n = 0.0;
    do {
        n = 0.0;
        for (double& c : q) {
            c = rng.normal();
            n += c * c;
        }
    } while (n < 1e-12);
    n = std::sqrt(n);
    const double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
    return Mat{{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
               {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
               {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}};
}

Mat random_matrix(Rng& rng, int dim, double lo, double hi) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}

Mat random_sl(Rng& rng, int dim, double max_log_stretch) {
    Mat s(dim);
    double mean = 0.0;
    double logs[3] = {0, 0, 0};
    for (int i = 0; i < dim; ++i) {
        logs[i] = rng.uniform(-max_log_stretch, max_log_stretch);
        mean += logs[i] / dim;
    }
    for (int i = 0; i < dim; ++i) s(i, i) = std::exp(logs[i] - mean);
    return random_rotation(rng, dim) * s * random_rotation(rng, dim);
}

Mat random_trace_free(Rng& rng, int dim, double norm) {
    Mat a(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = rng.normal();
    const double tr = trace(a) / dim;
    for (int i = 0; i < dim; ++i) a(i, i) -= tr;
    const double n = frobenius_norm(a);
    return n > 0 ? a * (norm / n) : a;
}

}  // namespace plastiq
