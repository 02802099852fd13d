#include "plastiq/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "plastiq/errors.hpp"

namespace plastiq {

namespace {

void check_dim(int dim) {
    if (dim < 1 || dim > 3) throw InvalidArgument("matrix dimension must be 1, 2 or 3");
}

void check_same_dim(const Mat& a, const Mat& b) {
    if (a.dim() != b.dim()) throw InvalidArgument("matrix dimension mismatch");
}

}  // namespace

Mat::Mat(int dim) : dim_(dim) { check_dim(dim); }

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows)
    : dim_(static_cast<int>(rows.size())) {
    check_dim(dim_);
    int r = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != dim_) throw InvalidArgument("matrix rows must be square");
        int c = 0;
        for (double v : row) {
            if (!std::isfinite(v)) throw NonFinite("matrix entry is not finite");
            a_[3 * r + c] = v;
            ++c;
        }
        ++r;
    }
}

Mat Mat::identity(int dim) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::diagonal(std::initializer_list<double> entries) {
    Mat m(static_cast<int>(entries.size()));
    int i = 0;
    for (double v : entries) {
        if (!std::isfinite(v)) throw NonFinite("matrix entry is not finite");
        m(i, i) = v;
        ++i;
    }
    return m;
}

bool Mat::is_finite() const noexcept {
    return std::all_of(a_.begin(), a_.end(), [](double v) { return std::isfinite(v); });
}

Mat& Mat::operator+=(const Mat& o) {
    check_same_dim(*this, o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

Mat& Mat::operator-=(const Mat& o) {
    check_same_dim(*this, o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

Mat& Mat::operator*=(double s) noexcept {
    for (double& v : a_) v *= s;
    return *this;
}

Mat operator*(const Mat& a, const Mat& b) {
    check_same_dim(a, b);
    const int d = a.dim();
    Mat out(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) s += a(i, k) * b(k, j);
            out(i, j) = s;
        }
    return out;
}

bool operator==(const Mat& a, const Mat& b) noexcept { return a.dim_ == b.dim_ && a.a_ == b.a_; }

std::ostream& operator<<(std::ostream& os, const Mat& m) {
    os << '[';
    for (int i = 0; i < m.dim(); ++i) {
        os << (i ? ", [" : "[");
        for (int j = 0; j < m.dim(); ++j) os << (j ? ", " : "") << m(i, j);
        os << ']';
    }
    return os << ']';
}

Mat transpose(const Mat& m) {
    Mat t(m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) t(i, j) = m(j, i);
    return t;
}

double trace(const Mat& m) {
    double s = 0.0;
    for (int i = 0; i < m.dim(); ++i) s += m(i, i);
    return s;
}

double inner(const Mat& a, const Mat& b) {
    check_same_dim(a, b);
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) s += a(i, j) * b(i, j);
    return s;
}

double frobenius_norm(const Mat& m) { return std::sqrt(inner(m, m)); }

double max_abs_diff(const Mat& a, const Mat& b) {
    check_same_dim(a, b);
    double worst = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

double det(const Mat& m) {
    switch (m.dim()) {
        case 1:
            return m(0, 0);
        case 2:
            return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        default:
            return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                   m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                   m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    }
}

Mat cof(const Mat& m) {
    Mat c(m.dim());
    switch (m.dim()) {
        case 1:
            c(0, 0) = 1.0;
            break;
        case 2:
            c(0, 0) = m(1, 1);
            c(0, 1) = -m(1, 0);
            c(1, 0) = -m(0, 1);
            c(1, 1) = m(0, 0);
            break;
        default:
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
                    const int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
                    // cyclic index order absorbs the (-1)^(i+j) sign
                    c(i, j) = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
                }
    }
    return c;
}

Mat inverse(const Mat& m) {
    const double d = det(m);
    if (d == 0.0 || !std::isfinite(d)) throw InvalidArgument("matrix is singular");
    return transpose(cof(m)) * (1.0 / d);
}

Minors minors(const Mat& m) { return Minors{m, cof(m), det(m)}; }

SymmetricEigen symmetric_eigen(const Mat& s) {
    const int d = s.dim();
    Mat a = s;
    Mat v = Mat::identity(d);
    const double scale = std::max(frobenius_norm(s), 1e-300);
    for (int sweep = 0; sweep < 64 && d > 1; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < d; ++p)
            for (int q = p + 1; q < d; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) <= 1e-14 * scale) break;
        for (int p = 0; p < d; ++p)
            for (int q = p + 1; q < d; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int k = 0; k < d; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (int k = 0; k < d; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (int k = 0; k < d; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
    }
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });
    SymmetricEigen out{std::vector<double>(d), Mat(d)};
    for (int k = 0; k < d; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (int r = 0; r < d; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

std::vector<double> singular_values(const Mat& m) {
    switch (m.dim()) {
        case 1:
            return {std::abs(m(0, 0))};
        case 2: {
            const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
            // |m|^2 +- 2|det m| written as sums of squares to avoid cancellation
            double plus = (a + d) * (a + d) + (b - c) * (b - c);
            double minus = (a - d) * (a - d) + (b + c) * (b + c);
            if (a * d - b * c < 0) std::swap(plus, minus);
            const double sum = std::sqrt(plus), diff = std::sqrt(minus);
            return {0.5 * (sum + diff), 0.5 * std::abs(sum - diff)};
        }
        default: {
            auto eig = symmetric_eigen(transpose(m) * m);
            std::vector<double> out(3);
            for (int i = 0; i < 3; ++i) out[i] = std::sqrt(std::max(0.0, eig.values[i]));
            return out;
        }
    }
}

Svd svd(const Mat& m) {
    const int d = m.dim();
    if (d == 1) {
        Svd out{Mat::identity(1), {std::abs(m(0, 0))}, Mat::identity(1)};
        if (m(0, 0) < 0) out.u(0, 0) = -1.0;
        return out;
    }
    auto eig = symmetric_eigen(transpose(m) * m);
    Svd out{Mat(d), std::vector<double>(d), eig.vectors};
    for (int i = 0; i < d; ++i) out.sigma[i] = std::sqrt(std::max(0.0, eig.values[i]));
    if (d == 2) {
        const auto sv = singular_values(m);
        out.sigma = sv;
    }
    const Mat mv = m * out.v;
    // Gram-Schmidt on m v, completing rank-deficient columns
    for (int k = 0; k < d; ++k) {
        std::array<double, 3> col{};
        for (int r = 0; r < d; ++r) col[r] = mv(r, k);
        for (int j = 0; j < k; ++j) {
            double p = 0.0;
            for (int r = 0; r < d; ++r) p += col[r] * out.u(r, j);
            for (int r = 0; r < d; ++r) col[r] -= p * out.u(r, j);
        }
        double n = 0.0;
        for (int r = 0; r < d; ++r) n += col[r] * col[r];
        n = std::sqrt(n);
        if (n <= 1e-14 * std::max(1.0, out.sigma[0])) {
            for (int e = 0; e < d; ++e) {
                col = {};
                col[e] = 1.0;
                for (int j = 0; j < k; ++j) {
                    const double p = out.u(e, j);
                    for (int r = 0; r < d; ++r) col[r] -= p * out.u(r, j);
                }
                n = 0.0;
                for (int r = 0; r < d; ++r) n += col[r] * col[r];
                n = std::sqrt(n);
                if (n > 0.5) break;
            }
        }
        for (int r = 0; r < d; ++r) out.u(r, k) = col[r] / n;
    }
    return out;
}

Polar polar(const Mat& m) {
    const int d = m.dim();
    if (!(det(m) > 0.0)) throw InvalidArgument("polar decomposition requires det > 0");
    if (d == 1) return Polar{Mat::identity(1), m};
    if (d == 2) {
        // m + cof(m) is a positive multiple of the rotation factor when det m > 0
        const double c = m(0, 0) + m(1, 1), s = m(1, 0) - m(0, 1);
        const double n = std::hypot(c, s);
        Mat r{{c / n, -s / n}, {s / n, c / n}};
        Mat u = transpose(r) * m;
        const double off = 0.5 * (u(0, 1) + u(1, 0));
        u(0, 1) = u(1, 0) = off;
        return Polar{r, u};
    }
    const Svd f = svd(m);
    Mat r = f.u * transpose(f.v);
    Mat u = transpose(r) * m;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) u(i, j) = u(j, i) = 0.5 * (u(i, j) + u(j, i));
    return Polar{r, u};
}

double signed_rotation_angle_2d(const Mat& r) {
    if (r.dim() != 2) throw InvalidArgument("signed rotation angle needs d = 2");
    return std::atan2(r(1, 0) - r(0, 1), r(0, 0) + r(1, 1));
}

double rotation_angle(const Mat& r) {
    switch (r.dim()) {
        case 1:
            return 0.0;
        case 2:
            return std::abs(signed_rotation_angle_2d(r));
        default: {
            const double sx = r(2, 1) - r(1, 2), sy = r(0, 2) - r(2, 0), sz = r(1, 0) - r(0, 1);
            const double sin2 = std::sqrt(sx * sx + sy * sy + sz * sz);
            return std::atan2(sin2, trace(r) - 1.0);
        }
    }
}

Mat mat_exp(const Mat& a) {
    const int d = a.dim();
    const double norm = frobenius_norm(a);
    const int squarings = static_cast<int>(std::ceil(std::log2(1.0 + norm))) + 4;
    const Mat b = a * std::ldexp(1.0, -squarings);
    Mat sum = Mat::identity(d);
    Mat term = Mat::identity(d);
    for (int k = 1; k <= 30; ++k) {
        term = term * b * (1.0 / k);
        sum += term;
        if (frobenius_norm(term) <= 1e-18 * frobenius_norm(sum)) break;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

Mat mat_log_spd(const Mat& s) {
    const int d = s.dim();
    if (!s.is_finite()) throw NotSPD("matrix is not finite");
    const double tol = 1e-10 * std::max(1.0, frobenius_norm(s));
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (std::abs(s(i, j) - s(j, i)) > tol) throw NotSPD("matrix is not symmetric");
    Mat sym = s;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) sym(i, j) = sym(j, i) = 0.5 * (s(i, j) + s(j, i));
    const auto eig = symmetric_eigen(sym);
    Mat out(d);
    for (int k = 0; k < d; ++k) {
        if (!(eig.values[k] > 0.0)) throw NotSPD("matrix has a non-positive eigenvalue");
        const double l = std::log(eig.values[k]);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) out(i, j) += l * eig.vectors(i, k) * eig.vectors(j, k);
    }
    return out;
}

}  // namespace plastiq
