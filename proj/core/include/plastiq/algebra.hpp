#pragma once

#include <array>
#include <initializer_list>
#include <iosfwd>
#include <vector>

namespace plastiq {

/// Dense d x d real matrix, d in {1, 2, 3}. Row-major storage in a fixed
/// 3 x 3 buffer; entries outside the active block are kept at zero.
class Mat {
public:
    /// Zero 2 x 2 matrix.
    Mat() = default;

    /// Zero matrix of the given dimension.
    explicit Mat(int dim);

    /// Row-wise construction, e.g. Mat{{2, 0}, {0, 0.5}}. Throws NonFinite on
    /// NaN/Inf entries and InvalidArgument on ragged or oversize input.
    Mat(std::initializer_list<std::initializer_list<double>> rows);

    static Mat zero(int dim) { return Mat(dim); }
    static Mat identity(int dim);
    static Mat diagonal(std::initializer_list<double> entries);

    int dim() const noexcept { return dim_; }

    double operator()(int r, int c) const noexcept { return a_[3 * r + c]; }
    double& operator()(int r, int c) noexcept { return a_[3 * r + c]; }

    bool is_finite() const noexcept;

    Mat& operator+=(const Mat& o);
    Mat& operator-=(const Mat& o);
    Mat& operator*=(double s) noexcept;

    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(Mat a, double s) noexcept { return a *= s; }
    friend Mat operator*(double s, Mat a) noexcept { return a *= s; }
    friend Mat operator-(Mat a) noexcept { return a *= -1.0; }
    friend Mat operator*(const Mat& a, const Mat& b);
    friend bool operator==(const Mat& a, const Mat& b) noexcept;

private:
    int dim_ = 2;
    std::array<double, 9> a_{};
};

std::ostream& operator<<(std::ostream& os, const Mat& m);

Mat transpose(const Mat& m);
double trace(const Mat& m);
/// Frobenius inner product A : B.
double inner(const Mat& a, const Mat& b);
double frobenius_norm(const Mat& m);
/// Largest absolute entry of a - b.
double max_abs_diff(const Mat& a, const Mat& b);

/// Cofactor-expansion determinant; exact formulas per dimension.
double det(const Mat& m);

/// Matrix of signed minors, cof(m)^T m = det(m) I. For d = 1 returns [1].
Mat cof(const Mat& m);

/// Inverse through cof/det. Throws InvalidArgument on a singular matrix.
Mat inverse(const Mat& m);

/// A matrix together with its minors.
struct Minors {
    Mat matrix;
    Mat cofactor;
    double determinant = 0.0;
};
Minors minors(const Mat& m);

/// Descending singular values. d = 2 uses the closed form in |m|^2 and
/// det m, d = 3 uses Jacobi iteration on m^T m.
std::vector<double> singular_values(const Mat& m);

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues are sorted descending; `vectors` holds eigenvectors as columns.
struct SymmetricEigen {
    std::vector<double> values;
    Mat vectors;
};
SymmetricEigen symmetric_eigen(const Mat& s);

/// m = u diag(sigma) v^T with u, v orthogonal, sigma descending.
struct Svd {
    Mat u;
    std::vector<double> sigma;
    Mat v;
};
Svd svd(const Mat& m);

/// m = rotation * stretch with rotation in SO(d) and stretch SPD.
/// Requires det m > 0.
struct Polar {
    Mat rotation;
    Mat stretch;
};
Polar polar(const Mat& m);

/// Rotation angle of R in SO(2) or SO(3), in [0, pi]. For d = 2 the signed
/// angle is available through signed_rotation_angle.
double rotation_angle(const Mat& r);
double signed_rotation_angle_2d(const Mat& r);

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
Mat mat_exp(const Mat& a);

/// Principal logarithm of a symmetric positive definite matrix.
/// Throws NotSPD if asymmetric beyond 1e-10 or an eigenvalue is <= 0.
Mat mat_log_spd(const Mat& s);

}  // namespace plastiq
