#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "plastiq/algebra.hpp"
#include "plastiq/errors.hpp"
#include "plastiq/random.hpp"
#include "support.hpp"

using namespace plastiq;
using plastiq::testing::mats_near;
using plastiq::testing::rotation;

namespace {

// Leibniz sum over all permutations of {0, .., d-1}.
double leibniz_det(const Mat& m) {
    const int d = m.dim();
    std::array<int, 3> perm{0, 1, 2};
    double sum = 0.0;
    do {
        int inversions = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) inversions += perm[i] > perm[j];
        double prod = inversions % 2 ? -1.0 : 1.0;
        for (int i = 0; i < d; ++i) prod *= m(i, perm[i]);
        sum += prod;
    } while (std::next_permutation(perm.begin(), perm.begin() + d));
    return sum;
}

// Gauss-Jordan elimination with partial pivoting.
Mat elimination_inverse(const Mat& m) {
    const int d = m.dim();
    double a[3][6] = {};
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) a[i][j] = m(i, j);
        a[i][d + i] = 1.0;
    }
    for (int c = 0; c < d; ++c) {
        int piv = c;
        for (int r = c + 1; r < d; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        for (int j = 0; j < 2 * d; ++j) std::swap(a[c][j], a[piv][j]);
        const double p = a[c][c];
        for (int j = 0; j < 2 * d; ++j) a[c][j] /= p;
        for (int r = 0; r < d; ++r) {
            if (r == c) continue;
            const double f = a[r][c];
            for (int j = 0; j < 2 * d; ++j) a[r][j] -= f * a[c][j];
        }
    }
    Mat inv(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) inv(i, j) = a[i][d + j];
    return inv;
}

// Largest eigenvalue of a symmetric PSD matrix by power iteration; the
// smallest follows from the determinant in 2D.
double power_iteration_top(const Mat& s) {
    double v[2] = {1.0, 0.3};
    double lambda = 0.0;
    for (int it = 0; it < 2000; ++it) {
        const double w0 = s(0, 0) * v[0] + s(0, 1) * v[1];
        const double w1 = s(1, 0) * v[0] + s(1, 1) * v[1];
        const double n = std::hypot(w0, w1);
        v[0] = w0 / n;
        v[1] = w1 / n;
        lambda = n;
    }
    return lambda;
}

Mat raw_series_exp(const Mat& a, int terms) {
    Mat sum = Mat::identity(a.dim());
    Mat term = Mat::identity(a.dim());
    for (int k = 1; k < terms; ++k) {
        term = term * a * (1.0 / k);
        sum += term;
    }
    return sum;
}

}  // namespace

TEST(Algebra, DeterminantOfSimpleMatrices) {
    EXPECT_DOUBLE_EQ(det(Mat::identity(2)), 1.0);
    EXPECT_DOUBLE_EQ(det(Mat{{2, 0}, {0, 0.5}}), 1.0);
    EXPECT_DOUBLE_EQ(det(Mat{{-3.5}}), -3.5);
}

TEST(Algebra, DeterminantMatchesLeibnizSum) {
    Rng rng(101);
    for (int k = 0; k < 200; ++k) {
        const Mat m = random_matrix(rng, 3);
        EXPECT_NEAR(det(m), leibniz_det(m), 1e-12);
    }
}

TEST(Algebra, CofactorClosedFormIn2D) {
    EXPECT_TRUE(mats_near(cof(Mat::identity(2)), Mat::identity(2), 0.0));
    const double a = 1.5, b = -2.0, c = 0.25, d = 4.0;
    EXPECT_TRUE(mats_near(cof(Mat{{a, b}, {c, d}}), Mat{{d, -c}, {-b, a}}, 0.0));
    EXPECT_TRUE(mats_near(cof(Mat{{7.0}}), Mat{{1.0}}, 0.0));
}

TEST(Algebra, CofactorMatchesEliminationInverse) {
    Rng rng(102);
    int tested = 0;
    while (tested < 200) {
        const Mat m = random_matrix(rng, 3);
        const double dm = det(m);
        if (std::abs(dm) < 0.05) continue;
        ++tested;
        EXPECT_TRUE(mats_near(cof(m), dm * transpose(elimination_inverse(m)), 1e-10));
    }
}

TEST(Algebra, MinorsAreConsistent) {
    Rng rng(103);
    for (int d = 1; d <= 3; ++d) {
        for (int k = 0; k < 50; ++k) {
            const Mat m = random_matrix(rng, d);
            const Minors mi = minors(m);
            EXPECT_NEAR(mi.determinant, leibniz_det(m), 1e-12 * (1 + std::abs(mi.determinant)));
            if (std::abs(mi.determinant) > 0.05)
                EXPECT_TRUE(mats_near(transpose(mi.cofactor), mi.determinant * inverse(m), 1e-10));
        }
    }
}

TEST(Algebra, CofactorIdentityHoldsForAllDimensions) {
    Rng rng(104);
    for (int d = 1; d <= 3; ++d) {
        for (int k = 0; k < 200; ++k) {
            const Mat m = random_matrix(rng, d, -3.0, 3.0);
            const double n = frobenius_norm(m);
            EXPECT_TRUE(mats_near(transpose(cof(m)) * m, det(m) * Mat::identity(d), 1e-10 * (1 + n * n)));
        }
    }
}

TEST(Algebra, DeterminantAndCofactorAreMultiplicative) {
    Rng rng(105);
    for (int d = 2; d <= 3; ++d) {
        for (int k = 0; k < 200; ++k) {
            const Mat a = random_matrix(rng, d), b = random_matrix(rng, d);
            const double dab = det(a * b);
            EXPECT_NEAR(dab, det(a) * det(b), 1e-10 * (1 + std::abs(dab)));
            const Mat cab = cof(a * b);
            EXPECT_TRUE(mats_near(cab, cof(a) * cof(b), 1e-10 * (1 + frobenius_norm(cab))));
        }
    }
}

TEST(Algebra, InverseOfSingularMatrixThrows) {
    EXPECT_THROW(inverse(Mat{{1, 2}, {2, 4}}), InvalidArgument);
}

TEST(Algebra, ConstructionRejectsNonFiniteEntries) {
    EXPECT_THROW((Mat{{1.0, std::numeric_limits<double>::quiet_NaN()}, {0, 1}}), NonFinite);
    EXPECT_THROW((Mat{{std::numeric_limits<double>::infinity()}}), NonFinite);
    EXPECT_THROW((Mat{{1.0, 2.0}, {3.0}}), InvalidArgument);
}

TEST(Algebra, SingularValuesOfSimpleMatrices) {
    const auto d = singular_values(Mat{{2, 0}, {0, 0.5}});
    EXPECT_DOUBLE_EQ(d[0], 2.0);
    EXPECT_DOUBLE_EQ(d[1], 0.5);
    const auto i = singular_values(Mat::identity(2));
    EXPECT_DOUBLE_EQ(i[0], 1.0);
    EXPECT_DOUBLE_EQ(i[1], 1.0);
}

TEST(Algebra, ShearSingularValuesMatchPowerIteration) {
    const Mat shear{{1, 1}, {0, 1}};
    const auto s = singular_values(shear);
    const double golden = 0.5 * (1.0 + std::sqrt(5.0));
    EXPECT_NEAR(s[0], golden, 1e-12);
    EXPECT_NEAR(s[1], 1.0 / golden, 1e-12);
    const double top = power_iteration_top(transpose(shear) * shear);
    EXPECT_NEAR(s[0], std::sqrt(top), 1e-12);
    EXPECT_NEAR(s[1], std::abs(det(shear)) / std::sqrt(top), 1e-12);
}

TEST(Algebra, SingularValuesAreRotationInvariant) {
    Rng rng(106);
    for (int d = 2; d <= 3; ++d) {
        for (int k = 0; k < 100; ++k) {
            const Mat m = random_matrix(rng, d, -2.0, 2.0);
            const auto s0 = singular_values(m);
            const auto s1 = singular_values(random_rotation(rng, d) * m * random_rotation(rng, d));
            for (int i = 0; i < d; ++i) EXPECT_NEAR(s0[i], s1[i], 1e-10);
        }
    }
}

TEST(Algebra, SvdAndPolarReconstruct) {
    Rng rng(107);
    for (int d = 2; d <= 3; ++d) {
        for (int k = 0; k < 50; ++k) {
            Mat m = random_matrix(rng, d);
            if (det(m) < 0.05) continue;
            const Svd s = svd(m);
            Mat sig(d);
            for (int i = 0; i < d; ++i) sig(i, i) = s.sigma[i];
            EXPECT_TRUE(mats_near(s.u * sig * transpose(s.v), m, 1e-10));
            const Polar p = polar(m);
            EXPECT_TRUE(mats_near(p.rotation * p.stretch, m, 1e-10));
            EXPECT_NEAR(det(p.rotation), 1.0, 1e-10);
            EXPECT_TRUE(mats_near(p.stretch, transpose(p.stretch), 1e-10));
        }
    }
}

TEST(Algebra, RotationAngles) {
    EXPECT_NEAR(signed_rotation_angle_2d(rotation(0.7)), 0.7, 1e-14);
    EXPECT_NEAR(signed_rotation_angle_2d(rotation(-2.1)), -2.1, 1e-14);
    EXPECT_NEAR(rotation_angle(rotation(-2.1)), 2.1, 1e-14);
}

TEST(Algebra, ExponentialSpecialCases) {
    EXPECT_TRUE(mats_near(mat_exp(Mat::zero(2)), Mat::identity(2), 0.0));
    EXPECT_TRUE(mats_near(mat_exp(Mat{{0, 1}, {0, 0}}), Mat{{1, 1}, {0, 1}}, 1e-15));
    EXPECT_TRUE(mats_near(mat_exp(Mat{{0, -0.4}, {0.4, 0}}), rotation(0.4), 1e-14));
}

TEST(Algebra, ExponentialMatchesLongSeries) {
    Rng rng(108);
    for (int k = 0; k < 200; ++k) {
        const Mat a = random_trace_free(rng, 2, rng.uniform(0.0, 1.0));
        EXPECT_TRUE(mats_near(mat_exp(a), raw_series_exp(a, 40), 1e-12));
    }
}

TEST(Algebra, ExponentialOfTraceFreeIsUnimodular) {
    Rng rng(109);
    for (int d = 2; d <= 3; ++d)
        for (int k = 0; k < 200; ++k)
            EXPECT_NEAR(det(mat_exp(random_trace_free(rng, d, rng.uniform(0.0, 4.0)))), 1.0, 1e-10);
}

TEST(Algebra, LogarithmOfSpd) {
    EXPECT_TRUE(mats_near(mat_log_spd(Mat::identity(2)), Mat::zero(2), 1e-15));
    EXPECT_TRUE(mats_near(mat_log_spd(Mat::diagonal({std::exp(1.0), std::exp(-1.0)})), Mat::diagonal({1.0, -1.0}),
                          1e-14));
    Rng rng(110);
    for (int d = 2; d <= 3; ++d) {
        for (int k = 0; k < 100; ++k) {
            const Mat r = random_rotation(rng, d);
            Mat diag(d);
            for (int i = 0; i < d; ++i) diag(i, i) = rng.uniform(0.5, 2.0);
            const Mat s = r * diag * transpose(r);
            EXPECT_TRUE(mats_near(mat_exp(mat_log_spd(s)), s, 1e-8));
        }
    }
}

TEST(Algebra, LogarithmRejectsNonSpd) {
    EXPECT_THROW(mat_log_spd(Mat{{1, 0.5}, {0, 1}}), NotSPD);
    EXPECT_THROW(mat_log_spd(Mat::diagonal({1.0, -1.0})), NotSPD);
    EXPECT_THROW(mat_log_spd(Mat::diagonal({1.0, 0.0})), NotSPD);
}
