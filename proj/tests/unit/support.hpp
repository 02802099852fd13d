#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "plastiq/algebra.hpp"
#include "plastiq/mesh.hpp"

namespace plastiq::testing {

inline ::testing::AssertionResult mats_near(const Mat& a, const Mat& b, double tol) {
    if (a.dim() != b.dim()) return ::testing::AssertionFailure() << "dimension " << a.dim() << " vs " << b.dim();
    const double d = max_abs_diff(a, b);
    if (d <= tol) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "max |a - b| = " << d << " > " << tol << "\n" << a << "\nvs\n" << b;
}

inline std::shared_ptr<const Mesh> square_mesh(int n, SquareSides sides = {}) {
    return std::make_shared<const Mesh>(Mesh::unit_square(n, sides));
}

inline Mat rotation(double theta) {
    return Mat{{std::cos(theta), -std::sin(theta)}, {std::sin(theta), std::cos(theta)}};
}

}  // namespace plastiq::testing
