/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: include/gazefit/rotation.hpp
 *
 * Copyright 2026 The gazefit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#ifndef GAZEFIT_ROTATION_HPP
#define GAZEFIT_ROTATION_HPP

#include "gazefit/dual.hpp"
#include "gazefit/types.hpp"

#include <Eigen/LU>

#include <cmath>

namespace gazefit {

/**
 * @brief Rodrigues' rotation formula: axis-angle 3-vector to rotation matrix.
 *
 * R = I + sin(t)/t [r]x + (1-cos(t))/t^2 [r]x^2 with t = |r|. Below
 * t < 1e-8 the two coefficients switch to their 2-term Taylor series in t^2,
 * which keeps the map smooth through r = 0 (no 0/0 and no sqrt of 0 when
 * differentiating).
 */
template <typename T>
Mat3<T> rodrigues(const Vec3<T>& r)
{
    using std::cos;
    using std::sin;
    using std::sqrt;

    const T theta_sq = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];

    T a; // sin(t)/t
    T b; // (1-cos(t))/t^2
    if (scalar_value(theta_sq) < 1e-16)
    {
        a = 1.0 - theta_sq / 6.0;
        b = 0.5 - theta_sq / 24.0;
    }
    else
    {
        const T theta = sqrt(theta_sq);
        a = sin(theta) / theta;
        b = (1.0 - cos(theta)) / theta_sq;
    }

    Mat3<T> k;
    k(0, 0) = T(0.0);
    k(0, 1) = -r[2];
    k(0, 2) = r[1];
    k(1, 0) = r[2];
    k(1, 1) = T(0.0);
    k(1, 2) = -r[0];
    k(2, 0) = -r[1];
    k(2, 1) = r[0];
    k(2, 2) = T(0.0);

    Mat3<T> identity = Mat3<T>::Zero();
    identity(0, 0) = identity(1, 1) = identity(2, 2) = T(1.0);

    const Mat3<T> k2 = k * k;
    Mat3<T> result = identity;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            result(i, j) = result(i, j) + a * k(i, j) + b * k2(i, j);
    return result;
}

/// Max-norm orthonormality defect |R^T R - I|_inf.
inline double orthonormality_defect(const Mat3d& rotation)
{
    const Mat3d defect = rotation.transpose() * rotation - Mat3d::Identity();
    return defect.cwiseAbs().maxCoeff();
}

/// True when R is a proper rotation within the given tolerance.
inline bool is_rotation(const Mat3d& rotation, double tol = 1e-9)
{
    return orthonormality_defect(rotation) <= tol && rotation.determinant() > 0.0;
}

} // namespace gazefit

#endif /* GAZEFIT_ROTATION_HPP */
