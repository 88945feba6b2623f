/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: include/gazefit/vergence.hpp
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

#ifndef GAZEFIT_VERGENCE_HPP
#define GAZEFIT_VERGENCE_HPP

#include "gazefit/dual.hpp"
#include "gazefit/types.hpp"

#include <cmath>

namespace gazefit {

/**
 * @brief Per-eye gaze rotation as elevation and azimuth, radians.
 *
 * Angles are expressed in the camera frame around the +z axis. The useful
 * range is (-pi/2, pi/2) for each angle; values outside it describe a gaze
 * turned behind the head and are not rejected here (the losses penalise
 * them).
 */
struct GazeAngles
{
    double elevation = 0.0;
    double azimuth = 0.0;
};

/// A gaze line in the camera frame: unit direction from a 3D origin.
template <typename T>
struct GazeRay
{
    Vec3<T> origin;
    Vec3<T> direction;
};

using GazeRayd = GazeRay<double>;

/**
 * @brief Result of the closest-point construction between two gaze lines.
 *
 * endpoint_left/right are the ends of the shortest connecting segment,
 * target is its midpoint, and distance its length. k_left/k_right are the
 * signed ray parameters of the endpoints; k_cross is the coefficient of the
 * cross-direction column in the 3x3 solve. diverging_left/right flag
 * k <= 0, i.e. a closest point at or behind the gaze origin.
 */
template <typename T>
struct VergenceSolution
{
    Vec3<T> endpoint_left;
    Vec3<T> endpoint_right;
    Vec3<T> target;
    T distance;
    T distance_squared; // the skew loss uses this directly; smooth at 0 where sqrt is not
    T k_left;
    T k_right;
    T k_cross;
    bool diverging_left = false;
    bool diverging_right = false;
};

using VergenceSolutiond = VergenceSolution<double>;

/**
 * @brief Gaze direction for elevation/azimuth: R_y(azimuth) R_x(elevation)
 * applied to +z, i.e. (sin a cos e, -sin e, cos a cos e). Unit norm by
 * construction.
 */
template <typename T>
Vec3<T> gaze_vector(const T& elevation, const T& azimuth)
{
    using std::cos;
    using std::sin;
    Vec3<T> direction;
    direction[0] = sin(azimuth) * cos(elevation);
    direction[1] = -sin(elevation);
    direction[2] = cos(azimuth) * cos(elevation);
    return direction;
}

inline Vec3d gaze_vector(const GazeAngles& angles)
{
    return gaze_vector<double>(angles.elevation, angles.azimuth);
}

/// The rotation R_y(azimuth) R_x(elevation) that maps +z onto the gaze
/// direction; applied to the eyeball vertices when posing a fitted mesh.
template <typename T>
Mat3<T> gaze_rotation(const T& elevation, const T& azimuth)
{
    using std::cos;
    using std::sin;
    const T ce = cos(elevation), se = sin(elevation);
    const T ca = cos(azimuth), sa = sin(azimuth);
    Mat3<T> rotation;
    // R_y(a) * R_x(e), rows written out.
    rotation(0, 0) = ca;
    rotation(0, 1) = sa * se;
    rotation(0, 2) = sa * ce;
    rotation(1, 0) = T(0.0);
    rotation(1, 1) = ce;
    rotation(1, 2) = -se;
    rotation(2, 0) = -sa;
    rotation(2, 1) = ca * se;
    rotation(2, 2) = ca * ce;
    return rotation;
}

/**
 * @brief Inverse of gaze_vector for directions with a positive z component:
 * the (elevation, azimuth) whose gaze vector points along `direction`.
 */
inline GazeAngles gaze_angles_for_direction(const Vec3d& direction)
{
    const double norm = direction.norm();
    if (!(norm > 0.0))
        throw std::invalid_argument("gaze_angles_for_direction: zero direction");
    GazeAngles angles;
    angles.elevation = std::asin(-direction[1] / norm);
    angles.azimuth = std::atan2(direction[0], direction[2]);
    return angles;
}

/// Parallel-direction threshold on |g_r x g_l| below which the closest-point
/// system is numerically singular.
inline constexpr double parallel_epsilon = 1e-8;

/**
 * @brief Closest points between two gaze lines.
 *
 * Solves [g_l | -g_r | g_r x g_l] (k_l, k_r, k_lr)^T = o_r - o_l by Cramer's
 * rule (the determinant equals |g_r x g_l|^2), then
 * K_i = o_i + k_i g_i, target = (K_l + K_r)/2, distance = |K_l - K_r|.
 *
 * Throws ParallelGaze when |g_r x g_l| <= 1e-8; callers use
 * skew_distance_parallel for that case.
 */
template <typename T>
VergenceSolution<T> solve_vergence(const GazeRay<T>& left, const GazeRay<T>& right)
{
    using std::sqrt;

    auto cross = [](const Vec3<T>& a, const Vec3<T>& b) {
        Vec3<T> c;
        c[0] = a[1] * b[2] - a[2] * b[1];
        c[1] = a[2] * b[0] - a[0] * b[2];
        c[2] = a[0] * b[1] - a[1] * b[0];
        return c;
    };
    auto dot = [](const Vec3<T>& a, const Vec3<T>& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; };

    const Vec3<T> col0 = left.direction;
    Vec3<T> col1;
    for (int j = 0; j < 3; ++j)
        col1[j] = -right.direction[j];
    const Vec3<T> col2 = cross(right.direction, left.direction);

    const T det = dot(col0, cross(col1, col2));
    const T cross_norm = sqrt(dot(col2, col2));
    if (!(scalar_value(cross_norm) > parallel_epsilon))
        throw ParallelGaze("solve_vergence: gaze directions are parallel");

    Vec3<T> rhs;
    for (int j = 0; j < 3; ++j)
        rhs[j] = right.origin[j] - left.origin[j];

    VergenceSolution<T> solution;
    solution.k_left = dot(rhs, cross(col1, col2)) / det;
    solution.k_right = dot(col0, cross(rhs, col2)) / det;
    solution.k_cross = dot(col0, cross(col1, rhs)) / det;

    for (int j = 0; j < 3; ++j)
    {
        solution.endpoint_left[j] = left.origin[j] + solution.k_left * left.direction[j];
        solution.endpoint_right[j] = right.origin[j] + solution.k_right * right.direction[j];
        solution.target[j] = 0.5 * (solution.endpoint_left[j] + solution.endpoint_right[j]);
    }
    Vec3<T> gap;
    for (int j = 0; j < 3; ++j)
        gap[j] = solution.endpoint_left[j] - solution.endpoint_right[j];
    solution.distance_squared = dot(gap, gap);
    solution.distance = scalar_value(solution.distance_squared) > 0.0 ? sqrt(solution.distance_squared) : T(0.0);
    solution.diverging_left = !(scalar_value(solution.k_left) > 0.0);
    solution.diverging_right = !(scalar_value(solution.k_right) > 0.0);
    return solution;
}

/// Squared distance between two parallel gaze lines; what the skew loss
/// consumes in the degenerate branch.
template <typename T>
T skew_distance_parallel_squared(const GazeRay<T>& left, const GazeRay<T>& right)
{
    const Vec3<T>& g = left.direction;
    T along = T(0.0);
    Vec3<T> offset;
    for (int j = 0; j < 3; ++j)
        offset[j] = right.origin[j] - left.origin[j];
    for (int j = 0; j < 3; ++j)
        along = along + offset[j] * g[j];
    T dist_sq = T(0.0);
    for (int j = 0; j < 3; ++j)
    {
        const T perpendicular = offset[j] - along * g[j];
        dist_sq = dist_sq + perpendicular * perpendicular;
    }
    return dist_sq;
}

/**
 * @brief Distance between two parallel gaze lines: the component of
 * o_r - o_l perpendicular to the shared direction. Fallback for the
 * ParallelGaze case of solve_vergence.
 */
template <typename T>
T skew_distance_parallel(const GazeRay<T>& left, const GazeRay<T>& right)
{
    using std::sqrt;
    const T dist_sq = skew_distance_parallel_squared(left, right);
    return scalar_value(dist_sq) > 0.0 ? sqrt(dist_sq) : T(0.0);
}

} // namespace gazefit

#endif /* GAZEFIT_VERGENCE_HPP */
