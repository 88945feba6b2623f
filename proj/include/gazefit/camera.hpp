/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: include/gazefit/camera.hpp
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

#ifndef GAZEFIT_CAMERA_HPP
#define GAZEFIT_CAMERA_HPP

#include "gazefit/model.hpp"
#include "gazefit/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gazefit {

/// Pinhole intrinsics, no lens distortion. The camera looks down +z.
struct CameraIntrinsics
{
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 0;
    int height = 0;
};

inline void validate(const CameraIntrinsics& cam)
{
    if (!(cam.fx > 0.0) || !(cam.fy > 0.0))
        throw std::invalid_argument("camera: focal lengths must be positive");
    if (cam.width <= 0 || cam.height <= 0)
        throw std::invalid_argument("camera: image size must be positive");
}

/// Minimum depth in metres a point needs to be projectable.
inline constexpr double depth_epsilon = 1e-6;

/**
 * @brief Full perspective projection of a camera-frame point to pixels:
 * (fx x/z + cx, fy y/z + cy). Points may fall outside the image bounds.
 *
 * Throws DepthNonPositive when z <= 1e-6 m (point at or behind the camera).
 */
template <typename T>
Eigen::Matrix<T, 2, 1> project(const CameraIntrinsics& cam, const Vec3<T>& point)
{
    if (!(scalar_value(point[2]) > depth_epsilon))
        throw DepthNonPositive("project: point depth is not positive");
    Eigen::Matrix<T, 2, 1> pixel;
    pixel[0] = cam.fx * point[0] / point[2] + cam.cx;
    pixel[1] = cam.fy * point[1] / point[2] + cam.cy;
    return pixel;
}

/**
 * @brief Projects the 31 landmark vertices of a camera-frame mesh.
 *
 * Throws DepthNonPositive carrying the landmark index when one of them is at
 * or behind the camera.
 */
template <typename T>
Landmarks2D<T> project_landmarks(const CameraIntrinsics& cam, const EyeRegionMesh<T>& mesh,
                                 const LinearBasis& basis)
{
    if (mesh.frame != Frame::camera)
        throw std::invalid_argument("project_landmarks: mesh must be in the camera frame");
    Landmarks2D<T> landmarks;
    for (int i = 0; i < num_landmarks; ++i)
    {
        const int vertex = basis.landmark_indices[static_cast<std::size_t>(i)];
        Vec3<T> point;
        for (int j = 0; j < 3; ++j)
            point[j] = mesh.vertices(vertex, j);
        if (!(scalar_value(point[2]) > depth_epsilon))
            throw DepthNonPositive("project_landmarks: landmark " + std::to_string(i) +
                                       " is at or behind the camera",
                                   i);
        const auto pixel = project(cam, point);
        landmarks(i, 0) = pixel[0];
        landmarks(i, 1) = pixel[1];
    }
    return landmarks;
}

/**
 * @brief Angle between two gaze vectors in degrees, in [0, 180]. Symmetric
 * and scale-invariant. Evaluated as atan2(|a x b|, a.b), which equals the
 * clamped-arccos definition but is exact for identical vectors and
 * well-conditioned near 0 and 180 degrees.
 */
inline double angular_error_deg(const Vec3d& predicted, const Vec3d& truth)
{
    if (!(predicted.norm() > 0.0) || !(truth.norm() > 0.0))
        throw std::invalid_argument("angular_error: zero-length gaze vector");
    const Vec3d cross(predicted[1] * truth[2] - predicted[2] * truth[1],
                      predicted[2] * truth[0] - predicted[0] * truth[2],
                      predicted[0] * truth[1] - predicted[1] * truth[0]);
    return std::atan2(cross.norm(), predicted.dot(truth)) * 180.0 / std::numbers::pi;
}

} // namespace gazefit

#endif /* GAZEFIT_CAMERA_HPP */
