/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: include/gazefit/types.hpp
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

#ifndef GAZEFIT_TYPES_HPP
#define GAZEFIT_TYPES_HPP

#include <Eigen/Core>

#include <array>
#include <stdexcept>
#include <string>

namespace gazefit {

inline constexpr const char* version_string = "0.1.0";

/// Number of 2D landmarks used for alignment: 10 eyebrow + 12 eye-contour + 9 nose points.
inline constexpr int num_landmarks = 31;

template <typename T>
using Vec3 = Eigen::Matrix<T, 3, 1>;

template <typename T>
using Mat3 = Eigen::Matrix<T, 3, 3>;

template <typename T>
using VecX = Eigen::Matrix<T, Eigen::Dynamic, 1>;

/// Row-per-vertex storage, one (x, y, z) or (r, g, b) triple per row.
template <typename T>
using MatX3 = Eigen::Matrix<T, Eigen::Dynamic, 3>;

/// 31 landmark positions in pixels, one (u, v) row per landmark.
template <typename T>
using Landmarks2D = Eigen::Matrix<T, num_landmarks, 2>;

using Vec3d = Vec3<double>;
using Mat3d = Mat3<double>;
using VecXd = VecX<double>;
using MatX3d = MatX3<double>;
using Landmarks2Dd = Landmarks2D<double>;

/// Whether a mesh lives in the model (canonical) frame or has been posed into
/// the camera frame. The camera looks down +z.
enum class Frame { model, camera };

/// A 3D point at or behind the camera was asked to project. Carries the
/// offending landmark index when raised by project_landmarks.
struct DepthNonPositive : public std::runtime_error
{
    explicit DepthNonPositive(const std::string& what, int landmark_index = -1)
        : std::runtime_error(what), landmark_index(landmark_index)
    {
    }
    int landmark_index;
};

/// The two gaze directions are (numerically) parallel, so the closest-point
/// construction has no unique solution. Callers fall back to
/// skew_distance_parallel.
struct ParallelGaze : public std::runtime_error
{
    explicit ParallelGaze(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gazefit

#endif /* GAZEFIT_TYPES_HPP */
