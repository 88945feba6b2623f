/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: include/gazefit/model.hpp
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

#ifndef GAZEFIT_MODEL_HPP
#define GAZEFIT_MODEL_HPP

#include "gazefit/rotation.hpp"
#include "gazefit/types.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gazefit {

/**
 * @brief Linear eye-region morphable model: mean mesh plus shape and
 * per-vertex colour principal components, with the vertex bookkeeping the
 * fitting pipeline needs (landmarks, eyeball vertex sets, outer eye corners).
 *
 * Coordinates are metres in the model frame; colours are unitless [0,1].
 */
struct LinearBasis
{
    int n_vertices = 0;
    MatX3d mean_shape;                       // n_vertices x 3
    std::vector<MatX3d> shape_components;    // each n_vertices x 3
    MatX3d mean_color;                       // n_vertices x 3
    std::vector<MatX3d> color_components;    // each n_vertices x 3
    std::vector<std::array<int, 3>> faces;   // triangle vertex indices
    std::array<int, num_landmarks> landmark_indices{};
    std::vector<int> left_eyeball_indices;
    std::vector<int> right_eyeball_indices;
    int left_eye_outer_corner = 0;
    int right_eye_outer_corner = 0;

    int num_shape_components() const { return static_cast<int>(shape_components.size()); }
    int num_color_components() const { return static_cast<int>(color_components.size()); }
};

struct ShapeParams
{
    VecXd z_s;
};

struct ColorParams
{
    VecXd z_a;
};

/// Rigid pose plus isotropic scale: v -> f * R(r) * v + t.
template <typename T>
struct PoseParams
{
    Vec3<T> rotation;    // axis-angle, radians
    Vec3<T> translation; // metres, camera frame
    T scale;             // f > 0
};

using PoseParamsd = PoseParams<double>;

template <typename T>
struct EyeRegionMesh
{
    MatX3<T> vertices; // n_vertices x 3, metres
    MatX3d colors;     // n_vertices x 3, may be empty when only geometry is needed
    Frame frame = Frame::model;
};

using EyeRegionMeshd = EyeRegionMesh<double>;

/// Throws std::invalid_argument when index lists are out of range, the
/// landmark list is not 31 long, or the eyeball sets overlap.
inline void validate(const LinearBasis& basis)
{
    const int n = basis.n_vertices;
    if (basis.mean_shape.rows() != n)
        throw std::invalid_argument("basis: mean_shape row count does not match n_vertices");
    if (basis.mean_color.rows() != 0 && basis.mean_color.rows() != n)
        throw std::invalid_argument("basis: mean_color row count does not match n_vertices");
    for (const auto& component : basis.shape_components)
        if (component.rows() != n)
            throw std::invalid_argument("basis: shape component row count does not match n_vertices");
    for (const auto& component : basis.color_components)
        if (component.rows() != n)
            throw std::invalid_argument("basis: color component row count does not match n_vertices");

    auto check_index = [n](int index, const char* what) {
        if (index < 0 || index >= n)
            throw std::invalid_argument(std::string("basis: ") + what + " index out of range");
    };
    for (int index : basis.landmark_indices)
        check_index(index, "landmark");
    for (int index : basis.left_eyeball_indices)
        check_index(index, "left eyeball");
    for (int index : basis.right_eyeball_indices)
        check_index(index, "right eyeball");
    check_index(basis.left_eye_outer_corner, "left outer corner");
    check_index(basis.right_eye_outer_corner, "right outer corner");
    for (const auto& face : basis.faces)
        for (int index : face)
            check_index(index, "face");

    for (int index : basis.left_eyeball_indices)
        if (std::find(basis.right_eyeball_indices.begin(), basis.right_eyeball_indices.end(), index) !=
            basis.right_eyeball_indices.end())
            throw std::invalid_argument("basis: eyeball vertex sets overlap");
    if (basis.left_eyeball_indices.empty() || basis.right_eyeball_indices.empty())
        throw std::invalid_argument("basis: empty eyeball vertex set");
}

/**
 * @brief Reconstructs the eye-region shape as mean plus the weighted sum of
 * the shape components. The result is in the model frame.
 */
template <typename T>
EyeRegionMesh<T> reconstruct_shape(const LinearBasis& basis, const VecX<T>& z_s)
{
    if (z_s.size() != basis.num_shape_components())
        throw std::invalid_argument("reconstruct_shape: coefficient count does not match basis");

    const int n = basis.n_vertices;
    EyeRegionMesh<T> mesh;
    mesh.frame = Frame::model;
    mesh.vertices.resize(n, 3);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 3; ++j)
            mesh.vertices(i, j) = T(basis.mean_shape(i, j));
    for (int k = 0; k < basis.num_shape_components(); ++k)
    {
        const MatX3d& component = basis.shape_components[static_cast<std::size_t>(k)];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 3; ++j)
                mesh.vertices(i, j) = mesh.vertices(i, j) + z_s[k] * component(i, j);
    }
    return mesh;
}

inline EyeRegionMeshd reconstruct_shape(const LinearBasis& basis, const ShapeParams& params)
{
    return reconstruct_shape<double>(basis, params.z_s);
}

/**
 * @brief Per-vertex colour as mean plus weighted components. Values are
 * unclamped; clamp_colors is applied for export only, never inside a loss.
 */
inline MatX3d reconstruct_color(const LinearBasis& basis, const VecXd& z_a)
{
    if (z_a.size() != basis.num_color_components())
        throw std::invalid_argument("reconstruct_color: coefficient count does not match basis");
    MatX3d colors = basis.mean_color;
    for (int k = 0; k < basis.num_color_components(); ++k)
        colors += z_a[k] * basis.color_components[static_cast<std::size_t>(k)];
    return colors;
}

inline MatX3d clamp_colors(MatX3d colors)
{
    return colors.cwiseMax(0.0).cwiseMin(1.0);
}

/**
 * @brief Rigid-plus-scale transform into the camera frame: v -> f R v + t
 * per vertex (column-vector form of the row convention S' = f S R^T + 1 T).
 */
template <typename T>
EyeRegionMesh<T> apply_pose(const EyeRegionMesh<T>& mesh, const PoseParams<T>& pose)
{
    if (mesh.frame != Frame::model)
        throw std::invalid_argument("apply_pose: mesh is already in the camera frame");
    if (!(scalar_value(pose.scale) > 0.0))
        throw std::invalid_argument("apply_pose: scale must be positive");

    const Mat3<T> rotation = rodrigues(pose.rotation);
    EyeRegionMesh<T> posed;
    posed.frame = Frame::camera;
    posed.colors = mesh.colors;
    posed.vertices.resize(mesh.vertices.rows(), 3);
    for (Eigen::Index i = 0; i < mesh.vertices.rows(); ++i)
    {
        for (int row = 0; row < 3; ++row)
        {
            T acc = rotation(row, 0) * mesh.vertices(i, 0) + rotation(row, 1) * mesh.vertices(i, 1) +
                    rotation(row, 2) * mesh.vertices(i, 2);
            posed.vertices(i, row) = pose.scale * acc + pose.translation[row];
        }
    }
    return posed;
}

template <typename T>
Vec3<T> mean_of_vertices(const MatX3<T>& vertices, const std::vector<int>& indices)
{
    if (indices.empty())
        throw std::invalid_argument("mean_of_vertices: empty index set");
    Vec3<T> sum;
    sum[0] = sum[1] = sum[2] = T(0.0);
    for (int index : indices)
        for (int j = 0; j < 3; ++j)
            sum[j] = sum[j] + vertices(index, j);
    const double inv = 1.0 / static_cast<double>(indices.size());
    for (int j = 0; j < 3; ++j)
        sum[j] = sum[j] * inv;
    return sum;
}

/**
 * @brief Gaze origins: the arithmetic mean of each eyeball's vertices on a
 * camera-frame mesh, returned as (left, right).
 */
template <typename T>
std::pair<Vec3<T>, Vec3<T>> eyeball_centres(const EyeRegionMesh<T>& mesh, const LinearBasis& basis)
{
    if (mesh.frame != Frame::camera)
        throw std::invalid_argument("eyeball_centres: mesh must be in the camera frame");
    return {mean_of_vertices(mesh.vertices, basis.left_eyeball_indices),
            mean_of_vertices(mesh.vertices, basis.right_eyeball_indices)};
}

/**
 * @brief Rotates each eyeball's vertices about its own centre; all other
 * vertices are untouched, so eyeball centres are preserved.
 *
 * Both matrices must be proper rotations (orthonormal within 1e-9).
 */
template <typename T>
EyeRegionMesh<T> rotate_eyeballs(const EyeRegionMesh<T>& mesh, const LinearBasis& basis,
                                 const Mat3<T>& rotation_left, const Mat3<T>& rotation_right)
{
    if (mesh.frame != Frame::camera)
        throw std::invalid_argument("rotate_eyeballs: mesh must be in the camera frame");

    auto check = [](const Mat3<T>& rotation) {
        Mat3d plain;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                plain(i, j) = scalar_value(rotation(i, j));
        if (!is_rotation(plain, 1e-9))
            throw std::invalid_argument("rotate_eyeballs: matrix is not a rotation");
    };
    check(rotation_left);
    check(rotation_right);

    EyeRegionMesh<T> rotated = mesh;
    auto rotate_set = [&](const std::vector<int>& indices, const Mat3<T>& rotation) {
        const Vec3<T> centre = mean_of_vertices(mesh.vertices, indices);
        for (int index : indices)
        {
            Vec3<T> offset;
            for (int j = 0; j < 3; ++j)
                offset[j] = mesh.vertices(index, j) - centre[j];
            for (int row = 0; row < 3; ++row)
                rotated.vertices(index, row) = centre[row] + rotation(row, 0) * offset[0] +
                                               rotation(row, 1) * offset[1] + rotation(row, 2) * offset[2];
        }
    };
    rotate_set(basis.left_eyeball_indices, rotation_left);
    rotate_set(basis.right_eyeball_indices, rotation_right);
    return rotated;
}

} // namespace gazefit

#endif /* GAZEFIT_MODEL_HPP */
