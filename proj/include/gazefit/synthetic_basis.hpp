/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: include/gazefit/synthetic_basis.hpp
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

#ifndef GAZEFIT_SYNTHETIC_BASIS_HPP
#define GAZEFIT_SYNTHETIC_BASIS_HPP

#include "gazefit/model.hpp"
#include "gazefit/rng.hpp"
#include "gazefit/types.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace gazefit {

/**
 * @brief Settings for the procedurally generated eye-region basis: two
 * UV-sphere eyeballs plus a brow/nose surface patch, with 31 landmarks
 * (5+5 eyebrow, 6+6 eye-contour, 4 nose-ridge + 5 nose-bottom points).
 *
 * This stands in for bases derived from licensed face models; externally
 * built bases plug in through the same JSON schema.
 */
struct SyntheticBasisConfig
{
    int shape_components = 8;
    int color_components = 4;
    int eyeball_rings = 5;    // latitude rings between the two poles
    int eyeball_segments = 8; // longitude segments
    double eyeball_radius = 0.012;  // metres
    double interocular = 0.064;     // distance between eyeball centres, metres
    int grid_cols = 9;
    int grid_rows = 7;
};

namespace detail {

struct BasisBuilder
{
    std::vector<Vec3d> vertices;
    std::vector<Vec3d> colors;
    std::vector<std::array<int, 3>> faces;

    int add_vertex(double x, double y, double z, const Vec3d& color)
    {
        vertices.push_back(Vec3d(x, y, z));
        colors.push_back(color);
        return static_cast<int>(vertices.size()) - 1;
    }

    void add_face(int a, int b, int c) { faces.push_back({a, b, c}); }
};

/// Adds a UV sphere; returns all its vertex indices (front pole first).
inline std::vector<int> add_uv_sphere(BasisBuilder& b, const Vec3d& centre, double radius, int rings,
                                      int segments, const Vec3d& color)
{
    std::vector<int> indices;
    const int front = b.add_vertex(centre[0], centre[1], centre[2] + radius, color);
    indices.push_back(front);
    for (int r = 1; r <= rings; ++r)
    {
        const double theta = std::numbers::pi * r / (rings + 1);
        for (int s = 0; s < segments; ++s)
        {
            const double phi = 2.0 * std::numbers::pi * s / segments;
            indices.push_back(b.add_vertex(centre[0] + radius * std::sin(theta) * std::cos(phi),
                                           centre[1] + radius * std::sin(theta) * std::sin(phi),
                                           centre[2] + radius * std::cos(theta), color));
        }
    }
    const int back = b.add_vertex(centre[0], centre[1], centre[2] - radius, color);
    indices.push_back(back);

    auto ring_vertex = [&](int r, int s) { return indices[1 + (r - 1) * segments + (s % segments)]; };
    for (int s = 0; s < segments; ++s)
        b.add_face(front, ring_vertex(1, s), ring_vertex(1, s + 1));
    for (int r = 1; r < rings; ++r)
        for (int s = 0; s < segments; ++s)
        {
            b.add_face(ring_vertex(r, s), ring_vertex(r + 1, s), ring_vertex(r + 1, s + 1));
            b.add_face(ring_vertex(r, s), ring_vertex(r + 1, s + 1), ring_vertex(r, s + 1));
        }
    for (int s = 0; s < segments; ++s)
        b.add_face(back, ring_vertex(rings, s + 1), ring_vertex(rings, s));
    return indices;
}

} // namespace detail

/**
 * @brief Builds the procedural eye-region basis. Deterministic for a given
 * seed: identical seeds produce bit-identical bases.
 *
 * The first two shape components are always the interocular-distance and
 * eyeball-radius modes; further components are fixed facial modes, and any
 * components beyond the built-in eight are smooth seeded deformation fields.
 */
inline LinearBasis synthetic_basis(const SyntheticBasisConfig& config, std::uint64_t seed)
{
    if (config.shape_components < 2)
        throw std::invalid_argument("synthetic_basis: need at least 2 shape components");
    if (config.color_components < 0)
        throw std::invalid_argument("synthetic_basis: negative color component count");
    const int eyeball_vertices = config.eyeball_rings * config.eyeball_segments + 2;
    if (eyeball_vertices < 16 || config.eyeball_rings < 2 || config.eyeball_segments < 4)
        throw std::invalid_argument("synthetic_basis: need at least 16 vertices per eyeball");
    if (config.grid_cols < 4 || config.grid_rows < 4)
        throw std::invalid_argument("synthetic_basis: patch grid too small");
    if (!(config.eyeball_radius > 0.0) || !(config.interocular > 2.0 * config.eyeball_radius))
        throw std::invalid_argument("synthetic_basis: eyeballs must be separated");

    detail::BasisBuilder b;
    const Vec3d skin(0.80, 0.62, 0.50);
    const Vec3d sclera(0.93, 0.92, 0.90);
    const Vec3d brow_color(0.45, 0.32, 0.22);

    const double eye_x = config.interocular / 2.0;
    const Vec3d centre_left(-eye_x, 0.0, 0.0);
    const Vec3d centre_right(eye_x, 0.0, 0.0);

    const std::vector<int> left_eyeball =
        detail::add_uv_sphere(b, centre_left, config.eyeball_radius, config.eyeball_rings,
                              config.eyeball_segments, sclera);
    const std::vector<int> right_eyeball =
        detail::add_uv_sphere(b, centre_right, config.eyeball_radius, config.eyeball_rings,
                              config.eyeball_segments, sclera);

    // Brow/nose patch grid: a gently domed sheet with a nose bump on the midline.
    auto patch_height = [](double x, double y) {
        const double dome = 0.004 - 0.8 * x * x - 0.6 * y * y;
        double nose = 0.0;
        if (std::abs(x) < 0.014 && y > -0.044 && y < 0.014)
        {
            const double across = std::cos(std::numbers::pi * x / 0.028);
            const double along = 0.5 * (1.0 + std::cos(std::numbers::pi * (y + 0.015) / 0.029));
            nose = 0.020 * across * across * along;
        }
        return dome + nose;
    };

    std::vector<std::vector<int>> grid(static_cast<std::size_t>(config.grid_rows));
    for (int row = 0; row < config.grid_rows; ++row)
        for (int col = 0; col < config.grid_cols; ++col)
        {
            const double x = -0.055 + 0.110 * col / (config.grid_cols - 1);
            const double y = 0.042 - 0.090 * row / (config.grid_rows - 1);
            grid[static_cast<std::size_t>(row)].push_back(b.add_vertex(x, y, patch_height(x, y), skin));
        }
    for (int row = 0; row + 1 < config.grid_rows; ++row)
        for (int col = 0; col + 1 < config.grid_cols; ++col)
        {
            const int v00 = grid[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
            const int v01 = grid[static_cast<std::size_t>(row)][static_cast<std::size_t>(col + 1)];
            const int v10 = grid[static_cast<std::size_t>(row + 1)][static_cast<std::size_t>(col)];
            const int v11 = grid[static_cast<std::size_t>(row + 1)][static_cast<std::size_t>(col + 1)];
            b.add_face(v00, v10, v11);
            b.add_face(v00, v11, v01);
        }

    // Eyebrows: a 5-point arc per eye with a support row beneath it.
    std::array<int, num_landmarks> landmarks{};
    int next_landmark = 0;
    for (int eye = 0; eye < 2; ++eye)
    {
        const double cx = eye == 0 ? -eye_x : eye_x;
        std::vector<int> arc, support;
        for (int i = 0; i < 5; ++i)
        {
            const double t = i / 4.0;
            const double x = cx - 0.020 + 0.040 * t;
            const double y = 0.026 + 0.008 * std::sin(std::numbers::pi * t);
            arc.push_back(b.add_vertex(x, y, 0.009, brow_color));
            landmarks[static_cast<std::size_t>(next_landmark++)] = arc.back();
        }
        for (int i = 0; i < 5; ++i)
        {
            const double t = i / 4.0;
            const double x = cx - 0.020 + 0.040 * t;
            const double y = 0.018 + 0.006 * std::sin(std::numbers::pi * t);
            support.push_back(b.add_vertex(x, y, 0.008, skin));
        }
        for (int i = 0; i < 4; ++i)
        {
            b.add_face(arc[static_cast<std::size_t>(i)], support[static_cast<std::size_t>(i)],
                       support[static_cast<std::size_t>(i + 1)]);
            b.add_face(arc[static_cast<std::size_t>(i)], support[static_cast<std::size_t>(i + 1)],
                       arc[static_cast<std::size_t>(i + 1)]);
        }
    }

    // Nose ridge (4 points down the midline) and nose bottom (5-point arc),
    // with side chains so the ridge is part of the triangulation.
    std::vector<int> ridge, side_left, side_right, bottom;
    {
        const double ridge_y[4] = {0.010, -0.004, -0.018, -0.032};
        const double ridge_z[4] = {0.016, 0.020, 0.024, 0.026};
        for (int i = 0; i < 4; ++i)
        {
            ridge.push_back(b.add_vertex(0.0, ridge_y[i], ridge_z[i], skin));
            landmarks[static_cast<std::size_t>(next_landmark++)] = ridge.back();
        }
        for (int i = 0; i < 4; ++i)
            side_left.push_back(b.add_vertex(-0.008, ridge_y[i], ridge_z[i] - 0.006, skin));
        for (int i = 0; i < 4; ++i)
            side_right.push_back(b.add_vertex(0.008, ridge_y[i], ridge_z[i] - 0.006, skin));
        const double bottom_x[5] = {-0.012, -0.006, 0.0, 0.006, 0.012};
        const double bottom_z[5] = {0.014, 0.019, 0.022, 0.019, 0.014};
        for (int i = 0; i < 5; ++i)
        {
            bottom.push_back(b.add_vertex(bottom_x[i], -0.040, bottom_z[i], skin));
            landmarks[static_cast<std::size_t>(next_landmark++)] = bottom.back();
        }
        for (int i = 0; i < 3; ++i)
        {
            b.add_face(side_left[static_cast<std::size_t>(i)], ridge[static_cast<std::size_t>(i)],
                       ridge[static_cast<std::size_t>(i + 1)]);
            b.add_face(side_left[static_cast<std::size_t>(i)], ridge[static_cast<std::size_t>(i + 1)],
                       side_left[static_cast<std::size_t>(i + 1)]);
            b.add_face(ridge[static_cast<std::size_t>(i)], side_right[static_cast<std::size_t>(i)],
                       side_right[static_cast<std::size_t>(i + 1)]);
            b.add_face(ridge[static_cast<std::size_t>(i)], side_right[static_cast<std::size_t>(i + 1)],
                       ridge[static_cast<std::size_t>(i + 1)]);
        }
        for (int i = 0; i < 4; ++i)
            b.add_face(ridge[3], bottom[static_cast<std::size_t>(i)], bottom[static_cast<std::size_t>(i + 1)]);
    }

    // Eye contours: a 6-point loop per eye with a lid centre vertex, sitting
    // just in front of the eyeball. The loop starts at the outer corner.
    int left_outer = 0, right_outer = 0;
    std::vector<int> contour_left, contour_right;
    for (int eye = 0; eye < 2; ++eye)
    {
        const double cx = eye == 0 ? -eye_x : eye_x;
        const double start = eye == 0 ? std::numbers::pi : 0.0; // outer corner first
        std::vector<int>& contour = eye == 0 ? contour_left : contour_right;
        for (int i = 0; i < 6; ++i)
        {
            const double angle = start + 2.0 * std::numbers::pi * i / 6.0;
            const double x = cx + 0.016 * std::cos(angle);
            const double y = 0.008 * std::sin(angle);
            contour.push_back(b.add_vertex(x, y, 0.0085, skin));
            landmarks[static_cast<std::size_t>(next_landmark++)] = contour.back();
        }
        const int lid_centre = b.add_vertex(cx, 0.0, 0.0095, skin);
        for (int i = 0; i < 6; ++i)
            b.add_face(lid_centre, contour[static_cast<std::size_t>(i)],
                       contour[static_cast<std::size_t>((i + 1) % 6)]);
        if (eye == 0)
            left_outer = contour[0];
        else
            right_outer = contour[0];
    }

    const int n = static_cast<int>(b.vertices.size());

    LinearBasis basis;
    basis.n_vertices = n;
    basis.mean_shape.resize(n, 3);
    basis.mean_color.resize(n, 3);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 3; ++j)
        {
            basis.mean_shape(i, j) = b.vertices[static_cast<std::size_t>(i)][j];
            basis.mean_color(i, j) = b.colors[static_cast<std::size_t>(i)][j];
        }
    basis.faces = b.faces;
    basis.landmark_indices = landmarks;
    basis.left_eyeball_indices = left_eyeball;
    basis.right_eyeball_indices = right_eyeball;
    basis.left_eye_outer_corner = left_outer;
    basis.right_eye_outer_corner = right_outer;

    // --- shape components -------------------------------------------------
    auto in_set = [](const std::vector<int>& set, int index) {
        for (int i : set)
            if (i == index)
                return true;
        return false;
    };

    std::vector<MatX3d> modes;
    auto new_mode = [&]() -> MatX3d& {
        modes.emplace_back(MatX3d::Zero(n, 3));
        return modes.back();
    };

    {
        // Mode 0: interocular distance. Eyeballs shift rigidly with their
        // centres; the patch follows a smooth odd field in x.
        MatX3d& mode = new_mode();
        const double delta = 0.0025;
        for (int i = 0; i < n; ++i)
        {
            const bool left = in_set(left_eyeball, i);
            const bool right = in_set(right_eyeball, i);
            const double x = left ? -eye_x : right ? eye_x : basis.mean_shape(i, 0);
            mode(i, 0) = delta * std::tanh(x / 0.02);
        }
    }
    {
        // Mode 1: eyeball radius, radial displacement about each centre.
        MatX3d& mode = new_mode();
        const double delta = 0.0012;
        for (int eye = 0; eye < 2; ++eye)
        {
            const Vec3d& centre = eye == 0 ? centre_left : centre_right;
            const std::vector<int>& set = eye == 0 ? left_eyeball : right_eyeball;
            for (int i : set)
            {
                Vec3d radial = basis.mean_shape.row(i).transpose() - centre;
                radial.normalize();
                mode.row(i) = (delta * radial).transpose();
            }
        }
    }
    {
        // Mode 2: nose length.
        MatX3d& mode = new_mode();
        for (int i : ridge)
            mode.row(i) = Vec3d(0.0, -0.004, 0.002).transpose();
        for (int i : side_left)
            mode.row(i) = Vec3d(0.0, -0.003, 0.0015).transpose();
        for (int i : side_right)
            mode.row(i) = Vec3d(0.0, -0.003, 0.0015).transpose();
        for (int i : bottom)
            mode.row(i) = Vec3d(0.0, -0.005, 0.001).transpose();
    }
    {
        // Mode 3: brow height; everything above y = 0.012 rises smoothly.
        MatX3d& mode = new_mode();
        for (int i = 0; i < n; ++i)
        {
            if (in_set(left_eyeball, i) || in_set(right_eyeball, i))
                continue;
            const double y = basis.mean_shape(i, 1);
            if (y > 0.012)
                mode(i, 1) = 0.004 * std::min(1.0, (y - 0.012) / 0.012);
        }
    }
    {
        // Mode 4: face width; eyeballs shift rigidly.
        MatX3d& mode = new_mode();
        for (int i = 0; i < n; ++i)
        {
            const bool left = in_set(left_eyeball, i);
            const bool right = in_set(right_eyeball, i);
            const double x = left ? -eye_x : right ? eye_x : basis.mean_shape(i, 0);
            mode(i, 0) = 0.003 * (x / 0.055);
        }
    }
    {
        // Mode 5: patch depth curvature.
        MatX3d& mode = new_mode();
        for (int i = 0; i < n; ++i)
        {
            if (in_set(left_eyeball, i) || in_set(right_eyeball, i))
                continue;
            const double x = basis.mean_shape(i, 0);
            const double y = basis.mean_shape(i, 1);
            mode(i, 2) = 0.004 * std::exp(-(x * x + y * y) / 0.002);
        }
    }
    {
        // Mode 6: eye height (eyeballs and contours rise together).
        MatX3d& mode = new_mode();
        for (int i = 0; i < n; ++i)
            if (in_set(left_eyeball, i) || in_set(right_eyeball, i) || in_set(contour_left, i) ||
                in_set(contour_right, i))
                mode(i, 1) = 0.002;
    }
    {
        // Mode 7: nose width.
        MatX3d& mode = new_mode();
        for (int i : side_left)
            mode(i, 0) = -0.003;
        for (int i : side_right)
            mode(i, 0) = 0.003;
        for (int i : bottom)
            mode(i, 0) = 0.003 * std::tanh(basis.mean_shape(i, 0) / 0.006);
    }

    Rng rng(derive_seed(seed, 0xba515));
    while (static_cast<int>(modes.size()) < config.shape_components)
    {
        // Extra modes: smooth seeded deformation fields over the patch.
        MatX3d& mode = new_mode();
        for (int axis = 0; axis < 3; ++axis)
        {
            const double amp = 0.0015;
            const double wx = rng.uniform(20.0, 80.0);
            const double wy = rng.uniform(20.0, 80.0);
            const double phase_x = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double phase_y = rng.uniform(0.0, 2.0 * std::numbers::pi);
            for (int i = 0; i < n; ++i)
            {
                if (in_set(left_eyeball, i) || in_set(right_eyeball, i))
                    continue;
                const double x = basis.mean_shape(i, 0);
                const double y = basis.mean_shape(i, 1);
                mode(i, axis) = amp * std::sin(wx * x + phase_x) * std::cos(wy * y + phase_y);
            }
        }
    }
    modes.resize(static_cast<std::size_t>(config.shape_components), MatX3d::Zero(n, 3));
    basis.shape_components = std::move(modes);

    // --- colour components --------------------------------------------------
    std::vector<MatX3d> color_modes;
    auto new_color_mode = [&]() -> MatX3d& {
        color_modes.emplace_back(MatX3d::Zero(n, 3));
        return color_modes.back();
    };
    if (config.color_components >= 1)
    {
        MatX3d& mode = new_color_mode(); // brightness
        mode.setConstant(0.06);
    }
    if (config.color_components >= 2)
    {
        MatX3d& mode = new_color_mode(); // skin redness, patch only
        for (int i = 0; i < n; ++i)
            if (!in_set(left_eyeball, i) && !in_set(right_eyeball, i))
                mode.row(i) = Vec3d(0.05, -0.01, -0.02).transpose();
    }
    if (config.color_components >= 3)
    {
        MatX3d& mode = new_color_mode(); // sclera tint
        for (int i : left_eyeball)
            mode.row(i) = Vec3d(0.04, 0.04, 0.05).transpose();
        for (int i : right_eyeball)
            mode.row(i) = Vec3d(0.04, 0.04, 0.05).transpose();
    }
    while (static_cast<int>(color_modes.size()) < config.color_components)
    {
        MatX3d& mode = new_color_mode(); // seeded smooth tint field
        const double wx = rng.uniform(10.0, 40.0);
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        for (int i = 0; i < n; ++i)
        {
            const double x = basis.mean_shape(i, 0);
            const double y = basis.mean_shape(i, 1);
            const double v = 0.03 * std::sin(wx * (x + y) + phase);
            mode.row(i) = Vec3d(v, v, v).transpose();
        }
    }
    basis.color_components = std::move(color_modes);

    validate(basis);
    return basis;
}

} // namespace gazefit

#endif /* GAZEFIT_SYNTHETIC_BASIS_HPP */
