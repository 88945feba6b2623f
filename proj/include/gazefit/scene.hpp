/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: include/gazefit/scene.hpp
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

#ifndef GAZEFIT_SCENE_HPP
#define GAZEFIT_SCENE_HPP

#include "gazefit/camera.hpp"
#include "gazefit/evaluate.hpp"
#include "gazefit/model.hpp"
#include "gazefit/params.hpp"
#include "gazefit/rng.hpp"
#include "gazefit/vergence.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace gazefit {

/// Observation noise: i.i.d. Gaussian per landmark pixel coordinate and per
/// target coordinate. The gaze ground truth is derived from a noisy target
/// sample per eye (the way target-based datasets derive gaze labels), so the
/// target sigma also controls gaze-label noise.
struct NoiseSpec
{
    double landmark_px = 0.0;
    double target_m = 0.0;
};

/// Sampling ranges for synthetic scenes. Defaults put the face 0.8-1.2 m in
/// front of the camera with the gaze target in a frustum box at 0.3-1.5 m
/// depth; the feasibility margins reject targets too close to the eyes or
/// outside the modelled gaze-angle range.
struct SceneRanges
{
    double face_depth_min = 0.8;
    double face_depth_max = 1.2;
    double face_lateral = 0.08;
    double rotation_max = 0.26;
    double scale_min = 0.92;
    double scale_max = 1.08;
    double shape_sigma = 0.5;
    double color_sigma = 0.5;
    double target_depth_min = 0.3;
    double target_depth_max = 1.5;
    double target_x_fraction = 0.30;
    double target_y_fraction = 0.22;
    double gaze_angle_max = 0.7;        // radians, per eye, per angle
    double min_target_clearance = 0.15; // target depth beyond the eyes, metres
    double min_target_distance = 0.25;  // eye-to-target distance, metres
    int max_retries = 2000;
};

/**
 * @brief One synthetic ground-truth scene: the true parameter vector, the
 * (possibly noisy) observations generated from it, and the noise that was
 * applied. At zero noise the observations are exactly the forward model of
 * true_params, and the two true gaze rays intersect the target exactly.
 */
struct SyntheticScene
{
    VecXd true_params;
    Observations obs;
    Vec3d true_target = Vec3d::Zero();
    NoiseSpec noise;
    std::uint64_t seed = 0;
};

/**
 * @brief Samples one scene: shape/colour coefficients from Gaussians, pose
 * within the ranges, then a gaze target in the frustum box such that both
 * eyes can look at it within the modelled angle range. The gaze angles are
 * solved from the eye centres and the target, so the true rays meet the
 * target with zero skew by construction. Deterministic per seed.
 *
 * Throws std::runtime_error when no feasible pose/target pair is found
 * within the retry budget.
 */
inline SyntheticScene generate_scene(const LinearBasis& basis, const CameraIntrinsics& cam,
                                     const SceneRanges& ranges, const NoiseSpec& noise, std::uint64_t seed)
{
    Rng rng(seed);
    const ParamLayout layout{basis.num_shape_components(), basis.num_color_components()};

    for (int attempt = 0; attempt < ranges.max_retries; ++attempt)
    {
        Params<double> p;
        p.z_shape = VecXd(layout.k_shape);
        for (Eigen::Index i = 0; i < p.z_shape.size(); ++i)
            p.z_shape[i] = rng.normal(0.0, ranges.shape_sigma);
        p.z_color = VecXd(layout.k_color);
        for (Eigen::Index i = 0; i < p.z_color.size(); ++i)
            p.z_color[i] = rng.normal(0.0, ranges.color_sigma);
        for (int j = 0; j < 3; ++j)
            p.rotation[j] = rng.uniform(-ranges.rotation_max, ranges.rotation_max);
        p.translation[0] = rng.uniform(-ranges.face_lateral, ranges.face_lateral);
        p.translation[1] = rng.uniform(-ranges.face_lateral, ranges.face_lateral);
        p.translation[2] = rng.uniform(ranges.face_depth_min, ranges.face_depth_max);
        p.log_scale = std::log(rng.uniform(ranges.scale_min, ranges.scale_max));
        p.gaze = {0.0, 0.0, 0.0, 0.0};

        const double target_depth = rng.uniform(ranges.target_depth_min, ranges.target_depth_max);
        Vec3d target;
        target[0] = rng.uniform(-ranges.target_x_fraction, ranges.target_x_fraction) * target_depth;
        target[1] = rng.uniform(-ranges.target_y_fraction, ranges.target_y_fraction) * target_depth;
        target[2] = target_depth;

        const EyeRegionMesh<double> posed =
            apply_pose(reconstruct_shape<double>(basis, p.z_shape),
                       PoseParams<double>{p.rotation, p.translation, std::exp(p.log_scale)});
        const auto [origin_left, origin_right] = eyeball_centres(posed, basis);

        bool feasible = true;
        GazeAngles angles[2];
        const Vec3d origins[2] = {origin_left, origin_right};
        for (int eye = 0; eye < 2 && feasible; ++eye)
        {
            const Vec3d to_target = target - origins[eye];
            if (to_target[2] < ranges.min_target_clearance || to_target.norm() < ranges.min_target_distance)
            {
                feasible = false;
                break;
            }
            angles[eye] = gaze_angles_for_direction(to_target);
            if (std::abs(angles[eye].elevation) > ranges.gaze_angle_max ||
                std::abs(angles[eye].azimuth) > ranges.gaze_angle_max)
                feasible = false;
        }
        if (!feasible)
            continue;

        Landmarks2Dd landmarks;
        try
        {
            landmarks = project_landmarks(cam, posed, basis);
        }
        catch (const DepthNonPositive&)
        {
            continue;
        }

        p.gaze = {angles[0].elevation, angles[0].azimuth, angles[1].elevation, angles[1].azimuth};

        SyntheticScene scene;
        scene.seed = seed;
        scene.noise = noise;
        scene.true_params = pack(p, layout);
        scene.true_target = target;

        // Noise draws happen in a fixed order: landmarks, target, then the
        // per-eye target samples behind the gaze labels.
        if (noise.landmark_px > 0.0)
            for (int i = 0; i < num_landmarks; ++i)
                for (int j = 0; j < 2; ++j)
                    landmarks(i, j) += rng.normal(0.0, noise.landmark_px);
        scene.obs.landmarks = landmarks;

        Vec3d observed_target = target;
        if (noise.target_m > 0.0)
            for (int j = 0; j < 3; ++j)
                observed_target[j] += rng.normal(0.0, noise.target_m);
        scene.obs.target = observed_target;

        scene.obs.origins = {{origin_left, origin_right}};

        std::array<double, 4> gaze_label{};
        for (int eye = 0; eye < 2; ++eye)
        {
            Vec3d labelled_target = target;
            if (noise.target_m > 0.0)
                for (int j = 0; j < 3; ++j)
                    labelled_target[j] += rng.normal(0.0, noise.target_m);
            const GazeAngles label = noise.target_m > 0.0
                                         ? gaze_angles_for_direction(labelled_target - origins[eye])
                                         : angles[eye];
            gaze_label[static_cast<std::size_t>(2 * eye)] = label.elevation;
            gaze_label[static_cast<std::size_t>(2 * eye + 1)] = label.azimuth;
        }
        scene.obs.gaze = gaze_label;

        return scene;
    }
    throw std::runtime_error("generate_scene: no feasible pose/target found within the retry budget");
}

} // namespace gazefit

#endif /* GAZEFIT_SCENE_HPP */
