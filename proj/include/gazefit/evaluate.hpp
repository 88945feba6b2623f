/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: include/gazefit/evaluate.hpp
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

#ifndef GAZEFIT_EVALUATE_HPP
#define GAZEFIT_EVALUATE_HPP

#include "gazefit/camera.hpp"
#include "gazefit/losses.hpp"
#include "gazefit/model.hpp"
#include "gazefit/params.hpp"
#include "gazefit/vergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gazefit {

/// One full loss evaluation: the 7-component loss vector, its weighted total,
/// and scalar diagnostics of the vergence state at this point.
template <typename T>
struct EvalOutcome
{
    LossVector<T> losses;
    T total{0.0};

    bool parallel_gaze = false;
    bool diverging_left = false;
    bool diverging_right = false;
    double k_left = 0.0;
    double k_right = 0.0;
    /// Smallest |residual| feeding any active L1 term; coordinates this close
    /// to a kink are excluded from finite-difference gradient comparisons.
    double min_l1_residual = std::numeric_limits<double>::infinity();
};

using EvalOutcomed = EvalOutcome<double>;

/**
 * @brief Runs the full forward pipeline at a parameter vector and scores it:
 * shape reconstruction, posing, eyeball-centre extraction, per-eye gaze
 * rays, the vergence solve and landmark projection, then every active loss
 * and their weighted combination.
 *
 * Deterministic; templated on the scalar so dual-number evaluations provide
 * derivatives. Throws DepthNonPositive when a landmark is at or behind the
 * camera (the fitter treats that as a rejected step).
 */
template <typename T>
EvalOutcome<T> evaluate(const VecX<T>& x, const ParamLayout& layout, const LinearBasis& basis,
                        const CameraIntrinsics& cam, const Observations& obs, const LossWeights& weights,
                        const EvalOptions& options = {})
{
    const NormPowers& powers = options.powers;
    using std::exp;

    const Params<T> p = unpack(x, layout);
    EvalOutcome<T> out;

    const EyeRegionMesh<T> shape = reconstruct_shape<T>(basis, p.z_shape);
    PoseParams<T> pose{p.rotation, p.translation, exp(p.log_scale)};
    if (!(scalar_value(pose.scale) > 0.0)) // exp underflow: the mesh would collapse
        throw DepthNonPositive("evaluate: scale underflowed to zero");
    const EyeRegionMesh<T> posed = apply_pose(shape, pose);
    const auto [origin_left, origin_right] = eyeball_centres(posed, basis);

    GazeRay<T> ray_left{origin_left, gaze_vector(p.gaze[0], p.gaze[1])};
    GazeRay<T> ray_right{origin_right, gaze_vector(p.gaze[2], p.gaze[3])};

    auto track_residual = [&out](double r) { out.min_l1_residual = std::min(out.min_l1_residual, std::abs(r)); };

    // Landmark loss (always supervised).
    const Landmarks2D<T> landmarks = project_landmarks(cam, posed, basis);
    out.losses.landmark = loss_landmark(landmarks, obs.landmarks);
    out.losses.active[1] = true;

    // Vergence geometry. The skew loss uses the exact squared segment
    // length. The target loss uses the closest-point midpoint whenever both
    // ray parameters lie within +-options.k_range, which covers every
    // physically sensible state (|k| is the eye-target distance). Outside
    // that range the midpoint runs off towards the near-parallel pole and
    // would wall off the convergent basin from a zero-gaze start, so the
    // loss switches to aiming each eye's k_range point at the target: its
    // per-eye bearings differ across the interocular baseline, which opens
    // the vergence towards the target until the ray parameters re-enter the
    // physical range (aiming at a target nearer than k_range always does).
    const double k_loss_range = options.k_range;
    T behind(0.0);
    bool physical_range = false;
    Vec3<T> loss_target_point;
    try
    {
        const VergenceSolution<T> solution = solve_vergence(ray_left, ray_right);
        out.losses.skew = loss_skew(solution);
        out.k_left = scalar_value(solution.k_left);
        out.k_right = scalar_value(solution.k_right);
        out.diverging_left = solution.diverging_left;
        out.diverging_right = solution.diverging_right;
        behind = penalty_behind(solution);
        physical_range = std::abs(out.k_left) <= k_loss_range && std::abs(out.k_right) <= k_loss_range;
        if (physical_range)
            loss_target_point = solution.target;
    }
    catch (const ParallelGaze&)
    {
        out.parallel_gaze = true;
        out.losses.skew = skew_distance_parallel_squared(ray_left, ray_right);
    }
    out.losses.active[4] = true;

    if (obs.target)
    {
        if (physical_range)
        {
            out.losses.target = loss_target(loss_target_point, *obs.target, powers.target, powers.smoothing);
            for (int j = 0; j < 3; ++j)
                track_residual(scalar_value(loss_target_point[j]) - (*obs.target)[j]);
        }
        else
        {
            Vec3<T> far_left, far_right;
            for (int j = 0; j < 3; ++j)
            {
                far_left[j] = ray_left.origin[j] + k_loss_range * ray_left.direction[j];
                far_right[j] = ray_right.origin[j] + k_loss_range * ray_right.direction[j];
            }
            out.losses.target = 0.5 * (loss_target(far_left, *obs.target, powers.target, powers.smoothing) +
                                       loss_target(far_right, *obs.target, powers.target, powers.smoothing));
            for (int j = 0; j < 3; ++j)
            {
                track_residual(scalar_value(far_left[j]) - (*obs.target)[j]);
                track_residual(scalar_value(far_right[j]) - (*obs.target)[j]);
            }
        }
        out.losses.active[3] = true;
    }

    if (obs.origins)
    {
        out.losses.origin = loss_origin(origin_left, origin_right, *obs.origins, powers.origin, powers.smoothing);
        out.losses.active[2] = true;
        for (int j = 0; j < 3; ++j)
        {
            track_residual(scalar_value(origin_left[j]) - (*obs.origins)[0][j]);
            track_residual(scalar_value(origin_right[j]) - (*obs.origins)[1][j]);
        }
    }
    if (obs.gaze)
    {
        out.losses.gaze = loss_gaze(p.gaze, *obs.gaze, powers.gaze, powers.smoothing);
        out.losses.active[5] = true;
        for (int j = 0; j < 4; ++j)
            track_residual(scalar_value(p.gaze[static_cast<std::size_t>(j)]) -
                           (*obs.gaze)[static_cast<std::size_t>(j)]);
    }

    out.losses.reg = loss_reg(p.z_shape, p.z_color);
    out.losses.active[6] = true;

    out.total = combine(out.losses, weights);
    if (weights.behind > 0.0)
        out.total = out.total + weights.behind * behind;
    return out;
}

} // namespace gazefit

#endif /* GAZEFIT_EVALUATE_HPP */
