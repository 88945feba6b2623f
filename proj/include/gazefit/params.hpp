/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: include/gazefit/params.hpp
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

#ifndef GAZEFIT_PARAMS_HPP
#define GAZEFIT_PARAMS_HPP

#include "gazefit/losses.hpp"
#include "gazefit/types.hpp"

#include <array>
#include <stdexcept>

namespace gazefit {

/**
 * @brief Layout of the flat optimisable vector:
 * [ z_S (K_S) | z_A (K_A) | r (3) | T (3) | log_f (1) | z_E (4) ]
 * with z_E ordered (elev_l, azim_l, elev_r, azim_r). Scale enters as log_f
 * so f = exp(log_f) stays positive without constraints.
 */
struct ParamLayout
{
    int k_shape = 0;
    int k_color = 0;

    int size() const { return k_shape + k_color + 11; }
    int shape_offset() const { return 0; }
    int color_offset() const { return k_shape; }
    int rotation_offset() const { return k_shape + k_color; }
    int translation_offset() const { return k_shape + k_color + 3; }
    int log_scale_offset() const { return k_shape + k_color + 6; }
    int gaze_offset() const { return k_shape + k_color + 7; }
};

/// The flat vector split into named pieces, on any scalar type.
template <typename T>
struct Params
{
    VecX<T> z_shape;
    VecX<T> z_color;
    Vec3<T> rotation;
    Vec3<T> translation;
    T log_scale;
    std::array<T, 4> gaze; // (elev_l, azim_l, elev_r, azim_r)
};

template <typename T>
Params<T> unpack(const VecX<T>& x, const ParamLayout& layout)
{
    if (x.size() != layout.size())
        throw std::invalid_argument("unpack: parameter vector length does not match layout");
    Params<T> p;
    p.z_shape = x.segment(layout.shape_offset(), layout.k_shape);
    p.z_color = x.segment(layout.color_offset(), layout.k_color);
    for (int j = 0; j < 3; ++j)
    {
        p.rotation[j] = x[layout.rotation_offset() + j];
        p.translation[j] = x[layout.translation_offset() + j];
    }
    p.log_scale = x[layout.log_scale_offset()];
    for (int j = 0; j < 4; ++j)
        p.gaze[static_cast<std::size_t>(j)] = x[layout.gaze_offset() + j];
    return p;
}

inline VecXd pack(const Params<double>& p, const ParamLayout& layout)
{
    VecXd x(layout.size());
    x.segment(layout.shape_offset(), layout.k_shape) = p.z_shape;
    x.segment(layout.color_offset(), layout.k_color) = p.z_color;
    for (int j = 0; j < 3; ++j)
    {
        x[layout.rotation_offset() + j] = p.rotation[j];
        x[layout.translation_offset() + j] = p.translation[j];
    }
    x[layout.log_scale_offset()] = p.log_scale;
    for (int j = 0; j < 4; ++j)
        x[layout.gaze_offset() + j] = p.gaze[static_cast<std::size_t>(j)];
    return x;
}

/// How the fitter computes derivatives of the total loss.
enum class GradientMode { forward_ad, finite_difference };

/**
 * @brief Knobs for the damped-Newton fit: iteration budget, stopping
 * tolerances, damping schedule, gradient mode, loss weights and the loss
 * reading.
 *
 * literal_norm_mode on takes the L1-style losses to their fourth power:
 * smooth with residual-amplified gradients, a wide basin that damped Newton
 * crosses well from cold starts, but with weak pull at small residuals.
 * Off uses plain L1 (optionally rounded by l1_smoothing), which is sharp at
 * the optimum. fit_schedule runs the two in sequence.
 */
struct FitConfig
{
    int max_iters = 300;
    double loss_tol = 0.0;     // stop when an accepted step decreases the loss by less (0: off)
    double step_tol = 1e-10;   // stop when an accepted step is shorter (max-norm)
    double init_damping = 1e-3;
    double damping_up = 4.0;
    double damping_down = 0.1; // well under 1/damping_up, so damping decays after hard stretches
    GradientMode gradient_mode = GradientMode::forward_ad;
    LossWeights weights;
    bool literal_norm_mode = true; // take the L1-style losses to the 4th power
    double l1_smoothing = 0.0;     // smooth-L1 mu when literal_norm_mode is off

    double k_range = 2.5; // ray-parameter range for the target-loss point (see EvalOptions)

    // fit_schedule: fourth-power stage (wide basin), then a smooth-L1
    // refinement stage (sharp blended optimum).
    bool two_stage = true;
    int refine_iters = 200;
    double refine_smoothing = 0.06;

    NormPowers powers() const
    {
        if (literal_norm_mode)
            return NormPowers::literal();
        NormPowers p;
        p.smoothing = l1_smoothing;
        return p;
    }

    EvalOptions eval_options() const
    {
        EvalOptions options;
        options.powers = powers();
        options.k_range = k_range;
        return options;
    }

    void check() const
    {
        if (max_iters < 0)
            throw std::invalid_argument("fit config: max_iters must be nonnegative");
        if (!(init_damping > 0.0) || !(damping_up > 1.0) || !(damping_down > 0.0) || damping_down >= 1.0)
            throw std::invalid_argument("fit config: damping values out of range");
        if (!(loss_tol >= 0.0) || !(step_tol >= 0.0))
            throw std::invalid_argument("fit config: tolerances must be nonnegative");
        if (refine_iters < 0 || l1_smoothing < 0.0 || refine_smoothing < 0.0)
            throw std::invalid_argument("fit config: refinement values out of range");
        weights.check();
    }
};

} // namespace gazefit

#endif /* GAZEFIT_PARAMS_HPP */
