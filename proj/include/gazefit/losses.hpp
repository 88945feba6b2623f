/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: include/gazefit/losses.hpp
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

#ifndef GAZEFIT_LOSSES_HPP
#define GAZEFIT_LOSSES_HPP

#include "gazefit/dual.hpp"
#include "gazefit/types.hpp"
#include "gazefit/vergence.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace gazefit {

inline double pow_positive(double base, double exponent) { return std::pow(base, exponent); }
template <typename T>
Dual<T> pow_positive(const Dual<T>& base, double exponent)
{
    const T value = pow_positive(base.v, exponent);
    return {value, exponent * value / base.v * base.d};
}

/**
 * @brief (sum_i |x_i|^q)^(p/q) over a coordinate span, for q in {1, 2} and
 * p > 0.
 *
 * Unifies the plain squared-L2 penalty (q=2, p=2), plain L1 (q=1, p=1) and
 * the fourth-power-of-L1 form (q=1, p=4). Smooth everywhere except the q=1
 * kinks, where the subgradient 0 is used.
 *
 * A positive `mu` switches |x| to its smooth-L1 reading
 * sqrt(x^2 + mu^2) - mu, which removes the kinks (mu = 0 keeps the exact
 * form). The fitter's refinement stage uses a small mu so the L1-style
 * losses blend rather than stick at whichever residual hits zero first.
 */
template <typename T, typename Span>
T norm_pow(const Span& x, int q, double p, double mu = 0.0)
{
    using std::abs;
    using std::sqrt;
    if (q != 1 && q != 2)
        throw std::invalid_argument("norm_pow: q must be 1 or 2");
    if (!(p > 0.0))
        throw std::invalid_argument("norm_pow: p must be positive");

    T sum(0.0);
    for (const auto& xi : x)
    {
        if (q == 1)
        {
            const T value(xi);
            if (mu > 0.0)
                sum = sum + (sqrt(value * value + mu * mu) - mu);
            else
                sum = sum + abs(value);
        }
        else
            sum = sum + T(xi) * T(xi);
    }
    const double exponent = p / static_cast<double>(q);
    if (exponent == 1.0)
        return sum;
    const double rounded = std::round(exponent);
    if (std::abs(exponent - rounded) < 1e-12 && rounded >= 1.0)
        return ipow(sum, static_cast<int>(rounded));
    // Non-integer exponent; fine away from 0, and 0 maps to 0 for p > q.
    if (!(scalar_value(sum) > 0.0))
        return T(0.0);
    return pow_positive(sum, exponent);
}

/// Exponents applied to the L1-style losses, plus the optional smooth-L1
/// rounding radius. The default reads the fourth powers as plain L1;
/// literal mode keeps the printed (sum |x|)^4 form.
struct NormPowers
{
    double origin = 1.0;
    double target = 1.0;
    double gaze = 1.0;
    double smoothing = 0.0; // smooth-L1 mu passed through to norm_pow

    static NormPowers literal() { return {4.0, 4.0, 4.0, 0.0}; }
};

/// Evaluation options: the norm exponents plus the ray-parameter range used
/// when forming the target-loss point (see evaluate).
struct EvalOptions
{
    NormPowers powers{};
    /// The target-loss midpoint clamps each ray parameter to +-this range
    /// (metres). It bounds the otherwise unbounded closest point of
    /// near-parallel rays; keep it above the largest plausible gaze-target
    /// distance so it never binds near a solution.
    double k_range = 2.5;

    static EvalOptions literal()
    {
        EvalOptions options;
        options.powers = NormPowers::literal();
        return options;
    }
};

/**
 * @brief Weights for the 7-component loss vector, plus the three group
 * multipliers used for coarse tuning and ablations:
 * group 1 = {pixel, landmark, reg}, group 2 = {gaze}, group 3 = {target,
 * origin, skew}.
 *
 * The pixel weight is fixed at 0 here (no renderer in this toolkit; the slot
 * is kept so the loss vector keeps its 7-arity). `behind` weights the
 * behind-the-head penalty and defaults to 0 (diagnostic only).
 */
struct LossWeights
{
    double pixel = 0.0;
    double landmark = 1.0;
    double origin = 1.0;
    double target = 1.0;
    double skew = 1.0;
    double gaze = 1.0;
    double reg = 1.0;
    double behind = 0.0;

    double group1 = 1.0;
    double group2 = 1.0;
    double group3 = 1.0;

    /// Per-component weights with the group multipliers folded in.
    LossWeights resolved() const
    {
        LossWeights w = *this;
        w.pixel = pixel * group1;
        w.landmark = landmark * group1;
        w.reg = reg * group1;
        w.gaze = gaze * group2;
        w.target = target * group3;
        w.origin = origin * group3;
        w.skew = skew * group3;
        w.group1 = w.group2 = w.group3 = 1.0;
        return w;
    }

    void check() const
    {
        for (double w : {pixel, landmark, origin, target, skew, gaze, reg, behind, group1, group2, group3})
            if (w < 0.0 || !std::isfinite(w))
                throw std::invalid_argument("loss weights must be nonnegative and finite");
    }
};

/// The 7 loss components in the fixed order
/// (pixel, landmark, origin, target, skew, gaze, reg). Inactive components
/// (missing supervision) hold 0 and are flagged in the active mask.
template <typename T>
struct LossVector
{
    T pixel{0.0};
    T landmark{0.0};
    T origin{0.0};
    T target{0.0};
    T skew{0.0};
    T gaze{0.0};
    T reg{0.0};

    std::array<bool, 7> active{false, false, false, false, false, false, false};

    std::array<T, 7> as_array() const { return {pixel, landmark, origin, target, skew, gaze, reg}; }
};

using LossVectord = LossVector<double>;

/**
 * @brief Ground-truth supervision for one frame/scene. Landmarks are always
 * needed for alignment and initialisation; the 3D channels are optional and
 * simply deactivate their losses when absent.
 */
struct Observations
{
    Landmarks2Dd landmarks;
    std::optional<Vec3d> target;
    std::optional<std::array<Vec3d, 2>> origins; // (left, right)
    std::optional<std::array<double, 4>> gaze;   // (elev_l, azim_l, elev_r, azim_r)
};

/// Gaze-origin loss: sum over both eyes of norm_pow(predicted - truth; q=1, p).
template <typename T>
T loss_origin(const Vec3<T>& origin_left, const Vec3<T>& origin_right, const std::array<Vec3d, 2>& truth,
              double p = 1.0, double mu = 0.0)
{
    std::array<T, 3> diff_l{origin_left[0] - truth[0][0], origin_left[1] - truth[0][1],
                            origin_left[2] - truth[0][2]};
    std::array<T, 3> diff_r{origin_right[0] - truth[1][0], origin_right[1] - truth[1][1],
                            origin_right[2] - truth[1][2]};
    return norm_pow<T>(diff_l, 1, p, mu) + norm_pow<T>(diff_r, 1, p, mu);
}

/// Landmark loss: sum of squared differences over all 62 pixel coordinates.
template <typename T>
T loss_landmark(const Landmarks2D<T>& predicted, const Landmarks2Dd& truth)
{
    T sum(0.0);
    for (int i = 0; i < num_landmarks; ++i)
        for (int j = 0; j < 2; ++j)
        {
            const T diff = predicted(i, j) - truth(i, j);
            sum = sum + diff * diff;
        }
    return sum;
}

/// Gaze-target loss: norm_pow(predicted - truth; q=1, p).
template <typename T>
T loss_target(const Vec3<T>& predicted, const Vec3d& truth, double p = 1.0, double mu = 0.0)
{
    std::array<T, 3> diff{predicted[0] - truth[0], predicted[1] - truth[1], predicted[2] - truth[2]};
    return norm_pow<T>(diff, 1, p, mu);
}

/// Skew loss d^2: squared length of the shortest segment between the gaze lines.
template <typename T>
T loss_skew(const VergenceSolution<T>& solution)
{
    return solution.distance_squared;
}

/// Gaze-pose loss over the 4 stacked angles: norm_pow(predicted - truth; q=1, p).
template <typename T>
T loss_gaze(const std::array<T, 4>& predicted, const std::array<double, 4>& truth, double p = 1.0,
            double mu = 0.0)
{
    std::array<T, 4> diff{predicted[0] - truth[0], predicted[1] - truth[1], predicted[2] - truth[2],
                          predicted[3] - truth[3]};
    return norm_pow<T>(diff, 1, p, mu);
}

/// Shape/colour regulariser |z_S|^2 + |z_A|^2.
template <typename T>
T loss_reg(const VecX<T>& z_s, const VecX<T>& z_a)
{
    T sum(0.0);
    for (Eigen::Index i = 0; i < z_s.size(); ++i)
        sum = sum + z_s[i] * z_s[i];
    for (Eigen::Index i = 0; i < z_a.size(); ++i)
        sum = sum + z_a[i] * z_a[i];
    return sum;
}

/// Penalty for gaze lines whose closest point lies behind an eye:
/// sum_i max(0, -k_i)^2. Weighted 0 by default; the diverging flags are
/// always reported regardless.
template <typename T>
T penalty_behind(const VergenceSolution<T>& solution)
{
    T penalty(0.0);
    if (scalar_value(solution.k_left) < 0.0)
        penalty = penalty + solution.k_left * solution.k_left;
    if (scalar_value(solution.k_right) < 0.0)
        penalty = penalty + solution.k_right * solution.k_right;
    return penalty;
}

/**
 * @brief Linear combination of the 7 components with the (resolved) weights.
 * Inactive components contribute exactly 0 regardless of their weight, and
 * the summation order is fixed so repeated evaluations are bit-identical.
 */
template <typename T>
T combine(const LossVector<T>& losses, const LossWeights& weights)
{
    weights.check();
    const LossWeights w = weights.resolved();
    const std::array<double, 7> lambda{w.pixel, w.landmark, w.origin, w.target, w.skew, w.gaze, w.reg};
    const auto values = losses.as_array();
    T total(0.0);
    for (int i = 0; i < 7; ++i)
    {
        if (!losses.active[static_cast<std::size_t>(i)])
            continue;
        total = total + lambda[static_cast<std::size_t>(i)] * values[static_cast<std::size_t>(i)];
    }
    return total;
}

} // namespace gazefit

#endif /* GAZEFIT_LOSSES_HPP */
