/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: include/gazefit/fitter.hpp
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

#ifndef GAZEFIT_FITTER_HPP
#define GAZEFIT_FITTER_HPP

#include "gazefit/evaluate.hpp"
#include "gazefit/params.hpp"

#include <Eigen/Cholesky>

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace gazefit {

/**
 * @brief Outcome of one fit: the final parameters, the per-iteration loss
 * traces over accepted steps (the total trace is nonincreasing by
 * construction), the stop reason and the vergence diagnostics at the final
 * point.
 *
 * wall_time_ms is an in-memory diagnostic only; it is not serialised so a
 * rerun of the same fit produces byte-identical output files.
 */
struct FitResult
{
    VecXd params;
    std::vector<LossVectord> loss_trace;
    std::vector<double> total_trace;
    bool converged = false;
    std::string reason;
    int iterations = 0;
    bool diverging_left = false;
    bool diverging_right = false;
    bool parallel_gaze = false;
    double wall_time_ms = 0.0;
};

namespace detail {

inline double fd_step(double x) { return std::max(1e-6, 1e-6 * std::abs(x)); }

template <typename Evaluate>
VecXd finite_difference_gradient(const VecXd& x, Evaluate&& f)
{
    VecXd grad(x.size());
    VecXd probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i)
    {
        const double h = fd_step(x[i]);
        probe[i] = x[i] + h;
        const double upper = f(probe);
        probe[i] = x[i] - h;
        const double lower = f(probe);
        probe[i] = x[i];
        grad[i] = (upper - lower) / (2.0 * h);
    }
    return grad;
}

} // namespace detail

/**
 * @brief Gradient of the total loss at x, by forward-mode duals (one seeded
 * pass per parameter) or central finite differences, per `mode`.
 *
 * Throws std::runtime_error naming the parameter index if any entry comes
 * out non-finite.
 */
inline VecXd gradient(const VecXd& x, const ParamLayout& layout, const LinearBasis& basis,
                      const CameraIntrinsics& cam, const Observations& obs, const LossWeights& weights,
                      const EvalOptions& options = {}, GradientMode mode = GradientMode::forward_ad)
{
    VecXd grad(x.size());
    if (mode == GradientMode::forward_ad)
    {
        VecX<Dual1> seeded(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i)
            seeded[i] = Dual1(x[i], 0.0);
        for (Eigen::Index i = 0; i < x.size(); ++i)
        {
            seeded[i].d = 1.0;
            grad[i] = evaluate<Dual1>(seeded, layout, basis, cam, obs, weights, options).total.d;
            seeded[i].d = 0.0;
        }
    }
    else
    {
        grad = detail::finite_difference_gradient(x, [&](const VecXd& p) {
            return evaluate<double>(p, layout, basis, cam, obs, weights, options).total;
        });
    }
    for (Eigen::Index i = 0; i < grad.size(); ++i)
        if (!std::isfinite(grad[i]))
            throw std::runtime_error("gradient: non-finite entry at parameter index " + std::to_string(i));
    return grad;
}

namespace detail {

/// Gradient plus Hessian of the total loss. Forward-over-forward duals give
/// the full Hessian; finite-difference mode provides the diagonal only
/// (off-diagonals zero), which the damped solve tolerates.
inline void gradient_and_hessian(const VecXd& x, const ParamLayout& layout, const LinearBasis& basis,
                                 const CameraIntrinsics& cam, const Observations& obs,
                                 const LossWeights& weights, const EvalOptions& options, GradientMode mode,
                                 VecXd& grad, Eigen::MatrixXd& hessian)
{
    const Eigen::Index n = x.size();
    grad.resize(n);
    hessian.setZero(n, n);

    if (mode == GradientMode::forward_ad)
    {
        VecX<Dual2> seeded(n);
        for (Eigen::Index i = 0; i < n; ++i)
            seeded[i] = Dual2(Dual1(x[i], 0.0), Dual1(0.0, 0.0));
        for (Eigen::Index i = 0; i < n; ++i)
        {
            for (Eigen::Index j = i; j < n; ++j)
            {
                seeded[i].d.v = 1.0; // outer seed: d/dx_i
                seeded[j].v.d = 1.0; // inner seed: d/dx_j
                const Dual2 total = evaluate<Dual2>(seeded, layout, basis, cam, obs, weights, options).total;
                if (j == i)
                    grad[i] = total.d.v;
                hessian(i, j) = hessian(j, i) = total.d.d;
                seeded[i].d.v = 0.0;
                seeded[j].v.d = 0.0;
            }
        }
    }
    else
    {
        auto f = [&](const VecXd& p) {
            return evaluate<double>(p, layout, basis, cam, obs, weights, options).total;
        };
        const double centre = f(x);
        VecXd probe = x;
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double h = fd_step(x[i]);
            probe[i] = x[i] + h;
            const double upper = f(probe);
            probe[i] = x[i] - h;
            const double lower = f(probe);
            probe[i] = x[i];
            grad[i] = (upper - lower) / (2.0 * h);
            hessian(i, i) = (upper - 2.0 * centre + lower) / (h * h);
        }
    }

    for (Eigen::Index i = 0; i < n; ++i)
        if (!std::isfinite(grad[i]))
            throw std::runtime_error("gradient: non-finite entry at parameter index " + std::to_string(i));
}

} // namespace detail

/**
 * @brief Minimises the combined loss from `init` by damped Newton steps:
 * solve (H + damping I) step = -gradient, accept the step only if the total
 * loss strictly decreases, otherwise raise the damping and retry. Stops on
 * the iteration budget, on an accepted decrease below loss_tol, on an
 * accepted step below step_tol, or when no decreasing step can be found.
 *
 * Deterministic: identical inputs give identical traces. Steps that land on
 * an infeasible point (landmark behind the camera) are treated as rejected.
 */
inline FitResult fit(const Observations& obs, const LinearBasis& basis, const CameraIntrinsics& cam,
                     const VecXd& init, const FitConfig& config)
{
    config.check();
    const auto start_time = std::chrono::steady_clock::now();

    ParamLayout layout{basis.num_shape_components(), basis.num_color_components()};
    if (init.size() != layout.size())
        throw std::invalid_argument("fit: init length does not match basis layout");
    const EvalOptions options = config.eval_options();

    FitResult result;
    result.params = init;

    EvalOutcomed current;
    try
    {
        current = evaluate<double>(init, layout, basis, cam, obs, config.weights, options);
    }
    catch (const DepthNonPositive& err)
    {
        throw std::runtime_error(std::string("fit: initial parameters are infeasible: ") + err.what());
    }
    if (!std::isfinite(current.total))
        throw std::runtime_error("fit: initial loss is not finite");
    result.loss_trace.push_back(current.losses);
    result.total_trace.push_back(current.total);

    auto finish = [&](bool converged, const std::string& reason) {
        result.converged = converged;
        result.reason = reason;
        result.diverging_left = current.diverging_left;
        result.diverging_right = current.diverging_right;
        result.parallel_gaze = current.parallel_gaze;
        result.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                                        start_time)
                                  .count();
        return result;
    };

    if (config.max_iters == 0)
        return finish(false, "iteration budget");

    const Eigen::Index n = init.size();
    double damping = config.init_damping;
    VecXd x = init;
    VecXd grad(n);
    Eigen::MatrixXd hessian(n, n);

    for (int iter = 0; iter < config.max_iters; ++iter)
    {
        detail::gradient_and_hessian(x, layout, basis, cam, obs, config.weights, options,
                                     config.gradient_mode, grad, hessian);

        // Marquardt scaling with a unit curvature floor: parameters under a
        // stiff quadratic term are damped in proportion to their own
        // curvature, while flat (L1-driven) parameters take plain damped
        // gradient steps of about |g|/damping. All parameters here are
        // O(0.1..1) scaled, so a unit floor is a sane absolute scale.
        VecXd scale(n);
        for (Eigen::Index i = 0; i < n; ++i)
            scale[i] = std::max(std::abs(hessian(i, i)), 1.0);

        bool accepted = false;
        VecXd step(n);
        for (int attempt = 0; attempt < 64 && !accepted; ++attempt)
        {
            Eigen::MatrixXd damped = hessian;
            for (Eigen::Index i = 0; i < n; ++i)
                damped(i, i) += damping * scale[i];
            const Eigen::LDLT<Eigen::MatrixXd> solver(damped);
            bool usable = solver.info() == Eigen::Success;
            if (usable)
            {
                step = solver.solve(-grad);
                usable = step.allFinite();
            }
            if (usable)
            {
                const VecXd candidate = x + step;
                bool feasible = true;
                EvalOutcomed trial;
                try
                {
                    trial = evaluate<double>(candidate, layout, basis, cam, obs, config.weights, options);
                }
                catch (const DepthNonPositive&)
                {
                    feasible = false; // a landmark went behind the camera; back off
                }
                if (feasible && std::isfinite(trial.total) && trial.total < current.total)
                {
                    const double decrease = current.total - trial.total;
                    x = candidate;
                    current = trial;
                    result.params = x;
                    result.loss_trace.push_back(current.losses);
                    result.total_trace.push_back(current.total);
                    ++result.iterations;
                    accepted = true;
                    // Tiny steps under heavy damping are a distrusted model,
                    // not convergence; only stop when the damping is low.
                    const bool trusted = damping <= 1e3;
                    damping = std::max(damping * config.damping_down, 1e-12);
                    if (trusted && config.loss_tol > 0.0 && decrease < config.loss_tol)
                        return finish(true, "loss tolerance");
                    if (trusted && step.cwiseAbs().maxCoeff() < config.step_tol)
                        return finish(true, "step tolerance");
                    break;
                }
            }
            damping *= config.damping_up;
            if (damping > 1e14)
                break;
        }
        if (!accepted)
            return finish(false, "no decreasing step");
    }
    return finish(false, "iteration budget");
}

/**
 * @brief Two-stage fit: a fourth-power stage from `init` (wide, smooth
 * basin; good from cold starts), then a smooth-L1 refinement stage from its
 * result (sharp optimum that blends the supervision channels instead of
 * sticking at whichever residual reaches zero first). Returns the
 * refinement-stage result. With config.two_stage off it is a single fit()
 * under the config as given.
 */
inline FitResult fit_schedule(const Observations& obs, const LinearBasis& basis,
                              const CameraIntrinsics& cam, const VecXd& init, const FitConfig& config)
{
    if (!config.two_stage)
        return fit(obs, basis, cam, init, config);
    FitConfig stage1 = config;
    stage1.literal_norm_mode = true;
    const FitResult first = fit(obs, basis, cam, init, stage1);

    FitConfig stage2 = config;
    stage2.literal_norm_mode = false;
    stage2.l1_smoothing = config.refine_smoothing;
    stage2.max_iters = config.refine_iters;
    return fit(obs, basis, cam, first.params, stage2);
}

/**
 * @brief Initial parameter guess from the observed landmarks: zero shape,
 * colour, rotation and gaze; translation from aligning the mean-model
 * landmark centroid and spread to the observed centroid and spread.
 *
 * Throws std::invalid_argument when the observed landmarks have (near) zero
 * spread.
 */
inline VecXd init_params(const Observations& obs, const LinearBasis& basis, const CameraIntrinsics& cam)
{
    if (!obs.landmarks.allFinite())
        throw std::invalid_argument("init_params: landmarks contain non-finite values");

    const Eigen::Vector2d centroid_px = obs.landmarks.colwise().mean().transpose();
    double spread_px_sq = 0.0;
    for (int i = 0; i < num_landmarks; ++i)
    {
        const Eigen::Vector2d diff = obs.landmarks.row(i).transpose() - centroid_px;
        spread_px_sq += diff.squaredNorm();
    }
    const double spread_px = std::sqrt(spread_px_sq / num_landmarks);
    if (!(spread_px > 1e-9))
        throw std::invalid_argument("init_params: landmarks have zero spread");

    // Mean-model landmark statistics in the x-y plane (the model is close to
    // frontal, so the in-plane spread is what the projection sees).
    Vec3d centroid_model = Vec3d::Zero();
    for (int index : basis.landmark_indices)
        centroid_model += basis.mean_shape.row(index).transpose();
    centroid_model /= static_cast<double>(num_landmarks);
    double spread_model_sq = 0.0;
    for (int index : basis.landmark_indices)
    {
        const Vec3d diff = basis.mean_shape.row(index).transpose() - centroid_model;
        spread_model_sq += diff[0] * diff[0] + diff[1] * diff[1];
    }
    const double spread_model = std::sqrt(spread_model_sq / num_landmarks);

    const double focal = 0.5 * (cam.fx + cam.fy);
    const double depth = focal * spread_model / spread_px;

    ParamLayout layout{basis.num_shape_components(), basis.num_color_components()};
    Params<double> p;
    p.z_shape = VecXd::Zero(layout.k_shape);
    p.z_color = VecXd::Zero(layout.k_color);
    p.rotation = Vec3d::Zero();
    p.translation[0] = (centroid_px[0] - cam.cx) * depth / cam.fx - centroid_model[0];
    p.translation[1] = (centroid_px[1] - cam.cy) * depth / cam.fy - centroid_model[1];
    p.translation[2] = depth - centroid_model[2];
    p.log_scale = 0.0;
    p.gaze = {0.0, 0.0, 0.0, 0.0};

    const VecXd x = pack(p, layout);
    if (!x.allFinite())
        throw std::invalid_argument("init_params: produced non-finite parameters");
    return x;
}

} // namespace gazefit

#endif /* GAZEFIT_FITTER_HPP */
