/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: include/gazefit/benchmark.hpp
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

#ifndef GAZEFIT_BENCHMARK_HPP
#define GAZEFIT_BENCHMARK_HPP

#include "gazefit/fitter.hpp"
#include "gazefit/scene.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace gazefit {

/**
 * @brief Aggregate fit quality over a scene set: angular gaze error pooled
 * over both eyes (mean, population std, median, degrees), mean per-landmark
 * pixel error against the noiseless reprojection of the truth, and the same
 * normalised by the fitted outer-eye-corner pixel distance.
 */
struct EvalReport
{
    int scene_count = 0;
    int failure_count = 0;
    double angular_mean_deg = 0.0;
    double angular_std_deg = 0.0;
    double angular_median_deg = 0.0;
    double landmark_mean_px = 0.0;
    double normalized_landmark_error = 0.0;
};

/// Per-scene error metrics for one set of fitted parameters.
struct SceneMetrics
{
    double angular_left_deg = 0.0;
    double angular_right_deg = 0.0;
    double landmark_px = 0.0;  // mean per-landmark pixel distance to the true reprojection
    double normalized = 0.0;   // landmark_px / fitted outer-corner pixel distance
};

/**
 * @brief Scores fitted parameters against a scene's ground truth: per-eye
 * angle between fitted and true gaze vectors, mean landmark distance to the
 * noiseless reprojection of the true parameters, and its normalised form.
 */
inline SceneMetrics eval_scene_metrics(const SyntheticScene& scene, const VecXd& fitted,
                                       const LinearBasis& basis, const CameraIntrinsics& cam)
{
    const ParamLayout layout{basis.num_shape_components(), basis.num_color_components()};
    const Params<double> truth = unpack(scene.true_params, layout);
    const Params<double> estimate = unpack(fitted, layout);

    SceneMetrics metrics;
    metrics.angular_left_deg = angular_error_deg(gaze_vector<double>(estimate.gaze[0], estimate.gaze[1]),
                                                 gaze_vector<double>(truth.gaze[0], truth.gaze[1]));
    metrics.angular_right_deg = angular_error_deg(gaze_vector<double>(estimate.gaze[2], estimate.gaze[3]),
                                                  gaze_vector<double>(truth.gaze[2], truth.gaze[3]));

    auto posed_mesh = [&](const Params<double>& p) {
        return apply_pose(reconstruct_shape<double>(basis, p.z_shape),
                          PoseParams<double>{p.rotation, p.translation, std::exp(p.log_scale)});
    };
    const EyeRegionMesh<double> true_mesh = posed_mesh(truth);
    const EyeRegionMesh<double> fitted_mesh = posed_mesh(estimate);
    const Landmarks2Dd true_landmarks = project_landmarks(cam, true_mesh, basis);
    const Landmarks2Dd fitted_landmarks = project_landmarks(cam, fitted_mesh, basis);

    double sum = 0.0;
    for (int i = 0; i < num_landmarks; ++i)
        sum += (fitted_landmarks.row(i) - true_landmarks.row(i)).norm();
    metrics.landmark_px = sum / num_landmarks;

    auto corner_pixel = [&](int vertex) {
        Vec3d point = fitted_mesh.vertices.row(vertex).transpose();
        return project(cam, point);
    };
    const double corner_distance =
        (corner_pixel(basis.left_eye_outer_corner) - corner_pixel(basis.right_eye_outer_corner)).norm();
    metrics.normalized = corner_distance > 0.0 ? metrics.landmark_px / corner_distance : 0.0;
    return metrics;
}

/// Pools per-scene metrics into one report (angular errors pooled over both
/// eyes; std is the population standard deviation).
inline EvalReport aggregate_report(const std::vector<SceneMetrics>& metrics, int failures)
{
    EvalReport report;
    report.scene_count = static_cast<int>(metrics.size()) + failures;
    report.failure_count = failures;
    if (metrics.empty())
        return report;

    std::vector<double> angular;
    angular.reserve(2 * metrics.size());
    double landmark_sum = 0.0;
    double normalized_sum = 0.0;
    for (const SceneMetrics& m : metrics)
    {
        angular.push_back(m.angular_left_deg);
        angular.push_back(m.angular_right_deg);
        landmark_sum += m.landmark_px;
        normalized_sum += m.normalized;
    }
    double mean = 0.0;
    for (double a : angular)
        mean += a;
    mean /= static_cast<double>(angular.size());
    double variance = 0.0;
    for (double a : angular)
        variance += (a - mean) * (a - mean);
    variance /= static_cast<double>(angular.size());

    std::vector<double> sorted = angular;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    report.angular_mean_deg = mean;
    report.angular_std_deg = std::sqrt(variance);
    report.angular_median_deg = median;
    report.landmark_mean_px = landmark_sum / static_cast<double>(metrics.size());
    report.normalized_landmark_error = normalized_sum / static_cast<double>(metrics.size());
    return report;
}

/// One fitted scene inside a benchmark run.
struct BenchmarkEntry
{
    std::optional<FitResult> fit;
    std::optional<SceneMetrics> metrics;
    std::string error;
};

struct BenchmarkRun
{
    std::vector<BenchmarkEntry> entries; // ordered by scene index
    EvalReport report;
};

/**
 * @brief Fits every scene cold (init_params) with the given config and
 * aggregates the error metrics. Per-scene failures are counted in the
 * report, never fatal.
 */
inline BenchmarkRun run_benchmark(const std::vector<SyntheticScene>& scenes, const LinearBasis& basis,
                                  const CameraIntrinsics& cam, const FitConfig& config)
{
    if (scenes.empty())
        throw std::invalid_argument("run_benchmark: no scenes");
    BenchmarkRun run;
    std::vector<SceneMetrics> metrics;
    int failures = 0;
    for (const SyntheticScene& scene : scenes)
    {
        BenchmarkEntry entry;
        try
        {
            const VecXd init = init_params(scene.obs, basis, cam);
            entry.fit = fit_schedule(scene.obs, basis, cam, init, config);
            entry.metrics = eval_scene_metrics(scene, entry.fit->params, basis, cam);
            metrics.push_back(*entry.metrics);
        }
        catch (const std::exception& err)
        {
            entry.error = err.what();
            ++failures;
        }
        run.entries.push_back(std::move(entry));
    }
    run.report = aggregate_report(metrics, failures);
    return run;
}

/// Named weight configuration of one ablation row.
struct AblationRow
{
    std::string name;
    EvalReport report;
};

/**
 * @brief The four benchmark configurations mirroring the loss groups:
 * `baseline` optimises the gaze-pose group only, `vergence` the geometric
 * group only, `wo_origin` drops the origin loss from the full set, and
 * `full` keeps everything.
 */
inline std::vector<std::pair<std::string, LossWeights>> ablation_configs(const LossWeights& base)
{
    LossWeights baseline = base;
    baseline.group1 = 0.0;
    baseline.group3 = 0.0;
    LossWeights vergence_only = base;
    vergence_only.group1 = 0.0;
    vergence_only.group2 = 0.0;
    LossWeights wo_origin = base;
    wo_origin.origin = 0.0;
    return {{"baseline", baseline}, {"vergence", vergence_only}, {"wo_origin", wo_origin}, {"full", base}};
}

/// Runs the four ablation rows over the same scenes and returns their reports.
inline std::vector<AblationRow> ablation_suite(const std::vector<SyntheticScene>& scenes,
                                               const LinearBasis& basis, const CameraIntrinsics& cam,
                                               const FitConfig& base_config)
{
    std::vector<AblationRow> rows;
    for (const auto& [name, weights] : ablation_configs(base_config.weights))
    {
        FitConfig config = base_config;
        config.weights = weights;
        rows.push_back({name, run_benchmark(scenes, basis, cam, config).report});
    }
    return rows;
}

} // namespace gazefit

#endif /* GAZEFIT_BENCHMARK_HPP */
