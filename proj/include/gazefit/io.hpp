/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: include/gazefit/io.hpp
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

#ifndef GAZEFIT_IO_HPP
#define GAZEFIT_IO_HPP

#include "gazefit/benchmark.hpp"
#include "gazefit/camera.hpp"
#include "gazefit/fitter.hpp"
#include "gazefit/model.hpp"
#include "gazefit/params.hpp"
#include "gazefit/scene.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace gazefit {

using json = nlohmann::ordered_json;

/// Input file could not be parsed. Keeps nlohmann's byte-offset message.
struct ParseError : public std::runtime_error
{
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace io_detail {

inline json parse_checked(const std::string& text, const std::string& origin)
{
    try
    {
        return json::parse(text);
    }
    catch (const nlohmann::json::parse_error& err)
    {
        // err.what() carries the byte offset of the failure
        throw ParseError(origin + ": " + err.what());
    }
}

inline json require(const json& j, const std::string& key, const std::string& origin)
{
    if (!j.contains(key))
        throw ParseError(origin + ": missing key '" + key + "'");
    return j.at(key);
}

inline json matrix_to_json(const MatX3d& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
    return rows;
}

inline MatX3d matrix_from_json(const json& j, const std::string& origin)
{
    if (!j.is_array())
        throw ParseError(origin + ": expected an array of 3-vectors");
    MatX3d m(static_cast<Eigen::Index>(j.size()), 3);
    Eigen::Index row = 0;
    for (const auto& entry : j)
    {
        if (!entry.is_array() || entry.size() != 3)
            throw ParseError(origin + ": expected 3 components per row");
        for (int c = 0; c < 3; ++c)
            m(row, c) = entry.at(static_cast<std::size_t>(c)).get<double>();
        ++row;
    }
    return m;
}

} // namespace io_detail

// --- basis ------------------------------------------------------------------

inline json to_json(const LinearBasis& basis)
{
    json j;
    j["n_vertices"] = basis.n_vertices;
    j["mean_shape"] = io_detail::matrix_to_json(basis.mean_shape);
    json shape_components = json::array();
    for (const auto& component : basis.shape_components)
        shape_components.push_back(io_detail::matrix_to_json(component));
    j["shape_components"] = shape_components;
    j["mean_color"] = io_detail::matrix_to_json(basis.mean_color);
    json color_components = json::array();
    for (const auto& component : basis.color_components)
        color_components.push_back(io_detail::matrix_to_json(component));
    j["color_components"] = color_components;
    json faces = json::array();
    for (const auto& face : basis.faces)
        faces.push_back({face[0], face[1], face[2]});
    j["faces"] = faces;
    j["landmarks"] = basis.landmark_indices;
    j["left_eyeball"] = basis.left_eyeball_indices;
    j["right_eyeball"] = basis.right_eyeball_indices;
    j["left_outer_corner"] = basis.left_eye_outer_corner;
    j["right_outer_corner"] = basis.right_eye_outer_corner;
    return j;
}

inline LinearBasis basis_from_json(const json& j, const std::string& origin = "basis")
{
    using io_detail::require;
    LinearBasis basis;
    basis.n_vertices = require(j, "n_vertices", origin).get<int>();
    basis.mean_shape = io_detail::matrix_from_json(require(j, "mean_shape", origin), origin);
    for (const auto& component : require(j, "shape_components", origin))
        basis.shape_components.push_back(io_detail::matrix_from_json(component, origin));
    basis.mean_color = io_detail::matrix_from_json(require(j, "mean_color", origin), origin);
    for (const auto& component : require(j, "color_components", origin))
        basis.color_components.push_back(io_detail::matrix_from_json(component, origin));
    for (const auto& face : require(j, "faces", origin))
    {
        if (!face.is_array() || face.size() != 3)
            throw ParseError(origin + ": faces must be triangles");
        basis.faces.push_back({face.at(0).get<int>(), face.at(1).get<int>(), face.at(2).get<int>()});
    }
    const auto landmarks = require(j, "landmarks", origin);
    if (landmarks.size() != num_landmarks)
        throw ParseError(origin + ": expected exactly 31 landmark indices");
    for (std::size_t i = 0; i < num_landmarks; ++i)
        basis.landmark_indices[i] = landmarks.at(i).get<int>();
    for (const auto& index : require(j, "left_eyeball", origin))
        basis.left_eyeball_indices.push_back(index.get<int>());
    for (const auto& index : require(j, "right_eyeball", origin))
        basis.right_eyeball_indices.push_back(index.get<int>());
    basis.left_eye_outer_corner = require(j, "left_outer_corner", origin).get<int>();
    basis.right_eye_outer_corner = require(j, "right_outer_corner", origin).get<int>();
    validate(basis);
    return basis;
}

// --- camera -----------------------------------------------------------------

inline json to_json(const CameraIntrinsics& cam)
{
    return json{{"fx", cam.fx},       {"fy", cam.fy},       {"cx", cam.cx},
                {"cy", cam.cy},       {"width", cam.width}, {"height", cam.height}};
}

inline CameraIntrinsics camera_from_json(const json& j, const std::string& origin = "camera")
{
    using io_detail::require;
    CameraIntrinsics cam;
    cam.fx = require(j, "fx", origin).get<double>();
    cam.fy = require(j, "fy", origin).get<double>();
    cam.cx = require(j, "cx", origin).get<double>();
    cam.cy = require(j, "cy", origin).get<double>();
    cam.width = require(j, "width", origin).get<int>();
    cam.height = require(j, "height", origin).get<int>();
    validate(cam);
    return cam;
}

// --- weights and fit config --------------------------------------------------

inline json to_json(const LossWeights& weights)
{
    json j;
    j["pixel"] = weights.pixel;
    j["landmark"] = weights.landmark;
    j["origin"] = weights.origin;
    j["target"] = weights.target;
    j["skew"] = weights.skew;
    j["gaze"] = weights.gaze;
    j["reg"] = weights.reg;
    j["behind"] = weights.behind;
    j["group_weights"] = {{"g1", weights.group1}, {"g2", weights.group2}, {"g3", weights.group3}};
    return j;
}

inline LossWeights weights_from_json(const json& j, const std::string& origin = "weights")
{
    LossWeights weights;
    auto maybe = [&](const char* key, double& value) {
        if (j.contains(key))
            value = j.at(key).get<double>();
    };
    maybe("pixel", weights.pixel);
    maybe("landmark", weights.landmark);
    maybe("origin", weights.origin);
    maybe("target", weights.target);
    maybe("skew", weights.skew);
    maybe("gaze", weights.gaze);
    maybe("reg", weights.reg);
    maybe("behind", weights.behind);
    if (j.contains("group_weights"))
    {
        const json& groups = j.at("group_weights");
        if (groups.contains("g1"))
            weights.group1 = groups.at("g1").get<double>();
        if (groups.contains("g2"))
            weights.group2 = groups.at("g2").get<double>();
        if (groups.contains("g3"))
            weights.group3 = groups.at("g3").get<double>();
    }
    weights.check();
    (void)origin;
    return weights;
}

inline json to_json(const FitConfig& config)
{
    json j;
    j["max_iters"] = config.max_iters;
    j["loss_tol"] = config.loss_tol;
    j["step_tol"] = config.step_tol;
    j["init_damping"] = config.init_damping;
    j["damping_up"] = config.damping_up;
    j["damping_down"] = config.damping_down;
    j["gradient_mode"] = config.gradient_mode == GradientMode::forward_ad ? "forward_ad" : "finite_diff";
    j["literal_norm_mode"] = config.literal_norm_mode;
    j["l1_smoothing"] = config.l1_smoothing;
    j["k_range"] = config.k_range;
    j["two_stage"] = config.two_stage;
    j["refine_iters"] = config.refine_iters;
    j["refine_smoothing"] = config.refine_smoothing;
    j["weights"] = to_json(config.weights);
    return j;
}

inline FitConfig fit_config_from_json(const json& j, const std::string& origin = "fit config")
{
    FitConfig config;
    auto maybe_int = [&](const char* key, int& value) {
        if (j.contains(key))
            value = j.at(key).get<int>();
    };
    auto maybe_double = [&](const char* key, double& value) {
        if (j.contains(key))
            value = j.at(key).get<double>();
    };
    auto maybe_bool = [&](const char* key, bool& value) {
        if (j.contains(key))
            value = j.at(key).get<bool>();
    };
    maybe_int("max_iters", config.max_iters);
    maybe_double("loss_tol", config.loss_tol);
    maybe_double("step_tol", config.step_tol);
    maybe_double("init_damping", config.init_damping);
    maybe_double("damping_up", config.damping_up);
    maybe_double("damping_down", config.damping_down);
    maybe_bool("literal_norm_mode", config.literal_norm_mode);
    maybe_double("l1_smoothing", config.l1_smoothing);
    maybe_double("k_range", config.k_range);
    maybe_bool("two_stage", config.two_stage);
    maybe_int("refine_iters", config.refine_iters);
    maybe_double("refine_smoothing", config.refine_smoothing);
    if (j.contains("gradient_mode"))
    {
        const std::string mode = j.at("gradient_mode").get<std::string>();
        if (mode == "forward_ad")
            config.gradient_mode = GradientMode::forward_ad;
        else if (mode == "finite_diff")
            config.gradient_mode = GradientMode::finite_difference;
        else
            throw ParseError(origin + ": unknown gradient_mode '" + mode + "'");
    }
    if (j.contains("weights"))
        config.weights = weights_from_json(j.at("weights"));
    config.check();
    return config;
}

// --- scenes -------------------------------------------------------------------

inline json to_json(const SyntheticScene& scene)
{
    json j;
    j["seed"] = scene.seed;
    j["true_params"] = std::vector<double>(scene.true_params.data(),
                                           scene.true_params.data() + scene.true_params.size());
    j["true_target"] = {scene.true_target[0], scene.true_target[1], scene.true_target[2]};
    json obs;
    json landmarks = json::array();
    for (int i = 0; i < num_landmarks; ++i)
        landmarks.push_back({scene.obs.landmarks(i, 0), scene.obs.landmarks(i, 1)});
    obs["landmarks"] = landmarks;
    if (scene.obs.target)
        obs["target"] = {(*scene.obs.target)[0], (*scene.obs.target)[1], (*scene.obs.target)[2]};
    if (scene.obs.origins)
        obs["origins"] = {{(*scene.obs.origins)[0][0], (*scene.obs.origins)[0][1], (*scene.obs.origins)[0][2]},
                          {(*scene.obs.origins)[1][0], (*scene.obs.origins)[1][1], (*scene.obs.origins)[1][2]}};
    if (scene.obs.gaze)
        obs["gaze"] = {{(*scene.obs.gaze)[0], (*scene.obs.gaze)[1]},
                       {(*scene.obs.gaze)[2], (*scene.obs.gaze)[3]}};
    j["obs"] = obs;
    j["noise"] = {{"landmark_px", scene.noise.landmark_px}, {"target_m", scene.noise.target_m}};
    return j;
}

inline SyntheticScene scene_from_json(const json& j, const std::string& origin = "scene")
{
    using io_detail::require;
    SyntheticScene scene;
    scene.seed = require(j, "seed", origin).get<std::uint64_t>();
    const auto params = require(j, "true_params", origin).get<std::vector<double>>();
    scene.true_params = Eigen::Map<const VecXd>(params.data(), static_cast<Eigen::Index>(params.size()));
    const auto target = require(j, "true_target", origin);
    for (int c = 0; c < 3; ++c)
        scene.true_target[c] = target.at(static_cast<std::size_t>(c)).get<double>();

    const json obs = require(j, "obs", origin);
    const json landmarks = require(obs, "landmarks", origin);
    if (landmarks.size() != num_landmarks)
        throw ParseError(origin + ": expected 31 landmarks");
    for (std::size_t i = 0; i < num_landmarks; ++i)
        for (std::size_t c = 0; c < 2; ++c)
            scene.obs.landmarks(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                landmarks.at(i).at(c).get<double>();
    if (obs.contains("target"))
    {
        Vec3d t;
        for (int c = 0; c < 3; ++c)
            t[c] = obs.at("target").at(static_cast<std::size_t>(c)).get<double>();
        scene.obs.target = t;
    }
    if (obs.contains("origins"))
    {
        std::array<Vec3d, 2> origins;
        for (int eye = 0; eye < 2; ++eye)
            for (int c = 0; c < 3; ++c)
                origins[static_cast<std::size_t>(eye)][c] =
                    obs.at("origins").at(static_cast<std::size_t>(eye)).at(static_cast<std::size_t>(c)).get<double>();
        scene.obs.origins = origins;
    }
    if (obs.contains("gaze"))
    {
        std::array<double, 4> gaze{};
        for (int eye = 0; eye < 2; ++eye)
            for (int c = 0; c < 2; ++c)
                gaze[static_cast<std::size_t>(2 * eye + c)] =
                    obs.at("gaze").at(static_cast<std::size_t>(eye)).at(static_cast<std::size_t>(c)).get<double>();
        scene.obs.gaze = gaze;
    }
    scene.noise.landmark_px = require(j, "noise", origin).at("landmark_px").get<double>();
    scene.noise.target_m = j.at("noise").at("target_m").get<double>();
    return scene;
}

// --- fit results and reports ---------------------------------------------------

/// FitResult JSON. Wall time is deliberately not serialised: reruns of the
/// same inputs must produce byte-identical files.
inline json to_json(const FitResult& result)
{
    json j;
    j["params"] = std::vector<double>(result.params.data(), result.params.data() + result.params.size());
    j["converged"] = result.converged;
    j["reason"] = result.reason;
    j["iterations"] = result.iterations;
    j["diverging"] = {result.diverging_left, result.diverging_right};
    j["parallel_gaze"] = result.parallel_gaze;
    json loss_trace = json::array();
    for (const auto& losses : result.loss_trace)
    {
        const auto values = losses.as_array();
        loss_trace.push_back(std::vector<double>(values.begin(), values.end()));
    }
    j["loss_trace"] = loss_trace;
    j["total_trace"] = result.total_trace;
    return j;
}

inline json to_json(const EvalReport& report)
{
    json j;
    j["scenes"] = report.scene_count;
    j["failures"] = report.failure_count;
    j["angular_deg"] = {{"mean", report.angular_mean_deg},
                        {"std", report.angular_std_deg},
                        {"median", report.angular_median_deg}};
    j["landmark_px_mean"] = report.landmark_mean_px;
    j["normalized_landmark_error"] = report.normalized_landmark_error;
    return j;
}

/// Fixed-width text rendering of one or more named reports.
inline std::string report_table(const std::vector<std::pair<std::string, EvalReport>>& rows)
{
    std::ostringstream out;
    out << "configuration      mean     std      median   lm(px)   norm     fail\n";
    char line[160];
    for (const auto& [name, report] : rows)
    {
        std::snprintf(line, sizeof(line), "%-18s %-8.4f %-8.4f %-8.4f %-8.4f %-8.4f %d\n", name.c_str(),
                      report.angular_mean_deg, report.angular_std_deg, report.angular_median_deg,
                      report.landmark_mean_px, report.normalized_landmark_error, report.failure_count);
        out << line;
    }
    return out.str();
}

// --- files ---------------------------------------------------------------------

inline std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    if (!out)
        throw std::runtime_error("write failed for '" + path.string() + "'");
}

inline json load_json_file(const std::filesystem::path& path)
{
    return io_detail::parse_checked(read_text_file(path), path.string());
}

inline std::vector<SyntheticScene> load_scenes_jsonl(const std::filesystem::path& path)
{
    const std::string text = read_text_file(path);
    std::vector<SyntheticScene> scenes;
    std::istringstream lines(text);
    std::string line;
    int line_number = 0;
    while (std::getline(lines, line))
    {
        ++line_number;
        if (line.empty())
            continue;
        const json j = io_detail::parse_checked(line, path.string() + ":" + std::to_string(line_number));
        scenes.push_back(scene_from_json(j));
    }
    return scenes;
}

} // namespace gazefit

#endif /* GAZEFIT_IO_HPP */
