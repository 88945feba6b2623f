/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: include/gazefit/export.hpp
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

#ifndef GAZEFIT_EXPORT_HPP
#define GAZEFIT_EXPORT_HPP

#include "gazefit/camera.hpp"
#include "gazefit/evaluate.hpp"
#include "gazefit/model.hpp"
#include "gazefit/scene.hpp"
#include "gazefit/vergence.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <utility>

namespace gazefit {

/**
 * @brief Wavefront OBJ text for a mesh: `v x y z r g b` per vertex (colour
 * extension) and 1-based `f` lines per triangle. 6-decimal fixed formatting.
 */
inline std::string to_obj(const EyeRegionMesh<double>& mesh, const LinearBasis& basis)
{
    std::ostringstream out;
    out << "# gazefit eye-region mesh\n";
    char line[160];
    const bool has_colors = mesh.colors.rows() == mesh.vertices.rows();
    for (Eigen::Index i = 0; i < mesh.vertices.rows(); ++i)
    {
        if (has_colors)
            std::snprintf(line, sizeof(line), "v %.6f %.6f %.6f %.6f %.6f %.6f\n", mesh.vertices(i, 0),
                          mesh.vertices(i, 1), mesh.vertices(i, 2), mesh.colors(i, 0), mesh.colors(i, 1),
                          mesh.colors(i, 2));
        else
            std::snprintf(line, sizeof(line), "v %.6f %.6f %.6f\n", mesh.vertices(i, 0),
                          mesh.vertices(i, 1), mesh.vertices(i, 2));
        out << line;
    }
    for (const auto& face : basis.faces)
    {
        std::snprintf(line, sizeof(line), "f %d %d %d\n", face[0] + 1, face[1] + 1, face[2] + 1);
        out << line;
    }
    return out.str();
}

namespace svg_detail {

inline std::string fmt(double v)
{
    char buffer[48];
    std::snprintf(buffer, sizeof(buffer), "%.3f", v);
    return buffer;
}

} // namespace svg_detail

/**
 * @brief SVG overlay for one fitted scene: the projected wireframe of the
 * fitted mesh, the predicted landmarks as crosses, the predicted gaze rays
 * (red, class "ray-pred"), the ground-truth rays (green, class "ray-gt")
 * and the observed target marker. Rays run from each projected eyeball
 * centre towards the projected gaze target.
 *
 * Throws DepthNonPositive if the fitted mesh has no projectable landmark.
 */
inline std::string to_svg(const LinearBasis& basis, const CameraIntrinsics& cam,
                          const VecXd& fitted_params, const SyntheticScene& scene)
{
    const ParamLayout layout{basis.num_shape_components(), basis.num_color_components()};
    const Params<double> fitted = unpack(fitted_params, layout);
    const Params<double> truth = unpack(scene.true_params, layout);

    auto posed_mesh = [&](const Params<double>& p) {
        EyeRegionMesh<double> mesh = apply_pose(
            reconstruct_shape<double>(basis, p.z_shape),
            PoseParams<double>{p.rotation, p.translation, std::exp(p.log_scale)});
        return rotate_eyeballs(mesh, basis, gaze_rotation<double>(p.gaze[0], p.gaze[1]),
                               gaze_rotation<double>(p.gaze[2], p.gaze[3]));
    };
    const EyeRegionMesh<double> fitted_mesh = posed_mesh(fitted);
    const EyeRegionMesh<double> truth_mesh = posed_mesh(truth);

    auto project_or_skip = [&](const Vec3d& p, Eigen::Vector2d& pixel) {
        if (!(p[2] > depth_epsilon))
            return false;
        pixel = project(cam, p);
        return true;
    };

    std::ostringstream body;

    // wireframe: unique undirected edges of the fitted mesh
    std::set<std::pair<int, int>> edges;
    for (const auto& face : basis.faces)
        for (int e = 0; e < 3; ++e)
        {
            const int a = face[static_cast<std::size_t>(e)];
            const int b = face[static_cast<std::size_t>((e + 1) % 3)];
            edges.insert({std::min(a, b), std::max(a, b)});
        }
    body << "<g class=\"wireframe\" stroke=\"#9aa5b1\" stroke-width=\"0.4\">\n";
    int drawn = 0;
    for (const auto& [a, b] : edges)
    {
        Eigen::Vector2d pa, pb;
        if (!project_or_skip(fitted_mesh.vertices.row(a).transpose(), pa) ||
            !project_or_skip(fitted_mesh.vertices.row(b).transpose(), pb))
            continue;
        body << "<line x1=\"" << svg_detail::fmt(pa[0]) << "\" y1=\"" << svg_detail::fmt(pa[1])
             << "\" x2=\"" << svg_detail::fmt(pb[0]) << "\" y2=\"" << svg_detail::fmt(pb[1]) << "\"/>\n";
        ++drawn;
    }
    body << "</g>\n";

    // predicted landmarks as crosses
    const Landmarks2Dd landmarks = project_landmarks(cam, fitted_mesh, basis);
    (void)drawn;
    body << "<g class=\"landmarks\" stroke=\"#2563eb\" stroke-width=\"0.8\">\n";
    for (int i = 0; i < num_landmarks; ++i)
    {
        const double x = landmarks(i, 0), y = landmarks(i, 1), r = 2.0;
        body << "<line class=\"landmark\" x1=\"" << svg_detail::fmt(x - r) << "\" y1=\""
             << svg_detail::fmt(y) << "\" x2=\"" << svg_detail::fmt(x + r) << "\" y2=\""
             << svg_detail::fmt(y) << "\"/>\n";
        body << "<line class=\"landmark\" x1=\"" << svg_detail::fmt(x) << "\" y1=\""
             << svg_detail::fmt(y - r) << "\" x2=\"" << svg_detail::fmt(x) << "\" y2=\""
             << svg_detail::fmt(y + r) << "\"/>\n";
    }
    body << "</g>\n";

    // gaze rays: from each projected eyeball centre towards the projected
    // gaze target (or a far point along the ray when no finite target)
    auto draw_rays = [&](const Params<double>& p, const EyeRegionMesh<double>& mesh, const char* cls,
                         const char* color, const Vec3d* target3d) {
        const auto [origin_left, origin_right] = eyeball_centres(mesh, basis);
        const Vec3d directions[2] = {gaze_vector<double>(p.gaze[0], p.gaze[1]),
                                     gaze_vector<double>(p.gaze[2], p.gaze[3])};
        const Vec3d origins[2] = {origin_left, origin_right};
        body << "<g stroke=\"" << color << "\" stroke-width=\"1.2\">\n";
        for (int eye = 0; eye < 2; ++eye)
        {
            Eigen::Vector2d from, to;
            if (!project_or_skip(origins[eye], from))
                continue;
            Vec3d end;
            if (target3d != nullptr)
                end = *target3d;
            else
                end = origins[eye] + 0.5 * directions[eye];
            if (!project_or_skip(end, to))
                continue;
            body << "<line class=\"" << cls << "\" x1=\"" << svg_detail::fmt(from[0]) << "\" y1=\""
                 << svg_detail::fmt(from[1]) << "\" x2=\"" << svg_detail::fmt(to[0]) << "\" y2=\""
                 << svg_detail::fmt(to[1]) << "\"/>\n";
        }
        body << "</g>\n";
    };

    // predicted target: closest point of the fitted rays when defined
    const auto [fit_origin_l, fit_origin_r] = eyeball_centres(fitted_mesh, basis);
    Vec3d predicted_target;
    const Vec3d* predicted_target_ptr = nullptr;
    try
    {
        const auto solution =
            solve_vergence(GazeRayd{fit_origin_l, gaze_vector<double>(fitted.gaze[0], fitted.gaze[1])},
                           GazeRayd{fit_origin_r, gaze_vector<double>(fitted.gaze[2], fitted.gaze[3])});
        predicted_target = solution.target;
        predicted_target_ptr = &predicted_target;
    }
    catch (const ParallelGaze&)
    {
    }

    const Vec3d truth_target = scene.true_target;
    draw_rays(fitted, fitted_mesh, "ray-pred", "#dc2626", predicted_target_ptr);
    draw_rays(truth, truth_mesh, "ray-gt", "#16a34a", &truth_target);

    // observed gaze target marker
    if (scene.obs.target)
    {
        Eigen::Vector2d t;
        if (project_or_skip(*scene.obs.target, t))
            body << "<circle class=\"target\" cx=\"" << svg_detail::fmt(t[0]) << "\" cy=\""
                 << svg_detail::fmt(t[1]) << "\" r=\"3\" fill=\"none\" stroke=\"#f59e0b\" stroke-width=\"1.2\"/>\n";
    }

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cam.width << "\" height=\"" << cam.height
        << "\" viewBox=\"0 0 " << cam.width << " " << cam.height << "\">\n";
    out << "<rect width=\"" << cam.width << "\" height=\"" << cam.height << "\" fill=\"#ffffff\"/>\n";
    out << body.str();
    out << "</svg>\n";
    return out.str();
}

} // namespace gazefit

#endif /* GAZEFIT_EXPORT_HPP */
