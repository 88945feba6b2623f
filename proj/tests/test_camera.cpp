/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: tests/test_camera.cpp
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
#include "gazefit/camera.hpp"
#include "gazefit/rng.hpp"
#include "gazefit/synthetic_basis.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace gazefit;
using Catch::Approx;

TEST_CASE("project applies the pinhole model")
{
    CameraIntrinsics unit{1.0, 1.0, 0.0, 0.0, 64, 48};
    CHECK((project<double>(unit, Vec3d(0, 0, 1)) - Eigen::Vector2d(0, 0)).norm() == 0.0);

    CameraIntrinsics cam{100.0, 100.0, 48.0, 48.0, 96, 96};
    const auto pixel = project<double>(cam, Vec3d(1, 2, 2));
    CHECK(pixel[0] == Approx(98.0));
    CHECK(pixel[1] == Approx(148.0));

    CHECK_THROWS_AS(project<double>(cam, Vec3d(0, 0, 0)), DepthNonPositive);
    CHECK_THROWS_AS(project<double>(cam, Vec3d(0, 0, -1)), DepthNonPositive);
}

TEST_CASE("project is invariant under uniform positive scaling of the point")
{
    CameraIntrinsics cam{320.0, 300.0, 160.0, 120.0, 320, 240};
    Rng rng(41);
    for (int i = 0; i < 200; ++i)
    {
        const Vec3d p(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.1, 3.0));
        const double scale = rng.uniform(0.1, 10.0);
        const auto a = project<double>(cam, p);
        const auto b = project<double>(cam, Vec3d(scale * p));
        CHECK((a - b).norm() < 1e-9);
    }
}

TEST_CASE("project_landmarks projects the 31 landmark vertices")
{
    const LinearBasis basis = synthetic_basis(SyntheticBasisConfig{}, 9);
    CameraIntrinsics cam{600.0, 600.0, 320.0, 240.0, 640, 480};

    EyeRegionMesh<double> mesh;
    mesh.vertices = basis.mean_shape;
    mesh.frame = Frame::camera;
    mesh.vertices.col(2).array() += 1.0; // push the face 1 m in front

    const Landmarks2Dd landmarks = project_landmarks(cam, mesh, basis);
    CHECK(landmarks.rows() == 31);
    for (int i = 0; i < num_landmarks; ++i)
    {
        const int vertex = basis.landmark_indices[static_cast<std::size_t>(i)];
        Vec3d p = mesh.vertices.row(vertex).transpose();
        CHECK((landmarks.row(i).transpose() - project(cam, p)).norm() == 0.0);
    }

    // Doubling all coordinates leaves every projection unchanged.
    EyeRegionMesh<double> doubled = mesh;
    doubled.vertices *= 2.0;
    const Landmarks2Dd landmarks2 = project_landmarks(cam, doubled, basis);
    CHECK((landmarks - landmarks2).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("project_landmarks names the landmark that is behind the camera")
{
    const LinearBasis basis = synthetic_basis(SyntheticBasisConfig{}, 9);
    CameraIntrinsics cam{600.0, 600.0, 320.0, 240.0, 640, 480};

    EyeRegionMesh<double> mesh;
    mesh.vertices = basis.mean_shape;
    mesh.vertices.col(2).array() -= 0.5; // push every landmark behind the camera
    mesh.frame = Frame::camera;
    try
    {
        project_landmarks(cam, mesh, basis);
        FAIL("expected DepthNonPositive");
    }
    catch (const DepthNonPositive& err)
    {
        CHECK(err.landmark_index >= 0);
        CHECK(err.landmark_index < 31);
    }
}

TEST_CASE("angular error handles the textbook angles")
{
    CHECK(angular_error_deg(Vec3d(0.3, -0.2, 0.9), Vec3d(0.3, -0.2, 0.9)) == 0.0);
    CHECK(angular_error_deg(Vec3d(0, 0, 1), Vec3d(1, 0, 0)) == Approx(90.0));
    CHECK(angular_error_deg(Vec3d(0, 0, 1), Vec3d(1, 0, 1)) == Approx(45.0));
    CHECK_THROWS_AS(angular_error_deg(Vec3d::Zero(), Vec3d(1, 0, 0)), std::invalid_argument);
}

TEST_CASE("angular error is symmetric, scale-invariant and NaN-free at parallel vectors")
{
    Rng rng(42);
    for (int i = 0; i < 300; ++i)
    {
        const Vec3d a(rng.normal(), rng.normal(), rng.normal());
        const Vec3d b(rng.normal(), rng.normal(), rng.normal());
        if (a.norm() < 1e-3 || b.norm() < 1e-3)
            continue;
        const double ab = angular_error_deg(a, b);
        CHECK(ab >= 0.0);
        CHECK(ab <= 180.0);
        CHECK(ab == Approx(angular_error_deg(b, a)));
        CHECK(angular_error_deg(Vec3d(2.5 * a), Vec3d(0.3 * b)) == Approx(ab).margin(1e-10));
        // identical non-unit vectors give exactly zero; rounding cannot push
        // the argument out of range
        CHECK(angular_error_deg(a, a) == 0.0);
        CHECK(angular_error_deg(a, Vec3d(7.0 * a)) < 1e-12);
    }
}
