/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: tests/test_model.cpp
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
#include "gazefit/model.hpp"
#include "gazefit/rng.hpp"
#include "gazefit/synthetic_basis.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace gazefit;
using Catch::Approx;

namespace {

LinearBasis default_basis() { return synthetic_basis(SyntheticBasisConfig{}, 42); }

} // namespace

TEST_CASE("reconstruct_shape with zero coefficients returns the mean exactly")
{
    const LinearBasis basis = default_basis();
    const auto mesh = reconstruct_shape<double>(basis, VecXd::Zero(basis.num_shape_components()));
    CHECK(mesh.frame == Frame::model);
    CHECK((mesh.vertices - basis.mean_shape).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("reconstruct_shape with a unit coefficient adds exactly one component")
{
    const LinearBasis basis = default_basis();
    VecXd z = VecXd::Zero(basis.num_shape_components());
    z[0] = 1.0;
    const auto mesh = reconstruct_shape<double>(basis, z);
    const MatX3d expected = basis.mean_shape + basis.shape_components[0];
    CHECK((mesh.vertices - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("reconstruction is linear in the coefficients")
{
    const LinearBasis basis = default_basis();
    Rng rng(3);
    VecXd a(basis.num_shape_components()), b(basis.num_shape_components());
    for (Eigen::Index i = 0; i < a.size(); ++i)
    {
        a[i] = rng.normal();
        b[i] = rng.normal();
    }
    const MatX3d lhs = reconstruct_shape<double>(basis, a).vertices +
                       reconstruct_shape<double>(basis, b).vertices - basis.mean_shape;
    const MatX3d rhs = reconstruct_shape<double>(basis, VecXd(a + b)).vertices;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("reconstruct_shape rejects a wrong coefficient count")
{
    const LinearBasis basis = default_basis();
    CHECK_THROWS_AS(reconstruct_shape<double>(basis, VecXd::Zero(basis.num_shape_components() + 1)),
                    std::invalid_argument);
}

TEST_CASE("the shape Jacobian equals the stacked components (finite differences)")
{
    const LinearBasis basis = default_basis();
    Rng rng(11);
    VecXd z(basis.num_shape_components());
    for (Eigen::Index i = 0; i < z.size(); ++i)
        z[i] = rng.normal();
    const double h = 1e-6;
    for (int k = 0; k < basis.num_shape_components(); ++k)
    {
        VecXd plus = z, minus = z;
        plus[k] += h;
        minus[k] -= h;
        const MatX3d jac = (reconstruct_shape<double>(basis, plus).vertices -
                            reconstruct_shape<double>(basis, minus).vertices) /
                           (2.0 * h);
        CHECK((jac - basis.shape_components[static_cast<std::size_t>(k)]).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("reconstruct_color mirrors the shape model and clamps only on export")
{
    const LinearBasis basis = default_basis();
    CHECK((reconstruct_color(basis, VecXd::Zero(basis.num_color_components())) - basis.mean_color)
              .cwiseAbs()
              .maxCoeff() == 0.0);

    VecXd z = VecXd::Zero(basis.num_color_components());
    z[0] = 1.0;
    const MatX3d expected = basis.mean_color + basis.color_components[0];
    CHECK((reconstruct_color(basis, z) - expected).cwiseAbs().maxCoeff() == 0.0);

    z[0] = 50.0; // way out of the model box; values exceed [0,1] unclamped
    const MatX3d wild = reconstruct_color(basis, z);
    CHECK(wild.maxCoeff() > 1.0);
    const MatX3d clamped = clamp_colors(wild);
    CHECK(clamped.maxCoeff() <= 1.0);
    CHECK(clamped.minCoeff() >= 0.0);

    CHECK_THROWS_AS(reconstruct_color(basis, VecXd::Zero(1 + basis.num_color_components())),
                    std::invalid_argument);
}

TEST_CASE("apply_pose identity, scaling and translation behave elementwise")
{
    const LinearBasis basis = default_basis();
    const auto mesh = reconstruct_shape<double>(basis, VecXd::Zero(basis.num_shape_components()));

    const auto unchanged = apply_pose(mesh, PoseParamsd{Vec3d::Zero(), Vec3d::Zero(), 1.0});
    CHECK(unchanged.frame == Frame::camera);
    CHECK((unchanged.vertices - mesh.vertices).cwiseAbs().maxCoeff() == 0.0);

    const auto doubled = apply_pose(mesh, PoseParamsd{Vec3d::Zero(), Vec3d::Zero(), 2.0});
    CHECK((doubled.vertices - 2.0 * mesh.vertices).cwiseAbs().maxCoeff() == 0.0);

    const auto shifted = apply_pose(mesh, PoseParamsd{Vec3d::Zero(), Vec3d(0, 0, 1), 1.0});
    CHECK((shifted.vertices.col(2) - (mesh.vertices.col(2).array() + 1.0).matrix()).cwiseAbs().maxCoeff() ==
          0.0);

    CHECK_THROWS_AS(apply_pose(mesh, PoseParamsd{Vec3d::Zero(), Vec3d::Zero(), 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(apply_pose(mesh, PoseParamsd{Vec3d::Zero(), Vec3d::Zero(), -1.0}),
                    std::invalid_argument);
}

TEST_CASE("apply_pose preserves pairwise distances up to the scale factor")
{
    const LinearBasis basis = default_basis();
    Rng rng(5);
    VecXd z(basis.num_shape_components());
    for (Eigen::Index i = 0; i < z.size(); ++i)
        z[i] = rng.normal();
    const auto mesh = reconstruct_shape<double>(basis, z);
    const double f = 1.37;
    const auto posed = apply_pose(mesh, PoseParamsd{Vec3d(0.2, -0.4, 0.8), Vec3d(0.05, -0.02, 1.1), f});
    for (int trial = 0; trial < 200; ++trial)
    {
        const int i = static_cast<int>(rng.uniform(0.0, basis.n_vertices));
        const int j = static_cast<int>(rng.uniform(0.0, basis.n_vertices));
        const double before = (mesh.vertices.row(i) - mesh.vertices.row(j)).norm();
        const double after = (posed.vertices.row(i) - posed.vertices.row(j)).norm();
        CHECK(after == Approx(f * before).epsilon(1e-9).margin(1e-15));
    }
}

TEST_CASE("eyeball_centres averages the eyeball vertex sets")
{
    // Antipodal vertex pairs about a centre average to that centre exactly.
    LinearBasis basis;
    basis.n_vertices = 9;
    basis.mean_shape.setZero(9, 3);
    const Vec3d points[4] = {Vec3d(0.25, 0, 0), Vec3d(0, 0.5, 0), Vec3d(0, 0, 1.0), Vec3d(0.125, 0.25, 0.5)};
    for (int i = 0; i < 4; ++i)
    {
        basis.mean_shape.row(2 * i) = points[i].transpose();
        basis.mean_shape.row(2 * i + 1) = -points[i].transpose();
    }
    basis.mean_shape.row(8) = Vec3d(7.0, -3.0, 2.0).transpose();
    basis.mean_color.setZero(9, 3);
    basis.left_eyeball_indices = {0, 1, 2, 3, 4, 5, 6, 7};
    basis.right_eyeball_indices = {8};
    basis.landmark_indices.fill(0);
    basis.left_eye_outer_corner = 0;
    basis.right_eye_outer_corner = 8;

    EyeRegionMesh<double> mesh;
    mesh.vertices = basis.mean_shape;
    mesh.frame = Frame::camera;
    const auto [left, right] = eyeball_centres(mesh, basis);
    CHECK(left.cwiseAbs().maxCoeff() == 0.0);                            // symmetric centroid, exact
    CHECK((right - Vec3d(7.0, -3.0, 2.0)).cwiseAbs().maxCoeff() == 0.0); // single-vertex set

    // Translating the mesh translates the centres identically.
    EyeRegionMesh<double> moved = mesh;
    const Vec3d t(0.5, -1.25, 2.0);
    moved.vertices.rowwise() += t.transpose();
    const auto [left2, right2] = eyeball_centres(moved, basis);
    CHECK((left2 - (left + t)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((right2 - (right + t)).cwiseAbs().maxCoeff() < 1e-15);

    basis.right_eyeball_indices.clear();
    CHECK_THROWS_AS(eyeball_centres(mesh, basis), std::invalid_argument);
}

TEST_CASE("rotate_eyeballs rotates about each eyeball centre and nothing else")
{
    const LinearBasis basis = default_basis();
    auto mesh = reconstruct_shape<double>(basis, VecXd::Zero(basis.num_shape_components()));
    mesh.frame = Frame::camera; // treat the model frame as camera for this geometric test

    SECTION("identity leaves the mesh unchanged")
    {
        const auto rotated = rotate_eyeballs<double>(mesh, basis, Mat3d::Identity(), Mat3d::Identity());
        CHECK((rotated.vertices - mesh.vertices).cwiseAbs().maxCoeff() == 0.0);
    }

    SECTION("centres and radii are invariant under any rotation")
    {
        const Mat3d r_left = rodrigues<double>(Vec3d(0.4, -0.2, 0.9));
        const Mat3d r_right = rodrigues<double>(Vec3d(-1.1, 0.3, 0.2));
        const auto rotated = rotate_eyeballs<double>(mesh, basis, r_left, r_right);

        const auto [c_before_l, c_before_r] = eyeball_centres(mesh, basis);
        const auto [c_after_l, c_after_r] = eyeball_centres(rotated, basis);
        CHECK((c_before_l - c_after_l).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((c_before_r - c_after_r).cwiseAbs().maxCoeff() < 1e-12);

        for (int index : basis.left_eyeball_indices)
        {
            const double before = (mesh.vertices.row(index).transpose() - c_before_l).norm();
            const double after = (rotated.vertices.row(index).transpose() - c_after_l).norm();
            CHECK(after == Approx(before).epsilon(1e-9));
        }
        // Non-eyeball vertices untouched:
        for (int index : {basis.landmark_indices[0], basis.landmark_indices[15]})
            CHECK((rotated.vertices.row(index) - mesh.vertices.row(index)).cwiseAbs().maxCoeff() == 0.0);
    }

    SECTION("a quarter turn about the eyeball-local y axis maps front to side")
    {
        LinearBasis tiny;
        tiny.n_vertices = 4;
        tiny.mean_shape.setZero(4, 3);
        const Vec3d centre(1.0, 2.0, 3.0);
        const double rho = 0.25;
        tiny.mean_shape.row(0) = (centre + Vec3d(0, 0, rho)).transpose();
        tiny.mean_shape.row(1) = (centre - Vec3d(0, 0, rho)).transpose();
        tiny.mean_shape.row(2) = (centre + Vec3d(0, rho, 0)).transpose();
        tiny.mean_shape.row(3) = (centre - Vec3d(0, rho, 0)).transpose();
        tiny.mean_color.setZero(4, 3);
        tiny.left_eyeball_indices = {0, 1, 2, 3};
        tiny.right_eyeball_indices = {2};
        tiny.landmark_indices.fill(0);

        EyeRegionMesh<double> m;
        m.vertices = tiny.mean_shape;
        m.frame = Frame::camera;
        const Mat3d quarter = rodrigues<double>(Vec3d(0.0, std::numbers::pi / 2.0, 0.0));
        LinearBasis left_only = tiny;
        const auto rotated = rotate_eyeballs<double>(m, left_only, quarter, Mat3d::Identity());
        CHECK((rotated.vertices.row(0).transpose() - (centre + Vec3d(rho, 0, 0))).norm() < 1e-12);
    }

    SECTION("non-rotation matrices are rejected")
    {
        Mat3d not_rotation = Mat3d::Identity();
        not_rotation(0, 0) = 1.5;
        CHECK_THROWS_AS(rotate_eyeballs<double>(mesh, basis, not_rotation, Mat3d::Identity()),
                        std::invalid_argument);
    }
}

TEST_CASE("synthetic_basis is deterministic and well-formed")
{
    const SyntheticBasisConfig config;
    const LinearBasis a = synthetic_basis(config, 123);
    const LinearBasis b = synthetic_basis(config, 123);
    CHECK((a.mean_shape - b.mean_shape).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.mean_color - b.mean_color).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(a.shape_components.size() == b.shape_components.size());
    for (std::size_t k = 0; k < a.shape_components.size(); ++k)
        CHECK((a.shape_components[k] - b.shape_components[k]).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.landmark_indices.size() == 31);
    CHECK(a.left_eyeball_indices.size() >= 16);
    CHECK(a.right_eyeball_indices.size() >= 16);
    CHECK_NOTHROW(validate(a));
}

TEST_CASE("the interocular mode moves the eyeball centres apart")
{
    const LinearBasis basis = default_basis();
    auto centres_at = [&](double coefficient) {
        VecXd z = VecXd::Zero(basis.num_shape_components());
        z[0] = coefficient;
        auto mesh = reconstruct_shape<double>(basis, z);
        mesh.frame = Frame::camera;
        const auto [left, right] = eyeball_centres(mesh, basis);
        return (left - right).norm();
    };
    CHECK(centres_at(1.0) > centres_at(0.0));
    CHECK(centres_at(0.0) > centres_at(-1.0));
}

TEST_CASE("synthetic_basis rejects infeasible configurations")
{
    SyntheticBasisConfig too_few_components;
    too_few_components.shape_components = 1;
    CHECK_THROWS_AS(synthetic_basis(too_few_components, 1), std::invalid_argument);

    SyntheticBasisConfig tiny_eyeballs;
    tiny_eyeballs.eyeball_rings = 2;
    tiny_eyeballs.eyeball_segments = 4;
    CHECK_THROWS_AS(synthetic_basis(tiny_eyeballs, 1), std::invalid_argument);
}
