/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: tests/test_rotation.cpp
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
#include "gazefit/rng.hpp"
#include "gazefit/rotation.hpp"
#include "gazefit/vergence.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace gazefit;
using Catch::Approx;

TEST_CASE("rodrigues maps the zero vector to the identity")
{
    const Mat3d r = rodrigues<double>(Vec3d::Zero());
    CHECK((r - Mat3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rodrigues quarter turn about y sends +z to +x")
{
    const Mat3d r = rodrigues<double>(Vec3d(0.0, std::numbers::pi / 2.0, 0.0));
    const Vec3d mapped = r * Vec3d(0.0, 0.0, 1.0);
    CHECK(mapped[0] == Approx(1.0).margin(1e-15));
    CHECK(mapped[1] == Approx(0.0).margin(1e-15));
    CHECK(mapped[2] == Approx(0.0).margin(1e-15));
}

TEST_CASE("rodrigues half turn about x is diag(1,-1,-1)")
{
    const Mat3d r = rodrigues<double>(Vec3d(std::numbers::pi, 0.0, 0.0));
    const Mat3d expected = Vec3d(1.0, -1.0, -1.0).asDiagonal();
    CHECK((r - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("rodrigues returns proper rotations for random axis-angle vectors")
{
    Rng rng(20260321);
    for (int i = 0; i < 1000; ++i)
    {
        Vec3d axis(rng.normal(), rng.normal(), rng.normal());
        axis.normalize();
        const double angle = rng.uniform(0.0, std::numbers::pi);
        const Mat3d r = rodrigues<double>(Vec3d(angle * axis));
        CHECK(orthonormality_defect(r) < 1e-12);
        CHECK(std::abs(r.determinant() - 1.0) <= 1e-12);
    }
}

TEST_CASE("rodrigues is continuous at zero")
{
    const Vec3d unit = Vec3d(1.0, -2.0, 0.5).normalized();
    const Mat3d r = rodrigues<double>(Vec3d(1e-10 * unit));
    CHECK((r - Mat3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("rodrigues derivative matches finite differences through the small-angle branch")
{
    // Seeding a dual across the series/closed-form threshold must stay smooth.
    for (double base : {0.0, 1e-9, 1e-7, 0.3})
    {
        VecX<Dual1> r(3);
        r[0] = Dual1(base, 1.0);
        r[1] = Dual1(0.1 * base, 0.0);
        r[2] = Dual1(0.0, 0.0);
        Vec3<Dual1> rv(r[0], r[1], r[2]);
        const Mat3<Dual1> rot = rodrigues<Dual1>(rv);

        const double h = 1e-7;
        const Mat3d plus = rodrigues<double>(Vec3d(base + h, 0.1 * base, 0.0));
        const Mat3d minus = rodrigues<double>(Vec3d(base - h, 0.1 * base, 0.0));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
            {
                const double fd = (plus(i, j) - minus(i, j)) / (2.0 * h);
                CHECK(rot(i, j).d == Approx(fd).margin(2e-6));
            }
    }
}

TEST_CASE("gaze_vector matches its closed form and the rotation-matrix form")
{
    CHECK((gaze_vector(GazeAngles{0.0, 0.0}) - Vec3d(0, 0, 1)).norm() == 0.0);
    const Vec3d right = gaze_vector(GazeAngles{0.0, std::numbers::pi / 2.0});
    CHECK(right[0] == Approx(1.0));
    CHECK(std::abs(right[1]) < 1e-15);
    CHECK(std::abs(right[2]) < 1e-15);
    const Vec3d down = gaze_vector(GazeAngles{std::numbers::pi / 2.0, 0.0});
    CHECK(down[1] == Approx(-1.0));

    Rng rng(7);
    for (int i = 0; i < 100; ++i)
    {
        const double e = rng.uniform(-1.4, 1.4);
        const double a = rng.uniform(-1.4, 1.4);
        const Vec3d direct = gaze_vector<double>(e, a);
        const Vec3d via_matrix = gaze_rotation<double>(e, a) * Vec3d(0, 0, 1);
        CHECK((direct - via_matrix).norm() < 1e-14);
        CHECK(direct.norm() == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("gaze_angles_for_direction inverts gaze_vector")
{
    Rng rng(8);
    for (int i = 0; i < 100; ++i)
    {
        const GazeAngles angles{rng.uniform(-1.3, 1.3), rng.uniform(-1.3, 1.3)};
        const Vec3d direction = 2.5 * gaze_vector(angles); // scale must not matter
        const GazeAngles recovered = gaze_angles_for_direction(direction);
        CHECK(recovered.elevation == Approx(angles.elevation).margin(1e-12));
        CHECK(recovered.azimuth == Approx(angles.azimuth).margin(1e-12));
    }
}
