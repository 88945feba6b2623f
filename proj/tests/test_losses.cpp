/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: tests/test_losses.cpp
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
#include "gazefit/losses.hpp"
#include "gazefit/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <vector>

using namespace gazefit;
using Catch::Approx;

TEST_CASE("norm_pow covers the squared-L2, L1 and fourth-power-of-L1 readings")
{
    const std::array<double, 2> a{3.0, 4.0};
    CHECK(norm_pow<double>(a, 2, 2.0) == 25.0);
    const std::array<double, 1> b{0.5};
    CHECK(norm_pow<double>(b, 1, 4.0) == Approx(0.0625));
    const std::array<double, 3> zero{0.0, 0.0, 0.0};
    CHECK(norm_pow<double>(zero, 1, 1.0) == 0.0);
    CHECK(norm_pow<double>(zero, 2, 2.0) == 0.0);
    CHECK(norm_pow<double>(zero, 1, 4.0) == 0.0);
    CHECK_THROWS_AS(norm_pow<double>(a, 3, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(norm_pow<double>(a, 1, 0.0), std::invalid_argument);
}

TEST_CASE("norm_pow derivative uses the subgradient 0 at L1 kinks")
{
    std::array<Dual1, 2> x{Dual1(0.0, 1.0), Dual1(2.0, 0.0)};
    const Dual1 value = norm_pow<Dual1>(x, 1, 1.0);
    CHECK(value.v == 2.0);
    CHECK(value.d == 0.0); // kink coordinate contributes no derivative

    std::array<Dual1, 2> y{Dual1(-1.5, 1.0), Dual1(2.0, 0.0)};
    CHECK(norm_pow<Dual1>(y, 1, 1.0).d == -1.0);
    // chain rule through the 4th power: d/dx (sum|x|)^4 = 4 (sum|x|)^3 sign(x)
    CHECK(norm_pow<Dual1>(y, 1, 4.0).d == Approx(4.0 * 3.5 * 3.5 * 3.5 * -1.0));
}

TEST_CASE("loss_origin sums both eyes under the configured power")
{
    const std::array<Vec3d, 2> truth{Vec3d(0.1, 0.2, 0.3), Vec3d(-0.1, 0.0, 0.4)};
    Vec3<double> left = truth[0];
    Vec3<double> right = truth[1];
    CHECK(loss_origin(left, right, truth, 1.0) == 0.0);
    CHECK(loss_origin(left, right, truth, 4.0) == 0.0);

    // each eye offset so that its L1 norm is 0.5
    left += Vec3d(0.25, -0.15, 0.10);
    right += Vec3d(-0.20, 0.20, 0.10);
    CHECK(loss_origin(left, right, truth, 1.0) == Approx(1.0));
    CHECK(loss_origin(left, right, truth, 4.0) == Approx(2.0 * 0.0625));
}

TEST_CASE("loss_landmark is the sum of squared pixel differences")
{
    Landmarks2Dd truth;
    Rng rng(1);
    for (int i = 0; i < num_landmarks; ++i)
        for (int j = 0; j < 2; ++j)
            truth(i, j) = rng.uniform(0, 640);

    Landmarks2D<double> same = truth;
    CHECK(loss_landmark(same, truth) == 0.0);

    Landmarks2D<double> shifted = truth;
    shifted.col(0).array() += 1.0; // every landmark off by (1, 0) px
    CHECK(loss_landmark(shifted, truth) == Approx(31.0));

    Landmarks2D<double> one_off = truth;
    one_off(7, 0) += 3.0;
    one_off(7, 1) += 4.0;
    CHECK(loss_landmark(one_off, truth) == Approx(25.0));
}

TEST_CASE("loss_target matches the configured norm power")
{
    const Vec3d truth(0.3, -0.2, 1.1);
    CHECK(loss_target<double>(truth, truth, 1.0) == 0.0);
    CHECK(loss_target<double>(Vec3d(truth + Vec3d(1, 1, 0)), truth, 1.0) == Approx(2.0));
    CHECK(loss_target<double>(Vec3d(truth + Vec3d(1, 0, 0)), truth, 4.0) == Approx(1.0));
}

TEST_CASE("loss_skew squares the segment distance, including the parallel fallback")
{
    const GazeRayd left{Vec3d(-1, 0, 0), Vec3d(1, 0, 1).normalized()};
    const GazeRayd right{Vec3d(1, 0, 0), Vec3d(-1, 0, 1).normalized()};
    CHECK(loss_skew(solve_vergence(left, right)) < 1e-24);

    const GazeRayd skew_left{Vec3d(-1, 0, 0), Vec3d(0, 0, 1)};
    const GazeRayd skew_right{Vec3d(1, 0, 0), Vec3d(0, 1, 1).normalized()};
    CHECK(loss_skew(solve_vergence(skew_left, skew_right)) == Approx(4.0));

    const GazeRayd par_left{Vec3d(-1, 0, 0), Vec3d(0, 0, 1)};
    const GazeRayd par_right{Vec3d(1, 0, 0), Vec3d(0, 0, 1)};
    CHECK(skew_distance_parallel_squared(par_left, par_right) == Approx(4.0));
}

TEST_CASE("loss_gaze stacks the four angles")
{
    const std::array<double, 4> truth{0.1, -0.2, 0.15, 0.05};
    std::array<double, 4> predicted = truth;
    CHECK(loss_gaze(predicted, truth, 1.0) == 0.0);
    for (auto& angle : predicted)
        angle += 0.1;
    CHECK(loss_gaze(predicted, truth, 1.0) == Approx(0.4));
    predicted = truth;
    predicted[2] += 0.2;
    CHECK(loss_gaze(predicted, truth, 4.0) == Approx(0.0016));
}

TEST_CASE("loss_reg is the summed squared norm of both coefficient vectors")
{
    VecXd z_s(2);
    z_s << 1.0, 2.0;
    VecXd z_a(0);
    CHECK(loss_reg<double>(z_s, z_a) == 5.0);
    CHECK(loss_reg<double>(VecXd::Zero(4), VecXd::Zero(3)) == 0.0);

    VecXd z_a2(3);
    z_a2 << 0.5, -0.5, 1.0;
    const double base = loss_reg<double>(z_s, z_a2);
    CHECK(loss_reg<double>(VecXd(3.0 * z_s), VecXd(3.0 * z_a2)) == Approx(9.0 * base));
}

TEST_CASE("penalty_behind punishes only negative ray parameters")
{
    VergenceSolution<double> solution{};
    solution.k_left = 1.0;
    solution.k_right = 1.0;
    CHECK(penalty_behind(solution) == 0.0);
    solution.k_left = -0.5;
    solution.k_right = 2.0;
    CHECK(penalty_behind(solution) == Approx(0.25));
    solution.k_left = 0.0;
    solution.k_right = 0.0;
    CHECK(penalty_behind(solution) == 0.0);
}

TEST_CASE("combine is the weighted sum over active components")
{
    LossVector<double> vec;
    vec.pixel = 0.0;
    vec.landmark = 1.0;
    vec.origin = 2.0;
    vec.target = 3.0;
    vec.skew = 4.0;
    vec.gaze = 5.0;
    vec.reg = 6.0;
    vec.active = {true, true, true, true, true, true, true};

    LossWeights ones;
    ones.pixel = 1.0; // the pixel slot still contributes its (zero) value
    CHECK(combine(vec, ones) == Approx(21.0));

    LossWeights zero;
    zero.pixel = zero.landmark = zero.origin = zero.target = zero.skew = zero.gaze = zero.reg = 0.0;
    CHECK(combine(vec, zero) == 0.0);

    // unit weight on a single component returns that component
    LossWeights only_skew = zero;
    only_skew.skew = 1.0;
    CHECK(combine(vec, only_skew) == 4.0);

    LossWeights negative;
    negative.gaze = -1.0;
    CHECK_THROWS_AS(combine(vec, negative), std::invalid_argument);
}

TEST_CASE("combine is linear in the weights and ignores inactive components")
{
    LossVector<double> vec;
    vec.landmark = 2.0;
    vec.origin = 10.0;
    vec.skew = 0.5;
    vec.reg = 1.5;
    vec.active = {false, true, false, false, true, false, true}; // origin supervision absent

    LossWeights w1;
    LossWeights w2;
    w2.landmark = 3.0;
    w2.skew = 0.25;
    w2.origin = 100.0; // inactive: must not matter
    const double a = 0.7, b = 1.9;
    LossWeights blended;
    blended.pixel = a * w1.pixel + b * w2.pixel;
    blended.landmark = a * w1.landmark + b * w2.landmark;
    blended.origin = a * w1.origin + b * w2.origin;
    blended.target = a * w1.target + b * w2.target;
    blended.skew = a * w1.skew + b * w2.skew;
    blended.gaze = a * w1.gaze + b * w2.gaze;
    blended.reg = a * w1.reg + b * w2.reg;
    CHECK(combine(vec, blended) == Approx(a * combine(vec, w1) + b * combine(vec, w2)));
}

TEST_CASE("group weights multiply onto their member components")
{
    LossVector<double> vec;
    vec.landmark = 1.0;
    vec.origin = 1.0;
    vec.target = 1.0;
    vec.skew = 1.0;
    vec.gaze = 1.0;
    vec.reg = 1.0;
    vec.active = {true, true, true, true, true, true, true};

    LossWeights weights;
    weights.group1 = 2.0; // landmark + reg (pixel is 0)
    weights.group2 = 3.0; // gaze
    weights.group3 = 5.0; // target + origin + skew
    CHECK(combine(vec, weights) == Approx(2.0 * 2.0 + 3.0 * 1.0 + 5.0 * 3.0));
}
